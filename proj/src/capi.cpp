#include "qlmass/qlmass.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <numbers>
#include <string>

#include "qlmass/checks.hpp"
#include "qlmass/conformal.hpp"
#include "qlmass/embedding.hpp"
#include "qlmass/error.hpp"
#include "qlmass/fillins.hpp"
#include "qlmass/io.hpp"
#include "qlmass/mass.hpp"
#include "qlmass/meshgen.hpp"
#include "qlmass/presets.hpp"

struct qlm_metric {
  qlmass::AxisymmetricMetric value;
};
struct qlm_radial {
  qlmass::RadialDomain value;
};
struct qlm_tet {
  qlmass::TetDomain value;
};

namespace {

using namespace qlmass;

thread_local std::string last_error;

template <class F>
int guard(F&& f) noexcept {
  try {
    f();
    last_error.clear();
    return QLM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::invalid_argument& e) {
    last_error = std::string("InvalidArgument: ") + e.what();
    return QLM_E_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "Internal: out of memory";
    return QLM_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = std::string("Internal: ") + e.what();
    return QLM_E_INTERNAL;
  } catch (...) {
    last_error = "Internal: unknown failure";
    return QLM_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(Errc::invalid_argument, std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** json, const io::Json& value) {
  if (json != nullptr) *json = copy_string(io::dump(value));
}

InnerRole role_from_int(int role) {
  switch (role) {
    case QLM_ROLE_CENTER: return InnerRole::regular_center;
    case QLM_ROLE_HORIZON: return InnerRole::horizon;
    case QLM_ROLE_CUT: return InnerRole::cut;
    default: throw Error(Errc::invalid_argument, "unknown inner role " + std::to_string(role));
  }
}

qlm_bound_options resolve(const qlm_bound_options* options) {
  qlm_bound_options o;
  qlm_bound_options_default(&o);
  if (options != nullptr) o = *options;
  if (o.boundary_nodes == 0) o.boundary_nodes = 1024;
  if (o.boundary_nodes < 16) throw Error(Errc::invalid_argument, "boundary_nodes must be at least 16");
  if (o.p_mode != QLM_P_CENTER && o.p_mode != QLM_P_GRID) throw Error(Errc::invalid_argument, "unknown p_mode");
  if (!(o.kappa > 0.0) && o.kappa != 0.0) throw Error(Errc::invalid_argument, "kappa must be positive");
  return o;
}

std::vector<double> kappas_for(const AxisymmetricMetric& metric, const qlm_bound_options& o) {
  if (o.kappa > 0.0) return {o.kappa};
  return default_kappa_grid(metric, o.kappa_grid == 0 ? 16 : o.kappa_grid);
}

AxisGrid points_for(const qlm_bound_options& o) { return o.p_mode == QLM_P_GRID ? default_axis_grid() : center_only(); }

AxisymmetricMetric outer_sphere(const RadialDomain& d, std::size_t nodes) {
  return AxisymmetricMetric::round_sphere(d.h()[d.size() - 1], nodes);
}

io::Json brown_york_json(const RadialDomain& d, std::size_t nodes) {
  try {
    const auto metric = outer_sphere(d, nodes);
    const std::vector<double> H(metric.size(), boundary_mean_curvature_radial(d, Side::outer));
    return io::number(brown_york_mass(metric, H));
  } catch (const Error& e) {
    return io::Json{{"error", e.what()}};
  }
}

io::Json mass_json(const RadialDomain& d, const qlm_bound_options& o, MassBracket* out = nullptr) {
  const auto metric = outer_sphere(d, o.boundary_nodes);
  auto bracket = variational_mass_bracket(d, o.boundary_nodes, kappas_for(metric, o), points_for(o));
  io::Json j = io::to_json(bracket);
  j["brown_york_mass"] = brown_york_json(d, o.boundary_nodes);
  if (out != nullptr) *out = std::move(bracket);
  return j;
}

}  // namespace

extern "C" {

const char* qlm_version(void) { return "0.1.0"; }

const char* qlm_last_error(void) { return last_error.c_str(); }

const char* qlm_error_name(int code) {
  if (code == QLM_OK) return "Ok";
  thread_local std::string name;
  name = std::string(errc_name(static_cast<Errc>(code)));
  return name.c_str();
}

void qlm_string_free(char* s) { std::free(s); }

void qlm_bound_options_default(qlm_bound_options* options) {
  if (options == nullptr) return;
  options->kappa = 0.0;
  options->kappa_grid = 16;
  options->p_mode = QLM_P_GRID;
  options->boundary_nodes = 1024;
}

void qlm_check_options_default(qlm_check_options* options) {
  if (options == nullptr) return;
  const checks::CheckOptions d;
  options->seeds = d.seeds;
  options->first_seed = d.first_seed;
  options->resolution = d.resolution;
  options->tol = d.tol;
}

int qlm_metric_from_samples(const double* s, const double* f, size_t n, double tol, qlm_metric** out) {
  return guard([&] {
    require(s, "s");
    require(f, "f");
    require(out, "out");
    *out = new qlm_metric{AxisymmetricMetric::from_samples({s, s + n}, {f, f + n}, tol)};
  });
}

int qlm_metric_load_csv(const char* path, double tol, qlm_metric** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new qlm_metric{io::load_axisymmetric(path, tol)};
  });
}

int qlm_metric_round(double radius, size_t nodes, qlm_metric** out) {
  return guard([&] {
    require(out, "out");
    if (!(radius > 0.0)) throw Error(Errc::invalid_argument, "radius must be positive");
    *out = new qlm_metric{AxisymmetricMetric::round_sphere(radius, nodes)};
  });
}

size_t qlm_metric_size(const qlm_metric* metric) { return metric == nullptr ? 0 : metric->value.size(); }

void qlm_metric_free(qlm_metric* metric) { delete metric; }

int qlm_radial_from_samples(const double* r, const double* h, size_t n, int role, double tol, qlm_radial** out) {
  return guard([&] {
    require(r, "r");
    require(h, "h");
    require(out, "out");
    *out = new qlm_radial{RadialDomain::from_samples({r, r + n}, {h, h + n}, role_from_int(role), tol)};
  });
}

int qlm_radial_load_csv(const char* path, double tol, qlm_radial** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new qlm_radial{io::load_radial(path, tol)};
  });
}

int qlm_radial_save_csv(const qlm_radial* domain, const char* path) {
  return guard([&] {
    require(domain, "domain");
    require(path, "path");
    io::save_radial(path, domain->value);
  });
}

int qlm_radial_random_fillin(uint64_t seed, size_t nodes, qlm_radial** out) {
  return guard([&] {
    require(out, "out");
    RandomFillinOptions o;
    if (nodes != 0) o.nodes = nodes;
    *out = new qlm_radial{random_radial_fillin(seed, o)};
  });
}

size_t qlm_radial_size(const qlm_radial* domain) { return domain == nullptr ? 0 : domain->value.size(); }

int qlm_radial_role(const qlm_radial* domain) {
  if (domain == nullptr) return -1;
  switch (domain->value.inner_role()) {
    case InnerRole::regular_center: return QLM_ROLE_CENTER;
    case InnerRole::horizon: return QLM_ROLE_HORIZON;
    case InnerRole::cut: return QLM_ROLE_CUT;
  }
  return -1;
}

void qlm_radial_free(qlm_radial* domain) { delete domain; }

int qlm_preset(const char* spec, size_t nodes, qlm_metric** boundary, qlm_radial** domain, int* convex) {
  return guard([&] {
    require(spec, "spec");
    auto p = presets::by_name(spec, nodes == 0 ? 1024 : nodes);
    if (convex != nullptr) *convex = p.convex ? 1 : 0;
    if (domain != nullptr) *domain = p.domain ? new qlm_radial{std::move(*p.domain)} : nullptr;
    if (boundary != nullptr) *boundary = new qlm_metric{std::move(p.boundary)};
  });
}

int qlm_tet_load(const char* path, double tol, qlm_tet** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new qlm_tet{io::load_tet_mesh(path, tol)};
  });
}

int qlm_tet_save(const qlm_tet* domain, const char* path) {
  return guard([&] {
    require(domain, "domain");
    require(path, "path");
    io::save_tet_mesh(path, domain->value);
  });
}

int qlm_tet_ball(double radius, size_t frequency, size_t layers, qlm_tet** out) {
  return guard([&] {
    require(out, "out");
    *out = new qlm_tet{meshgen::to_domain(meshgen::ball(radius, frequency, layers))};
  });
}

size_t qlm_tet_vertex_count(const qlm_tet* domain) { return domain == nullptr ? 0 : domain->value.vertex_count(); }

void qlm_tet_free(qlm_tet* domain) { delete domain; }

int qlm_embed_euclidean_total(const qlm_metric* metric, double* total) {
  return guard([&] {
    require(metric, "metric");
    require(total, "total");
    *total = embed_euclidean(metric->value).total_mean_curvature() / (8.0 * std::numbers::pi);
  });
}

int qlm_embed_write(const qlm_metric* metric, double kappa, const char* prefix, char** json) {
  return guard([&] {
    require(metric, "metric");
    require(prefix, "prefix");
    const std::string base = prefix;
    const auto r3 = embed_euclidean(metric->value);
    io::write_surface_csv(base + "_euclidean.csv", r3);
    io::write_surface_obj(base + "_euclidean.obj", r3);
    io::Json j{{"nodes", metric->value.size()},
               {"total_H0_over_8pi", io::number(r3.total_mean_curvature() / (8.0 * std::numbers::pi))},
               {"isometry_residual", io::number(r3.isometry_residual)},
               {"files", io::Json::array({base + "_euclidean.csv", base + "_euclidean.obj"})}};
    if (kappa > 0.0) {
      const auto h3 = embed_hyperbolic(metric->value, kappa);
      io::write_surface_csv(base + "_hyperbolic.csv", h3);
      io::write_surface_obj(base + "_hyperbolic.obj", h3);
      j["hyperbolic"] = io::Json{{"kappa", io::number(kappa)},
                                 {"total_H0_over_8pi", io::number(h3.total_mean_curvature() / (8.0 * std::numbers::pi))},
                                 {"hyperboloid_residual", io::number(h3.hyperboloid_residual)},
                                 {"arclength_residual", io::number(h3.arclength_residual)}};
      j["files"].push_back(base + "_hyperbolic.csv");
      j["files"].push_back(base + "_hyperbolic.obj");
    }
    emit(json, j);
  });
}

int qlm_lambda_upper(const qlm_metric* metric, const qlm_bound_options* options, double* value, char** json) {
  return guard([&] {
    require(metric, "metric");
    const auto o = resolve(options);
    const auto sweep = minimize_upper_bound(metric->value, kappas_for(metric->value, o), points_for(o));
    if (value != nullptr) *value = sweep.best.value;
    io::Json samples = io::Json::array();
    for (const auto& s : sweep.samples) samples.push_back(io::to_json(s));
    io::Json skipped = io::Json::array();
    for (const auto& s : sweep.skipped) skipped.push_back(s);
    emit(json, io::Json{{"best", io::to_json(sweep.best)}, {"samples", samples}, {"skipped", skipped}});
  });
}

int qlm_brown_york(const qlm_radial* domain, size_t boundary_nodes, double* value) {
  return guard([&] {
    require(domain, "domain");
    require(value, "value");
    const auto metric = outer_sphere(domain->value, boundary_nodes == 0 ? 1024 : boundary_nodes);
    const std::vector<double> H(metric.size(), boundary_mean_curvature_radial(domain->value, Side::outer));
    *value = brown_york_mass(metric, H);
  });
}

int qlm_lambda_bracket(const qlm_metric* metric, const qlm_bound_options* options, char** json) {
  return guard([&] {
    require(metric, "metric");
    const auto o = resolve(options);
    emit(json, io::to_json(lambda_bracket(metric->value, {}, kappas_for(metric->value, o), points_for(o))));
  });
}

int qlm_mass_bracket(const qlm_radial* domain, const qlm_bound_options* options, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, mass_json(domain->value, resolve(options)));
  });
}

int qlm_mass_bracket_combined(const qlm_radial* const* domains, size_t count, const qlm_bound_options* options,
                              char** json) {
  return guard([&] {
    require(domains, "domains");
    if (count == 0) throw Error(Errc::invalid_argument, "at least one component required");
    const auto o = resolve(options);
    std::vector<MassBracket> brackets(count);
    io::Json components = io::Json::array();
    for (size_t i = 0; i < count; ++i) {
      require(domains[i], "component");
      components.push_back(mass_json(domains[i]->value, o, &brackets[i]));
    }
    io::Json j = io::to_json(additivity_combine(brackets));
    j["components"] = std::move(components);
    emit(json, j);
  });
}

int qlm_validate_fillin(const qlm_radial* domain, const qlm_metric* target, char** json) {
  return guard([&] {
    require(domain, "domain");
    require(target, "target");
    emit(json, io::to_json(validate_fillin(domain->value, target->value)));
  });
}

int qlm_shitam_check(const qlm_radial* domain, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, io::to_json(shitam_check(domain->value)));
  });
}

int qlm_cap_fill(const qlm_radial* domain, double collar_fraction, qlm_radial** out, char** json) {
  return guard([&] {
    require(domain, "domain");
    auto c = cap_fill(domain->value, collar_fraction);
    emit(json, io::to_json(c));
    if (out != nullptr) *out = new qlm_radial{std::move(c.domain)};
  });
}

int qlm_doubling(const qlm_radial* domain, double epsilon, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, io::to_json(doubling_construct(domain->value, epsilon)));
  });
}

int qlm_weak_meanconvex_fix(const qlm_radial* domain, double epsilon, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, io::to_json(weak_meanconvex_fix(domain->value, epsilon)));
  });
}

int qlm_positivity_perturbation(const qlm_radial* domain, double tau, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, io::to_json(positivity_perturbation(domain->value, tau)));
  });
}

int qlm_scalar_flat(const qlm_radial* domain, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, io::to_json(scalar_flat_deformation(domain->value)));
  });
}

int qlm_scalar_flat_tet(const qlm_tet* domain, char** json) {
  return guard([&] {
    require(domain, "domain");
    emit(json, io::to_json(scalar_flat_deformation(domain->value)));
  });
}

int qlm_check(const qlm_check_options* options, int* all_pass, char** json) {
  return guard([&] {
    checks::CheckOptions o;
    if (options != nullptr) {
      o.seeds = options->seeds;
      o.first_seed = options->first_seed;
      o.resolution = options->resolution;
      if (options->tol > 0.0) o.tol = options->tol;
    }
    if (o.resolution < 16) throw Error(Errc::invalid_argument, "resolution must be at least 16");
    const auto props = checks::run_suite(o);
    const auto j = checks::to_json(props);
    if (all_pass != nullptr) *all_pass = j["all_pass"].get<bool>() ? 1 : 0;
    emit(json, j);
  });
}

}  // extern "C"
