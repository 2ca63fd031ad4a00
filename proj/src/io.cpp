#include "qlmass/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qlmass/error.hpp"
#include "qlmass/numerics.hpp"

namespace qlmass::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) { return trim(line.substr(0, line.find('#'))); }

double parse_double(const std::string& token, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(v)) {
    throw Error(Errc::parse_error, where + ": '" + token + "' is not a finite number");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open '" + path + "' for writing");
  out.precision(17);
  return out;
}

std::string format15(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

ProfileTable parse_profile_csv(std::istream& in, const std::string& source) {
  ProfileTable t;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto comma = body.find(',');
    const std::string where = source + ":" + std::to_string(lineno);
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
      throw Error(Errc::parse_error, where + ": expected two comma-separated columns");
    }
    const std::string a = trim(body.substr(0, comma)), b = trim(body.substr(comma + 1));
    if (!header) {
      if (!((a == "s" && b == "f") || (a == "r" && b == "h"))) {
        throw Error(Errc::parse_error, where + ": header must be 's,f' or 'r,h'");
      }
      t.x_name = a;
      t.y_name = b;
      header = true;
      continue;
    }
    t.x.push_back(parse_double(a, where));
    t.y.push_back(parse_double(b, where));
  }
  if (!header) throw Error(Errc::parse_error, source + ": missing header");
  return t;
}

ProfileTable read_profile_csv(const std::string& path) {
  auto in = open_in(path);
  return parse_profile_csv(in, path);
}

void write_profile_csv(const std::string& path, const ProfileTable& t, const std::string& comment) {
  auto out = open_out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << t.x_name << "," << t.y_name << "\n";
  for (std::size_t i = 0; i < t.x.size(); ++i) out << t.x[i] << "," << t.y[i] << "\n";
}

AxisymmetricMetric load_axisymmetric(const std::string& path, double tol) {
  auto t = read_profile_csv(path);
  if (t.x_name != "s") throw Error(Errc::parse_error, path + ": expected an 's,f' surface profile");
  return AxisymmetricMetric::from_samples(std::move(t.x), std::move(t.y), tol);
}

std::string sidecar_path(const std::string& profile_path) {
  return std::filesystem::path(profile_path).replace_extension(".json").string();
}

RadialDomain load_radial(const std::string& path, double tol) {
  auto t = read_profile_csv(path);
  if (t.x_name != "r") throw Error(Errc::parse_error, path + ": expected an 'r,h' radial profile");
  if (t.x.size() < 16) throw Error(Errc::invalid_argument, path + ": at least 16 nodes required");
  const std::string side = sidecar_path(path);
  std::optional<InnerRole> role;
  if (std::filesystem::exists(side)) {
    auto in = open_in(side);
    Json meta;
    try {
      meta = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse_error, side + ": " + e.what());
    }
    if (meta.contains("inner_role")) role = inner_role_from_string(meta["inner_role"].get<std::string>());
  }
  if (!role) {
    const double scale = std::max(1.0, std::abs(t.y.back()));
    if (std::abs(t.y.front()) <= tol * scale) {
      role = InnerRole::regular_center;
    } else {
      const auto d = numerics::differentiate(t.x, t.y);
      const double dr = t.x[1] - t.x[0];
      role = std::abs(d.first.front()) <= std::max(tol, dr * dr) ? InnerRole::horizon : InnerRole::cut;
    }
  }
  return RadialDomain::from_samples(std::move(t.x), std::move(t.y), *role, tol);
}

void save_radial(const std::string& path, const RadialDomain& domain, Json metadata) {
  ProfileTable t{"r", "h", {domain.r().begin(), domain.r().end()}, {domain.h().begin(), domain.h().end()}};
  write_profile_csv(path, t);
  metadata["inner_role"] = to_string(domain.inner_role());
  metadata["nodes"] = domain.size();
  auto out = open_out(sidecar_path(path));
  out << dump(metadata);
}

TetDomain parse_tet_mesh(std::istream& in, const std::string& source, double tol) {
  std::vector<std::string> lines;
  std::vector<std::size_t> numbers_of;
  {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto body = strip_comment(line);
      if (body.empty()) continue;
      lines.push_back(std::move(body));
      numbers_of.push_back(lineno);
    }
  }
  std::size_t pos = 0;
  auto where = [&](std::size_t k) { return source + ":" + std::to_string(k < numbers_of.size() ? numbers_of[k] : 0); };
  auto section = [&](const std::string& name, bool optional) -> std::optional<std::size_t> {
    if (pos >= lines.size()) {
      if (optional) return std::nullopt;
      throw Error(Errc::parse_error, source + ": missing section '" + name + "'");
    }
    std::istringstream ss(lines[pos]);
    std::string key;
    long long count = -1;
    ss >> key >> count;
    if (key != name) {
      if (optional) return std::nullopt;
      throw Error(Errc::parse_error, where(pos) + ": expected section '" + name + "'");
    }
    if (count < 0 || !ss.eof()) throw Error(Errc::parse_error, where(pos) + ": bad count for '" + name + "'");
    ++pos;
    return static_cast<std::size_t>(count);
  };
  auto row = [&](std::size_t expected) {
    if (pos >= lines.size()) throw Error(Errc::parse_error, source + ": unexpected end of file");
    std::istringstream ss(lines[pos]);
    std::vector<std::string> tok;
    for (std::string s; ss >> s;) tok.push_back(s);
    if (tok.size() != expected) {
      throw Error(Errc::parse_error, where(pos) + ": expected " + std::to_string(expected) + " fields");
    }
    ++pos;
    return tok;
  };
  auto index = [&](const std::string& s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size()) {
      throw Error(Errc::parse_error, where(pos - 1) + ": '" + s + "' is not an index");
    }
    return static_cast<std::size_t>(v);
  };

  const std::size_t nv = *section("vertices", false);
  const std::size_t nt = *section("tets", false);
  std::vector<Tet> tets(nt);
  for (auto& t : tets) {
    const auto tok = row(4);
    for (std::size_t k = 0; k < 4; ++k) t[k] = index(tok[k]);
  }
  const std::size_t ne = *section("edges", false);
  std::vector<TetDomain::Edge> edges(ne);
  for (auto& e : edges) {
    const auto tok = row(3);
    e = {index(tok[0]), index(tok[1]), parse_double(tok[2], where(pos - 1))};
  }
  const std::size_t nb = *section("boundary", false);
  std::vector<BoundaryTriangle> boundary(nb);
  for (auto& b : boundary) {
    const auto tok = row(4);
    b.v = {index(tok[0]), index(tok[1]), index(tok[2])};
    if (tok[3] == "outer") {
      b.tag = BoundaryTag::outer;
    } else if (tok[3] == "horizon") {
      b.tag = BoundaryTag::horizon;
    } else {
      throw Error(Errc::parse_error, where(pos - 1) + ": boundary tag must be 'outer' or 'horizon'");
    }
  }
  std::vector<double> R;
  if (const auto nr = section("scalar_curvature", true)) {
    if (*nr != nt) throw Error(Errc::parse_error, source + ": scalar_curvature needs one value per tet");
    for (std::size_t k = 0; k < nt; ++k) R.push_back(parse_double(row(1)[0], where(pos - 1)));
  }
  if (pos != lines.size()) throw Error(Errc::parse_error, where(pos) + ": trailing content");
  return TetDomain(nv, std::move(tets), edges, std::move(boundary), std::move(R), tol);
}

TetDomain load_tet_mesh(const std::string& path, double tol) {
  auto in = open_in(path);
  return parse_tet_mesh(in, path, tol);
}

void write_tet_mesh(std::ostream& out, const TetDomain& domain) {
  const auto prec = out.precision(17);
  out << "vertices " << domain.vertex_count() << "\n";
  out << "tets " << domain.tets().size() << "\n";
  for (const auto& t : domain.tets()) out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  const auto edges = domain.edges();
  out << "edges " << edges.size() << "\n";
  for (const auto& e : edges) out << e.a << " " << e.b << " " << e.length << "\n";
  out << "boundary " << domain.boundary().size() << "\n";
  for (const auto& b : domain.boundary()) {
    out << b.v[0] << " " << b.v[1] << " " << b.v[2] << " " << (b.tag == BoundaryTag::outer ? "outer" : "horizon") << "\n";
  }
  out << "scalar_curvature " << domain.tet_scalar_curvature().size() << "\n";
  for (const double r : domain.tet_scalar_curvature()) out << r << "\n";
  out.precision(prec);
}

void save_tet_mesh(const std::string& path, const TetDomain& domain) {
  auto out = open_out(path);
  write_tet_mesh(out, domain);
}

void write_surface_csv(const std::string& path, const RevolutionSurfaceR3& surface) {
  auto out = open_out(path);
  out << "s,f,z,H0\n";
  const auto s = surface.source.s();
  const auto f = surface.source.f();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << s[i] << "," << f[i] << "," << surface.z[i] << "," << surface.mean_curvature[i] << "\n";
  }
}

void write_surface_csv(const std::string& path, const RevolutionSurfaceH3& surface) {
  auto out = open_out(path);
  out << "s,f,t,z,H0\n";
  const auto s = surface.source.s();
  const auto f = surface.source.f();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << s[i] << "," << f[i] << "," << surface.t[i] << "," << surface.z[i] << "," << surface.mean_curvature[i]
        << "\n";
  }
}

namespace {

// Orbit radius and height of each profile node in the drawing.
void write_obj(const std::string& path, const std::vector<double>& radius, const std::vector<double>& height,
               std::size_t segments) {
  if (segments < 3) throw Error(Errc::invalid_argument, "OBJ export: at least 3 segments");
  auto out = open_out(path);
  const std::size_t n = radius.size();
  // Poles are single vertices; every other node is a ring.
  out << "v 0 0 " << height[0] << "\n";
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t k = 0; k < segments; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(segments);
      out << "v " << radius[i] * std::cos(phi) << " " << radius[i] * std::sin(phi) << " " << height[i] << "\n";
    }
  }
  out << "v 0 0 " << height[n - 1] << "\n";
  auto ring = [&](std::size_t i, std::size_t k) { return 2 + (i - 1) * segments + k % segments; };
  const std::size_t top = 2 + (n - 2) * segments;
  for (std::size_t k = 0; k < segments; ++k) out << "f 1 " << ring(1, k + 1) << " " << ring(1, k) << "\n";
  for (std::size_t i = 1; i + 2 < n; ++i) {
    for (std::size_t k = 0; k < segments; ++k) {
      out << "f " << ring(i, k) << " " << ring(i, k + 1) << " " << ring(i + 1, k + 1) << "\n";
      out << "f " << ring(i, k) << " " << ring(i + 1, k + 1) << " " << ring(i + 1, k) << "\n";
    }
  }
  for (std::size_t k = 0; k < segments; ++k) out << "f " << top << " " << ring(n - 2, k) << " " << ring(n - 2, k + 1) << "\n";
}

}  // namespace

void write_surface_obj(const std::string& path, const RevolutionSurfaceR3& surface, std::size_t segments) {
  const auto f = surface.source.f();
  write_obj(path, {f.begin(), f.end()}, surface.z, segments);
}

void write_surface_obj(const std::string& path, const RevolutionSurfaceH3& surface, std::size_t segments) {
  const auto f = surface.source.f();
  std::vector<double> radius(f.size()), height(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    // Poincare ball: x / (1 + kappa t), rescaled so the ball has radius 1/kappa.
    const double denom = 1.0 + surface.kappa * surface.t[i];
    radius[i] = f[i] / denom;
    height[i] = surface.z[i] / denom;
  }
  write_obj(path, radius, height, segments);
}

double round15(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format15(value).c_str(), nullptr);
}

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round15(value);
}

Json numbers(std::span<const double> values) {
  Json a = Json::array();
  for (const double v : values) a.push_back(number(v));
  return a;
}

namespace {

Json tags(const std::vector<BoundaryTag>& t) {
  Json a = Json::array();
  for (const auto x : t) a.push_back(x == BoundaryTag::outer ? "outer" : "horizon");
  return a;
}

}  // namespace

Json to_json(const UpperBound& b) {
  return Json{{"value", number(b.value)},
              {"kappa", number(b.kappa)},
              {"p", b.p_label},
              {"p_coordinates", Json::array({number(b.p.t), number(b.p.x1), number(b.p.x2), number(b.p.x3)})},
              {"r_star", number(b.r_star)},
              {"weighted_total", number(b.weighted_total)}};
}

Json to_json(const LambdaBracket& b) {
  Json fill = Json::array();
  for (const auto& c : b.fillins) {
    Json e{{"label", c.label}, {"total_H_over_8pi", number(c.total_H_over_8pi)}, {"admitted", c.admitted}};
    if (!c.reason.empty()) e["reason"] = c.reason;
    fill.push_back(std::move(e));
  }
  Json upper{{"best", to_json(b.upper_sweep.best)}, {"grid_points", b.upper_sweep.samples.size()}};
  Json skipped = Json::array();
  for (const auto& s : b.upper_sweep.skipped) skipped.push_back(s);
  upper["skipped"] = std::move(skipped);
  return Json{{"lower", number(b.lower)},
              {"lower_is_empty", b.lower_is_empty()},
              {"lower_source", b.lower_is_empty() ? Json(nullptr) : Json(b.lower_source)},
              {"upper", number(b.upper)},
              {"fillins", std::move(fill)},
              {"upper_bound", std::move(upper)}};
}

Json to_json(const MassBracket& b) {
  return Json{{"lambda_lower", number(b.lambda_lower)},
              {"lambda_lower_is_empty", b.lower_is_empty()},
              {"lambda_upper", number(b.lambda_upper)},
              {"total_H_over_8pi", number(b.total_H_over_8pi)},
              {"mass_lower", number(b.mass_lower)},
              {"raw_mass_lower", number(b.raw_mass_lower)},
              {"mass_upper", number(b.mass_upper)},
              {"provenance", to_json(b.provenance)}};
}

Json to_json(const CombinedBracket& b) {
  Json j = to_json(b.total);
  Json flags = Json::array();
  for (const bool f : b.component_consistent) flags.push_back(f);
  j["component_consistent"] = std::move(flags);
  return j;
}

Json to_json(const FillinReport& r) {
  return Json{{"min_R", number(r.min_R)},
              {"min_H_outer", number(r.min_H_outer)},
              {"max_abs_H_inner", number(r.max_abs_H_inner)},
              {"has_inner_boundary", r.has_inner_boundary},
              {"boundary_metric_residual", number(r.boundary_metric_residual)},
              {"boundary_matches", r.boundary_matches},
              {"in_F", r.in_F},
              {"in_F_ring", r.in_F_ring}};
}

Json to_json(const ShiTamResult& r) {
  return Json{{"total_H", number(r.total_H)},
              {"total_H0", number(r.total_H0)},
              {"gap", number(r.gap)},
              {"flatness", number(r.flatness)},
              {"equality", r.equality}};
}

Json to_json(const ConformalSolve& s) {
  return Json{{"u", numbers(s.u.values())},
              {"boundary_nodes", s.boundary_nodes},
              {"boundary_tags", tags(s.boundary_tags)},
              {"normal_derivative", numbers(s.normal_derivative)},
              {"residual", number(s.residual)},
              {"iterations", s.iterations},
              {"min_u", number(s.min_u)},
              {"max_u", number(s.max_u)},
              {"positive", s.positive}};
}

Json to_json(const DeformedBoundaryReport& r) {
  return Json{{"nodes", r.nodes},
              {"tags", tags(r.tags)},
              {"old_H", numbers(r.old_H)},
              {"new_H", numbers(r.new_H)},
              {"metric_factor", numbers(r.metric_factor)},
              {"min_R_new", number(r.min_R_new)},
              {"flags",
               Json{{"boundary_metric_preserved", r.boundary_metric_preserved()},
                    {"outer_metric_preserved", r.outer_metric_preserved},
                    {"inner_metric_preserved", r.inner_metric_preserved},
                    {"mean_convex", r.mean_convex}}}};
}

Json to_json(const DoublingResult& d) {
  Json j{{"epsilon", number(d.epsilon)},
         {"flattened", d.flattening.has_value()},
         {"H_reference", number(d.H_reference)},
         {"horizon_metric_mismatch", number(d.horizon_metric_mismatch)},
         {"horizon_H1", number(d.horizon_H1)},
         {"horizon_H2", number(d.horizon_H2)},
         {"corner_jump", number(d.corner_jump)},
         {"outer_margin", number(d.outer_margin)},
         {"eta", number(d.eta)},
         {"phi1_solver", Json{{"residual", number(d.phi1.residual)}, {"iterations", d.phi1.iterations}}},
         {"report1", to_json(d.report1)},
         {"report2", to_json(d.report2)}};
  return j;
}

Json to_json(const PerturbationReport& p) {
  return Json{{"epsilon", number(p.epsilon)},
              {"phi", number(p.phi)},
              {"w_min", number(p.w.min_u)},
              {"w_max", number(p.w.max_u)},
              {"total_H_old", number(p.total_H_old)},
              {"total_H_new", number(p.total_H_new)},
              {"min_H_old", number(p.min_H_old)},
              {"min_H_new", number(p.min_H_new)},
              {"solver", Json{{"residual", number(p.w.residual)}, {"iterations", p.w.iterations}}},
              {"report", to_json(p.report)}};
}

Json to_json(const ScalarFlatResult& s) {
  return Json{{"total_H_old", number(s.total_H_old)},
              {"total_H_new", number(s.total_H_new)},
              {"min_u", number(s.solve.min_u)},
              {"solver", Json{{"residual", number(s.solve.residual)}, {"iterations", s.solve.iterations}}},
              {"report", to_json(s.report)}};
}

Json to_json(const CapFill& c) {
  return Json{{"cap_radius", number(c.cap_radius)},
              {"collar_width", number(c.collar_width)},
              {"outer_H_before", number(c.outer_H_before)},
              {"outer_H_after", number(c.outer_H_after)},
              {"eta", number(c.eta)},
              {"seam_second_derivative_jump", number(c.seam_second_derivative_jump)},
              {"seam_R_jump", number(c.seam_R_jump)}};
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

}  // namespace qlmass::io
