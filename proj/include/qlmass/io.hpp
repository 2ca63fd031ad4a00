#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlmass/conformal.hpp"
#include "qlmass/embedding.hpp"
#include "qlmass/fillins.hpp"
#include "qlmass/geometry.hpp"
#include "qlmass/mass.hpp"

namespace qlmass::io {

using Json = nlohmann::ordered_json;

// Two-column CSV with header "s,f" or "r,h"; '#' starts a comment.
struct ProfileTable {
  std::string x_name;
  std::string y_name;
  std::vector<double> x;
  std::vector<double> y;
};

ProfileTable parse_profile_csv(std::istream& in, const std::string& source);
ProfileTable read_profile_csv(const std::string& path);
void write_profile_csv(const std::string& path, const ProfileTable& table, const std::string& comment = {});

AxisymmetricMetric load_axisymmetric(const std::string& path, double tol = kDefaultTolerance);

// Sidecar of a radial profile: same path with extension .json.
std::string sidecar_path(const std::string& profile_path);

// Reads "r,h"; the inner role comes from the sidecar's "inner_role" field if
// present, otherwise from the data (h(r_in) = 0 means a regular center, a
// vanishing slope a horizon, anything else a cut).
RadialDomain load_radial(const std::string& path, double tol = kDefaultTolerance);
void save_radial(const std::string& path, const RadialDomain& domain, Json metadata = Json::object());

// Plain-text tet format:
//   vertices N
//   tets M        followed by M rows "a b c d"
//   edges E       followed by E rows "a b length"
//   boundary B    followed by B rows "a b c outer|horizon"
//   scalar_curvature M   optional, M rows of per-tet values
// Blank lines and '#' comments are ignored; indices are zero-based.
TetDomain parse_tet_mesh(std::istream& in, const std::string& source, double tol = kDefaultTolerance);
TetDomain load_tet_mesh(const std::string& path, double tol = kDefaultTolerance);
void write_tet_mesh(std::ostream& out, const TetDomain& domain);
void save_tet_mesh(const std::string& path, const TetDomain& domain);

// Surface exports. CSV columns: s,f,z,H0 (hyperbolic: s,f,t,z,H0).
void write_surface_csv(const std::string& path, const RevolutionSurfaceR3& surface);
void write_surface_csv(const std::string& path, const RevolutionSurfaceH3& surface);
// Triangulated OBJ with `segments` points per orbit. Hyperbolic surfaces are
// drawn in the Poincare ball model scaled to radius 1/kappa.
void write_surface_obj(const std::string& path, const RevolutionSurfaceR3& surface, std::size_t segments = 48);
void write_surface_obj(const std::string& path, const RevolutionSurfaceH3& surface, std::size_t segments = 48);

// Rounds to 15 significant digits so output is byte-stable.
double round15(double value);
// Finite values become rounded numbers, others null.
Json number(double value);
Json numbers(std::span<const double> values);

Json to_json(const UpperBound& bound);
Json to_json(const LambdaBracket& bracket);
Json to_json(const MassBracket& bracket);
Json to_json(const CombinedBracket& bracket);
Json to_json(const FillinReport& report);
Json to_json(const ShiTamResult& result);
Json to_json(const ConformalSolve& solve);
Json to_json(const DeformedBoundaryReport& report);
Json to_json(const DoublingResult& result);
Json to_json(const PerturbationReport& report);
Json to_json(const ScalarFlatResult& result);
Json to_json(const CapFill& result);

// Dump with two-space indent and a trailing newline.
std::string dump(const Json& value);

}  // namespace qlmass::io
