#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlmass {

// Numeric values are shared with the QLM_E_* codes of the C API.
enum class Errc : int {
  invalid_argument = 1,
  pole_closure_violation = 2,
  nonpositive_interior = 3,
  non_realizable = 4,
  not_embeddable = 5,
  curvature_bound_violated = 6,
  ode_breakdown = 7,
  point_not_enclosed = 8,
  solver_divergence = 9,
  nonpositive_solution = 10,
  nonpositive_factor = 11,
  not_minimal = 12,
  not_in_f = 13,
  invalid_radii = 14,
  not_minimal_inner = 15,
  not_convex = 16,
  not_admissible = 17,
  empty_component = 18,
  io_error = 19,
  parse_error = 20,
  internal = 99,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qlmass
