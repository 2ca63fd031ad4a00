#include "qlmass/error.hpp"

namespace qlmass {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::pole_closure_violation: return "PoleClosureViolation";
    case Errc::nonpositive_interior: return "NonPositiveInterior";
    case Errc::non_realizable: return "NonRealizable";
    case Errc::not_embeddable: return "NotEmbeddable";
    case Errc::curvature_bound_violated: return "CurvatureBoundViolated";
    case Errc::ode_breakdown: return "ODEBreakdown";
    case Errc::point_not_enclosed: return "PointNotEnclosed";
    case Errc::solver_divergence: return "SolverDivergence";
    case Errc::nonpositive_solution: return "NonPositiveSolution";
    case Errc::nonpositive_factor: return "NonPositiveFactor";
    case Errc::not_minimal: return "NotMinimal";
    case Errc::not_in_f: return "NotInF";
    case Errc::invalid_radii: return "InvalidRadii";
    case Errc::not_minimal_inner: return "NotMinimalInner";
    case Errc::not_convex: return "NotConvex";
    case Errc::not_admissible: return "NotAdmissible";
    case Errc::empty_component: return "EmptyComponent";
    case Errc::io_error: return "IOError";
    case Errc::parse_error: return "ParseError";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace qlmass
