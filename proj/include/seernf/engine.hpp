#pragma once

#include <string_view>

#include "seernf/parameters.hpp"

namespace seernf {

/// Model constants of the SEER-SEM effort equations.
inline constexpr double kDevelopmentFraction = 0.393469;  // E = 0.393469·K
inline constexpr double kBasicTechnologyScale = 2000.0;
inline constexpr double kCtbxReference = 4.11;
inline constexpr double kTechnologySlope = 3.70945;
inline constexpr double kSizeExponent = 1.2;
inline constexpr double kStaffingExponent = 0.4;

/// Combined parameters. Arguments (a, b) are, in order:
/// (AEXP, APPL), (LANG, LEXP), (TSYS, TEXP), (DSY, DEXP), (PSYS, PEXP), (SIBR, REUS).
enum class Combined { AEXPAPPL, LANGLEXP, TSYSTEXP, DSYSDEXP, PSYSPEXP, SIBRREUS };

std::string_view to_string(Combined kind);

/// Throws DomainError when a divisor is zero or negative, PSYS is negative,
/// or SIBR lies outside [0, 1]. PSYS = 0 yields exactly 1.
double compute_combined(Combined kind, double a, double b);

/// ACAP × AEXPAPPL × MODP × PCAP × TOOL × TERM.
double compute_ctbx(const ParameterValues& values);

/// Product of the five combined adjustment factors and the sixteen single
/// adjustment factors. `sibr` is the reuse fraction paired with REUS.
double compute_parm_adjustment(const ParameterValues& values, double sibr);

struct EffortBreakdown {
  double ctbx = 0.0;
  double parm_adjustment = 0.0;
  double c_tb = 0.0;  // basic technology
  double c_te = 0.0;  // effective technology
  double k_lifecycle = 0.0;  // person-years
  double effort = 0.0;       // person-years
};

/// Evaluates the effort model stepwise: ctbx, C_tb, ParmAdjustment, C_te,
/// K = d^0.4·(size/C_te)^1.2, E = 0.393469·K. Throws DomainError for
/// non-positive size, d, ctbx, TURN or ParmAdjustment.
EffortBreakdown compute_effort(double size, double d, const ParameterValues& values, double sibr);

}  // namespace seernf
