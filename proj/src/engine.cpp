#include "seernf/engine.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

namespace {

void require_positive(Combined kind, std::string_view name, double v) {
  if (!(v > 0.0)) {
    throw DomainError(fmt::format("{}: {} = {} must be positive", to_string(kind), name, v));
  }
}

void require_positive(std::string_view name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("{} = {} must be positive and finite", name, v));
  }
}

constexpr std::array<Param, 16> kSingleAdjustments = {
    Param::MULT, Param::RDED, Param::RLOC, Param::DSVL, Param::PSVL, Param::RVOL,
    Param::SPEC, Param::TEST, Param::QUAL, Param::RHST, Param::DISP, Param::MEMC,
    Param::TIMC, Param::RTIM, Param::SECR, Param::TSVL};

}  // namespace

std::string_view to_string(Combined kind) {
  switch (kind) {
    case Combined::AEXPAPPL: return "AEXPAPPL";
    case Combined::LANGLEXP: return "LANGLEXP";
    case Combined::TSYSTEXP: return "TSYSTEXP";
    case Combined::DSYSDEXP: return "DSYSDEXP";
    case Combined::PSYSPEXP: return "PSYSPEXP";
    case Combined::SIBRREUS: return "SIBRREUS";
  }
  return "?";
}

double compute_combined(Combined kind, double a, double b) {
  switch (kind) {
    case Combined::AEXPAPPL:
      require_positive(kind, "APPL", b);
      return 0.82 + 0.47 * std::exp(-0.95977 * (a / b));
    case Combined::LANGLEXP:
      require_positive(kind, "LANG", a);
      return 1.0 + ((1.11 + 0.085 * a) - 1.0) * std::exp(-b / (a / 3.0));
    case Combined::TSYSTEXP:
      require_positive(kind, "TSYS", a);
      return 1.0 + (0.035 + 0.025 * a) * std::exp(-3.0 * b / a);
    case Combined::DSYSDEXP:
      require_positive(kind, "DSY", a);
      return 1.0 + (0.06 + 0.05 * a) * std::exp(-3.0 * b / a);
    case Combined::PSYSPEXP:
      if (a == 0.0) return 1.0;
      require_positive(kind, "PSYS", a);
      return std::pow(std::pow(0.91, a) + 0.23 * a * std::exp(-3.0 * b / a), 0.833);
    case Combined::SIBRREUS:
      if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError(fmt::format("SIBRREUS: SIBR = {} outside [0, 1]", a));
      }
      return a * b + 1.0;
  }
  throw DomainError("unknown combined parameter");
}

double compute_ctbx(const ParameterValues& v) {
  return v.at(Param::ACAP) *
         compute_combined(Combined::AEXPAPPL, v.at(Param::AEXP), v.at(Param::APPL)) *
         v.at(Param::MODP) * v.at(Param::PCAP) * v.at(Param::TOOL) * v.at(Param::TERM);
}

double compute_parm_adjustment(const ParameterValues& v, double sibr) {
  double product = compute_combined(Combined::LANGLEXP, v.at(Param::LANG), v.at(Param::LEXP)) *
                   compute_combined(Combined::TSYSTEXP, v.at(Param::TSYS), v.at(Param::TEXP)) *
                   compute_combined(Combined::DSYSDEXP, v.at(Param::DSY), v.at(Param::DEXP)) *
                   compute_combined(Combined::PSYSPEXP, v.at(Param::PSYS), v.at(Param::PEXP)) *
                   compute_combined(Combined::SIBRREUS, sibr, v.at(Param::REUS));
  for (Param p : kSingleAdjustments) product *= v.at(p);
  return product;
}

EffortBreakdown compute_effort(double size, double d, const ParameterValues& values, double sibr) {
  require_positive("size", size);
  require_positive("D", d);
  const double turn = values.at(Param::TURN);
  require_positive("TURN", turn);

  EffortBreakdown out;
  out.ctbx = compute_ctbx(values);
  require_positive("ctbx", out.ctbx);
  out.c_tb = kBasicTechnologyScale *
             std::exp(-kTechnologySlope * std::log(out.ctbx / kCtbxReference) / (5.0 * turn));
  out.parm_adjustment = compute_parm_adjustment(values, sibr);
  require_positive("ParmAdjustment", out.parm_adjustment);
  out.c_te = out.c_tb / out.parm_adjustment;
  out.k_lifecycle = std::pow(d, kStaffingExponent) * std::pow(size / out.c_te, kSizeExponent);
  out.effort = kDevelopmentFraction * out.k_lifecycle;
  return out;
}

}  // namespace seernf
