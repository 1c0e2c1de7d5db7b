#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "seernf/engine.hpp"
#include "seernf/errors.hpp"
#include "seernf/synthetic.hpp"

using namespace seernf;

namespace {

/// Values with every plain multiplier at 1 and the combined inputs chosen
/// so AEXPAPPL = 1.29 (AEXP = 0) and the remaining combined factors are
/// exactly one (saturated experience, PSYS = 0, SIBR = 0).
ParameterValues unit_values() {
  ParameterValues v;
  for (Param p : rated_params()) v.set(p, 1.0);
  v.set(Param::LANG, 3.0);
  v.set(Param::LEXP, 1000.0);
  v.set(Param::TEXP, 1000.0);
  v.set(Param::DEXP, 1000.0);
  v.set(Param::PSYS, 0.0);
  v.set(Param::SIBR, 0.0);
  return v;
}

ParameterValues random_values(SyntheticRng& rng) {
  ParameterValues v;
  for (Param p : rated_params()) v.set(p, rng.uniform(0.5, 2.0));
  v.set(Param::ACAP, rng.uniform(2.0, 8.0));
  v.set(Param::LANG, rng.uniform(1.0, 5.0));
  v.set(Param::D, rng.uniform(4.0, 20.0));
  return v;
}

}  // namespace

TEST_CASE("combined parameters: closed-form anchors") {
  CHECK(compute_combined(Combined::PSYSPEXP, 0.0, 3.7) == 1.0);
  CHECK(compute_combined(Combined::SIBRREUS, 0.0, 2.0) == 1.0);
  CHECK(compute_combined(Combined::AEXPAPPL, 0.0, 1.0) == doctest::Approx(1.29).epsilon(1e-15));
  // 1 + ((1.11 + 0.085·3) − 1)·exp(0), evaluated independently in Python.
  CHECK(compute_combined(Combined::LANGLEXP, 3.0, 0.0) == doctest::Approx(1.365).epsilon(1e-15));
  CHECK(compute_combined(Combined::SIBRREUS, 0.5, 2.0) == 2.0);
}

TEST_CASE("combined parameters: domain errors name the argument") {
  CHECK_THROWS_AS(compute_combined(Combined::AEXPAPPL, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(compute_combined(Combined::LANGLEXP, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(compute_combined(Combined::TSYSTEXP, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(compute_combined(Combined::DSYSDEXP, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(compute_combined(Combined::PSYSPEXP, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(compute_combined(Combined::SIBRREUS, 1.5, 1.0), DomainError);
  try {
    compute_combined(Combined::DSYSDEXP, 0.0, 1.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("DSY") != std::string::npos);
  }
}

TEST_CASE("ctbx examples") {
  ParameterValues v = unit_values();
  v.set(Param::AEXP, 1.0e3);  // AEXPAPPL -> 0.82
  v.set(Param::ACAP, 1.0 / 0.82);
  CHECK(compute_ctbx(v) == doctest::Approx(1.0).epsilon(1e-15));
  v.set(Param::ACAP, 2.0 / 0.82);
  CHECK(compute_ctbx(v) == doctest::Approx(2.0).epsilon(1e-15));

  ParameterValues w = unit_values();
  w.set(Param::ACAP, 1.1);
  w.set(Param::AEXP, 0.0);
  w.set(Param::APPL, 1.0);
  w.set(Param::MODP, 0.9);
  w.set(Param::PCAP, 1.2);
  // 1.1 × 1.29 × 0.9 × 1.2, direct product.
  CHECK(compute_ctbx(w) == doctest::Approx(1.53252).epsilon(1e-14));

  ParameterValues missing;
  missing.set(Param::ACAP, 1.0);
  CHECK_THROWS_AS(compute_ctbx(missing), LookupError);
}

TEST_CASE("ParmAdjustment examples") {
  ParameterValues v = unit_values();
  CHECK(compute_parm_adjustment(v, 0.0) == 1.0);
  v.set(Param::TEST, 1.3);
  CHECK(compute_parm_adjustment(v, 0.0) == doctest::Approx(1.3).epsilon(1e-15));

  ParameterValues w = unit_values();
  w.set(Param::REUS, 2.0);
  CHECK(compute_parm_adjustment(w, 0.5) == doctest::Approx(2.0).epsilon(1e-15));

  // Non-trivial combined factors: compare with the direct product.
  SyntheticRng rng(3);
  const ParameterValues r = random_values(rng);
  const double sibr = 0.3;
  double expected = 1.0 + (0.11 + 0.085 * r.at(Param::LANG)) *
                              std::exp(-3.0 * r.at(Param::LEXP) / r.at(Param::LANG));
  expected *= 1.0 + (0.035 + 0.025 * r.at(Param::TSYS)) * std::exp(-3.0 * r.at(Param::TEXP) / r.at(Param::TSYS));
  expected *= 1.0 + (0.06 + 0.05 * r.at(Param::DSY)) * std::exp(-3.0 * r.at(Param::DEXP) / r.at(Param::DSY));
  const double psys = r.at(Param::PSYS);
  expected *= std::pow(std::pow(0.91, psys) + 0.23 * psys * std::exp(-3.0 * r.at(Param::PEXP) / psys), 0.833);
  expected *= sibr * r.at(Param::REUS) + 1.0;
  for (Param p : {Param::MULT, Param::RDED, Param::RLOC, Param::DSVL, Param::PSVL, Param::RVOL,
                  Param::SPEC, Param::TEST, Param::QUAL, Param::RHST, Param::DISP, Param::MEMC,
                  Param::TIMC, Param::RTIM, Param::SECR, Param::TSVL}) {
    expected *= r.at(p);
  }
  CHECK(compute_parm_adjustment(r, sibr) == doctest::Approx(expected).epsilon(1e-13));

  ParameterValues partial;
  partial.set(Param::LANG, 3.0);
  CHECK_THROWS_AS(compute_parm_adjustment(partial, 0.0), LookupError);
}

TEST_CASE("effort: C_tb anchor at ctbx = 4.11 for any TURN") {
  ParameterValues v = unit_values();
  v.set(Param::AEXP, 1.0e3);
  v.set(Param::ACAP, 4.11 / 0.82);
  for (double turn : {0.5, 1.0, 3.0}) {
    v.set(Param::TURN, turn);
    const EffortBreakdown b = compute_effort(1000.0, 1.0, v, 0.0);
    CHECK(std::abs(b.c_tb - 2000.0) <= 1e-12 * 2000.0);
  }
}

TEST_CASE("effort: K = 1 gives E = 0.393469") {
  ParameterValues v = unit_values();
  v.set(Param::AEXP, 1.0e3);
  v.set(Param::ACAP, 4.11 / 0.82);
  const EffortBreakdown probe = compute_effort(1.0, 1.0, v, 0.0);
  const EffortBreakdown b = compute_effort(probe.c_te, 1.0, v, 0.0);
  CHECK(b.k_lifecycle == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.effort == doctest::Approx(0.393469).epsilon(1e-12));
  CHECK(b.parm_adjustment == 1.0);
}

TEST_CASE("effort: size 50000, D 10, C_te 2000") {
  ParameterValues v = unit_values();
  v.set(Param::AEXP, 1.0e3);
  v.set(Param::ACAP, 4.11 / 0.82);
  const EffortBreakdown b = compute_effort(50000.0, 10.0, v, 0.0);
  // 10^0.4 · 25^1.2 and 0.393469 × that, evaluated independently in Python.
  CHECK(b.k_lifecycle == doctest::Approx(119.54406247375461).epsilon(1e-12));
  CHECK(b.effort == doctest::Approx(47.03688271748575).epsilon(1e-12));
  CHECK(b.c_te == doctest::Approx(b.c_tb / b.parm_adjustment).epsilon(1e-15));
  CHECK(b.effort == doctest::Approx(0.393469 * b.k_lifecycle).epsilon(1e-15));
}

TEST_CASE("effort: domain errors") {
  const ParameterValues v = unit_values();
  CHECK_THROWS_AS(compute_effort(0.0, 1.0, v, 0.0), DomainError);
  CHECK_THROWS_AS(compute_effort(1.0, 0.0, v, 0.0), DomainError);
  ParameterValues bad_turn = v;
  bad_turn.set(Param::TURN, 0.0);
  CHECK_THROWS_AS(compute_effort(1.0, 1.0, bad_turn, 0.0), DomainError);
  ParameterValues bad_ctbx = v;
  bad_ctbx.set(Param::TOOL, 0.0);
  CHECK_THROWS_AS(compute_effort(1.0, 1.0, bad_ctbx, 0.0), DomainError);
}

TEST_CASE("effort: scaling laws and stepwise/closed-form equivalence") {
  SyntheticRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ParameterValues v = random_values(rng);
    const double size = rng.uniform(1e3, 1e6);
    const double sibr = rng.uniform(0.0, 1.0);
    const double d = v.at(Param::D);
    const double e = compute_effort(size, d, v, sibr).effort;
    CHECK(oracle::relative_close(e, oracle::effort(size, sibr, v), 1e-9));
    for (double lambda : {0.5, 2.0, 10.0}) {
      CHECK(oracle::relative_close(compute_effort(lambda * size, d, v, sibr).effort / e,
                                   std::pow(lambda, 1.2), 1e-9));
      CHECK(oracle::relative_close(compute_effort(size, lambda * d, v, sibr).effort / e,
                                   std::pow(lambda, 0.4), 1e-9));
      ParameterValues scaled = v;
      scaled.set(Param::SECR, lambda * v.at(Param::SECR));
      CHECK(oracle::relative_close(compute_effort(size, d, scaled, sibr).effort / e,
                                   std::pow(lambda, 1.2), 1e-9));
    }
  }
}
