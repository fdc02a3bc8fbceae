#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include <riskbandit/bounds.hpp>
#include <riskbandit/errors.hpp>

using namespace riskbandit;
using Catch::Approx;

namespace {
constexpr double kRel = 1e-9;  // frozen-value tolerance, set ahead of first run
}

TEST_CASE("moment assumption and gap profile validate", "[bounds]") {
  CHECK_NOTHROW(MomentAssumption(1.5, 2.0));
  CHECK_THROWS_AS(MomentAssumption(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(MomentAssumption(2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(MomentAssumption(2.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);

  const GapProfile g({0.2, 0.5, 0.5});
  CHECK(g.count() == 3);
  CHECK(g.gap(2) == 0.2);
  CHECK(g.gap(4) == 0.5);
  CHECK_THROWS_AS(GapProfile({}), std::invalid_argument);
  CHECK_THROWS_AS(GapProfile({0.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(GapProfile({0.5, 0.2}), std::invalid_argument);  // decreasing
}

TEST_CASE("threshold carries magnitudes in log space", "[bounds]") {
  const Threshold t = Threshold::from_value(9408.0);
  CHECK(t.value() == Approx(9408.0).epsilon(1e-12));
  CHECK(t.exceeded_by(12000.0));
  CHECK_FALSE(t.exceeded_by(9408.0));  // strict
  CHECK_FALSE(t.exceeded_by(9000.0));
  CHECK_FALSE(t.exceeded_by(0.0));

  const Threshold big = Threshold::from_log10(16.536049848239342);
  CHECK(big.display() == "10^16.536");
  CHECK_FALSE(big.exceeded_by(1e16));
  CHECK(big.exceeded_by(1e17));
  CHECK(Threshold::from_value(1e10).display() == "1e+10");
  CHECK(Threshold::from_value(9408.0).display() == "9408");
}

TEST_CASE("bounded-support CVaR deviation bound", "[bounds]") {
  const ConfidenceLevel c(0.95);
  const DeviationBound r = bounded_cvar_dev_bound(100, c, 1.0, 0.5);
  CHECK(r.bound == Approx(5.3442367030418867).epsilon(kRel));
  CHECK(r.vacuous);
  // more samples shrink it below 1
  const DeviationBound r2 = bounded_cvar_dev_bound(100000, c, 1.0, 0.5);
  CHECK(r2.bound < 1.0);
  CHECK_FALSE(r2.vacuous);
  // larger deviation, smaller bound
  CHECK(bounded_cvar_dev_bound(100, c, 1.0, 0.8).bound < r.bound);
  CHECK_THROWS_AS(bounded_cvar_dev_bound(0, c, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(bounded_cvar_dev_bound(100, c, 0.0, 0.5), std::invalid_argument);
  // zero deviation is legal: the exponent vanishes and the bound is the
  // leading constant
  CHECK(bounded_cvar_dev_bound(100, c, 1.0, 0.0).bound == 6.0);
}

TEST_CASE("truncated CVaR deviation bound", "[bounds]") {
  const ConfidenceLevel c(0.95);
  const DeviationBound r = truncated_cvar_dev_bound(10000, c, 10.0, 1.0);
  CHECK(r.bound == Approx(5.4064506343277434).epsilon(kRel));
  CHECK(r.vacuous);

  // doubling the level divides the exponent by exactly four
  const ConfidenceLevel q(0.75);
  const DeviationBound b1 = truncated_cvar_dev_bound(1024, q, 1.0, 1.0);
  const DeviationBound b2 = truncated_cvar_dev_bound(1024, q, 2.0, 1.0);
  CHECK(b2.exponent * 4.0 == b1.exponent);

  // monotone in n
  CHECK(truncated_cvar_dev_bound(20000, c, 10.0, 1.0).bound < r.bound);
}

TEST_CASE("VaR magnitude and minimum truncation level", "[bounds]") {
  const ConfidenceLevel c(0.95);
  const MomentAssumption p2(2.0, 2.0);
  CHECK(var_magnitude_bound(p2, c) == Approx(6.3245553203367587).epsilon(kRel));

  // minimum level: max(Delta/2, |VaR| bound, (2B/(Delta beta))^(1/(p-1)))
  CHECK(min_truncation(0.2, c, p2) == Approx(400.0).epsilon(kRel));
  CHECK(min_truncation(0.2, c, MomentAssumption(3.0, 2.0)) ==
        Approx(20.0).epsilon(kRel));
  // a caller-supplied |VaR| replaces the moment-based magnitude bound
  CHECK(min_truncation(0.2, c, p2, 500.0) == Approx(500.0).epsilon(kRel));
  CHECK(min_truncation(0.2, c, p2, 1.0) == Approx(400.0).epsilon(kRel));
  CHECK_THROWS_AS(min_truncation(0.0, c, p2), std::invalid_argument);
}

TEST_CASE("oblivious truncated-mean deviation bound", "[bounds]") {
  const MomentAssumption p2(2.0, 2.0);
  const ObliviousBound r = oblivious_mean_dev_bound(100, 0.5, 4.0, p2);
  CHECK(r.bound == Approx(9.0799859524969703e-5).epsilon(kRel));
  CHECK_FALSE(r.vacuous);
  CHECK(r.n_star.exceeded_by(100.0));  // n* = (3B/Delta)^2 = 2.25

  const ObliviousBound s = oblivious_mean_dev_bound(100, 0.75, 0.1, p2);
  CHECK(s.n_star.value() == Approx(234.89205847013182).epsilon(kRel));
  CHECK_FALSE(s.n_star.exceeded_by(100.0));

  CHECK_THROWS_AS(oblivious_mean_dev_bound(100, 0.0, 0.1, p2),
                  std::invalid_argument);
  CHECK_THROWS_AS(oblivious_mean_dev_bound(100, 1.0, 0.1, p2),
                  std::invalid_argument);
}

TEST_CASE("oblivious truncated-CVaR deviation bound", "[bounds]") {
  const MomentAssumption p2(2.0, 2.0);
  const ConfidenceLevel c95(0.95);
  const ObliviousBound r = oblivious_cvar_dev_bound(10000, 0.2, 1.0, c95, p2);
  CHECK(r.bound == Approx(4.6186600594863075).epsilon(kRel));
  CHECK(r.vacuous);
  CHECK(r.n_star.value() == Approx(3276800000.0).epsilon(kRel));  // 80^5
  CHECK_FALSE(r.n_star.exceeded_by(10000.0));

  // the documented example: Delta = 0.25 gives n* = 320^5 exactly
  const ObliviousBound ex = oblivious_cvar_dev_bound(10000, 0.2, 0.25, c95, p2);
  CHECK(ex.n_star.value() == Approx(3355443200000.0).epsilon(kRel));
  CHECK(ex.n_star.log10() == Approx(12.52574989159953).epsilon(kRel));

  // heavier moment: the tail term can dominate n*
  const ObliviousBound alt =
      oblivious_cvar_dev_bound(10000, 0.3, 0.3, ConfidenceLevel(0.99),
                               MomentAssumption(3.0, 2.0));
  CHECK(alt.bound == Approx(5.9955229654824754).epsilon(kRel));
  CHECK(alt.n_star.value() == Approx(161521.83047396797).epsilon(kRel));

  // growth exponent must leave the CVaR guarantee intact
  CHECK_THROWS_AS(oblivious_cvar_dev_bound(100, 0.5, 1.0, c95, p2),
                  std::invalid_argument);
}

TEST_CASE("truncated-mean deviation radius over a level sequence", "[bounds]") {
  // constant level b = 10, n = 100, delta = 0.05
  CHECK(truncated_mean_dev_bound(100, 10.0, 0.05, MomentAssumption(2.0, 2.0)) ==
        Approx(1.0377758908227873).epsilon(kRel));
  CHECK(truncated_mean_dev_bound(100, 10.0, 0.05, MomentAssumption(3.0, 2.0)) ==
        Approx(0.83714594342119723).epsilon(kRel));

  // growing levels b_i = i^0.5, n = 50, p = 1.5
  std::vector<double> bs(50);
  for (std::size_t i = 0; i < 50; ++i)
    bs[i] = std::sqrt(static_cast<double>(i + 1));
  CHECK(truncated_mean_dev_bound(bs, 0.1, MomentAssumption(1.5, 2.0)) ==
        Approx(2.2011926453194912).epsilon(kRel));

  // level sequence must be nondecreasing and positive
  CHECK_THROWS_AS(
      truncated_mean_dev_bound(std::vector<double>{2.0, 1.0}, 0.1,
                               MomentAssumption(2.0, 2.0)),
      std::invalid_argument);
  CHECK_THROWS_AS(truncated_mean_dev_bound(100, 10.0, 1.0,
                                           MomentAssumption(2.0, 2.0)),
                  std::invalid_argument);
}

TEST_CASE("log_bar matches hand values", "[bounds]") {
  CHECK(log_bar(2) == Approx(1.0).epsilon(1e-15));
  CHECK(log_bar(3) == Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(log_bar(10) == Approx(2.428968253968254).epsilon(1e-15));
  CHECK_THROWS_AS(log_bar(1), std::invalid_argument);
}

TEST_CASE("uniform-exploration error bound: documented example", "[bounds]") {
  // K=10, T=10^4, all gaps 0.25, pure-CVaR objective, q_c = 0.2, (p,B) = (2,2)
  const GapProfile gaps(std::vector<double>(9, 0.25));
  const RiskObjective obj(0.0, 1.0, ConfidenceLevel(0.95));
  const MomentAssumption ma(2.0, 2.0);
  const GsrErrorBound r = ue_error_bound(10000, 10, gaps, obj, 0.5, 0.2, ma);

  CHECK(r.bound == Approx(59.984597745207519).epsilon(kRel));
  CHECK(r.mean_term == 0.0);
  CHECK(r.cvar_term == Approx(59.984597745207519).epsilon(kRel));
  CHECK(r.vacuous);
  CHECK(r.cvar_power == Approx(0.6).epsilon(1e-15));
  // T* = K n* with n* = 1280^5 = 3.436e15, reported in log space
  CHECK(r.t_threshold.log10() == Approx(16.536049848239342).epsilon(kRel));
  CHECK(r.t_threshold.display() == "10^16.536");
  CHECK_FALSE(r.valid);

  CHECK_THROWS_AS(
      ue_error_bound(10000, 10, GapProfile({0.25}), obj, 0.5, 0.2, ma),
      GapCountMismatch);
  // q_m is irrelevant (and unchecked) for a pure-CVaR objective ...
  CHECK_NOTHROW(ue_error_bound(10000, 10, gaps, obj, 1.5, 0.2, ma));
  // ... but invalid exponents on active terms are rejected
  CHECK_THROWS_AS(ue_error_bound(10000, 10, gaps,
                                 RiskObjective(1.0, 1.0, ConfidenceLevel(0.95)),
                                 1.5, 0.2, ma),
                  std::invalid_argument);
  CHECK_THROWS_AS(ue_error_bound(10000, 10, gaps, obj, 0.5, 0.6, ma),
                  std::invalid_argument);
}

TEST_CASE("uniform-exploration and successive-rejects bounds: mixed objective",
          "[bounds]") {
  // K=3, T=1000, gaps (0.2, 0.5), xi=(1,1), alpha=0.9, q_m=0.3, q_c=0.2, (2,3)
  const GapProfile gaps({0.2, 0.5});
  const RiskObjective obj(1.0, 1.0, ConfidenceLevel(0.9));
  const MomentAssumption ma(2.0, 3.0);

  const GsrErrorBound ue = ue_error_bound(1000, 3, gaps, obj, 0.3, 0.2, ma);
  CHECK(ue.bound == Approx(20.890327150926431).epsilon(kRel));
  CHECK(ue.t_threshold.value() == Approx(7464960000000000.0).epsilon(kRel));

  const GsrErrorBound sr = sr_error_bound(1000, 3, gaps, obj, 0.3, 0.2, ma);
  CHECK(sr.bound == Approx(20.259025186416856).epsilon(kRel));
  CHECK(sr.mean_term + sr.cvar_term == sr.bound);
  CHECK(sr.t_threshold.log10() == Approx(15.997966221566087).epsilon(kRel));
  CHECK_FALSE(sr.valid);

  CHECK_THROWS_AS(sr_error_bound(3, 3, gaps, obj, 0.3, 0.2, ma),
                  std::invalid_argument);  // T must exceed K
}

TEST_CASE("bounds are monotone in budget", "[bounds]") {
  const GapProfile gaps({0.2, 0.5});
  const RiskObjective obj(1.0, 1.0, ConfidenceLevel(0.9));
  const MomentAssumption ma(2.0, 3.0);
  double prev_ue = std::numeric_limits<double>::infinity();
  double prev_sr = std::numeric_limits<double>::infinity();
  for (std::int64_t T : {100, 1000, 10000, 100000}) {
    const double u = ue_error_bound(T, 3, gaps, obj, 0.3, 0.2, ma).bound;
    const double s = sr_error_bound(T, 3, gaps, obj, 0.3, 0.2, ma).bound;
    CHECK(u < prev_ue);
    CHECK(s < prev_sr);
    prev_ue = u;
    prev_sr = s;
  }
}

TEST_CASE("bounded-instance threshold example", "[bounds]") {
  // 3 uniform arms, gaps (0.5, 1.0), pure mean, q_m = 0.5, B = E X^2 = 7/3:
  // n* = (12 B / 0.5)^2 = 56^2 = 3136, threshold 3 n* = 9408 < T = 12000.
  const GsrErrorBound r =
      ue_error_bound(12000, 3, GapProfile({0.5, 1.0}),
                     RiskObjective(1.0, 0.0, ConfidenceLevel(0.95)), 0.5, 0.25,
                     MomentAssumption(2.0, 7.0 / 3.0));
  CHECK(r.bound == Approx(0.83138352496326481).epsilon(kRel));
  CHECK(r.t_threshold.value() == Approx(9408.0).epsilon(kRel));
  CHECK(r.valid);
  CHECK_FALSE(r.vacuous);
}

TEST_CASE("static truncation levels from a known moment bound", "[bounds]") {
  const ConfidenceLevel c95(0.95);
  const GapProfile mean_gaps(std::vector<double>(9, 0.1));
  const GapProfile cvar_gaps(std::vector<double>(9, 0.25));

  const NonObliviousSettings m2 = nonoblivious_settings(
      RiskObjective(1.0, 0.0, c95), mean_gaps, MomentAssumption(2.0, 2.0));
  REQUIRE(m2.b_mean.has_value());
  CHECK_FALSE(m2.b_cvar.has_value());
  CHECK(*m2.b_mean == Approx(240.0).epsilon(kRel));

  const NonObliviousSettings m15 = nonoblivious_settings(
      RiskObjective(1.0, 0.0, c95), mean_gaps, MomentAssumption(1.5, 2.0));
  CHECK(*m15.b_mean == Approx(57600.0).epsilon(kRel));

  const NonObliviousSettings cv = nonoblivious_settings(
      RiskObjective(0.0, 1.0, c95), cvar_gaps, MomentAssumption(2.0, 2.0));
  REQUIRE(cv.b_cvar.has_value());
  CHECK_FALSE(cv.b_mean.has_value());
  CHECK(*cv.b_cvar == Approx(1280.0).epsilon(kRel));

  CHECK(nonoblivious_mean_dev_bound(10000, 0.1, 240.0) ==
        Approx(0.7057321629176978).epsilon(kRel));
  CHECK(nonoblivious_cvar_dev_bound(10000, 0.25, c95, 640.0) ==
        Approx(5.9999904632644151).epsilon(kRel));
}
