#pragma once
/*
 * Closed-form evaluators for the concentration inequalities, misidentification
 * bounds, validity thresholds n*, and recommended static truncation levels.
 * All formulas are evaluated exactly as stated; probability bounds above 1
 * are returned verbatim and flagged vacuous.
 *
 * With beta = 1-alpha, moment assumption E|X|^p <= B (p > 1), gaps
 * Delta[2] <= ... <= Delta[K], and q_m / q_c the truncation growth exponents:
 *
 *  bounded-support CVaR deviation (support within [-b,b]):
 *      P(|c^ - c| >= eps) <= 6 exp(-n beta (eps/b)^2 / (10 + 1.6 eps/b))
 *  truncated CVaR deviation (heavy tail, level b admissible):
 *      P(|c^(b) - c| >= Delta) <= 6 exp(-n beta Delta^2 / (48 b^2))
 *  admissible truncation level:
 *      b > max(Delta/2, |v_alpha|, (2B/(Delta beta))^{1/(p-1)})
 *  VaR magnitude bound:  |v_alpha| <= (B / min(alpha,beta))^{1/p}
 *
 *  uniform-exploration error bound (N = floor(T/K) growth base T/K):
 *      p_e <= 2K exp(-(T/K)^{1-q_m} Delta[2] / (16 xi1))
 *           + 6K exp(-(T/K)^{1-2 q_c} beta Delta[2]^2 / (768 xi2^2)),
 *      valid for T > K n*
 *  successive-rejects error bound (S = (T-K)/logbar(K)):
 *      p_e <= sum_{i=2}^{K} (K+1-i) [ 2 exp(-(1/(16 xi1)) S^{1-q_m} Delta[i] / i^{1-q_m})
 *           + 6 exp(-(beta/(768 xi2^2)) S^{1-2 q_c} Delta[i]^2 / i^{1-2 q_c}) ],
 *      valid for T > K + K logbar(K) n*
 *  shared validity threshold (terms dropped when their weight is zero):
 *      n* = max( (12 xi1 B / Delta[2])^{1/(q_m min(p-1,1))},
 *                (8 xi2 B / (beta Delta[2]))^{1/(q_c (p-1))},
 *                (B / min(alpha,beta))^{1/(q_c p)},
 *                (Delta[2] / (8 xi2))^{1/q_c} )
 *
 *  oblivious mean deviation at b(n)=n^q:
 *      2 exp(-n^{1-q} Delta / 4),  n* = (3B/Delta)^{1/(q min(1,p-1))}
 *  oblivious CVaR deviation at b(n)=n^q, q in (0,1/2):
 *      6 exp(-n^{1-2q} beta Delta^2 / 48),
 *      n* = max((2B/(beta Delta))^{1/(q(p-1))}, (B/min(alpha,beta))^{1/(qp)},
 *               (Delta/2)^{1/q})
 *  truncated-mean deviation radius (levels b_1 <= ... <= b_n, confidence delta):
 *      (1/n) sum_i B/b_i^{p-1} + 2 b_n ln(2/delta)/n
 *        + { B/(2 b_n^{p-1})   for p <= 2
 *          { B^{2/p}/(2 b_n)   for p > 2
 *  static (non-oblivious) truncation levels:
 *      b_m = (12 B xi1 / Delta[2])^{1/min(1,p-1)}
 *      b_c = max((8 xi2 B/(beta Delta[2]))^{1/(p-1)}, (B/min(alpha,beta))^{1/p})
 *      with deviation bounds 2 exp(-n Delta/(4 b_m)) and
 *      6 exp(-n beta Delta^2/(48 b_c^2)) at those levels.
 *
 * Thresholds like K n* can be astronomically large (powers such as 1280^5),
 * so they are carried in log10 and displayed as a power of ten above 1e15.
 */
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "risk.hpp"

namespace riskbandit {

// Shared moment assumption E|X|^p <= B for every arm.
struct MomentAssumption {
  double p;
  double B;
  MomentAssumption(double p_, double B_) : p(p_), B(B_) {
    if (!(p_ > 1.0)) throw std::invalid_argument("moment order p must exceed 1");
    if (!(B_ > 0.0) || !std::isfinite(B_))
      throw std::invalid_argument("moment bound B must be positive and finite");
  }
};

// Ordered suboptimality gaps Delta[2] <= ... <= Delta[K] for the objective.
class GapProfile {
 public:
  explicit GapProfile(std::vector<double> gaps) : gaps_(std::move(gaps)) {
    if (gaps_.empty()) throw std::invalid_argument("gap profile must be nonempty");
    double prev = 0.0;
    for (double g : gaps_) {
      if (!(g > 0.0)) throw std::invalid_argument("gaps must be strictly positive");
      if (g < prev) throw std::invalid_argument("gaps must be nondecreasing");
      prev = g;
    }
  }
  // Gap of the i-th best arm, i in [2, K]; Delta[2] is the smallest.
  double gap(int i) const { return gaps_.at(static_cast<std::size_t>(i) - 2); }
  int count() const { return static_cast<int>(gaps_.size()); }
  const std::vector<double>& values() const { return gaps_; }

 private:
  std::vector<double> gaps_;
};

// Positive magnitude carried in log10 so that values like 1280^5 * 10 keep
// full precision; value() may overflow to +inf, log10() never does.
class Threshold {
 public:
  static Threshold from_value(double v) {
    if (!(v > 0.0)) throw std::invalid_argument("threshold must be positive");
    return Threshold(std::log10(v));
  }
  static Threshold from_log10(double l) { return Threshold(l); }

  double log10() const { return log10_; }
  double value() const { return std::pow(10.0, log10_); }
  bool exceeded_by(double t) const { return t > 0.0 && std::log10(t) > log10_; }

  // Decimal below 1e15, power-of-ten notation above.
  std::string display() const {
    char buf[64];
    if (log10_ <= 15.0)
      std::snprintf(buf, sizeof buf, "%.6g", value());
    else
      std::snprintf(buf, sizeof buf, "10^%.6g", log10_);
    return buf;
  }

 private:
  explicit Threshold(double l) : log10_(l) {}
  double log10_;
};

namespace detail {

// log10(10^a + 10^b) without leaving log space.
inline double log10_add(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log10(1.0 + std::pow(10.0, lo - hi));
}

}  // namespace detail

// A probability deviation bound together with the (positive) exponent e such
// that bound = 6 exp(-e); exposing e lets exact algebraic identities be
// checked without re-deriving them from the bound.
struct DeviationBound {
  double bound;
  double exponent;
  bool vacuous;  // bound > 1
};

// Bounded-support CVaR deviation: 6 exp(-n beta (eps/b)^2 / (10 + 1.6 eps/b)).
inline DeviationBound bounded_cvar_dev_bound(std::int64_t n, ConfidenceLevel conf,
                                             double b, double eps) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(b > 0.0)) throw std::invalid_argument("support bound b must be positive");
  if (!(eps >= 0.0)) throw std::invalid_argument("deviation eps must be nonnegative");
  const double r = eps / b;
  const double e = static_cast<double>(n) * conf.beta() * r * r / (10.0 + 1.6 * r);
  const double v = 6.0 * std::exp(-e);
  return DeviationBound{v, e, v > 1.0};
}

// Truncated CVaR deviation for heavy tails: 6 exp(-n beta Delta^2 / (48 b^2)).
// Pair with min_truncation: the bound presumes an admissible level b.
inline DeviationBound truncated_cvar_dev_bound(std::int64_t n, ConfidenceLevel conf,
                                               double b, double delta) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(b > 0.0)) throw std::invalid_argument("truncation level b must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("gap delta must be positive");
  const double e =
      static_cast<double>(n) * conf.beta() * delta * delta / (48.0 * (b * b));
  const double v = 6.0 * std::exp(-e);
  return DeviationBound{v, e, v > 1.0};
}

// |v_alpha| <= (B / min(alpha, beta))^{1/p}.
inline double var_magnitude_bound(const MomentAssumption& ma, ConfidenceLevel conf) {
  return std::pow(ma.B / std::min(conf.alpha(), conf.beta()), 1.0 / ma.p);
}

// Smallest admissible truncation level for the truncated CVaR bound at gap
// delta: max(delta/2, |v_alpha|, (2B/(delta beta))^{1/(p-1)}). When no value
// or bound for |v_alpha| is supplied the VaR magnitude bound substitutes.
inline double min_truncation(double delta, ConfidenceLevel conf,
                             const MomentAssumption& ma,
                             std::optional<double> v_abs = std::nullopt) {
  if (!(delta > 0.0)) throw std::invalid_argument("gap delta must be positive");
  const double var_term = v_abs ? *v_abs : var_magnitude_bound(ma, conf);
  const double tail_term =
      std::pow(2.0 * ma.B / (delta * conf.beta()), 1.0 / (ma.p - 1.0));
  return std::max({0.5 * delta, var_term, tail_term});
}

// Deviation bound plus the sample-size threshold n* past which it is valid.
struct ObliviousBound {
  double bound;
  bool vacuous;
  Threshold n_star;
};

// Oblivious truncated-mean deviation at b(n) = n^q.
inline ObliviousBound oblivious_mean_dev_bound(std::int64_t n, double q, double delta,
                                               const MomentAssumption& ma) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  if (!(delta > 0.0)) throw std::invalid_argument("gap delta must be positive");
  const double v = 2.0 * std::exp(-std::pow(static_cast<double>(n), 1.0 - q) * delta / 4.0);
  const double nstar_log10 =
      std::log10(3.0 * ma.B / delta) / (q * std::min(1.0, ma.p - 1.0));
  return ObliviousBound{v, v > 1.0, Threshold::from_log10(nstar_log10)};
}

// Oblivious truncated-CVaR deviation at b(n) = n^q, q in (0,1/2).
inline ObliviousBound oblivious_cvar_dev_bound(std::int64_t n, double q, double delta,
                                               ConfidenceLevel conf,
                                               const MomentAssumption& ma) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("q must lie in (0,1/2)");
  if (!(delta > 0.0)) throw std::invalid_argument("gap delta must be positive");
  const double beta = conf.beta();
  const double v = 6.0 * std::exp(-std::pow(static_cast<double>(n), 1.0 - 2.0 * q) *
                                  beta * delta * delta / 48.0);
  const double t1 = std::log10(2.0 * ma.B / (beta * delta)) / (q * (ma.p - 1.0));
  const double t2 =
      std::log10(ma.B / std::min(conf.alpha(), beta)) / (q * ma.p);
  const double t3 = std::log10(0.5 * delta) / q;
  return ObliviousBound{v, v > 1.0,
                        Threshold::from_log10(std::max({t1, t2, t3}))};
}

// Deviation radius of the drop-truncated mean with per-sample levels
// b_1 <= ... <= b_n at confidence 1-delta.
inline double truncated_mean_dev_bound(std::span<const double> b_seq, double delta,
                                       const MomentAssumption& ma) {
  if (b_seq.empty()) throw std::invalid_argument("truncation sequence must be nonempty");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("confidence delta must lie in (0,1)");
  double prev = 0.0;
  double sum = 0.0;
  for (double b : b_seq) {
    if (!(b > 0.0)) throw std::invalid_argument("truncation levels must be positive");
    if (b < prev) throw std::invalid_argument("truncation levels must be nondecreasing");
    prev = b;
    sum += ma.B / std::pow(b, ma.p - 1.0);
  }
  const double n = static_cast<double>(b_seq.size());
  const double bn = b_seq.back();
  const double bias = (ma.p <= 2.0) ? ma.B / (2.0 * std::pow(bn, ma.p - 1.0))
                                    : std::pow(ma.B, 2.0 / ma.p) / (2.0 * bn);
  return sum / n + 2.0 * bn * std::log(2.0 / delta) / n + bias;
}

// Convenience overload for a constant level b at every sample.
inline double truncated_mean_dev_bound(std::int64_t n, double b, double delta,
                                       const MomentAssumption& ma) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<double> seq(static_cast<std::size_t>(n), b);
  return truncated_mean_dev_bound(seq, delta, ma);
}

// Misidentification bound for a phase-schedule run, with per-metric terms,
// the exponent powers of the budget base, and the validity threshold on T.
struct GsrErrorBound {
  double mean_term;    // 0 when xi1 = 0
  double cvar_term;    // 0 when xi2 = 0
  double bound;        // sum of the terms, possibly > 1
  double mean_power;   // 1 - q_m
  double cvar_power;   // 1 - 2 q_c
  bool vacuous;        // bound > 1
  Threshold t_threshold;
  bool valid;          // T > threshold
};

namespace detail {

// log10 of the shared validity threshold n*; terms for a zero-weight metric
// are dropped so a pure-mean run is not blocked by CVaR requirements.
inline double n_star_log10(const RiskObjective& obj, double delta2, double q_m,
                           double q_c, const MomentAssumption& ma) {
  double best = -std::numeric_limits<double>::infinity();
  if (obj.xi1 > 0.0) {
    if (!(q_m > 0.0 && q_m < 1.0))
      throw std::invalid_argument("q_m must lie in (0,1)");
    best = std::max(best, std::log10(12.0 * obj.xi1 * ma.B / delta2) /
                              (q_m * std::min(ma.p - 1.0, 1.0)));
  }
  if (obj.xi2 > 0.0) {
    if (!(q_c > 0.0 && q_c < 0.5))
      throw std::invalid_argument("q_c must lie in (0,1/2)");
    const double beta = obj.alpha.beta();
    best = std::max(best, std::log10(8.0 * obj.xi2 * ma.B / (beta * delta2)) /
                              (q_c * (ma.p - 1.0)));
    best = std::max(best, std::log10(ma.B / std::min(obj.alpha.alpha(), beta)) /
                              (q_c * ma.p));
    best = std::max(best, std::log10(delta2 / (8.0 * obj.xi2)) / q_c);
  }
  return best;
}

}  // namespace detail

// Error bound for uniform exploration with K arms and budget T.
inline GsrErrorBound ue_error_bound(std::int64_t T, int K, const GapProfile& gaps,
                                    const RiskObjective& obj, double q_m, double q_c,
                                    const MomentAssumption& ma) {
  if (K < 2) throw std::invalid_argument("K must be at least 2");
  if (T < K) throw std::invalid_argument("T must be at least K");
  if (gaps.count() != K - 1)
    throw GapCountMismatch("expected " + std::to_string(K - 1) + " gaps, got " +
                           std::to_string(gaps.count()));
  const double base = static_cast<double>(T) / K;
  const double d2 = gaps.gap(2);
  double mean_term = 0.0, cvar_term = 0.0;
  if (obj.xi1 > 0.0)
    mean_term = 2.0 * K *
                std::exp(-std::pow(base, 1.0 - q_m) * d2 / (16.0 * obj.xi1));
  if (obj.xi2 > 0.0) {
    const double beta = obj.alpha.beta();
    cvar_term = 6.0 * K *
                std::exp(-std::pow(base, 1.0 - 2.0 * q_c) * beta * d2 * d2 /
                         (768.0 * obj.xi2 * obj.xi2));
  }
  const double nstar = detail::n_star_log10(obj, d2, q_m, q_c, ma);
  const Threshold thr = Threshold::from_log10(std::log10(static_cast<double>(K)) + nstar);
  const double bound = mean_term + cvar_term;
  return GsrErrorBound{mean_term, cvar_term,        bound,
                       1.0 - q_m, 1.0 - 2.0 * q_c,  bound > 1.0,
                       thr,       thr.exceeded_by(static_cast<double>(T))};
}

// 1/2 + sum_{i=2}^{K} 1/i, the successive-rejects schedule normalizer.
// (Also exposed by the bandit module; defined here so the bound evaluators
// do not depend on the simulation engine.)
inline double log_bar(int K) {
  if (K < 2) throw std::invalid_argument("K must be at least 2");
  double s = 0.5;
  for (int i = 2; i <= K; ++i) s += 1.0 / i;
  return s;
}

// Error bound for successive rejects with K arms and budget T.
inline GsrErrorBound sr_error_bound(std::int64_t T, int K, const GapProfile& gaps,
                                    const RiskObjective& obj, double q_m, double q_c,
                                    const MomentAssumption& ma) {
  if (K < 2) throw std::invalid_argument("K must be at least 2");
  if (T <= K) throw std::invalid_argument("T must exceed K");
  if (gaps.count() != K - 1)
    throw GapCountMismatch("expected " + std::to_string(K - 1) + " gaps, got " +
                           std::to_string(gaps.count()));
  const double S = static_cast<double>(T - K) / log_bar(K);
  const double beta = obj.alpha.beta();
  double mean_term = 0.0, cvar_term = 0.0;
  for (int i = 2; i <= K; ++i) {
    const double mult = static_cast<double>(K + 1 - i);
    const double di = gaps.gap(i);
    if (obj.xi1 > 0.0)
      mean_term += mult * 2.0 *
                   std::exp(-(1.0 / (16.0 * obj.xi1)) * std::pow(S, 1.0 - q_m) * di /
                            std::pow(static_cast<double>(i), 1.0 - q_m));
    if (obj.xi2 > 0.0)
      cvar_term += mult * 6.0 *
                   std::exp(-(beta / (768.0 * obj.xi2 * obj.xi2)) *
                            std::pow(S, 1.0 - 2.0 * q_c) * di * di /
                            std::pow(static_cast<double>(i), 1.0 - 2.0 * q_c));
  }
  const double nstar = detail::n_star_log10(obj, gaps.gap(2), q_m, q_c, ma);
  // Threshold K + K logbar(K) n*, assembled in log space.
  const double main_log10 =
      std::log10(static_cast<double>(K) * log_bar(K)) + nstar;
  const Threshold thr = Threshold::from_log10(
      detail::log10_add(std::log10(static_cast<double>(K)), main_log10));
  const double bound = mean_term + cvar_term;
  return GsrErrorBound{mean_term, cvar_term,        bound,
                       1.0 - q_m, 1.0 - 2.0 * q_c,  bound > 1.0,
                       thr,       thr.exceeded_by(static_cast<double>(T))};
}

// Static truncation levels for a known moment assumption; the level for a
// zero-weight metric is absent (unused).
struct NonObliviousSettings {
  std::optional<double> b_mean;
  std::optional<double> b_cvar;
};

inline NonObliviousSettings nonoblivious_settings(const RiskObjective& obj,
                                                  const GapProfile& gaps,
                                                  const MomentAssumption& ma) {
  const double d2 = gaps.gap(2);
  NonObliviousSettings out;
  if (obj.xi1 > 0.0)
    out.b_mean = std::pow(12.0 * ma.B * obj.xi1 / d2, 1.0 / std::min(1.0, ma.p - 1.0));
  if (obj.xi2 > 0.0) {
    const double beta = obj.alpha.beta();
    out.b_cvar = std::max(
        std::pow(8.0 * obj.xi2 * ma.B / (beta * d2), 1.0 / (ma.p - 1.0)),
        std::pow(ma.B / std::min(obj.alpha.alpha(), beta), 1.0 / ma.p));
  }
  return out;
}

// Deviation bounds at static levels: mean 2 exp(-n Delta/(4 b)).
inline double nonoblivious_mean_dev_bound(std::int64_t n, double delta, double b) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(delta > 0.0) || !(b > 0.0))
    throw std::invalid_argument("delta and b must be positive");
  return 2.0 * std::exp(-static_cast<double>(n) * delta / (4.0 * b));
}

// CVaR counterpart: 6 exp(-n beta Delta^2/(48 b^2)).
inline double nonoblivious_cvar_dev_bound(std::int64_t n, double delta,
                                          ConfidenceLevel conf, double b) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(delta > 0.0) || !(b > 0.0))
    throw std::invalid_argument("delta and b must be positive");
  return 6.0 * std::exp(-static_cast<double>(n) * conf.beta() * delta * delta /
                        (48.0 * b * b));
}

}  // namespace riskbandit
