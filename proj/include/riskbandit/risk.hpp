#pragma once
/*
 * Risk estimators for loss samples X_1..X_n (losses are minimized; large
 * values are bad). With beta = 1-alpha and X_[1] >= X_[2] >= ... the
 * descending order statistics:
 *
 *   empirical VaR    v^ = X_[floor(n*beta)]
 *   empirical CVaR   c^ = (1/(n*beta)) * sum_{i=1}^{floor(n*beta)} X_[i]
 *
 * The CVaR estimator is defined through exactly the top floor(n*beta) order
 * statistics. For distinct samples this coincides with the indicator form
 * sum X_i 1{X_i >= v^} / (n*beta); under ties (clamping creates atoms at
 * +-b) the order-statistic form stays well defined and keeps the
 * order-statistic sandwich property.
 *
 * Two truncation estimators with truncation level b > 0:
 *   clamped CVaR    c^ applied to min(max(-b, x), b)   (projection onto [-b,b])
 *   dropped mean    mu+ = (1/n) * sum x_i 1{|x_i| <= b}  (out-of-range zeroed)
 *
 * The combined objective estimate is xi1*mu+ + xi2*c^ with each truncation
 * level resolved from its schedule at the current sample count n.
 */
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace riskbandit {

// Confidence level alpha in (0,1) with its tail mass beta = 1-alpha.
class ConfidenceLevel {
 public:
  explicit ConfidenceLevel(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("confidence level alpha must lie in (0,1), got " +
                                  std::to_string(alpha));
  }
  double alpha() const { return alpha_; }
  double beta() const { return 1.0 - alpha_; }

  friend bool operator==(ConfidenceLevel a, ConfidenceLevel b) {
    return a.alpha_ == b.alpha_;
  }

 private:
  double alpha_;
};

// Truncation level as a function of the sample count: none, a fixed level b,
// or the oblivious growth rule b(n) = n^q. Growth exponents must satisfy
// q in (0,1); use with the CVaR estimator additionally requires q < 1/2
// (checked at the point of use via valid_for_cvar()).
class TruncationSchedule {
 public:
  enum class Kind { none, fixed, grow };

  static TruncationSchedule none() { return TruncationSchedule(Kind::none, 0.0); }
  static TruncationSchedule fixed(double b) {
    if (!(b > 0.0))
      throw std::invalid_argument("fixed truncation level must be positive, got " +
                                  std::to_string(b));
    return TruncationSchedule(Kind::fixed, b);
  }
  static TruncationSchedule grow(double q) {
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("growth exponent q must lie in (0,1), got " +
                                  std::to_string(q));
    return TruncationSchedule(Kind::grow, q);
  }

  Kind kind() const { return kind_; }
  // Fixed level, or growth exponent, depending on kind.
  double parameter() const { return param_; }
  bool valid_for_cvar() const { return kind_ != Kind::grow || param_ < 0.5; }

  // Truncation level at sample count n; +infinity when untruncated.
  double level(std::size_t n) const {
    switch (kind_) {
      case Kind::none: return std::numeric_limits<double>::infinity();
      case Kind::fixed: return param_;
      case Kind::grow: return std::pow(static_cast<double>(n), param_);
    }
    return std::numeric_limits<double>::infinity();
  }

  // Text form used by CLI flags and config files: none | fixed:<b> | grow:<q>.
  static TruncationSchedule parse(std::string_view text);
  std::string format() const;

  friend bool operator==(const TruncationSchedule& a, const TruncationSchedule& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_;
  }

 private:
  TruncationSchedule(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

// Goodness metric xi1*E[X] + xi2*c_alpha(X); (1,0) is mean minimization,
// (0,1) is CVaR minimization.
struct RiskObjective {
  double xi1;
  double xi2;
  ConfidenceLevel alpha;

  RiskObjective(double x1, double x2, ConfidenceLevel a) : xi1(x1), xi2(x2), alpha(a) {
    if (!(x1 >= 0.0) || !(x2 >= 0.0))
      throw std::invalid_argument("objective weights must be nonnegative");
    if (!(x1 + x2 > 0.0))
      throw std::invalid_argument("objective weights must not both be zero");
  }

  friend bool operator==(const RiskObjective& a, const RiskObjective& b) {
    return a.xi1 == b.xi1 && a.xi2 == b.xi2 && a.alpha == b.alpha;
  }
};

// floor(n*beta), the number of tail samples the CVaR estimator averages.
// The 1e-9 guard absorbs binary-representation noise in n*beta (e.g.
// 10*(1-0.8) evaluates to 1.9999999999999996) so decimal levels behave as
// written; genuinely fractional products sit far above the guard.
inline std::size_t tail_count(std::size_t n, ConfidenceLevel conf) {
  const double nb = static_cast<double>(n) * conf.beta();
  const double k = std::floor(nb + 1e-9);
  return k <= 0.0 ? 0 : static_cast<std::size_t>(k);
}

namespace detail {

// CVaR of the empirical distribution over the values already in scratch:
// (X_[1] + ... + X_[k] + (n*beta - k) * X_[k+1]) / (n*beta) with k = tail
// count. The fractional weight on the (k+1)-th order statistic vanishes when
// n*beta is integral (the guard treats binary noise below 1e-9 as integral);
// it is what makes the order-statistic sandwich f(ceil(nb)) <= cvar <=
// f(floor(nb)) and translation equivariance hold for non-integral n*beta.
// Scratch is partially sorted so the first k elements are the top k in
// descending order; the summation order matches a fully sorted
// implementation (tests rely on this).
inline double cvar_of_scratch(std::vector<double>& scratch, double nb,
                              std::size_t k) {
  const bool boundary =
      k < scratch.size() && nb - static_cast<double>(k) > 1e-9;
  const std::size_t m = boundary ? k + 1 : k;
  if (m < scratch.size())
    std::nth_element(scratch.begin(), scratch.begin() + (m - 1), scratch.end(),
                     std::greater<double>());
  std::sort(scratch.begin(), scratch.begin() + m, std::greater<double>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += scratch[i];
  if (boundary) s += (nb - static_cast<double>(k)) * scratch[k];
  return s / nb;
}

inline std::size_t checked_tail_count(std::size_t n, ConfidenceLevel conf,
                                      const char* who) {
  if (n == 0) throw InsufficientSamples(std::string(who) + ": empty sample set");
  const std::size_t k = tail_count(n, conf);
  if (k == 0)
    throw InsufficientSamples(std::string(who) + ": floor(n*beta) = 0 with n = " +
                              std::to_string(n) + ", alpha = " +
                              std::to_string(conf.alpha()) +
                              "; need n >= 1/(1-alpha)");
  return k;
}

inline double empirical_cvar_scratch(std::span<const double> xs, ConfidenceLevel conf,
                                     std::vector<double>& scratch) {
  const std::size_t k = checked_tail_count(xs.size(), conf, "empirical_cvar");
  const double nb = static_cast<double>(xs.size()) * conf.beta();
  scratch.assign(xs.begin(), xs.end());
  return cvar_of_scratch(scratch, nb, k);
}

inline double truncated_cvar_scratch(std::span<const double> xs, ConfidenceLevel conf,
                                     double b, std::vector<double>& scratch) {
  if (!(b > 0.0)) throw std::invalid_argument("truncation level b must be positive");
  const std::size_t k = checked_tail_count(xs.size(), conf, "truncated_cvar");
  const double nb = static_cast<double>(xs.size()) * conf.beta();
  scratch.clear();
  scratch.reserve(xs.size());
  for (double x : xs) scratch.push_back(std::min(std::max(-b, x), b));
  return cvar_of_scratch(scratch, nb, k);
}

}  // namespace detail

// The floor(n*beta)-th largest sample.
inline double empirical_var(std::span<const double> xs, ConfidenceLevel conf) {
  const std::size_t k = detail::checked_tail_count(xs.size(), conf, "empirical_var");
  std::vector<double> scratch(xs.begin(), xs.end());
  std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end(),
                   std::greater<double>());
  return scratch[k - 1];
}

// CVaR of the empirical distribution: the top floor(n*beta) order statistics
// plus a fractional (n*beta - floor) share of the next one, scaled by
// 1/(n*beta). Reduces to the plain top-k average whenever n*beta is integral.
inline double empirical_cvar(std::span<const double> xs, ConfidenceLevel conf) {
  std::vector<double> scratch;
  return detail::empirical_cvar_scratch(xs, conf, scratch);
}

// Projection of x onto [-b, b].
inline double truncate_clamp(double x, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("truncation level b must be positive");
  return std::min(std::max(-b, x), b);
}

inline std::vector<double> truncate_clamp(std::span<const double> xs, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("truncation level b must be positive");
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(std::min(std::max(-b, x), b));
  return out;
}

// Empirical CVaR of the clamp-truncated samples.
inline double truncated_cvar(std::span<const double> xs, ConfidenceLevel conf,
                             double b) {
  std::vector<double> scratch;
  return detail::truncated_cvar_scratch(xs, conf, b, scratch);
}

// Mean with samples of magnitude above b contributing zero (dropped, not
// clamped).
inline double truncated_mean(std::span<const double> xs, double b) {
  if (xs.empty()) throw std::invalid_argument("truncated_mean: empty sample set");
  if (!(b > 0.0)) throw std::invalid_argument("truncation level b must be positive");
  double s = 0.0;
  for (double x : xs)
    if (std::abs(x) <= b) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("sample_mean: empty sample set");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

namespace detail {

// Objective estimate with caller-provided scratch (hot loop of the bandit
// engine). Truncation levels are resolved at n = xs.size().
inline double objective_estimate_scratch(std::span<const double> xs,
                                         const RiskObjective& obj,
                                         const TruncationSchedule& mean_schedule,
                                         const TruncationSchedule& cvar_schedule,
                                         std::vector<double>& scratch) {
  if (!cvar_schedule.valid_for_cvar())
    throw std::invalid_argument(
        "CVaR truncation growth exponent must lie in (0,1/2), got " +
        std::to_string(cvar_schedule.parameter()));
  const std::size_t n = xs.size();
  double v = 0.0;
  if (obj.xi1 > 0.0) {
    const double bm = mean_schedule.level(n);
    v += obj.xi1 * (std::isinf(bm) ? sample_mean(xs) : truncated_mean(xs, bm));
  }
  if (obj.xi2 > 0.0) {
    const double bc = cvar_schedule.level(n);
    v += obj.xi2 * (std::isinf(bc)
                        ? empirical_cvar_scratch(xs, obj.alpha, scratch)
                        : truncated_cvar_scratch(xs, obj.alpha, bc, scratch));
  }
  return v;
}

}  // namespace detail

// xi1 * truncated_mean(xs, b_m(n)) + xi2 * truncated_cvar(xs, alpha, b_c(n)),
// with schedule none meaning no truncation for that term. Terms with zero
// weight are skipped entirely (a pure-mean objective never triggers the CVaR
// sample-size precondition).
inline double objective_estimate(std::span<const double> xs, const RiskObjective& obj,
                                 const TruncationSchedule& mean_schedule,
                                 const TruncationSchedule& cvar_schedule) {
  std::vector<double> scratch;
  return detail::objective_estimate_scratch(xs, obj, mean_schedule, cvar_schedule,
                                            scratch);
}

inline TruncationSchedule TruncationSchedule::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "none") return none();
  auto parse_tail = [&](std::size_t prefix_len, const char* what) {
    const std::string num = t.substr(prefix_len);
    try {
      std::size_t used = 0;
      const double v = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad " + std::string(what) +
                                  " in truncation spec '" + std::string(text) + "'");
    }
  };
  if (t.rfind("fixed:", 0) == 0) return fixed(parse_tail(6, "level"));
  if (t.rfind("grow:", 0) == 0) return grow(parse_tail(5, "exponent"));
  throw std::invalid_argument("truncation spec must be none, fixed:<b> or grow:<q>, got '" +
                              std::string(text) + "'");
}

inline std::string TruncationSchedule::format() const {
  char buf[64];
  switch (kind_) {
    case Kind::none: return "none";
    case Kind::fixed:
      std::snprintf(buf, sizeof buf, "fixed:%.17g", param_);
      return buf;
    case Kind::grow:
      std::snprintf(buf, sizeof buf, "grow:%.17g", param_);
      return buf;
  }
  return "none";
}

}  // namespace riskbandit
