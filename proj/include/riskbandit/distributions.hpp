#pragma once
/*
 * Parametric loss models with deterministic inverse-CDF sampling and analytic
 * mean / VaR / CVaR / absolute-moment oracles.
 *
 * Supported variants and closed forms (beta = 1-alpha, v = VaR_alpha):
 *
 *   Pareto(a, x_m):   F(x) = 1-(x_m/x)^a on [x_m,inf);  quantile x_m(1-u)^{-1/a}
 *                     mean a*x_m/(a-1) for a>1;  v = x_m*beta^{-1/a};
 *                     CVaR = v*a/(a-1);  E|X|^p = a*x_m^p/(a-p) for p<a, else inf
 *   Exponential(m):   quantile -m*ln(1-u);  mean m;  v = -m*ln(beta);
 *                     CVaR = m*(1-ln(beta));  E X^p = m^p * Gamma(p+1)
 *   Gaussian(mu,sd):  quantile mu+sd*z_u (AS 241);  v = mu+sd*z_alpha;
 *                     CVaR = mu+sd*phi(z_alpha)/beta;
 *                     E|X|^p closed form for mu=0, quadrature otherwise
 *   Uniform(lo,hi):   quantile lo+u*(hi-lo);  v = lo+alpha*(hi-lo);
 *                     CVaR = (v+hi)/2;  E|X|^p by signed antiderivative
 *   Constant(c):      degenerate; samples equal c; not C1, so the quantile
 *                     oracles VaR/CVaR reject it
 *
 * Sampling consumes exactly one uniform draw per sample for every variant, so
 * streams are prefix-stable and scale-equivariant (same uniforms => scaled
 * samples under scaled parameters).
 */
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "normal.hpp"
#include "quadrature.hpp"
#include "risk.hpp"
#include "rng.hpp"

namespace riskbandit {

struct Pareto {
  double shape;  // tail index a > 0
  double scale;  // support lower end x_m > 0
  Pareto(double a, double xm) : shape(a), scale(xm) {
    if (!(a > 0.0)) throw std::invalid_argument("pareto shape must be positive");
    if (!(xm > 0.0)) throw std::invalid_argument("pareto scale must be positive");
  }
  friend bool operator==(const Pareto&, const Pareto&) = default;
};

struct Exponential {
  double mean;
  explicit Exponential(double m) : mean(m) {
    if (!(m > 0.0)) throw std::invalid_argument("exponential mean must be positive");
  }
  friend bool operator==(const Exponential&, const Exponential&) = default;
};

struct Gaussian {
  double mean;
  double stddev;
  Gaussian(double mu, double sd) : mean(mu), stddev(sd) {
    if (!std::isfinite(mu)) throw std::invalid_argument("gaussian mean must be finite");
    if (!(sd > 0.0)) throw std::invalid_argument("gaussian stddev must be positive");
  }
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct Uniform {
  double lo;
  double hi;
  Uniform(double l, double h) : lo(l), hi(h) {
    if (!(l < h)) throw std::invalid_argument("uniform requires lo < hi");
    if (!std::isfinite(l) || !std::isfinite(h))
      throw std::invalid_argument("uniform bounds must be finite");
  }
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Constant {
  double value;
  explicit Constant(double c) : value(c) {
    if (!std::isfinite(c)) throw std::invalid_argument("constant value must be finite");
  }
  friend bool operator==(const Constant&, const Constant&) = default;
};

using ArmDistribution = std::variant<Pareto, Exponential, Gaussian, Uniform, Constant>;

// Continuous with a strictly increasing CDF on its support; everything except
// the degenerate Constant.
inline bool is_c1(const ArmDistribution& d) {
  return !std::holds_alternative<Constant>(d);
}

// Quantile F^{-1}(u) for u in (0,1).
inline double quantile(const ArmDistribution& d, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("quantile argument must lie in (0,1)");
  struct V {
    double u;
    double operator()(const Pareto& p) const {
      return p.scale * std::pow(1.0 - u, -1.0 / p.shape);
    }
    double operator()(const Exponential& e) const { return -e.mean * std::log1p(-u); }
    double operator()(const Gaussian& g) const {
      return g.mean + g.stddev * normal_quantile(u);
    }
    double operator()(const Uniform& un) const { return un.lo + u * (un.hi - un.lo); }
    double operator()(const Constant& c) const { return c.value; }
  };
  return std::visit(V{u}, d);
}

// CDF F(x) (right-continuous; the Constant variant is a unit step).
inline double cdf(const ArmDistribution& d, double x) {
  struct V {
    double x;
    double operator()(const Pareto& p) const {
      return x < p.scale ? 0.0 : 1.0 - std::pow(p.scale / x, p.shape);
    }
    double operator()(const Exponential& e) const {
      return x < 0.0 ? 0.0 : 1.0 - std::exp(-x / e.mean);
    }
    double operator()(const Gaussian& g) const {
      return normal_cdf((x - g.mean) / g.stddev);
    }
    double operator()(const Uniform& u) const {
      if (x <= u.lo) return 0.0;
      if (x >= u.hi) return 1.0;
      return (x - u.lo) / (u.hi - u.lo);
    }
    double operator()(const Constant& c) const { return x >= c.value ? 1.0 : 0.0; }
  };
  return std::visit(V{x}, d);
}

// Draw into an existing buffer from an explicit stream (engine hot path).
inline void sample_into(const ArmDistribution& d, Stream& stream,
                        std::span<double> out) {
  for (double& x : out) x = quantile(d, stream.next_unit());
}

// n i.i.d. draws; deterministic in (dist, seed, n) and prefix-stable.
inline std::vector<double> sample(const ArmDistribution& d, Seed seed, std::size_t n) {
  std::vector<double> out(n);
  Stream s = seed.stream();
  sample_into(d, s, out);
  return out;
}

inline double analytic_mean(const ArmDistribution& d) {
  struct V {
    double operator()(const Pareto& p) const {
      if (!(p.shape > 1.0))
        throw MeanUndefined("pareto mean diverges for shape <= 1 (shape = " +
                            std::to_string(p.shape) + ")");
      return p.shape * p.scale / (p.shape - 1.0);
    }
    double operator()(const Exponential& e) const { return e.mean; }
    double operator()(const Gaussian& g) const { return g.mean; }
    double operator()(const Uniform& u) const { return 0.5 * (u.lo + u.hi); }
    double operator()(const Constant& c) const { return c.value; }
  };
  return std::visit(V{}, d);
}

// alpha-quantile of the loss; rejects the non-C1 Constant variant.
inline double analytic_var(const ArmDistribution& d, ConfidenceLevel conf) {
  if (!is_c1(d))
    throw NotC1("VaR oracle requires a continuous strictly increasing CDF");
  return quantile(d, conf.alpha());
}

// Expected loss beyond the alpha-quantile; rejects Constant, and Pareto with
// shape <= 1 (tail mean diverges).
inline double analytic_cvar(const ArmDistribution& d, ConfidenceLevel conf) {
  if (!is_c1(d))
    throw NotC1("CVaR oracle requires a continuous strictly increasing CDF");
  const double beta = conf.beta();
  struct V {
    double alpha, beta;
    double operator()(const Pareto& p) const {
      if (!(p.shape > 1.0))
        throw MeanUndefined("pareto CVaR diverges for shape <= 1 (shape = " +
                            std::to_string(p.shape) + ")");
      const double v = p.scale * std::pow(beta, -1.0 / p.shape);
      return v * p.shape / (p.shape - 1.0);
    }
    double operator()(const Exponential& e) const {
      return e.mean * (1.0 - std::log(beta));
    }
    double operator()(const Gaussian& g) const {
      const double z = normal_quantile(alpha);
      return g.mean + g.stddev * normal_pdf(z) / beta;
    }
    double operator()(const Uniform& u) const {
      const double v = u.lo + alpha * (u.hi - u.lo);
      return 0.5 * (v + u.hi);
    }
    double operator()(const Constant&) const { return 0.0; }  // unreachable
  };
  return std::visit(V{conf.alpha(), beta}, d);
}

// E|X|^p: closed form where available, adaptive quadrature otherwise
// (Gaussian with nonzero mean); +infinity for Pareto with p >= shape.
inline double moment_bound(const ArmDistribution& d, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("moment order p must exceed 1");
  struct V {
    double p;
    double operator()(const Pareto& pa) const {
      if (p >= pa.shape) return std::numeric_limits<double>::infinity();
      return pa.shape * std::pow(pa.scale, p) / (pa.shape - p);
    }
    double operator()(const Exponential& e) const {
      return std::pow(e.mean, p) * std::tgamma(p + 1.0);
    }
    double operator()(const Gaussian& g) const {
      if (g.mean == 0.0) {
        // E|X|^p = sd^p * 2^{p/2} * Gamma((p+1)/2) / sqrt(pi)
        constexpr double sqrt_pi = 1.77245385090551602729816748334;
        return std::pow(g.stddev, p) * std::pow(2.0, 0.5 * p) *
               std::tgamma(0.5 * (p + 1.0)) / sqrt_pi;
      }
      // E|X|^p = int_0^inf x^p [phi((x-mu)/sd) + phi((x+mu)/sd)] / sd dx;
      // the only kink of |x|^p sits at the endpoint 0.
      const double mu = g.mean, sd = g.stddev, pp = p;
      return integrate_to_inf(
          [mu, sd, pp](double x) {
            return std::pow(x, pp) *
                   (normal_pdf((x - mu) / sd) + normal_pdf((x + mu) / sd)) / sd;
          },
          0.0);
    }
    double operator()(const Uniform& u) const {
      // Antiderivative of |x|^p is sign(x)*|x|^{p+1}/(p+1).
      auto anti = [this](double x) {
        return std::copysign(std::pow(std::abs(x), p + 1.0), x) / (p + 1.0);
      };
      return (anti(u.hi) - anti(u.lo)) / (u.hi - u.lo);
    }
    double operator()(const Constant& c) const { return std::pow(std::abs(c.value), p); }
  };
  return std::visit(V{p}, d);
}

namespace detail {

// Distribution literal grammar: name(key=value,key=value); case-insensitive,
// whitespace ignored everywhere.
inline ArmDistribution parse_distribution_impl(std::string_view text) {
  std::string t;
  t.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const auto fail = [&](const std::string& why) {
    throw std::invalid_argument("bad distribution literal '" + std::string(text) +
                                "': " + why);
  };
  const std::size_t open = t.find('(');
  if (open == std::string::npos || t.empty() || t.back() != ')')
    fail("expected name(key=value,...)");
  const std::string name = t.substr(0, open);
  const std::string body = t.substr(open + 1, t.size() - open - 2);

  std::vector<std::pair<std::string, double>> kv;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) fail("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
    if (ec != std::errc() || ptr != val.data() + val.size())
      fail("'" + val + "' is not a number");
    kv.emplace_back(key, x);
    pos = comma + 1;
  }
  const auto get = [&](const char* key) -> double {
    for (const auto& [k, v] : kv)
      if (k == key) return v;
    fail("missing parameter '" + std::string(key) + "'");
    return 0.0;  // unreachable
  };
  const auto expect_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : kv) {
      (void)v;
      bool known = false;
      for (const char* key : keys) known = known || (k == key);
      if (!known) fail("unknown parameter '" + k + "'");
    }
    if (kv.size() != keys.size()) fail("wrong parameter count");
  };
  if (name == "pareto") {
    expect_keys({"shape", "scale"});
    return Pareto(get("shape"), get("scale"));
  }
  if (name == "exp") {
    expect_keys({"mean"});
    return Exponential(get("mean"));
  }
  if (name == "gauss") {
    expect_keys({"mean", "std"});
    return Gaussian(get("mean"), get("std"));
  }
  if (name == "uniform") {
    expect_keys({"lo", "hi"});
    return Uniform(get("lo"), get("hi"));
  }
  if (name == "const") {
    expect_keys({"c"});
    return Constant(get("c"));
  }
  fail("unknown distribution '" + name + "'");
  throw std::logic_error("unreachable");
}

}  // namespace detail

inline ArmDistribution parse_distribution(std::string_view text) {
  return detail::parse_distribution_impl(text);
}

// Canonical literal; parse(format(d)) reproduces d exactly (%.17g round-trip).
inline std::string format_distribution(const ArmDistribution& d) {
  char buf[128];
  struct V {
    char* buf;
    std::size_t n;
    void operator()(const Pareto& p) const {
      std::snprintf(buf, n, "pareto(shape=%.17g,scale=%.17g)", p.shape, p.scale);
    }
    void operator()(const Exponential& e) const {
      std::snprintf(buf, n, "exp(mean=%.17g)", e.mean);
    }
    void operator()(const Gaussian& g) const {
      std::snprintf(buf, n, "gauss(mean=%.17g,std=%.17g)", g.mean, g.stddev);
    }
    void operator()(const Uniform& u) const {
      std::snprintf(buf, n, "uniform(lo=%.17g,hi=%.17g)", u.lo, u.hi);
    }
    void operator()(const Constant& c) const {
      std::snprintf(buf, n, "const(c=%.17g)", c.value);
    }
  };
  std::visit(V{buf, sizeof buf}, d);
  return buf;
}

}  // namespace riskbandit
