#pragma once
/*
 * Failure modes surfaced by the library. Each condition gets its own type so
 * callers can catch precisely; all derive from std::invalid_argument or
 * std::domain_error and carry a human-readable message.
 */
#include <stdexcept>
#include <string>

namespace riskbandit {

// Estimator needs floor(n*beta) >= 1 tail samples and got none.
struct InsufficientSamples : std::invalid_argument {
  explicit InsufficientSamples(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested the mean (or a tail mean) of a distribution whose mean diverges.
struct MeanUndefined : std::domain_error {
  explicit MeanUndefined(const std::string& msg) : std::domain_error(msg) {}
};

// Quantile-based oracle applied to a distribution without a continuous,
// strictly increasing CDF.
struct NotC1 : std::domain_error {
  explicit NotC1(const std::string& msg) : std::domain_error(msg) {}
};

// Bandit instance whose minimum analytic objective is attained by two arms.
struct NonUniqueOptimum : std::invalid_argument {
  explicit NonUniqueOptimum(const std::string& msg) : std::invalid_argument(msg) {}
};

// Phase schedule cannot fit the sampling budget T.
struct BudgetTooSmall : std::invalid_argument {
  explicit BudgetTooSmall(const std::string& msg) : std::invalid_argument(msg) {}
};

// Phase-1 sample count too small for the CVaR estimator at the requested
// confidence level.
struct InsufficientPhaseBudget : std::invalid_argument {
  explicit InsufficientPhaseBudget(const std::string& msg) : std::invalid_argument(msg) {}
};

// Gap profile length does not match the arm count (K-1 gaps expected).
struct GapCountMismatch : std::invalid_argument {
  explicit GapCountMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace riskbandit
