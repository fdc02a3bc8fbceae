#pragma once
/*
 * Generalized successive rejects (GSR): K-1 elimination phases over K arms.
 * A phase schedule fixes cumulative per-arm pull targets n_1 <= ... <= n_{K-1};
 * in phase k every surviving arm is brought up to n_k samples (samples
 * accumulate across phases), each arm's objective xi1*mu+ + xi2*c^ is
 * re-estimated from all n_k of its samples with truncation levels resolved at
 * b(n_k), and the arm with the WORST (largest) estimate is rejected. The last
 * survivor is returned. Ties in the rejection argmax break toward the
 * smallest arm index, deterministically.
 *
 * Two stock schedules:
 *   uniform exploration   n_k = floor(T/K) for all k
 *   successive rejects    n_k = ceil((T-K) / (logbar(K) * (K+1-k)))
 * Both satisfy the budget constraint sum_{i<=K-2} n_i + 2 n_{K-1} <= T;
 * for SR this holds by construction (the real-valued schedule sums to T-K
 * exactly and the K-1 ceilings add less than K), but it is verified, and a
 * decrement repair of the top phases runs as insurance against rounding.
 *
 * Sampling is deterministic: arm j draws from the sub-stream seed.with(l_j),
 * where the labels l_j default to the arm positions 0..K-1. Draws append to
 * the arm's sample vector, so a run consumes each arm stream's prefix and two
 * runs with the same seed see identical samples regardless of schedule.
 */
#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bounds.hpp"
#include "distributions.hpp"
#include "errors.hpp"
#include "risk.hpp"
#include "rng.hpp"

namespace riskbandit {

// Cumulative per-arm pull targets for K-1 phases, tied to the budget they
// were built for. counts[k-1] = n_k; nonnegative and nondecreasing;
// sum_{i=1}^{K-2} n_i + 2 n_{K-1} <= T.
class PhaseSchedule {
 public:
  static PhaseSchedule make(int K, std::int64_t T, std::vector<std::int64_t> counts) {
    if (K < 2) throw std::invalid_argument("schedule needs K >= 2 arms");
    if (counts.size() != static_cast<std::size_t>(K - 1))
      throw std::invalid_argument("schedule needs exactly K-1 phase counts");
    std::int64_t prev = 0;
    for (std::int64_t n : counts) {
      if (n < 0) throw std::invalid_argument("phase counts must be nonnegative");
      if (n < prev) throw std::invalid_argument("phase counts must be nondecreasing");
      prev = n;
    }
    PhaseSchedule s;
    s.K_ = K;
    s.budget_ = T;
    s.counts_ = std::move(counts);
    if (s.total_pulls() > T)
      throw BudgetTooSmall("schedule uses " + std::to_string(s.total_pulls()) +
                           " pulls, budget is " + std::to_string(T));
    return s;
  }

  int K() const { return K_; }
  std::int64_t budget() const { return budget_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  // sum over phases of (arms still active) * (new pulls per active arm);
  // equals sum_{i<=K-2} n_i + 2 n_{K-1}.
  std::int64_t total_pulls() const {
    std::int64_t total = 0, prev = 0;
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      total += static_cast<std::int64_t>(K_ - k) * (counts_[k] - prev);
      prev = counts_[k];
    }
    return total;
  }

 private:
  PhaseSchedule() = default;
  int K_ = 0;
  std::int64_t budget_ = 0;
  std::vector<std::int64_t> counts_;
};

// Uniform exploration: every phase target is floor(T/K).
inline PhaseSchedule ue_schedule(int K, std::int64_t T) {
  if (K < 2) throw std::invalid_argument("schedule needs K >= 2 arms");
  const std::int64_t n = T / K;
  if (n < 1)
    throw BudgetTooSmall("uniform exploration needs T >= K (T = " +
                         std::to_string(T) + ", K = " + std::to_string(K) + ")");
  return PhaseSchedule::make(
      K, T, std::vector<std::int64_t>(static_cast<std::size_t>(K - 1), n));
}

// Successive rejects: n_k = ceil((T-K) / (logbar(K) * (K+1-k))).
inline PhaseSchedule sr_schedule(int K, std::int64_t T) {
  if (K < 2) throw std::invalid_argument("schedule needs K >= 2 arms");
  if (T <= K)
    throw BudgetTooSmall("successive rejects needs T > K (T = " +
                         std::to_string(T) + ", K = " + std::to_string(K) + ")");
  const double lb = log_bar(K);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(K - 1));
  for (int k = 1; k <= K - 1; ++k) {
    const double raw = static_cast<double>(T - K) / (lb * (K + 1 - k));
    // The 1e-9 slack keeps ceil from bumping values that are integers up to
    // binary representation noise.
    counts[static_cast<std::size_t>(k - 1)] =
        static_cast<std::int64_t>(std::ceil(raw - 1e-9));
  }
  // Budget repair (never triggered in exact arithmetic; see header comment):
  // walk the phases from last to first, shaving pulls while infeasible.
  auto used = [&]() {
    std::int64_t total = 0, prev = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      total += static_cast<std::int64_t>(K - k) * (counts[k] - prev);
      prev = counts[k];
    }
    return total;
  };
  for (std::size_t k = counts.size(); k-- > 0 && used() > T;) {
    const std::int64_t floor_k = k > 0 ? counts[k - 1] : 1;
    while (used() > T && counts[k] > floor_k) --counts[k];
  }
  if (used() > T)
    throw BudgetTooSmall("successive rejects schedule cannot fit budget T = " +
                         std::to_string(T) + " with K = " + std::to_string(K));
  return PhaseSchedule::make(K, T, std::move(counts));
}

namespace detail {

// Objective value of one arm under the analytic oracles. The degenerate
// Constant variant is scored as its point value for BOTH metrics (the tail
// average of a point mass is the point); the public analytic_cvar keeps
// rejecting it as non-C1 -- this limit semantics exists only so instances
// with deterministic arms can be classified.
inline double analytic_objective(const ArmDistribution& d, const RiskObjective& obj) {
  if (const Constant* c = std::get_if<Constant>(&d))
    return (obj.xi1 + obj.xi2) * c->value;
  double v = 0.0;
  if (obj.xi1 > 0.0) v += obj.xi1 * analytic_mean(d);
  if (obj.xi2 > 0.0) v += obj.xi2 * analytic_cvar(d, obj.alpha);
  return v;
}

}  // namespace detail

// K >= 2 arms plus the objective they are scored under; the optimal arm and
// the analytic objective values are fixed at construction. Instances whose
// minimum objective is attained twice are rejected (the identification
// problem is ill-posed without a unique optimum).
class BanditInstance {
 public:
  BanditInstance(std::vector<ArmDistribution> arms, RiskObjective objective)
      : arms_(std::move(arms)), objective_(objective) {
    if (arms_.size() < 2)
      throw std::invalid_argument("instance needs at least 2 arms");
    values_.reserve(arms_.size());
    for (const ArmDistribution& a : arms_)
      values_.push_back(detail::analytic_objective(a, objective_));
    optimal_ = 0;
    for (std::size_t i = 1; i < values_.size(); ++i)
      if (values_[i] < values_[static_cast<std::size_t>(optimal_)])
        optimal_ = static_cast<int>(i);
    int hits = 0;
    for (double v : values_)
      if (v == values_[static_cast<std::size_t>(optimal_)]) ++hits;
    if (hits != 1)
      throw NonUniqueOptimum("minimum objective " +
                             std::to_string(values_[static_cast<std::size_t>(optimal_)]) +
                             " is attained by " + std::to_string(hits) + " arms");
  }

  int K() const { return static_cast<int>(arms_.size()); }
  const std::vector<ArmDistribution>& arms() const { return arms_; }
  const RiskObjective& objective() const { return objective_; }
  // Analytic objective value per arm, in arm order.
  const std::vector<double>& objective_values() const { return values_; }
  int optimal_arm() const { return optimal_; }

  // Suboptimality gaps of the K-1 non-optimal arms, ascending: Delta[2..K].
  std::vector<double> sorted_gaps() const {
    std::vector<double> g;
    g.reserve(values_.size() - 1);
    const double best = values_[static_cast<std::size_t>(optimal_)];
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (static_cast<int>(i) != optimal_) g.push_back(values_[i] - best);
    std::sort(g.begin(), g.end());
    return g;
  }

 private:
  std::vector<ArmDistribution> arms_;
  RiskObjective objective_;
  std::vector<double> values_;
  int optimal_;
};

// Index (0-based) of the arm minimizing the analytic objective.
inline int true_best_arm(const BanditInstance& inst) { return inst.optimal_arm(); }

// One elimination phase as it happened: who was alive, how many samples each
// estimate used, the estimates, and who was rejected.
struct PhaseRecord {
  std::vector<int> active;            // surviving arms entering the phase, ascending
  std::vector<std::int64_t> counts;   // per active arm: samples behind its estimate
  std::vector<double> estimates;      // per active arm: estimated objective
  int rejected;                       // arm removed at the end of the phase
};

struct RunTrace {
  std::vector<PhaseRecord> phases;  // exactly K-1 entries
  int selected;                     // final surviving arm
  std::int64_t total_pulls;         // <= schedule budget
};

// Execute one seeded GSR run. arm_stream_labels, when provided, must hold one
// stream label per arm and replaces the default labels 0..K-1; permuting arms
// and labels together permutes the outcome identically.
inline RunTrace run_gsr(const BanditInstance& inst, const PhaseSchedule& sched,
                        const TruncationSchedule& mean_trunc,
                        const TruncationSchedule& cvar_trunc, Seed seed,
                        std::span<const std::uint64_t> arm_stream_labels = {}) {
  const int K = inst.K();
  const RiskObjective& obj = inst.objective();
  if (sched.K() != K)
    throw std::invalid_argument("schedule built for K = " + std::to_string(sched.K()) +
                                ", instance has K = " + std::to_string(K));
  if (!arm_stream_labels.empty() &&
      arm_stream_labels.size() != static_cast<std::size_t>(K))
    throw std::invalid_argument("need one stream label per arm");
  const std::int64_t n1 = sched.counts().front();
  if (n1 < 1)
    throw InsufficientPhaseBudget("phase 1 allocates zero pulls per arm");
  if (obj.xi2 > 0.0 && tail_count(static_cast<std::size_t>(n1), obj.alpha) == 0)
    throw InsufficientPhaseBudget(
        "phase 1 allocates " + std::to_string(n1) +
        " pulls per arm; the CVaR estimate needs floor(n*beta) >= 1, i.e. n >= " +
        std::to_string(static_cast<std::int64_t>(std::ceil(1.0 / obj.alpha.beta() - 1e-9))));

  std::vector<Stream> streams;
  streams.reserve(static_cast<std::size_t>(K));
  for (int a = 0; a < K; ++a) {
    const std::uint64_t label = arm_stream_labels.empty()
                                    ? static_cast<std::uint64_t>(a)
                                    : arm_stream_labels[static_cast<std::size_t>(a)];
    streams.push_back(seed.with(label).stream());
  }

  std::vector<std::vector<double>> samples(static_cast<std::size_t>(K));
  for (auto& s : samples) s.reserve(static_cast<std::size_t>(sched.counts().back()));

  std::vector<int> active(static_cast<std::size_t>(K));
  for (int a = 0; a < K; ++a) active[static_cast<std::size_t>(a)] = a;

  RunTrace trace;
  trace.phases.reserve(static_cast<std::size_t>(K - 1));
  trace.total_pulls = 0;

  std::vector<double> scratch;
  std::int64_t prev = 0;
  for (std::int64_t target : sched.counts()) {
    PhaseRecord rec;
    rec.active = active;
    rec.counts.assign(active.size(), target);
    rec.estimates.reserve(active.size());

    const std::int64_t add = target - prev;
    int worst = -1;
    double worst_est = 0.0;
    for (int a : active) {
      auto& xs = samples[static_cast<std::size_t>(a)];
      const std::size_t old = xs.size();
      xs.resize(old + static_cast<std::size_t>(add));
      sample_into(inst.arms()[static_cast<std::size_t>(a)],
                  streams[static_cast<std::size_t>(a)],
                  std::span<double>(xs).subspan(old));
      const double est =
          detail::objective_estimate_scratch(xs, obj, mean_trunc, cvar_trunc, scratch);
      rec.estimates.push_back(est);
      // Strict > keeps the first (smallest-index) arm on ties.
      if (worst < 0 || est > worst_est) {
        worst = a;
        worst_est = est;
      }
    }
    trace.total_pulls += static_cast<std::int64_t>(active.size()) * add;
    rec.rejected = worst;
    trace.phases.push_back(std::move(rec));
    active.erase(std::find(active.begin(), active.end(), worst));
    prev = target;
  }

  trace.selected = active.front();
  return trace;
}

}  // namespace riskbandit
