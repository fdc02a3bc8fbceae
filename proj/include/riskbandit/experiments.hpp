#pragma once
/*
 * Seeded Monte-Carlo estimation of the misidentification probability p_e over
 * budget grids, plus the two stock experiment presets.
 *
 * Determinism contract: the seed of run r of configuration `label` at budget
 * T under master seed m is
 *
 *     Seed::master(m).with(label).with(uint64(T)).with(uint64(r))
 *
 * and each run derives per-arm streams inside run_gsr. Results are therefore
 * a pure function of (spec, master seed): independent of execution order and
 * of the worker count (runs are partitioned round-robin; the error count is a
 * sum of per-run indicators).
 *
 * CSV contract (exact): header `label,algo,T,runs,errors,p_e,stderr,master_seed`,
 * comma separators, LF line endings, integers bare, reals with up to 10
 * significant digits. Rows appear in configuration order, then ascending T.
 * A sweep with an output path also writes one companion plot file per label
 * (`<out-stem>.<label>.csv`) with columns `T,p_e,stderr`. An existing output
 * file is used to resume: rows whose (label, algo, T, runs, master_seed) match
 * the spec are reused by their (errors, runs) integers, so a finished sweep
 * re-run writes byte-identical files without recomputing.
 */
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "bandit.hpp"

namespace riskbandit {

enum class Algo { ue, sr };

inline const char* algo_name(Algo a) { return a == Algo::ue ? "ue" : "sr"; }

inline Algo parse_algo(std::string_view s) {
  if (s == "ue") return Algo::ue;
  if (s == "sr") return Algo::sr;
  throw std::invalid_argument("algorithm must be 'ue' or 'sr', got '" +
                              std::string(s) + "'");
}

inline PhaseSchedule build_schedule(Algo a, int K, std::int64_t T) {
  return a == Algo::ue ? ue_schedule(K, T) : sr_schedule(K, T);
}

// One labeled algorithm variant within an experiment. The optional objective
// replaces the instance objective (and with it the true best arm), so one
// spec can carry e.g. a mean-minimization and a CVaR-minimization family over
// the same arms.
struct AlgoConfig {
  std::string label;
  Algo algo = Algo::sr;
  TruncationSchedule mean_trunc = TruncationSchedule::none();
  TruncationSchedule cvar_trunc = TruncationSchedule::none();
  std::optional<RiskObjective> objective;

  friend bool operator==(const AlgoConfig& a, const AlgoConfig& b) {
    return a.label == b.label && a.algo == b.algo && a.mean_trunc == b.mean_trunc &&
           a.cvar_trunc == b.cvar_trunc && a.objective == b.objective;
  }
};

// One measured point of an error curve.
struct ErrorPoint {
  std::string label;
  Algo algo;
  std::int64_t T;
  std::int64_t runs;
  std::int64_t errors;
  double p_e;        // errors / runs
  double std_error;  // sqrt(p_e (1-p_e) / runs)
};

using ErrorCurve = std::vector<ErrorPoint>;

namespace detail {

inline ErrorPoint make_error_point(std::string label, Algo algo, std::int64_t T,
                                   std::int64_t runs, std::int64_t errors) {
  const double p = static_cast<double>(errors) / static_cast<double>(runs);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
  return ErrorPoint{std::move(label), algo, T, runs, errors, p, se};
}

}  // namespace detail

struct ExperimentSpec {
  BanditInstance instance;
  std::vector<AlgoConfig> configs;
  std::vector<std::int64_t> T_grid;  // strictly increasing, positive
  std::int64_t runs_per_point = 2000;
  std::uint64_t master_seed = 42;

  // Labels feed CSV cells and companion file names, so they are restricted to
  // a filesystem- and comma-safe alphabet.
  void validate() const {
    if (configs.empty()) throw std::invalid_argument("spec needs at least one config");
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const std::string& l = configs[i].label;
      if (l.empty()) throw std::invalid_argument("config labels must be nonempty");
      for (char c : l) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok)
          throw std::invalid_argument("config label '" + l +
                                      "' may use only [A-Za-z0-9._-]");
      }
      for (std::size_t j = i + 1; j < configs.size(); ++j)
        if (configs[j].label == l)
          throw std::invalid_argument("duplicate config label '" + l + "'");
    }
    std::int64_t prev = 0;
    for (std::int64_t t : T_grid) {
      if (t <= prev)
        throw std::invalid_argument("T grid must be strictly increasing and positive");
      prev = t;
    }
    if (runs_per_point < 1) throw std::invalid_argument("runs_per_point must be >= 1");
  }

  friend bool operator==(const ExperimentSpec& a, const ExperimentSpec& b) {
    return a.instance.arms() == b.instance.arms() &&
           a.instance.objective() == b.instance.objective() &&
           a.configs == b.configs && a.T_grid == b.T_grid &&
           a.runs_per_point == b.runs_per_point && a.master_seed == b.master_seed;
  }
};

// Estimate p_e for one configuration at one budget. Feasibility problems
// (budget too small, CVaR sample-size precondition, invalid truncation
// exponent) surface from run 0 before any other run executes. workers = 0
// means one thread per hardware core.
inline ErrorPoint estimate_error_probability(const BanditInstance& base,
                                             const AlgoConfig& cfg, std::int64_t T,
                                             std::int64_t runs,
                                             std::uint64_t master_seed,
                                             int workers = 0) {
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  const BanditInstance inst =
      cfg.objective ? BanditInstance(base.arms(), *cfg.objective) : base;
  const PhaseSchedule sched = build_schedule(cfg.algo, inst.K(), T);
  const int best = inst.optimal_arm();
  const Seed point_seed =
      Seed::master(master_seed).with(cfg.label).with(static_cast<std::uint64_t>(T));

  auto is_error = [&](std::int64_t r) {
    const RunTrace t = run_gsr(inst, sched, cfg.mean_trunc, cfg.cvar_trunc,
                               point_seed.with(static_cast<std::uint64_t>(r)));
    return t.selected != best;
  };

  std::int64_t errors = is_error(0) ? 1 : 0;

  int W = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  if (W < 1) W = 1;
  if (W == 1 || runs <= 2) {
    for (std::int64_t r = 1; r < runs; ++r)
      if (is_error(r)) ++errors;
  } else {
    std::vector<std::int64_t> partial(static_cast<std::size_t>(W), 0);
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    pool.reserve(static_cast<std::size_t>(W));
    for (int w = 0; w < W; ++w) {
      pool.emplace_back([&, w]() {
        try {
          std::int64_t local = 0;
          for (std::int64_t r = 1 + w; r < runs; r += W)
            if (is_error(r)) ++local;
          partial[static_cast<std::size_t>(w)] = local;
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(failure);
    for (std::int64_t c : partial) errors += c;
  }
  return detail::make_error_point(cfg.label, cfg.algo, T, runs, errors);
}

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline const char* kSweepHeader = "label,algo,T,runs,errors,p_e,stderr,master_seed";

inline std::string sweep_row(const ErrorPoint& p, std::uint64_t master_seed) {
  return p.label + "," + algo_name(p.algo) + "," + std::to_string(p.T) + "," +
         std::to_string(p.runs) + "," + std::to_string(p.errors) + "," +
         format_real(p.p_e) + "," + format_real(p.std_error) + "," +
         std::to_string(master_seed) + "\n";
}

inline std::string companion_path(const std::string& out, const std::string& label) {
  std::string stem = out;
  if (stem.size() >= 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0)
    stem.resize(stem.size() - 4);
  return stem + "." + label + ".csv";
}

template <class Int>
inline bool parse_int(std::string_view s, Int& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  const auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

// Reusable (errors) counts from a previous sweep output, keyed by (label, T).
// Rows are reused only when algo, runs and master_seed also match the spec.
inline std::map<std::pair<std::string, std::int64_t>, std::int64_t> read_sweep_cache(
    const std::string& path, const ExperimentSpec& spec) {
  std::map<std::pair<std::string, std::int64_t>, std::int64_t> cache;
  std::ifstream in(path, std::ios::binary);
  if (!in) return cache;
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) return cache;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    while (true) {
      const std::size_t c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (f.size() != 8) continue;
    std::int64_t T = 0, runs = 0, errors = 0;
    std::uint64_t seed = 0;
    if (!parse_int(f[2], T) || !parse_int(f[3], runs) || !parse_int(f[4], errors) ||
        !parse_int(f[7], seed))
      continue;
    if (runs != spec.runs_per_point || seed != spec.master_seed) continue;
    if (errors < 0 || errors > runs) continue;
    const std::string label(f[0]);
    bool known = false;
    for (const AlgoConfig& cfg : spec.configs)
      known = known || (cfg.label == label && algo_name(cfg.algo) == f[1]);
    if (!known) continue;
    cache[{label, T}] = errors;
  }
  return cache;
}

inline void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace detail

struct SweepOptions {
  std::string out_path;     // empty: compute only, write nothing
  int workers = 0;          // 0: one thread per hardware core
  bool resume = true;       // reuse matching rows from an existing out_path
  bool companions = true;   // write per-label plot files
};

struct SweepResult {
  ErrorCurve points;                  // config order, then ascending T
  std::vector<std::string> failures;  // infeasible grid points, with reasons
};

// Evaluate the full (config x T) grid. Infeasible points are reported in
// `failures` and skipped; all feasible points are still computed and written.
inline SweepResult sweep(const ExperimentSpec& spec, const SweepOptions& opt = {}) {
  spec.validate();
  std::map<std::pair<std::string, std::int64_t>, std::int64_t> cache;
  if (opt.resume && !opt.out_path.empty() &&
      std::filesystem::exists(std::filesystem::path(opt.out_path)))
    cache = detail::read_sweep_cache(opt.out_path, spec);

  SweepResult result;
  for (const AlgoConfig& cfg : spec.configs) {
    for (std::int64_t T : spec.T_grid) {
      const auto hit = cache.find({cfg.label, T});
      if (hit != cache.end()) {
        result.points.push_back(detail::make_error_point(
            cfg.label, cfg.algo, T, spec.runs_per_point, hit->second));
        continue;
      }
      try {
        result.points.push_back(estimate_error_probability(
            spec.instance, cfg, T, spec.runs_per_point, spec.master_seed,
            opt.workers));
      } catch (const std::exception& e) {
        result.failures.push_back(cfg.label + " at T=" + std::to_string(T) + ": " +
                                  e.what());
      }
    }
  }

  if (!opt.out_path.empty()) {
    std::string csv = detail::kSweepHeader;
    csv += "\n";
    for (const ErrorPoint& p : result.points)
      csv += detail::sweep_row(p, spec.master_seed);
    detail::write_file(opt.out_path, csv);
    if (opt.companions) {
      for (const AlgoConfig& cfg : spec.configs) {
        std::string body = "T,p_e,stderr\n";
        for (const ErrorPoint& p : result.points)
          if (p.label == cfg.label)
            body += std::to_string(p.T) + "," + detail::format_real(p.p_e) + "," +
                    detail::format_real(p.std_error) + "\n";
        detail::write_file(detail::companion_path(opt.out_path, cfg.label), body);
      }
    }
  }
  return result;
}

/*
 * Preset 1: 10 arms, confidence level 0.95. Arm 1 is Pareto(shape 3,
 * scale 0.6) with mean 0.9; arms 2-5 are Pareto(shape 3, scale 2/3) with
 * mean 1; arms 6-10 are Exponential(mean 1). Arm 1 is optimal for the mean
 * and for the CVaR metric. Two families over the same arms:
 *   mean minimization:  oblivious SR with b_m(n) = n^0.75   vs  static drop
 *                       truncation at b_m = 12 B / Delta = 240
 *                       (p = 2, B = 2, mean gap 0.1)
 *   CVaR minimization:  oblivious SR with b_c(n) = n^0.4    vs  static clamp
 *                       truncation at b_c = 4 B / (Delta beta) = 640
 *                       (p = 2, B = 2, design CVaR gap 0.25)
 */
inline ExperimentSpec preset_fig1() {
  std::vector<ArmDistribution> arms;
  arms.emplace_back(Pareto(3.0, 0.6));
  for (int i = 0; i < 4; ++i) arms.emplace_back(Pareto(3.0, 2.0 / 3.0));
  for (int i = 0; i < 5; ++i) arms.emplace_back(Exponential(1.0));
  const ConfidenceLevel alpha(0.95);
  const RiskObjective mean_obj(1.0, 0.0, alpha);
  const RiskObjective cvar_obj(0.0, 1.0, alpha);

  ExperimentSpec spec{BanditInstance(std::move(arms), cvar_obj),
                      {},
                      {500, 1500, 5000, 15000, 50000},
                      2000,
                      42};
  spec.configs = {
      {"mean-sr-oblivious", Algo::sr, TruncationSchedule::grow(0.75),
       TruncationSchedule::none(), mean_obj},
      {"mean-sr-static", Algo::sr, TruncationSchedule::fixed(240.0),
       TruncationSchedule::none(), mean_obj},
      {"cvar-sr-oblivious", Algo::sr, TruncationSchedule::none(),
       TruncationSchedule::grow(0.4), cvar_obj},
      {"cvar-sr-static", Algo::sr, TruncationSchedule::none(),
       TruncationSchedule::fixed(640.0), cvar_obj},
  };
  return spec;
}

/*
 * Preset 2: two arms under mean minimization. Arm 1 is Pareto(shape 1.9,
 * scale 0.9/1.9) with mean 1; arm 2 is Exponential(mean 0.9) and optimal.
 * The heavy Pareto tail (moments finite only below order 1.9) makes slow
 * truncation growth visibly costly: oblivious SR at q_m in {0.4, 0.5, 0.7}
 * against a static comparator using (p, B) = (1.5, 2), for which
 * b_m = (12 B / Delta)^{1/min(1, p-1)} = 240^2 = 57600.
 */
inline ExperimentSpec preset_fig3() {
  std::vector<ArmDistribution> arms;
  arms.emplace_back(Pareto(1.9, 0.9 / 1.9));
  arms.emplace_back(Exponential(0.9));
  const RiskObjective mean_obj(1.0, 0.0, ConfidenceLevel(0.95));

  ExperimentSpec spec{BanditInstance(std::move(arms), mean_obj),
                      {},
                      {500, 1500, 5000, 15000, 50000},
                      2000,
                      42};
  spec.configs = {
      {"mean-sr-q0.4", Algo::sr, TruncationSchedule::grow(0.4),
       TruncationSchedule::none(), std::nullopt},
      {"mean-sr-q0.5", Algo::sr, TruncationSchedule::grow(0.5),
       TruncationSchedule::none(), std::nullopt},
      {"mean-sr-q0.7", Algo::sr, TruncationSchedule::grow(0.7),
       TruncationSchedule::none(), std::nullopt},
      {"mean-sr-static", Algo::sr, TruncationSchedule::fixed(57600.0),
       TruncationSchedule::none(), std::nullopt},
  };
  return spec;
}

}  // namespace riskbandit
