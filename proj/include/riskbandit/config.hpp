#pragma once
/*
 * JSON configuration for custom instances and sweeps. Schema:
 *
 * {
 *   "arms": ["pareto(shape=3,scale=0.6)", "exp(mean=1)", ...],     // >= 2
 *   "objective": {"xi1": 0.0, "xi2": 1.0, "alpha": 0.95},
 *   "algorithms": [                                                 // optional
 *     {"label": "cvar-sr", "algo": "sr",
 *      "trunc_mean": "none", "trunc_cvar": "grow:0.4",              // optional
 *      "objective": {"xi1": 1, "xi2": 0, "alpha": 0.95}}            // optional
 *   ],
 *   "experiment": {"T_grid": [500, 1500], "runs": 2000, "seed": 42} // optional
 * }
 *
 * parse_config is total: any input yields either a document or a list of
 * located errors (JSON syntax errors carry the byte offset, semantic errors
 * the offending field path). `arms` + `objective` suffice for single runs;
 * `algorithms` + `experiment` are additionally needed to build a sweep
 * ExperimentSpec. format_config(parse_config(text)) round-trips exactly
 * (distribution parameters and real-valued fields serialize with 17
 * significant digits).
 */
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "experiments.hpp"

namespace riskbandit {

struct ConfigError {
  std::string where;    // field path, or "syntax" with a byte offset
  std::string message;

  std::string to_string() const { return where + ": " + message; }
};

struct ExperimentBlock {
  std::vector<std::int64_t> T_grid;
  std::int64_t runs = 2000;
  std::uint64_t seed = 42;

  friend bool operator==(const ExperimentBlock&, const ExperimentBlock&) = default;
};

struct ConfigDocument {
  std::vector<ArmDistribution> arms;
  std::optional<RiskObjective> objective;
  std::vector<AlgoConfig> algorithms;
  std::optional<ExperimentBlock> experiment;

  BanditInstance instance() const {
    if (!objective) throw std::invalid_argument("config has no objective");
    return BanditInstance(arms, *objective);
  }

  // Full sweep spec; requires the optional blocks.
  ExperimentSpec to_spec() const {
    if (algorithms.empty())
      throw std::invalid_argument("config has no algorithms block");
    if (!experiment)
      throw std::invalid_argument("config has no experiment block");
    ExperimentSpec spec{instance(), algorithms, experiment->T_grid,
                        experiment->runs, experiment->seed};
    spec.validate();
    return spec;
  }

  friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;
};

struct ParsedConfig {
  std::optional<ConfigDocument> document;
  std::vector<ConfigError> errors;

  bool ok() const { return errors.empty() && document.has_value(); }
};

namespace detail {

using nlohmann::json;

inline bool cfg_is_int(const json& v) {
  return v.is_number_integer() || v.is_number_unsigned();
}

// Field accessors that record an error instead of throwing.
struct CfgReader {
  std::vector<ConfigError>& errors;

  void err(const std::string& where, const std::string& msg) {
    errors.push_back({where, msg});
  }

  const json* need(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) {
      err(path, std::string("missing required field '") + key + "'");
      return nullptr;
    }
    return &obj.at(key);
  }

  std::optional<double> number(const json& v, const std::string& where) {
    if (!v.is_number()) {
      err(where, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::string> text(const json& v, const std::string& where) {
    if (!v.is_string()) {
      err(where, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || (item.key() == k);
      if (!ok) err(path, "unknown field '" + item.key() + "'");
    }
  }

  std::optional<RiskObjective> objective(const json& v, const std::string& path) {
    if (!v.is_object()) {
      err(path, "expected an object {xi1, xi2, alpha}");
      return std::nullopt;
    }
    check_keys(v, path, {"xi1", "xi2", "alpha"});
    const json* x1 = need(v, path, "xi1");
    const json* x2 = need(v, path, "xi2");
    const json* al = need(v, path, "alpha");
    if (!x1 || !x2 || !al) return std::nullopt;
    const auto d1 = number(*x1, path + ".xi1");
    const auto d2 = number(*x2, path + ".xi2");
    const auto da = number(*al, path + ".alpha");
    if (!d1 || !d2 || !da) return std::nullopt;
    try {
      return RiskObjective(*d1, *d2, ConfidenceLevel(*da));
    } catch (const std::exception& e) {
      err(path, e.what());
      return std::nullopt;
    }
  }

  std::optional<TruncationSchedule> truncation(const json& v, const std::string& path) {
    const auto s = text(v, path);
    if (!s) return std::nullopt;
    try {
      return TruncationSchedule::parse(*s);
    } catch (const std::exception& e) {
      err(path, e.what());
      return std::nullopt;
    }
  }
};

}  // namespace detail

inline ParsedConfig parse_config(std::string_view text) {
  ParsedConfig out;
  detail::json root;
  try {
    root = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    out.errors.push_back({"syntax", e.what()});
    return out;
  }

  detail::CfgReader r{out.errors};
  ConfigDocument doc;
  try {
    if (!root.is_object()) {
      r.err("config", "top level must be a JSON object");
      return out;
    }
    r.check_keys(root, "config", {"arms", "objective", "algorithms", "experiment"});

    if (const detail::json* arms = r.need(root, "config", "arms")) {
      if (!arms->is_array()) {
        r.err("arms", "expected an array of distribution literals");
      } else {
        for (std::size_t i = 0; i < arms->size(); ++i) {
          const std::string where = "arms[" + std::to_string(i) + "]";
          const auto s = r.text((*arms)[i], where);
          if (!s) continue;
          try {
            doc.arms.push_back(parse_distribution(*s));
          } catch (const std::exception& e) {
            r.err(where, e.what());
          }
        }
        if (arms->is_array() && arms->size() < 2)
          r.err("arms", "need at least 2 arms");
      }
    }

    if (const detail::json* obj = r.need(root, "config", "objective"))
      doc.objective = r.objective(*obj, "objective");

    if (root.contains("algorithms")) {
      const detail::json& algos = root.at("algorithms");
      if (!algos.is_array()) {
        r.err("algorithms", "expected an array");
      } else {
        for (std::size_t i = 0; i < algos.size(); ++i) {
          const std::string path = "algorithms[" + std::to_string(i) + "]";
          const detail::json& a = algos[i];
          if (!a.is_object()) {
            r.err(path, "expected an object");
            continue;
          }
          r.check_keys(a, path,
                       {"label", "algo", "trunc_mean", "trunc_cvar", "objective"});
          AlgoConfig cfg;
          bool good = true;
          if (const detail::json* l = r.need(a, path, "label")) {
            const auto s = r.text(*l, path + ".label");
            good = good && s.has_value();
            if (s) cfg.label = *s;
          } else {
            good = false;
          }
          if (const detail::json* al = r.need(a, path, "algo")) {
            const auto s = r.text(*al, path + ".algo");
            if (s) {
              try {
                cfg.algo = parse_algo(*s);
              } catch (const std::exception& e) {
                r.err(path + ".algo", e.what());
                good = false;
              }
            } else {
              good = false;
            }
          } else {
            good = false;
          }
          if (a.contains("trunc_mean")) {
            const auto t = r.truncation(a.at("trunc_mean"), path + ".trunc_mean");
            good = good && t.has_value();
            if (t) cfg.mean_trunc = *t;
          }
          if (a.contains("trunc_cvar")) {
            const auto t = r.truncation(a.at("trunc_cvar"), path + ".trunc_cvar");
            good = good && t.has_value();
            if (t) cfg.cvar_trunc = *t;
          }
          if (a.contains("objective")) {
            cfg.objective = r.objective(a.at("objective"), path + ".objective");
            good = good && cfg.objective.has_value();
          }
          // The engine requires the CVaR clamp level to grow strictly slower
          // than sqrt(n) whenever the CVaR term is active.
          const RiskObjective* eff =
              cfg.objective ? &*cfg.objective
                            : (doc.objective ? &*doc.objective : nullptr);
          if (good && eff && eff->xi2 > 0.0 && !cfg.cvar_trunc.valid_for_cvar())
            r.err(path + ".trunc_cvar",
                  "growth exponent q_c must lie in (0,1/2) for the CVaR "
                  "estimator, got " +
                      std::to_string(cfg.cvar_trunc.parameter()));
          if (good) doc.algorithms.push_back(std::move(cfg));
        }
      }
    }

    if (root.contains("experiment")) {
      const detail::json& ex = root.at("experiment");
      if (!ex.is_object()) {
        r.err("experiment", "expected an object");
      } else {
        r.check_keys(ex, "experiment", {"T_grid", "runs", "seed"});
        ExperimentBlock block;
        if (const detail::json* grid = r.need(ex, "experiment", "T_grid")) {
          if (!grid->is_array()) {
            r.err("experiment.T_grid", "expected an array of integers");
          } else {
            for (std::size_t i = 0; i < grid->size(); ++i) {
              const std::string where = "experiment.T_grid[" + std::to_string(i) + "]";
              if (!detail::cfg_is_int((*grid)[i])) {
                r.err(where, "expected an integer");
                continue;
              }
              block.T_grid.push_back((*grid)[i].get<std::int64_t>());
            }
          }
        }
        if (ex.contains("runs")) {
          if (!detail::cfg_is_int(ex.at("runs")))
            r.err("experiment.runs", "expected an integer");
          else
            block.runs = ex.at("runs").get<std::int64_t>();
        }
        if (ex.contains("seed")) {
          const detail::json& s = ex.at("seed");
          if (!detail::cfg_is_int(s) || (s.is_number_integer() && s.get<std::int64_t>() < 0))
            r.err("experiment.seed", "expected a nonnegative integer");
          else
            block.seed = s.get<std::uint64_t>();
        }
        doc.experiment = std::move(block);
      }
    }

    // Cross-field validity: instances and specs enforce invariants that
    // single fields cannot (unique optimum, defined means, label uniqueness,
    // grid ordering). Surface those as located errors too.
    if (out.errors.empty()) {
      try {
        if (!doc.algorithms.empty() && doc.experiment)
          (void)doc.to_spec();
        else
          (void)doc.instance();
      } catch (const std::exception& e) {
        r.err("config", e.what());
      }
    }
  } catch (const std::exception& e) {
    r.err("config", std::string("unexpected error: ") + e.what());
  }

  if (out.errors.empty()) out.document = std::move(doc);
  return out;
}

inline std::string format_config(const ConfigDocument& doc) {
  detail::json root;
  detail::json arms = detail::json::array();
  for (const ArmDistribution& a : doc.arms) arms.push_back(format_distribution(a));
  root["arms"] = std::move(arms);
  if (doc.objective)
    root["objective"] = {{"xi1", doc.objective->xi1},
                         {"xi2", doc.objective->xi2},
                         {"alpha", doc.objective->alpha.alpha()}};
  if (!doc.algorithms.empty()) {
    detail::json algos = detail::json::array();
    for (const AlgoConfig& cfg : doc.algorithms) {
      detail::json a = {{"label", cfg.label},
                        {"algo", algo_name(cfg.algo)},
                        {"trunc_mean", cfg.mean_trunc.format()},
                        {"trunc_cvar", cfg.cvar_trunc.format()}};
      if (cfg.objective)
        a["objective"] = {{"xi1", cfg.objective->xi1},
                          {"xi2", cfg.objective->xi2},
                          {"alpha", cfg.objective->alpha.alpha()}};
      algos.push_back(std::move(a));
    }
    root["algorithms"] = std::move(algos);
  }
  if (doc.experiment)
    root["experiment"] = {{"T_grid", doc.experiment->T_grid},
                          {"runs", doc.experiment->runs},
                          {"seed", doc.experiment->seed}};
  return root.dump(2) + "\n";
}

}  // namespace riskbandit
