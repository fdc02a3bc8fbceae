#pragma once
/*
 * Command-line front end. One binary, five subcommands:
 *
 *   estimate   risk estimators over newline-delimited numbers (file or stdin)
 *   bound      closed-form bound evaluators, one sub-subcommand per formula
 *   run        a single seeded GSR run with a full phase trace
 *   sweep      Monte-Carlo error-probability grid from a JSON config
 *   preset     the two stock experiments (fig1 | fig3)
 *
 * Exit codes: 0 success, 1 user error (bad flags, bad config, bad data,
 * infeasible request), 2 internal error. The environment variable
 * RISKBANDIT_SEED overrides the config-file seed; an explicit --seed flag
 * overrides both. Arms are numbered from 1 in all output.
 */
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bounds.hpp"
#include "config.hpp"
#include "experiments.hpp"

namespace riskbandit {
namespace cli_detail {

inline std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("RISKBANDIT_SEED");
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  const std::string s(v);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("RISKBANDIT_SEED must be an unsigned integer, got '" +
                                s + "'");
  return out;
}

// Precedence: explicit flag, then environment, then config/default.
inline std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value,
                                  std::uint64_t fallback) {
  if (flag_given) return flag_value;
  if (const auto env = env_seed()) return *env;
  return fallback;
}

inline std::vector<double> parse_real_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const std::size_t c = rest.find(',');
    const std::string_view tok = rest.substr(0, c);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      throw std::invalid_argument(std::string(what) + ": '" + std::string(tok) +
                                  "' is not a number");
    out.push_back(v);
    if (c == std::string_view::npos) break;
    rest.remove_prefix(c + 1);
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

inline std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_real_list(text, "--grid")) {
    const auto t = static_cast<std::int64_t>(v);
    if (static_cast<double>(t) != v)
      throw std::invalid_argument("--grid: entries must be integers");
    out.push_back(t);
  }
  return out;
}

inline std::vector<double> read_numbers(const std::string& path) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("cannot open input file '" + path + "'");
    in = &file;
  }
  std::vector<double> xs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r") + 1;
    const std::string_view tok(line.data() + b, e - b);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      throw std::invalid_argument("input line " + std::to_string(lineno) + ": '" +
                                  std::string(tok) + "' is not a number");
    xs.push_back(v);
  }
  return xs;
}

struct BoundRow {
  std::string term;
  double value;
  std::string valid;      // "yes" | "no" | "-"
  std::string threshold;  // display string or "-"
};

inline void emit_bound_table(const std::vector<BoundRow>& rows,
                             const std::string& csv_path) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %-18s %-8s %s\n", "term", "value", "valid",
                "threshold");
  std::cout << buf;
  for (const BoundRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %-18.10g %-8s %s\n", r.term.c_str(),
                  r.value, r.valid.c_str(), r.threshold.c_str());
    std::cout << buf;
  }
  if (!csv_path.empty()) {
    std::string csv = "term,value,valid,threshold\n";
    for (const BoundRow& r : rows) {
      std::snprintf(buf, sizeof buf, "%.10g", r.value);
      csv += r.term + "," + buf + "," + r.valid + "," + r.threshold + "\n";
    }
    detail::write_file(csv_path, csv);
  }
}

inline std::vector<BoundRow> gsr_bound_rows(const GsrErrorBound& b) {
  return {
      {"mean_term", b.mean_term, "-", "-"},
      {"cvar_term", b.cvar_term, "-", "-"},
      {"bound", b.bound, b.valid ? "yes" : "no", b.t_threshold.display()},
  };
}

inline nlohmann::json trace_json(const RunTrace& t, std::int64_t budget) {
  nlohmann::json phases = nlohmann::json::array();
  for (const PhaseRecord& p : t.phases) {
    nlohmann::json active = nlohmann::json::array();
    for (int a : p.active) active.push_back(a + 1);
    phases.push_back({{"active", std::move(active)},
                      {"counts", p.counts},
                      {"estimates", p.estimates},
                      {"rejected", p.rejected + 1}});
  }
  return {{"selected", t.selected + 1},
          {"total_pulls", t.total_pulls},
          {"budget", budget},
          {"phases", std::move(phases)}};
}

inline void print_trace_text(const RunTrace& t, std::int64_t budget) {
  char buf[64];
  for (std::size_t k = 0; k < t.phases.size(); ++k) {
    const PhaseRecord& p = t.phases[k];
    std::cout << "phase " << (k + 1) << " | n = " << p.counts.front()
              << " | active:";
    for (int a : p.active) std::cout << ' ' << (a + 1);
    std::cout << " | estimates:";
    for (double e : p.estimates) {
      std::snprintf(buf, sizeof buf, " %.6g", e);
      std::cout << buf;
    }
    std::cout << " | reject arm " << (p.rejected + 1) << "\n";
  }
  std::cout << "selected arm: " << (t.selected + 1) << "\n";
  std::cout << "total pulls: " << t.total_pulls << " (budget " << budget << ")\n";
}

inline ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ParsedConfig parsed = parse_config(ss.str());
  if (!parsed.ok()) {
    std::string msg = "config file '" + path + "' is invalid:";
    for (const ConfigError& e : parsed.errors) msg += "\n  " + e.to_string();
    throw std::invalid_argument(msg);
  }
  return std::move(*parsed.document);
}

inline void report_sweep(const SweepResult& res, const std::string& out_path) {
  std::cout << "wrote " << res.points.size() << " rows to " << out_path << "\n";
  for (const std::string& f : res.failures)
    std::cerr << "infeasible: " << f << "\n";
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
  using cli_detail::BoundRow;

  CLI::App app{
      "Risk-aware best-arm identification: truncation-based mean/CVaR "
      "estimators, error bounds, and seeded Monte-Carlo experiments. Arms are "
      "numbered from 1 in output.",
      "riskbandit"};
  app.require_subcommand(1);

  // ----- estimate ---------------------------------------------------------
  struct {
    std::string input;
    double alpha = 0.95, xi1 = 1.0, xi2 = 0.0;
    std::string trunc = "none";
  } est;
  {
    CLI::App* sub = app.add_subcommand(
        "estimate", "Estimate mean / VaR / CVaR / objective from newline-"
                    "delimited numbers (file or stdin)");
    sub->add_option("--input", est.input, "input file, or '-' for stdin")
        ->capture_default_str();
    sub->add_option("--alpha", est.alpha, "confidence level in (0,1)")
        ->capture_default_str();
    sub->add_option("--xi1", est.xi1, "mean weight")->capture_default_str();
    sub->add_option("--xi2", est.xi2, "CVaR weight")->capture_default_str();
    sub->add_option("--trunc", est.trunc,
                    "truncation mode: none | fixed:<b> | grow:<q>")
        ->capture_default_str();
    sub->callback([&]() {
      const std::vector<double> xs = cli_detail::read_numbers(est.input);
      if (xs.empty()) throw std::invalid_argument("no input numbers");
      const ConfidenceLevel conf(est.alpha);
      const TruncationSchedule sched = TruncationSchedule::parse(est.trunc);
      if (!sched.valid_for_cvar())
        throw std::invalid_argument(
            "growth exponent q_c must lie in (0,1/2) for the CVaR estimator, "
            "got " +
            std::to_string(sched.parameter()));
      const double b = sched.level(xs.size());
      const double mean = std::isinf(b) ? sample_mean(xs) : truncated_mean(xs, b);
      const double var = empirical_var(xs, conf);
      const double cvar =
          std::isinf(b) ? empirical_cvar(xs, conf) : truncated_cvar(xs, conf, b);
      const double objective = est.xi1 * mean + est.xi2 * cvar;
      char buf[96];
      std::snprintf(buf, sizeof buf, "n          %zu\n", xs.size());
      std::cout << buf;
      std::snprintf(buf, sizeof buf, "mean       %.6g\n", mean);
      std::cout << buf;
      std::snprintf(buf, sizeof buf, "var        %.6g\n", var);
      std::cout << buf;
      std::snprintf(buf, sizeof buf, "cvar       %.6g\n", cvar);
      std::cout << buf;
      std::snprintf(buf, sizeof buf, "objective  %.6g\n", objective);
      std::cout << buf;
    });
  }

  // ----- bound ------------------------------------------------------------
  struct {
    std::int64_t n = 0, T = 0;
    int K = 0;
    double alpha = 0.95, b = 1.0, eps = 0.0, delta = 0.0, q = 0.5, qm = 0.5,
           qc = 0.25, xi1 = 1.0, xi2 = 0.0, p = 2.0, B = 1.0, gap2 = 0.0,
           v_abs = -1.0;
    std::string gaps, csv;
  } bd;
  {
    CLI::App* bound = app.add_subcommand(
        "bound", "Evaluate a concentration / error-bound formula");
    bound->require_subcommand(1);
    auto add_csv = [&](CLI::App* s) {
      s->add_option("--csv", bd.csv, "also write the table as CSV to this path");
    };

    CLI::App* thm1 = bound->add_subcommand(
        "thm1", "bounded-support CVaR deviation: 6 exp(-n beta (eps/b)^2 / "
                "(10 + 1.6 eps/b))");
    thm1->add_option("--n", bd.n, "sample count")->required();
    thm1->add_option("--alpha", bd.alpha, "confidence level")->required();
    thm1->add_option("--b", bd.b, "support bound")->required();
    thm1->add_option("--eps", bd.eps, "deviation")->required();
    add_csv(thm1);
    thm1->callback([&]() {
      const DeviationBound r =
          bounded_cvar_dev_bound(bd.n, ConfidenceLevel(bd.alpha), bd.b, bd.eps);
      cli_detail::emit_bound_table(
          {{"bound", r.bound, r.vacuous ? "no" : "yes", "-"}}, bd.csv);
    });

    CLI::App* thm2 = bound->add_subcommand(
        "thm2", "truncated CVaR deviation for heavy tails: 6 exp(-n beta "
                "Delta^2 / (48 b^2))");
    thm2->add_option("--n", bd.n, "sample count")->required();
    thm2->add_option("--alpha", bd.alpha, "confidence level")->required();
    thm2->add_option("--b", bd.b, "truncation level")->required();
    thm2->add_option("--delta", bd.delta, "gap")->required();
    add_csv(thm2);
    thm2->callback([&]() {
      const DeviationBound r =
          truncated_cvar_dev_bound(bd.n, ConfidenceLevel(bd.alpha), bd.b, bd.delta);
      cli_detail::emit_bound_table(
          {{"bound", r.bound, r.vacuous ? "no" : "yes", "-"}}, bd.csv);
    });

    CLI::App* mt = bound->add_subcommand(
        "min-trunc", "smallest admissible truncation level for the heavy-tail "
                     "CVaR bound");
    mt->add_option("--delta", bd.delta, "gap")->required();
    mt->add_option("--alpha", bd.alpha, "confidence level")->required();
    mt->add_option("--p", bd.p, "moment order")->required();
    mt->add_option("--B", bd.B, "moment bound")->required();
    mt->add_option("--v-abs", bd.v_abs, "known |VaR| (omit to use the moment bound)");
    add_csv(mt);
    mt->callback([&]() {
      const std::optional<double> v =
          bd.v_abs >= 0.0 ? std::optional<double>(bd.v_abs) : std::nullopt;
      const double r = min_truncation(bd.delta, ConfidenceLevel(bd.alpha),
                                      MomentAssumption(bd.p, bd.B), v);
      cli_detail::emit_bound_table({{"b_min", r, "-", "-"}}, bd.csv);
    });

    CLI::App* vm = bound->add_subcommand(
        "var-mag", "upper bound on |VaR|: (B / min(alpha, beta))^(1/p)");
    vm->add_option("--alpha", bd.alpha, "confidence level")->required();
    vm->add_option("--p", bd.p, "moment order")->required();
    vm->add_option("--B", bd.B, "moment bound")->required();
    add_csv(vm);
    vm->callback([&]() {
      const double r =
          var_magnitude_bound(MomentAssumption(bd.p, bd.B), ConfidenceLevel(bd.alpha));
      cli_detail::emit_bound_table({{"v_bound", r, "-", "-"}}, bd.csv);
    });

    auto add_gsr_flags = [&](CLI::App* s) {
      s->add_option("--T", bd.T, "budget")->required();
      s->add_option("--K", bd.K, "arm count")->required();
      s->add_option("--gaps", bd.gaps, "K-1 ascending gaps, comma-separated")
          ->required();
      s->add_option("--xi1", bd.xi1, "mean weight")->capture_default_str();
      s->add_option("--xi2", bd.xi2, "CVaR weight")->capture_default_str();
      s->add_option("--alpha", bd.alpha, "confidence level")->capture_default_str();
      s->add_option("--qm", bd.qm, "mean truncation growth exponent")
          ->capture_default_str();
      s->add_option("--qc", bd.qc, "CVaR truncation growth exponent")
          ->capture_default_str();
      s->add_option("--p", bd.p, "moment order")->required();
      s->add_option("--B", bd.B, "moment bound")->required();
      add_csv(s);
    };
    CLI::App* ue = bound->add_subcommand(
        "ue", "misidentification bound for uniform exploration");
    add_gsr_flags(ue);
    ue->callback([&]() {
      const GapProfile gaps(cli_detail::parse_real_list(bd.gaps, "--gaps"));
      const GsrErrorBound r = ue_error_bound(
          bd.T, bd.K, gaps, RiskObjective(bd.xi1, bd.xi2, ConfidenceLevel(bd.alpha)),
          bd.qm, bd.qc, MomentAssumption(bd.p, bd.B));
      cli_detail::emit_bound_table(cli_detail::gsr_bound_rows(r), bd.csv);
    });
    CLI::App* sr = bound->add_subcommand(
        "sr", "misidentification bound for successive rejects");
    add_gsr_flags(sr);
    sr->callback([&]() {
      const GapProfile gaps(cli_detail::parse_real_list(bd.gaps, "--gaps"));
      const GsrErrorBound r = sr_error_bound(
          bd.T, bd.K, gaps, RiskObjective(bd.xi1, bd.xi2, ConfidenceLevel(bd.alpha)),
          bd.qm, bd.qc, MomentAssumption(bd.p, bd.B));
      cli_detail::emit_bound_table(cli_detail::gsr_bound_rows(r), bd.csv);
    });

    CLI::App* om = bound->add_subcommand(
        "obl-mean", "oblivious truncated-mean deviation at b(n) = n^q");
    om->add_option("--n", bd.n, "sample count")->required();
    om->add_option("--q", bd.q, "growth exponent")->required();
    om->add_option("--delta", bd.delta, "gap")->required();
    om->add_option("--p", bd.p, "moment order")->required();
    om->add_option("--B", bd.B, "moment bound")->required();
    add_csv(om);
    om->callback([&]() {
      const ObliviousBound r =
          oblivious_mean_dev_bound(bd.n, bd.q, bd.delta, MomentAssumption(bd.p, bd.B));
      cli_detail::emit_bound_table(
          {{"bound", r.bound, r.n_star.exceeded_by(static_cast<double>(bd.n)) ? "yes" : "no",
            r.n_star.display()}},
          bd.csv);
    });

    CLI::App* oc = bound->add_subcommand(
        "obl-cvar", "oblivious truncated-CVaR deviation at b(n) = n^q");
    oc->add_option("--n", bd.n, "sample count")->required();
    oc->add_option("--q", bd.q, "growth exponent")->required();
    oc->add_option("--delta", bd.delta, "gap")->required();
    oc->add_option("--alpha", bd.alpha, "confidence level")->required();
    oc->add_option("--p", bd.p, "moment order")->required();
    oc->add_option("--B", bd.B, "moment bound")->required();
    add_csv(oc);
    oc->callback([&]() {
      const ObliviousBound r = oblivious_cvar_dev_bound(
          bd.n, bd.q, bd.delta, ConfidenceLevel(bd.alpha), MomentAssumption(bd.p, bd.B));
      cli_detail::emit_bound_table(
          {{"bound", r.bound, r.n_star.exceeded_by(static_cast<double>(bd.n)) ? "yes" : "no",
            r.n_star.display()}},
          bd.csv);
    });

    CLI::App* ms = bound->add_subcommand(
        "mean-seq", "truncated-mean deviation radius at a constant level");
    ms->add_option("--n", bd.n, "sample count")->required();
    ms->add_option("--b", bd.b, "truncation level")->required();
    ms->add_option("--delta", bd.delta, "confidence delta in (0,1)")->required();
    ms->add_option("--p", bd.p, "moment order")->required();
    ms->add_option("--B", bd.B, "moment bound")->required();
    add_csv(ms);
    ms->callback([&]() {
      const double r =
          truncated_mean_dev_bound(bd.n, bd.b, bd.delta, MomentAssumption(bd.p, bd.B));
      cli_detail::emit_bound_table({{"radius", r, "-", "-"}}, bd.csv);
    });

    CLI::App* no = bound->add_subcommand(
        "nonobl", "static truncation levels for a known moment assumption");
    no->add_option("--xi1", bd.xi1, "mean weight")->capture_default_str();
    no->add_option("--xi2", bd.xi2, "CVaR weight")->capture_default_str();
    no->add_option("--alpha", bd.alpha, "confidence level")->capture_default_str();
    no->add_option("--gap2", bd.gap2, "smallest gap Delta[2]")->required();
    no->add_option("--p", bd.p, "moment order")->required();
    no->add_option("--B", bd.B, "moment bound")->required();
    no->add_option("--n", bd.n, "sample count for deviation bounds at the levels");
    add_csv(no);
    no->callback([&]() {
      const RiskObjective obj(bd.xi1, bd.xi2, ConfidenceLevel(bd.alpha));
      const NonObliviousSettings s = nonoblivious_settings(
          obj, GapProfile({bd.gap2}), MomentAssumption(bd.p, bd.B));
      std::vector<BoundRow> rows;
      if (s.b_mean) rows.push_back({"b_mean", *s.b_mean, "-", "-"});
      if (s.b_cvar) rows.push_back({"b_cvar", *s.b_cvar, "-", "-"});
      if (bd.n > 0) {
        if (s.b_mean)
          rows.push_back({"mean_bound",
                          nonoblivious_mean_dev_bound(bd.n, bd.gap2, *s.b_mean), "-",
                          "-"});
        if (s.b_cvar)
          rows.push_back({"cvar_bound",
                          nonoblivious_cvar_dev_bound(bd.n, bd.gap2,
                                                      ConfidenceLevel(bd.alpha),
                                                      *s.b_cvar),
                          "-", "-"});
      }
      cli_detail::emit_bound_table(rows, bd.csv);
    });
  }

  // ----- run --------------------------------------------------------------
  struct {
    std::string config, algo = "sr", trunc_mean = "none", trunc_cvar = "none", out;
    std::int64_t T = 0;
    std::uint64_t seed = 0;
    double xi1 = 0.0, xi2 = 0.0, alpha = 0.0;
    bool json = false;
  } rn;
  {
    CLI::App* sub =
        app.add_subcommand("run", "Execute one seeded GSR run and print the trace");
    sub->add_option("--config", rn.config, "JSON config file providing the arms")
        ->required();
    sub->add_option("--algo", rn.algo, "schedule: ue | sr")->capture_default_str();
    sub->add_option("--T", rn.T, "sampling budget")->required();
    CLI::Option* seed_opt = sub->add_option("--seed", rn.seed, "master seed");
    CLI::Option* xi1_opt = sub->add_option("--xi1", rn.xi1, "override mean weight");
    CLI::Option* xi2_opt = sub->add_option("--xi2", rn.xi2, "override CVaR weight");
    CLI::Option* alpha_opt =
        sub->add_option("--alpha", rn.alpha, "override confidence level");
    sub->add_option("--trunc-mean", rn.trunc_mean,
                    "mean truncation: none | fixed:<b> | grow:<q>")
        ->capture_default_str();
    sub->add_option("--trunc-cvar", rn.trunc_cvar,
                    "CVaR truncation: none | fixed:<b> | grow:<q>")
        ->capture_default_str();
    sub->add_flag("--json", rn.json, "print the trace as JSON instead of text");
    sub->add_option("--out", rn.out, "also write the JSON trace to this path");
    // option pointers by value: the callback outlives this block scope
    sub->callback([&, seed_opt, xi1_opt, xi2_opt, alpha_opt]() {
      const ConfigDocument doc = cli_detail::load_config(rn.config);
      if (!doc.objective) throw std::invalid_argument("config has no objective");
      const RiskObjective base = *doc.objective;
      const RiskObjective obj(
          xi1_opt->count() ? rn.xi1 : base.xi1, xi2_opt->count() ? rn.xi2 : base.xi2,
          alpha_opt->count() ? ConfidenceLevel(rn.alpha) : base.alpha);
      const BanditInstance inst(doc.arms, obj);
      const std::uint64_t fallback = doc.experiment ? doc.experiment->seed : 42;
      const std::uint64_t seed =
          cli_detail::resolve_seed(seed_opt->count() > 0, rn.seed, fallback);
      const PhaseSchedule sched =
          build_schedule(parse_algo(rn.algo), inst.K(), rn.T);
      const RunTrace trace =
          run_gsr(inst, sched, TruncationSchedule::parse(rn.trunc_mean),
                  TruncationSchedule::parse(rn.trunc_cvar), Seed::master(seed));
      if (rn.json)
        std::cout << cli_detail::trace_json(trace, rn.T).dump(2) << "\n";
      else
        cli_detail::print_trace_text(trace, rn.T);
      if (!rn.out.empty())
        detail::write_file(rn.out,
                           cli_detail::trace_json(trace, rn.T).dump(2) + "\n");
    });
  }

  // ----- sweep -------------------------------------------------------------
  struct {
    std::string config, out;
    int workers = 0;
    std::uint64_t seed = 0;
    bool no_resume = false, no_companions = false;
  } sw;
  {
    CLI::App* sub = app.add_subcommand(
        "sweep", "Monte-Carlo error-probability grid from a JSON config");
    sub->add_option("--config", sw.config, "JSON config file")->required();
    sub->add_option("--out", sw.out, "output CSV path")->required();
    sub->add_option("--workers", sw.workers, "worker threads (0 = one per core)")
        ->capture_default_str();
    CLI::Option* seed_opt =
        sub->add_option("--seed", sw.seed, "override the config master seed");
    sub->add_flag("--no-resume", sw.no_resume, "recompute even if rows exist");
    sub->add_flag("--no-companions", sw.no_companions,
                  "skip the per-label plot-data files");
    sub->callback([&, seed_opt]() {
      const ConfigDocument doc = cli_detail::load_config(sw.config);
      ExperimentSpec spec = doc.to_spec();
      spec.master_seed =
          cli_detail::resolve_seed(seed_opt->count() > 0, sw.seed, spec.master_seed);
      SweepOptions opt;
      opt.out_path = sw.out;
      opt.workers = sw.workers;
      opt.resume = !sw.no_resume;
      opt.companions = !sw.no_companions;
      cli_detail::report_sweep(sweep(spec, opt), sw.out);
    });
  }

  // ----- preset -------------------------------------------------------------
  struct {
    std::string out, grid;
    std::int64_t runs = 0;
    int workers = 0;
    std::uint64_t seed = 0;
    bool no_resume = false, no_companions = false;
  } pr;
  {
    CLI::App* preset =
        app.add_subcommand("preset", "Run a stock experiment (fig1 | fig3)");
    preset->require_subcommand(1);
    auto setup = [&](CLI::App* s, ExperimentSpec (*make)()) {
      s->add_option("--out", pr.out, "output CSV path")->required();
      s->add_option("--runs", pr.runs, "runs per grid point (default: preset value)");
      s->add_option("--grid", pr.grid, "override T grid, comma-separated");
      CLI::Option* seed_opt =
          s->add_option("--seed", pr.seed, "override the preset master seed");
      s->add_option("--workers", pr.workers, "worker threads (0 = one per core)")
          ->capture_default_str();
      s->add_flag("--no-resume", pr.no_resume, "recompute even if rows exist");
      s->add_flag("--no-companions", pr.no_companions,
                  "skip the per-label plot-data files");
      s->callback([&, make, seed_opt]() {
        ExperimentSpec spec = make();
        if (pr.runs > 0) spec.runs_per_point = pr.runs;
        if (!pr.grid.empty()) spec.T_grid = cli_detail::parse_grid(pr.grid);
        spec.master_seed =
            cli_detail::resolve_seed(seed_opt->count() > 0, pr.seed, spec.master_seed);
        SweepOptions opt;
        opt.out_path = pr.out;
        opt.workers = pr.workers;
        opt.resume = !pr.no_resume;
        opt.companions = !pr.no_companions;
        cli_detail::report_sweep(sweep(spec, opt), pr.out);
      });
    };
    setup(preset->add_subcommand("fig1", "10-arm Pareto/Exponential instance, "
                                         "mean and CVaR families"),
          &preset_fig1);
    setup(preset->add_subcommand("fig3", "2-arm heavy-tail instance, growth-"
                                         "exponent comparison"),
          &preset_fig3);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace riskbandit
