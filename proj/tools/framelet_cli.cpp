// Command-line front end for the framelet reconstruction library.
//
// Subcommands: approx (single-level reconstruction trials), sweep-n
// (convergence-rate study over levels), sweep-jitter (robustness study over
// jitter amplitudes), experiment (JSON-configured run), bounds (closed-form
// exponents and constants), verify (self-check suites).
//
// Exit codes: 0 success, 2 configuration or usage error, 3 resource limit,
// 4 failed verification check.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framelet/framelet.hpp"

namespace {

using namespace framelet;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed,
                           const std::optional<std::uint64_t>& config_seed) {
  if (cli_seed) return *cli_seed;
  if (config_seed) return *config_seed;
  if (const char* env = std::getenv("FRAMELET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw config_error("FRAMELET_SEED is set but not a valid integer");
    }
  }
  return 0;
}

RealBox parse_domain(const std::string& text) {
  std::vector<double> lo, hi;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string axis = text.substr(pos, comma - pos);
    const std::size_t colon = axis.find(':');
    if (colon == std::string::npos)
      throw config_error("domain axis '" + axis + "' is not of the form lo:hi");
    try {
      lo.push_back(std::stod(axis.substr(0, colon)));
      hi.push_back(std::stod(axis.substr(colon + 1)));
    } catch (const std::exception&) {
      throw config_error("domain axis '" + axis + "' has non-numeric bounds");
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return RealBox(std::move(lo), std::move(hi));
}

struct OutputPaths {
  std::string csv;
  std::string json;
  std::string dat;
};

void add_output_options(CLI::App* sub, OutputPaths& out) {
  sub->add_option("--out", out.csv, "write trial records as CSV");
  sub->add_option("--json", out.json, "write the full report as JSON");
  sub->add_option("--dat", out.dat, "write trial records as a plotting table");
}

void emit_outputs(const OutputPaths& paths,
                  const std::vector<TrialRecord>& records,
                  const nlohmann::json& body) {
  if (!paths.csv.empty()) {
    write_text_file(paths.csv, to_csv(records));
    // A plot-ready table always accompanies the CSV.
    std::string dat = paths.dat;
    if (dat.empty()) {
      const std::size_t dot = paths.csv.find_last_of('.');
      dat = (dot == std::string::npos ? paths.csv : paths.csv.substr(0, dot)) +
            ".dat";
    }
    write_text_file(dat, to_dat(records));
  } else if (!paths.dat.empty()) {
    write_text_file(paths.dat, to_dat(records));
  }
  if (!paths.json.empty()) write_text_file(paths.json, body.dump(2) + "\n");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

void print_summaries(const ExperimentReport& rep) {
  std::printf("%-4s %-7s %-12s %-13s %-13s %-13s %-13s\n", "N", "trials",
              "delta", "mean", "stddev", "min", "max");
  for (const auto& s : rep.summaries)
    std::printf("%-4d %-7d %-12.6g %-13.6g %-13.6g %-13.6g %-13.6g\n", s.N,
                s.trials, s.delta, s.mean, s.stddev, s.min, s.max);
}

int run_report_command(const ExperimentConfig& cfg,
                       const std::optional<std::uint64_t>& cli_seed,
                       const OutputPaths& paths, bool fit_rate) {
  const std::uint64_t seed = resolve_seed(cli_seed, cfg.jitter.seed);
  ExperimentReport rep =
      fit_rate ? sweep_rate(cfg, seed) : run_experiment(cfg, seed);
  print_warnings(rep.warnings);
  std::printf("experiment '%s': generator %s, function %s, seed %" PRIu64 "\n",
              rep.id.c_str(), rep.generator_id.c_str(), rep.function_id.c_str(),
              rep.seed);
  print_summaries(rep);
  if (rep.rate) {
    std::printf("fitted rate: error ~ m^(-%.6g N), residual rms %.3g%s\n",
                rep.rate->slope, rep.rate->residual_rms,
                rep.rate->exact_floor ? " (errors at exactness floor)" : "");
    if (rep.theoretical_rate)
      std::printf("theoretical exponent: %.6g\n", *rep.theoretical_rate);
  }
  emit_outputs(paths, rep.records, to_json(rep));
  return 0;
}

void add_config_options(CLI::App* sub, ExperimentConfig& cfg,
                        std::string& domain_text) {
  sub->add_option("--generator", cfg.generator_id,
                  "generator id (sinc, bspline2, tensor:<id>^<d>)");
  sub->add_option("--function", cfg.function_id,
                  "reference function id (exp-abs, gauss, exp-abs-plus-gauss, "
                  "sinc-combo, const-one, linear)");
  sub->add_option("--domain", domain_text,
                  "sample/error domain, lo:hi per axis, comma separated");
  sub->add_option("--trials", cfg.trials, "independent trials per level");
  sub->add_option("--delta", cfg.jitter.delta, "scatter amplitude");
  sub->add_option("--alpha", cfg.jitter.alpha, "cluster exponent in (0, 2)");
  sub->add_option("--lambda", cfg.jitter.lambda_mode,
                  "shared offset mode: zero, uniform, uniform:<range>");
  sub->add_option("--radius", cfg.truncation_radius,
                  "band-limited truncation radius (0 = auto)");
  sub->add_option("--resolution", cfg.resolution,
                  "error-quadrature cells per unit (0 = auto)");
  sub->add_option("--s", cfg.s, "target smoothness (enables warnings/exponents)");
  sub->add_option("--varsigma", cfg.varsigma,
                  "declared smoothness of the reference function");
  sub->add_flag("--padded", cfg.padded_error_domain,
                "pad the error domain by one support width");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framelet: function reconstruction from perturbed samples"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> cli_seed;
  int threads = 0;
  app.add_option("--seed", cli_seed,
                 "base seed (overrides config and FRAMELET_SEED)");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  // approx
  auto* approx = app.add_subcommand(
      "approx", "reconstruct at one level and report relative L2 errors");
  ExperimentConfig approx_cfg;
  std::string approx_domain = "-1:1";
  int approx_level = 3;
  std::string approx_grid_out;
  OutputPaths approx_out;
  add_config_options(approx, approx_cfg, approx_domain);
  approx->add_option("--level", approx_level, "refinement level N");
  approx->add_option("--grid-out", approx_grid_out,
                     "write reconstruction grid values (x..., f, approx)");
  add_output_options(approx, approx_out);

  // sweep-n
  auto* sweepn = app.add_subcommand(
      "sweep-n", "convergence-rate study across refinement levels");
  ExperimentConfig sweepn_cfg;
  std::string sweepn_domain = "-1:1";
  std::vector<int> sweepn_levels{2, 3, 4, 5};
  OutputPaths sweepn_out;
  add_config_options(sweepn, sweepn_cfg, sweepn_domain);
  sweepn->add_option("--levels", sweepn_levels, "levels to sweep")
      ->delimiter(',');
  add_output_options(sweepn, sweepn_out);

  // sweep-jitter
  auto* sweepj = app.add_subcommand(
      "sweep-jitter", "error vs jitter amplitude at a fixed level");
  ExperimentConfig sweepj_cfg;
  std::string sweepj_domain = "-1:1";
  int sweepj_level = 3;
  std::vector<double> sweepj_deltas{0.0, 0.25, 0.5, 1.0};
  OutputPaths sweepj_out;
  add_config_options(sweepj, sweepj_cfg, sweepj_domain);
  sweepj->add_option("--level", sweepj_level, "refinement level N");
  sweepj->add_option("--deltas", sweepj_deltas,
                     "amplitudes to sweep (must include 0)")
      ->delimiter(',');
  add_output_options(sweepj, sweepj_out);

  // experiment
  auto* expcmd = app.add_subcommand(
      "experiment", "run a JSON-configured experiment");
  std::string config_path;
  bool exp_rate = false;
  OutputPaths exp_out;
  expcmd->add_option("--config", config_path, "experiment config JSON")
      ->required();
  expcmd->add_flag("--rate", exp_rate, "fit a convergence rate over the levels");
  add_output_options(expcmd, exp_out);

  // bounds
  auto* bounds = app.add_subcommand(
      "bounds", "closed-form exponents and constants for a parameter pack");
  BoundParams bp;
  std::string bounds_generator = "bspline2";
  std::string bounds_domain;
  double bounds_delta = 0.0;
  std::string bounds_json;
  bounds->add_option("--s", bp.s, "target smoothness");
  bounds->add_option("--t", bp.t, "dual-side smoothness offset");
  bounds->add_option("--varsigma", bp.varsigma, "declared smoothness");
  bounds->add_option("--kappa1", bp.kappa1, "sum-rule order of the mask");
  bounds->add_option("--alpha", bp.alpha, "cluster exponent");
  bounds->add_option("--d", bp.d, "dimension");
  bounds->add_option("--m", bp.m, "uniform expansion rate");
  bounds->add_option("--level", bp.N, "refinement level N");
  bounds->add_option("--generator", bounds_generator,
                     "generator for the stability constants");
  bounds->add_option("--domain", bounds_domain,
                     "domain for the node-count proxy (default [-1,1]^d)");
  bounds->add_option("--delta", bounds_delta,
                     "scatter amplitude for the node-count proxy");
  bounds->add_option("--json", bounds_json, "write the table as JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "run self-check suites");
  std::vector<std::string> suites = verify_suite_names();
  verify->add_option("--suite", suites, "suites to run (default: all)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    set_thread_count(threads);

    if (*approx) {
      approx_cfg.id = "approx";
      approx_cfg.domain = parse_domain(approx_domain);
      approx_cfg.levels = {approx_level};
      if (!approx_grid_out.empty()) {
        const std::uint64_t seed = resolve_seed(cli_seed, approx_cfg.jitter.seed);
        const GridReconstruction rec =
            reconstruct_on_grid(approx_cfg, seed, 0);
        std::string body = "# x... f approx\n";
        for (std::int64_t c = 0; c < rec.grid.cardinality(); ++c) {
          const auto x = rec.grid.point(c);
          std::string line;
          for (double v : x) line += detail::fmt_g17(v) + " ";
          line += detail::fmt_g17(rec.reference[static_cast<std::size_t>(c)]);
          line += " ";
          line += detail::fmt_g17(rec.values[static_cast<std::size_t>(c)]);
          body += line + "\n";
        }
        write_text_file(approx_grid_out, body);
      }
      return run_report_command(approx_cfg, cli_seed, approx_out, false);
    }

    if (*sweepn) {
      sweepn_cfg.id = "sweep-n";
      sweepn_cfg.domain = parse_domain(sweepn_domain);
      sweepn_cfg.levels = sweepn_levels;
      return run_report_command(sweepn_cfg, cli_seed, sweepn_out, true);
    }

    if (*sweepj) {
      sweepj_cfg.id = "sweep-jitter";
      sweepj_cfg.domain = parse_domain(sweepj_domain);
      sweepj_cfg.levels = {sweepj_level};
      const std::uint64_t seed = resolve_seed(cli_seed, sweepj_cfg.jitter.seed);
      JitterSweepReport rep = sweep_jitter(sweepj_cfg, seed, sweepj_deltas);
      print_warnings(rep.warnings);
      std::printf("jitter sweep '%s' at N = %d, seed %" PRIu64 "\n",
                  rep.id.c_str(), rep.N, rep.seed);
      std::printf("%-12s %-13s %-13s %-13s\n", "delta", "mean", "stddev",
                  "excess");
      for (const auto& p : rep.points)
        std::printf("%-12.6g %-13.6g %-13.6g %-13.6g\n", p.delta, p.mean,
                    p.stddev, p.excess);
      emit_outputs(sweepj_out, rep.records, to_json(rep));
      return 0;
    }

    if (*expcmd) {
      const ExperimentConfig cfg = load_config(config_path);
      if (exp_out.csv.empty()) exp_out.csv = cfg.out;
      return run_report_command(cfg, cli_seed, exp_out, exp_rate);
    }

    if (*bounds) {
      nlohmann::json j;
      j["params"] = {{"s", bp.s},         {"t", bp.t},
                     {"varsigma", bp.varsigma}, {"kappa1", bp.kappa1},
                     {"alpha", bp.alpha}, {"d", bp.d},
                     {"m", bp.m},         {"N", bp.N}};
      auto row = [&](const char* label, auto compute) {
        try {
          const double v = compute();
          std::printf("%-34s %.12g\n", label, v);
          j[label] = v;
        } catch (const error& e) {
          std::printf("%-34s n/a (%s)\n", label, e.what());
          j[label] = nullptr;
        }
      };
      row("uniform rate exponent eta", [&] { return eta_exponent(bp); });
      row("jittered rate exponent zeta", [&] { return zeta_exponent(bp); });
      row("minimum stable level",
          [&] { return static_cast<double>(
                    min_scale_level(bp.s, bp.alpha, bp.d, bp.m)); });
      row("lattice tail bound at J = N",
          [&] { return tail_sum_bound(bp.N, bp.s, bp.d, bp.m); });
      const Generator gen = parse_generator(bounds_generator);
      row("stability constant C3",
          [&] { return perturbation_constants(bp, gen).C3; });
      row("stability constant C2",
          [&] { return perturbation_constants(bp, gen).C2; });
      row("node-count proxy", [&] {
        const RealBox dom = bounds_domain.empty()
                                ? RealBox(std::vector<double>(bp.d, -1.0),
                                          std::vector<double>(bp.d, 1.0))
                                : parse_domain(bounds_domain);
        const DilationScheme scheme = certify_isotropic(
            [&] {
              std::vector<std::vector<std::int64_t>> rows(
                  static_cast<std::size_t>(bp.d),
                  std::vector<std::int64_t>(static_cast<std::size_t>(bp.d), 0));
              for (int i = 0; i < bp.d; ++i)
                rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
                    2;
              return rows;
            }());
        const IndexBox box = index_box_for_domain(
            scheme, bp.N, dom, gen.support_intervals());
        const std::uint64_t seed = resolve_seed(cli_seed, std::nullopt);
        const auto seq =
            generate_uniform_jitter(box, bounds_delta, bp.alpha, seed);
        return static_cast<double>(
            relative_separation_bound(seq, scheme, bp.N));
      });
      if (!bounds_json.empty()) write_text_file(bounds_json, j.dump(2) + "\n");
      return 0;
    }

    if (*verify) {
      int failures = 0, total = 0;
      for (const auto& name : suites) {
        for (const auto& r : run_verify_suite(name)) {
          ++total;
          if (!r.passed) ++failures;
          std::printf("[%s] %s: %s (%s)\n", r.passed ? " PASS " : " FAIL ",
                      r.suite.c_str(), r.name.c_str(), r.detail.c_str());
        }
      }
      std::printf("%d/%d checks passed\n", total - failures, total);
      return failures == 0 ? 0 : 4;
    }
  } catch (const resource_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
