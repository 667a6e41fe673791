#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framelet/approximant.hpp"
#include "framelet/bounds.hpp"
#include "framelet/box.hpp"
#include "framelet/errors.hpp"
#include "framelet/generator.hpp"
#include "framelet/jitter.hpp"
#include "framelet/lattice.hpp"
#include "framelet/norms.hpp"
#include "framelet/parallel.hpp"
#include "framelet/rate.hpp"
#include "framelet/rng.hpp"
#include "framelet/test_function.hpp"

namespace framelet {

/*
 * Experiment driver: reconstructs a reference function from (possibly
 * jittered) samples across refinement levels and trials, and reports
 * relative L2 errors plus the perturbation norms that entered each trial.
 *
 * Reproducibility contract: every record is a pure function of
 * (config, seed); the per-trial stream is keyed by (seed, trial, level), all
 * quadratures accumulate in fixed chunk order, and trials are assembled into
 * slots indexed by (level, trial). Outputs are byte-identical for any thread
 * count; only wall_ms varies between runs.
 */

struct JitterSpec {
  double delta = 0.0;
  // "zero", "uniform" (offset range = delta), "uniform:<c>" (fixed range c),
  // or an explicit offset vector.
  std::string lambda_mode = "zero";
  std::vector<double> lambda_fixed;
  double alpha = 0.5;
  std::optional<std::uint64_t> seed;
};

struct ExperimentConfig {
  std::string id = "experiment";
  std::string generator_id = "bspline2";
  std::string function_id = "exp-abs";
  RealBox domain{{-1.0}, {1.0}};
  std::vector<std::vector<std::int64_t>> dilation;  // empty = 2 I_d
  std::vector<int> levels{2, 3, 4};
  int trials = 1;
  JitterSpec jitter;
  double resolution = 0.0;         // cells per unit; 0 = auto (4 m^N, capped)
  double truncation_radius = 0.0;  // 0 = auto (domain-proportional per level)
  std::optional<double> s;
  std::optional<double> varsigma;
  bool padded_error_domain = false;
  std::string out;  // default CSV path for CLI runs; empty = stdout only
};

struct TrialRecord {
  int trial = 0;
  int N = 0;
  double delta = 0.0;
  double lambda_l2 = 0.0;
  double theta_l2 = 0.0;
  double theta_lalpha = 0.0;
  double rel_error = 0.0;
  double wall_ms = 0.0;
};

struct LevelSummary {
  int N = 0;
  double delta = 0.0;
  int trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct ExperimentReport {
  std::string id;
  std::string generator_id;
  std::string function_id;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  std::vector<LevelSummary> summaries;
  std::vector<std::string> warnings;
  std::optional<RateReport> rate;
  std::optional<double> theoretical_rate;
};

inline constexpr std::int64_t kQuadratureCellGuard = std::int64_t{1} << 24;

// Truncation-window growth used when no explicit radius is pinned: pad the
// domain image by 1.225 x half-width x m^N so every evaluation point keeps a
// deep tail of translates on both sides.
inline constexpr double kAutoRadiusRatio = 89.0 / 40.0 - 1.0;

namespace detail {

inline DilationScheme scheme_for(const ExperimentConfig& cfg) {
  const int d = cfg.domain.dim();
  if (cfg.dilation.empty()) {
    std::vector<std::vector<std::int64_t>> rows(
        static_cast<std::size_t>(d),
        std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 2;
    return certify_isotropic(rows);
  }
  return certify_isotropic(cfg.dilation);
}

inline Generator generator_for_level(const ExperimentConfig& cfg,
                                     const DilationScheme& scheme, int N) {
  double radius = cfg.truncation_radius;
  if (radius <= 0.0)
    radius = std::max(1.0, kAutoRadiusRatio * cfg.domain.max_halfwidth() *
                               std::pow(scheme.m, N));
  return parse_generator(cfg.generator_id, radius);
}

inline void validate_config(const ExperimentConfig& cfg) {
  const int d = cfg.domain.dim();
  if (d < 1 || d > 3) throw config_error("config: domain dimension must be 1..3");
  for (int i = 0; i < d; ++i)
    if (!(cfg.domain.width(i) > 0.0))
      throw config_error("config: domain is degenerate on axis " +
                         std::to_string(i));
  if (cfg.levels.empty()) throw config_error("config: no levels given");
  for (int N : cfg.levels)
    if (N < 0 || N > 30)
      throw config_error("config: level " + std::to_string(N) +
                         " outside 0..30");
  if (cfg.trials < 1) throw config_error("config: trials must be >= 1");
  if (cfg.jitter.delta < 0.0) throw config_error("config: delta must be >= 0");
  if (!(cfg.jitter.alpha > 0.0 && cfg.jitter.alpha < 2.0))
    throw config_error("config: jitter alpha must lie in (0, 2)");
  if (cfg.resolution < 0.0) throw config_error("config: negative resolution");

  Generator gen = parse_generator(cfg.generator_id);
  if (gen.dim() != d)
    throw config_error("config: generator '" + cfg.generator_id + "' is " +
                       std::to_string(gen.dim()) + "-dimensional, domain is " +
                       std::to_string(d) + "-dimensional");
  TestFunction f = make_test_function(cfg.function_id, d);

  if (cfg.jitter.lambda_mode.rfind("uniform:", 0) == 0) {
    try {
      if (std::stod(cfg.jitter.lambda_mode.substr(8)) < 0.0)
        throw config_error("config: negative offset range");
    } catch (const config_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error("config: malformed lambda mode '" +
                         cfg.jitter.lambda_mode + "'");
    }
  } else if (cfg.jitter.lambda_mode != "zero" &&
             cfg.jitter.lambda_mode != "uniform" &&
             cfg.jitter.lambda_mode != "fixed") {
    throw config_error("config: unknown lambda mode '" +
                       cfg.jitter.lambda_mode + "'");
  }
  if (cfg.jitter.lambda_mode == "fixed" &&
      static_cast<int>(cfg.jitter.lambda_fixed.size()) != d)
    throw config_error("config: fixed offset vector has wrong dimension");

  if (cfg.s) {
    if (!(*cfg.s > d / 2.0))
      throw config_error("config: declared s must exceed d/2");
    // The (s, alpha) pairing constraint binds only when a perturbation is
    // actually in force; unjittered sweeps ignore alpha entirely.
    if (cfg.jitter.delta > 0.0 || cfg.jitter.lambda_mode != "zero") {
      try {
        check_alpha_pairing(*cfg.s, cfg.jitter.alpha, d);
      } catch (const argument_error& e) {
        throw config_error(std::string("config: declared (s, alpha) pair is "
                                       "inconsistent: ") + e.what());
      }
    }
    if (cfg.varsigma && !(*cfg.varsigma > *cfg.s))
      throw config_error("config: declared varsigma must exceed s");
  }
}

inline PerturbationSequence make_perturbation(const ExperimentConfig& cfg,
                                              const IndexBox& box,
                                              std::uint64_t trial_seed) {
  const int d = box.dim();
  const auto& j = cfg.jitter;
  if (j.lambda_mode == "zero")
    return generate_uniform_jitter(box, j.delta, j.alpha, trial_seed, false);
  if (j.lambda_mode == "uniform")
    return generate_uniform_jitter(box, j.delta, j.alpha, trial_seed, true);
  if (j.lambda_mode.rfind("uniform:", 0) == 0) {
    const double range = std::stod(j.lambda_mode.substr(8));
    return generate_uniform_jitter(box, j.delta, j.alpha, trial_seed, true, range);
  }
  // fixed offset vector
  auto seq = generate_uniform_jitter(box, j.delta, j.alpha, trial_seed, false);
  for (int i = 0; i < d; ++i)
    seq.lambda[static_cast<std::size_t>(i)] =
        j.lambda_fixed[static_cast<std::size_t>(i)];
  return seq;
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       std::uint64_t seed) {
  detail::validate_config(cfg);
  const int d = cfg.domain.dim();
  const DilationScheme scheme = detail::scheme_for(cfg);
  const TestFunction f = make_test_function(cfg.function_id, d);

  ExperimentReport report;
  report.id = cfg.id;
  report.generator_id = cfg.generator_id;
  report.function_id = cfg.function_id;
  report.seed = seed;

  // Per-level setup: generator instance, sample box, quadrature resolution,
  // error domain. Warnings are collected here so they appear once per level.
  std::vector<int> levels(cfg.levels);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  struct LevelSetup {
    int N;
    Generator gen;
    IndexBox box;
    double resolution;
    RealBox error_domain;
  };
  std::vector<LevelSetup> setups;
  std::optional<int> warn_level;
  if (cfg.s && (cfg.jitter.delta > 0.0 || cfg.jitter.lambda_mode != "zero"))
    warn_level = min_scale_level(*cfg.s, cfg.jitter.alpha, d, scheme.m);
  for (int N : levels) {
    Generator gen = detail::generator_for_level(cfg, scheme, N);
    IndexBox box =
        index_box_for_domain(scheme, N, cfg.domain, gen.support_intervals());

    double res = cfg.resolution;
    const double nyquist = 2.0 * std::pow(scheme.m, N);
    if (res <= 0.0) {
      res = 2.0 * nyquist;
      auto cells = [&](double r) {
        double c = 1.0;
        for (int i = 0; i < d; ++i) c *= std::ceil(cfg.domain.width(i) * r);
        return c;
      };
      bool capped = false;
      while (cells(res) > static_cast<double>(kQuadratureCellGuard) && res > 1.0) {
        res /= 2.0;
        capped = true;
      }
      if (capped)
        report.warnings.push_back(
            "level " + std::to_string(N) +
            ": auto quadrature resolution capped at " + std::to_string(res) +
            " cells/unit to fit the cell guard");
    } else if (res < nyquist) {
      report.warnings.push_back(
          "level " + std::to_string(N) + ": resolution " + std::to_string(res) +
          " cells/unit is below 2 m^N = " + std::to_string(nyquist) +
          "; error quadrature may alias the finest translates");
    }
    if (warn_level && N < *warn_level)
      report.warnings.push_back(
          "level " + std::to_string(N) +
          " is below the minimum perturbation-stable level " +
          std::to_string(*warn_level) + " for the declared (s, alpha)");

    RealBox err_dom = cfg.domain;
    if (cfg.padded_error_domain) {
      const auto sup = gen.support_intervals();
      std::vector<double> lo(err_dom.lo), hi(err_dom.hi);
      for (int i = 0; i < d; ++i) {
        const double pad = (sup[static_cast<std::size_t>(i)].second -
                            sup[static_cast<std::size_t>(i)].first) /
                           std::pow(scheme.m, N);
        lo[static_cast<std::size_t>(i)] -= pad;
        hi[static_cast<std::size_t>(i)] += pad;
      }
      err_dom = RealBox(std::move(lo), std::move(hi));
    }
    setups.push_back(LevelSetup{N, std::move(gen), std::move(box), res,
                                std::move(err_dom)});
  }

  const std::int64_t tasks =
      static_cast<std::int64_t>(setups.size()) * cfg.trials;
  report.records.resize(static_cast<std::size_t>(tasks));
  parallel_for_chunked(tasks, 1, [&](std::int64_t, std::int64_t b, std::int64_t e) {
    for (std::int64_t t = b; t < e; ++t) {
      const auto& setup = setups[static_cast<std::size_t>(t / cfg.trials)];
      const int trial = static_cast<int>(t % cfg.trials);
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t trial_seed =
          mix_seed(seed, static_cast<std::uint64_t>(trial),
                   static_cast<std::uint64_t>(setup.N));
      PerturbationSequence pert =
          detail::make_perturbation(cfg, setup.box, trial_seed);

      TrialRecord rec;
      rec.trial = trial;
      rec.N = setup.N;
      rec.delta = cfg.jitter.delta;
      rec.lambda_l2 = pert.lambda_l2();
      rec.theta_l2 = l2_norm(pert);
      rec.theta_lalpha = lalpha_norm(pert);

      Approximant approx =
          build_approximant(setup.gen, scheme, setup.N, std::move(pert), f);
      rec.rel_error =
          relative_l2_error(f, approx, setup.error_domain, setup.resolution);
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      report.records[static_cast<std::size_t>(t)] = rec;
    }
  });

  // Records are already ordered by (N, trial): levels were sorted above.
  for (const auto& setup : setups) {
    LevelSummary s;
    s.N = setup.N;
    s.delta = cfg.jitter.delta;
    s.trials = cfg.trials;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0, sum2 = 0.0;
    for (const auto& rec : report.records) {
      if (rec.N != setup.N) continue;
      sum += rec.rel_error;
      s.min = std::min(s.min, rec.rel_error);
      s.max = std::max(s.max, rec.rel_error);
    }
    s.mean = sum / cfg.trials;
    for (const auto& rec : report.records) {
      if (rec.N != setup.N) continue;
      sum2 += (rec.rel_error - s.mean) * (rec.rel_error - s.mean);
    }
    s.stddev = std::sqrt(sum2 / cfg.trials);
    report.summaries.push_back(s);
  }
  return report;
}

// Multi-level rate study: runs the experiment, fits the mean error per level,
// and attaches the closed-form exponent when the config declares (s,
// varsigma) and the generator has a finite sum-rule order.
inline ExperimentReport sweep_rate(const ExperimentConfig& cfg,
                                   std::uint64_t seed) {
  {
    std::vector<int> distinct(cfg.levels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    if (distinct.size() < 3)
      throw config_error("sweep_rate: need at least 3 distinct levels");
  }
  ExperimentReport report = run_experiment(cfg, seed);
  std::vector<RatePoint> pts;
  for (const auto& s : report.summaries)
    pts.push_back(RatePoint{s.N, s.mean});
  const DilationScheme scheme = detail::scheme_for(cfg);
  report.rate = rate_fit(pts, scheme.m);
  if (cfg.s && cfg.varsigma) {
    const Generator gen = parse_generator(cfg.generator_id);
    if (const auto order = gen.sum_rule_order()) {
      if (cfg.jitter.delta == 0.0)
        report.theoretical_rate = eta_exponent(*order, *cfg.s, *cfg.varsigma);
      else
        report.theoretical_rate =
            zeta_exponent(*cfg.s, *cfg.varsigma, cfg.jitter.alpha,
                          cfg.domain.dim());
    }
  }
  return report;
}

struct GridReconstruction {
  Grid grid;
  std::vector<double> reference;  // f at the grid nodes
  std::vector<double> values;     // reconstruction at the grid nodes
};

// Single reconstruction evaluated on a uniform grid over the config domain,
// for inspection and plotting. Uses the first configured level and the given
// trial's jitter stream, like run_experiment would.
inline GridReconstruction reconstruct_on_grid(const ExperimentConfig& cfg,
                                              std::uint64_t seed, int trial) {
  detail::validate_config(cfg);
  const int d = cfg.domain.dim();
  const DilationScheme scheme = detail::scheme_for(cfg);
  const TestFunction f = make_test_function(cfg.function_id, d);
  const int N = cfg.levels.front();
  const Generator gen = detail::generator_for_level(cfg, scheme, N);
  const IndexBox box =
      index_box_for_domain(scheme, N, cfg.domain, gen.support_intervals());

  double res = cfg.resolution;
  if (res <= 0.0) {
    res = 4.0 * std::pow(scheme.m, N);
    auto cells = [&](double r) {
      double c = 1.0;
      for (int i = 0; i < d; ++i) c *= std::ceil(cfg.domain.width(i) * r);
      return c;
    };
    while (cells(res) > static_cast<double>(kQuadratureCellGuard) && res > 1.0)
      res /= 2.0;
  }
  std::vector<std::int64_t> nodes(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    nodes[static_cast<std::size_t>(i)] = std::max<std::int64_t>(
        2, static_cast<std::int64_t>(std::ceil(cfg.domain.width(i) * res)) + 1);

  const std::uint64_t trial_seed =
      mix_seed(seed, static_cast<std::uint64_t>(trial),
               static_cast<std::uint64_t>(N));
  PerturbationSequence pert = detail::make_perturbation(cfg, box, trial_seed);
  const Approximant a = build_approximant(gen, scheme, N, std::move(pert), f);

  GridReconstruction out{Grid{cfg.domain, std::move(nodes)}, {}, {}};
  out.values = eval_approximant_grid(a, out.grid);
  const std::int64_t card = out.grid.cardinality();
  out.reference.resize(static_cast<std::size_t>(card));
  parallel_for_chunked(card, kDefaultChunk,
                       [&](std::int64_t, std::int64_t b, std::int64_t e) {
    for (std::int64_t c = b; c < e; ++c)
      out.reference[static_cast<std::size_t>(c)] = f.eval(out.grid.point(c));
  });
  return out;
}

struct JitterSweepPoint {
  double delta = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double excess = 0.0;  // mean minus the delta = 0 baseline mean
};

struct JitterSweepReport {
  std::string id;
  int N = 0;
  std::uint64_t seed = 0;
  std::vector<JitterSweepPoint> points;
  std::vector<TrialRecord> records;  // all deltas, ordered by (delta, trial)
  std::vector<std::string> warnings;
};

// Robustness study at a fixed level: reruns the experiment across jitter
// amplitudes (the list must contain the 0 baseline) and reports the mean
// error excess over that baseline.
inline JitterSweepReport sweep_jitter(const ExperimentConfig& cfg,
                                      std::uint64_t seed,
                                      std::vector<double> deltas) {
  if (cfg.levels.size() != 1)
    throw config_error("sweep_jitter: config must pin exactly one level");
  std::sort(deltas.begin(), deltas.end());
  if (deltas.empty() || deltas.front() != 0.0)
    throw config_error("sweep_jitter: delta list must include the 0 baseline");

  JitterSweepReport out;
  out.id = cfg.id;
  out.N = cfg.levels.front();
  out.seed = seed;
  double baseline = 0.0;
  for (double delta : deltas) {
    ExperimentConfig c = cfg;
    c.jitter.delta = delta;
    ExperimentReport rep = run_experiment(c, seed);
    for (const auto& w : rep.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) ==
          out.warnings.end())
        out.warnings.push_back(w);
    }
    const LevelSummary& s = rep.summaries.front();
    if (delta == 0.0) baseline = s.mean;
    out.points.push_back(
        JitterSweepPoint{delta, s.mean, s.stddev, s.mean - baseline});
    for (const auto& rec : rep.records) out.records.push_back(rec);
  }
  return out;
}

}  // namespace framelet
