#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "framelet/errors.hpp"
#include "framelet/experiment.hpp"

namespace framelet {

/*
 * Report serialization. The CSV layout is a stable external contract:
 * byte-identical for a fixed (config, seed) regardless of thread count,
 * except for the wall_ms column. Floats are printed with %.17g so values
 * round-trip exactly.
 */

inline constexpr const char* kTrialCsvHeader =
    "trial,N,delta,lambda_l2,theta_l2,theta_lalpha,rel_error,wall_ms";

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_ms(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string trial_row(const TrialRecord& r, char sep) {
  std::ostringstream os;
  os << r.trial << sep << r.N << sep << fmt_g17(r.delta) << sep
     << fmt_g17(r.lambda_l2) << sep << fmt_g17(r.theta_l2) << sep
     << fmt_g17(r.theta_lalpha) << sep << fmt_g17(r.rel_error) << sep
     << fmt_ms(r.wall_ms);
  return os.str();
}

}  // namespace detail

inline std::string to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << kTrialCsvHeader << "\n";
  for (const auto& r : records) os << detail::trial_row(r, ',') << "\n";
  return os.str();
}

// Whitespace-separated table for plotting tools; same columns as the CSV.
inline std::string to_dat(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "# " << kTrialCsvHeader << "\n";
  for (const auto& r : records) os << detail::trial_row(r, ' ') << "\n";
  return os.str();
}

inline nlohmann::json to_json(const TrialRecord& r) {
  return nlohmann::json{{"trial", r.trial},
                        {"N", r.N},
                        {"delta", r.delta},
                        {"lambda_l2", r.lambda_l2},
                        {"theta_l2", r.theta_l2},
                        {"theta_lalpha", r.theta_lalpha},
                        {"rel_error", r.rel_error},
                        {"wall_ms", r.wall_ms}};
}

inline nlohmann::json to_json(const LevelSummary& s) {
  return nlohmann::json{{"N", s.N},       {"delta", s.delta},
                        {"trials", s.trials}, {"mean", s.mean},
                        {"stddev", s.stddev}, {"min", s.min},
                        {"max", s.max}};
}

inline nlohmann::json to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["id"] = rep.id;
  j["generator"] = rep.generator_id;
  j["function"] = rep.function_id;
  j["seed"] = rep.seed;
  j["records"] = nlohmann::json::array();
  for (const auto& r : rep.records) j["records"].push_back(to_json(r));
  j["summaries"] = nlohmann::json::array();
  for (const auto& s : rep.summaries) j["summaries"].push_back(to_json(s));
  j["warnings"] = rep.warnings;
  if (rep.rate) {
    nlohmann::json rj;
    rj["slope"] = rep.rate->slope;
    rj["residual_rms"] = rep.rate->residual_rms;
    rj["exact_floor"] = rep.rate->exact_floor;
    rj["points"] = nlohmann::json::array();
    for (const auto& p : rep.rate->points)
      rj["points"].push_back({{"level", p.level}, {"error", p.error}});
    j["rate"] = rj;
  }
  if (rep.theoretical_rate) j["theoretical_rate"] = *rep.theoretical_rate;
  return j;
}

inline nlohmann::json to_json(const JitterSweepReport& rep) {
  nlohmann::json j;
  j["id"] = rep.id;
  j["N"] = rep.N;
  j["seed"] = rep.seed;
  j["points"] = nlohmann::json::array();
  for (const auto& p : rep.points)
    j["points"].push_back({{"delta", p.delta},
                           {"mean", p.mean},
                           {"stddev", p.stddev},
                           {"excess", p.excess}});
  j["records"] = nlohmann::json::array();
  for (const auto& r : rep.records) j["records"].push_back(to_json(r));
  j["warnings"] = rep.warnings;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw resource_error("cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw resource_error("failed while writing '" + path + "'");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("id")) cfg.id = j.at("id").get<std::string>();
    if (j.contains("generator"))
      cfg.generator_id = j.at("generator").get<std::string>();
    if (j.contains("function"))
      cfg.function_id = j.at("function").get<std::string>();

    if (j.contains("domain")) {
      std::vector<double> lo, hi;
      for (const auto& axis : j.at("domain")) {
        if (!axis.is_array() || axis.size() != 2)
          throw config_error("config: each domain axis needs [lo, hi]");
        lo.push_back(axis.at(0).get<double>());
        hi.push_back(axis.at(1).get<double>());
      }
      cfg.domain = RealBox(std::move(lo), std::move(hi));
    }
    if (j.contains("dilation"))
      cfg.dilation =
          j.at("dilation").get<std::vector<std::vector<std::int64_t>>>();
    if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<int>>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("resolution"))
      cfg.resolution = j.at("resolution").get<double>();
    if (j.contains("truncation_radius"))
      cfg.truncation_radius = j.at("truncation_radius").get<double>();
    if (j.contains("s")) cfg.s = j.at("s").get<double>();
    if (j.contains("varsigma")) cfg.varsigma = j.at("varsigma").get<double>();
    if (j.contains("padded_error_domain"))
      cfg.padded_error_domain = j.at("padded_error_domain").get<bool>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();

    if (j.contains("jitter")) {
      const auto& jj = j.at("jitter");
      if (jj.contains("type") && jj.at("type").get<std::string>() != "uniform")
        throw config_error("config: unsupported jitter type '" +
                           jj.at("type").get<std::string>() + "'");
      if (jj.contains("delta")) cfg.jitter.delta = jj.at("delta").get<double>();
      if (jj.contains("alpha")) cfg.jitter.alpha = jj.at("alpha").get<double>();
      if (jj.contains("seed"))
        cfg.jitter.seed = jj.at("seed").get<std::uint64_t>();
      if (jj.contains("lambda")) {
        const auto& lam = jj.at("lambda");
        if (lam.is_string()) {
          cfg.jitter.lambda_mode = lam.get<std::string>();
        } else if (lam.is_array()) {
          cfg.jitter.lambda_mode = "fixed";
          cfg.jitter.lambda_fixed = lam.get<std::vector<double>>();
        } else {
          throw config_error("config: jitter.lambda must be a mode string or "
                             "an offset vector");
        }
      }
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string("config: malformed JSON: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw resource_error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error(std::string("config: JSON parse failure in '") + path +
                       "': " + e.what());
  }
  return config_from_json(j);
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["id"] = cfg.id;
  j["generator"] = cfg.generator_id;
  j["function"] = cfg.function_id;
  j["domain"] = nlohmann::json::array();
  for (int i = 0; i < cfg.domain.dim(); ++i)
    j["domain"].push_back({cfg.domain.lo[static_cast<std::size_t>(i)],
                           cfg.domain.hi[static_cast<std::size_t>(i)]});
  if (!cfg.dilation.empty()) j["dilation"] = cfg.dilation;
  j["levels"] = cfg.levels;
  j["trials"] = cfg.trials;
  j["resolution"] = cfg.resolution;
  j["truncation_radius"] = cfg.truncation_radius;
  if (cfg.s) j["s"] = *cfg.s;
  if (cfg.varsigma) j["varsigma"] = *cfg.varsigma;
  j["padded_error_domain"] = cfg.padded_error_domain;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  nlohmann::json jj;
  jj["type"] = "uniform";
  jj["delta"] = cfg.jitter.delta;
  jj["alpha"] = cfg.jitter.alpha;
  if (cfg.jitter.lambda_mode == "fixed")
    jj["lambda"] = cfg.jitter.lambda_fixed;
  else
    jj["lambda"] = cfg.jitter.lambda_mode;
  if (cfg.jitter.seed) jj["seed"] = *cfg.jitter.seed;
  j["jitter"] = jj;
  return j;
}

}  // namespace framelet
