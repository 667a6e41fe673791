#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "framelet/box.hpp"
#include "framelet/errors.hpp"
#include "framelet/lattice.hpp"
#include "framelet/rng.hpp"

namespace framelet {

/*
 * Clustered perturbations of sampling indices.
 *
 * Each lattice index k inside a box carries a displacement eps_k = theta_k +
 * lambda: a global offset lambda shared by all nodes plus a per-node scatter
 * theta_k. The scatter is measured in the discrete norms
 *
 *   ||theta||_{l^p}    = (sum_k ||theta_k||_2^p)^(1/p)
 *   ||theta||_mixed    = max( ||theta||_{l^2}, ||theta||_{l^alpha}^(alpha/2) )
 *
 * with the cluster exponent alpha constrained to (0, 2); pairings with a
 * smoothness s additionally require alpha < 2s - d, checked where the pair
 * actually meets (exponent formulas, scale levels, harness warnings).
 */
struct PerturbationSequence {
  IndexBox box;
  std::vector<double> lambda;  // shared offset, length d
  std::vector<double> theta;   // per-node scatter, flattened box x d
  double alpha = 1.0;

  PerturbationSequence() = default;
  PerturbationSequence(IndexBox box_, std::vector<double> lambda_,
                       std::vector<double> theta_, double alpha_)
      : box(std::move(box_)),
        lambda(std::move(lambda_)),
        theta(std::move(theta_)),
        alpha(alpha_) {
    const int d = box.dim();
    if (static_cast<int>(lambda.size()) != d)
      throw argument_error("perturbation: lambda has length " +
                           std::to_string(lambda.size()) + ", box dimension is " +
                           std::to_string(d));
    if (theta.size() != static_cast<std::size_t>(box.cardinality()) *
                            static_cast<std::size_t>(d))
      throw argument_error("perturbation: theta storage does not match box");
    if (!(alpha > 0.0 && alpha < 2.0))
      throw argument_error("perturbation: alpha = " + std::to_string(alpha) +
                           " outside (0, 2)");
    for (double v : theta)
      if (!std::isfinite(v)) throw data_error("perturbation: non-finite theta");
    for (double v : lambda)
      if (!std::isfinite(v)) throw data_error("perturbation: non-finite lambda");
  }

  int dim() const { return box.dim(); }

  // theta_k for index k inside the box (zero scatter outside).
  std::vector<double> theta_at(const std::vector<std::int64_t>& k) const {
    std::vector<double> out(static_cast<std::size_t>(dim()), 0.0);
    if (!box.contains(k)) return out;
    const std::int64_t off = box.flatten(k) * dim();
    for (int i = 0; i < dim(); ++i)
      out[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(off + i)];
    return out;
  }

  // Full displacement eps_k = theta_k + lambda.
  std::vector<double> eps_at(const std::vector<std::int64_t>& k) const {
    auto out = theta_at(k);
    for (int i = 0; i < dim(); ++i)
      out[static_cast<std::size_t>(i)] += lambda[static_cast<std::size_t>(i)];
    return out;
  }

  double lambda_l2() const {
    double s = 0.0;
    for (double v : lambda) s += v * v;
    return std::sqrt(s);
  }
};

// (sum_k ||theta_k||_2^p)^(1/p) over the stored box, accumulated in row-major
// index order.
inline double lp_norm(const PerturbationSequence& seq, double p) {
  if (!(p > 0.0)) throw argument_error("lp_norm: exponent must be positive");
  const int d = seq.dim();
  const std::int64_t card = seq.box.cardinality();
  double acc = 0.0;
  for (std::int64_t c = 0; c < card; ++c) {
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double v = seq.theta[static_cast<std::size_t>(c * d + i)];
      n2 += v * v;
    }
    acc += std::pow(std::sqrt(n2), p);
  }
  return std::pow(acc, 1.0 / p);
}

inline double l2_norm(const PerturbationSequence& seq) { return lp_norm(seq, 2.0); }

inline double lalpha_norm(const PerturbationSequence& seq) {
  return lp_norm(seq, seq.alpha);
}

inline double mixed_norm(const PerturbationSequence& seq) {
  return std::max(l2_norm(seq), std::pow(lalpha_norm(seq), seq.alpha / 2.0));
}

/*
 * I.i.d. uniform scatter on [-delta, delta]^d for every node of the box, plus
 * an optional shared offset drawn uniformly from the same range. Draws are
 * counter-based: node k, axis i consumes counter flatten(k)*d + i of the
 * theta substream, so the sequence is reproducible for a given (seed, box)
 * on any thread count, and sweeping delta rescales the same unit draws.
 */
inline PerturbationSequence generate_uniform_jitter(
    const IndexBox& box, double delta, double alpha, std::uint64_t seed,
    bool shared_offset = false, double offset_delta = -1.0) {
  if (delta < 0.0)
    throw argument_error("generate_uniform_jitter: delta must be >= 0");
  const int d = box.dim();
  const std::int64_t card = box.cardinality();
  const std::uint64_t theta_key = subkey(seed, 1);
  const std::uint64_t lambda_key = subkey(seed, 2);

  std::vector<double> theta(static_cast<std::size_t>(card * d));
  for (std::int64_t c = 0; c < card; ++c)
    for (int i = 0; i < d; ++i)
      theta[static_cast<std::size_t>(c * d + i)] =
          delta * counter_uniform_sym(theta_key,
                                      static_cast<std::uint64_t>(c * d + i));

  std::vector<double> lambda(static_cast<std::size_t>(d), 0.0);
  if (shared_offset) {
    const double range = offset_delta >= 0.0 ? offset_delta : delta;
    for (int i = 0; i < d; ++i)
      lambda[static_cast<std::size_t>(i)] =
          range * counter_uniform_sym(lambda_key, static_cast<std::uint64_t>(i));
  }
  return PerturbationSequence(box, std::move(lambda), std::move(theta), alpha);
}

// Smallest refinement level at which the perturbation theory applies:
// ceil( (2s + 2 - alpha) / (2 - alpha) * log_m d ). Zero when d = 1.
inline int min_scale_level(double s, double alpha, int d, double m) {
  if (d < 1) throw argument_error("min_scale_level: d must be >= 1");
  if (!(m > 1.0)) throw argument_error("min_scale_level: m must be > 1");
  if (!(s > d / 2.0))
    throw argument_error("min_scale_level: requires s > d/2, got s = " +
                         std::to_string(s));
  if (!(alpha > 0.0 && alpha < 2.0))
    throw argument_error("min_scale_level: alpha = " + std::to_string(alpha) +
                         " outside (0, 2)");
  const double x =
      (2.0 * s + 2.0 - alpha) / (2.0 - alpha) * std::log(static_cast<double>(d)) /
      std::log(m);
  // Guard against ceil() lifting an exact integer contaminated by rounding.
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

// Cardinality proxy for the perturbed node set of one level:
// floor( sqrt(d)||lambda||_2 + sqrt(d)||theta||_{l^2} + 2 sqrt(d) m^N )^d.
inline std::uint64_t relative_separation_bound(const PerturbationSequence& seq,
                                               const DilationScheme& scheme,
                                               int N) {
  if (scheme.d != seq.dim())
    throw argument_error("relative_separation_bound: dimension mismatch");
  if (N < 0) throw argument_error("relative_separation_bound: N must be >= 0");
  const double rd = std::sqrt(static_cast<double>(scheme.d));
  const double base = rd * seq.lambda_l2() + rd * l2_norm(seq) +
                      2.0 * rd * std::pow(scheme.m, N);
  const double f = std::floor(base);
  const double powed = std::pow(f, scheme.d);
  if (!(powed < 9.2e18))
    throw resource_error("relative_separation_bound: value overflows 64-bit range");
  return static_cast<std::uint64_t>(powed + 0.5);
}

}  // namespace framelet
