#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "framelet/errors.hpp"
#include "framelet/generator.hpp"

namespace framelet {

/*
 * Weighted alias sum of a generator on the 2 pi lattice:
 *
 *   B_s(xi) = sum_{k in Z^d} |phi_hat(xi + 2 pi k)|^2 (1 + ||xi + 2 pi k||^2)^s
 *
 * evaluated as a partial sum over ||k||_inf <= K plus a certified remainder
 * bound. 2 pi periodic in each coordinate; band edges of the band-limited
 * atom are counted half-open so every frequency enters exactly once.
 *
 * Convergence: the hat atom decays like |u|^-2 in frequency, so its series
 * requires s < 3/2 (and the certified remainder additionally integrates a
 * |u|^(2s-4) envelope). The band-limited atom has a single alias per axis
 * and a zero remainder once K >= 1.
 */

struct BracketValue {
  double value = 0.0;
  double remainder = 0.0;  // certified bound on the dropped tail
};

namespace detail {

// Tail bound for the 1-D hat atom: sum over |k| > K of
// |phi_hat(xi + 2 pi k)|^2 (1 + (xi + 2 pi k)^2)^s with |xi| <= pi,
// using |phi_hat(u)|^2 <= (2/|u|)^4.
inline double bspline2_bracket_tail(double s, std::int64_t K) {
  if (s >= 1.5)
    throw argument_error("bracket_product: series diverges for s >= 3/2");
  double tail = 0.0;
  const std::int64_t kExplicit = K + 2000;
  for (std::int64_t k = K + 1; k <= kExplicit; ++k) {
    const double lo = 2.0 * M_PI * static_cast<double>(k) - M_PI;
    const double hi = 2.0 * M_PI * static_cast<double>(k) + M_PI;
    const double w = s >= 0.0 ? std::pow(1.0 + hi * hi, s)
                              : std::pow(1.0 + lo * lo, s);
    tail += 2.0 * 16.0 / (lo * lo * lo * lo) * w;
  }
  // Integral test beyond the explicit block: for x >= 1,
  // 2 pi x - pi >= pi x and 1 + (2 pi x + pi)^2 <= 10 pi^2 x^2.
  const double Kp = static_cast<double>(kExplicit);
  if (s >= 0.0) {
    tail += 2.0 * 16.0 * std::pow(10.0, s) * std::pow(M_PI, 2.0 * s - 4.0) *
            std::pow(Kp, 2.0 * s - 3.0) / (3.0 - 2.0 * s);
  } else {
    tail += 2.0 * 16.0 * std::pow(M_PI, -4.0) * std::pow(Kp, -3.0) / 3.0;
  }
  return tail;
}

inline BracketValue bracket_1d(Atom atom, double s, double xi, std::int64_t K) {
  // Reduce to [-pi, pi]; the infinite sum is 2 pi periodic.
  const double xr = std::remainder(xi, 2.0 * M_PI);
  double value = 0.0;
  for (std::int64_t k = -K; k <= K; ++k) {
    const double u = xr + 2.0 * M_PI * static_cast<double>(k);
    const double f2 = atom_fourier_sq_ae(atom, u);
    if (f2 != 0.0) value += f2 * std::pow(1.0 + u * u, s);
  }
  BracketValue out;
  out.value = value;
  out.remainder = atom == Atom::BSpline2 ? bspline2_bracket_tail(s, K) : 0.0;
  return out;
}

}  // namespace detail

inline BracketValue bracket_product(const Generator& g, double s,
                                    const std::vector<double>& xi,
                                    std::int64_t K = 200) {
  const int d = g.dim();
  if (static_cast<int>(xi.size()) != d)
    throw argument_error("bracket_product: point dimension mismatch");
  if (K < 1) throw argument_error("bracket_product: K must be >= 1");

  if (d == 1)
    return detail::bracket_1d(g.factors()[0], s, xi[0], K);

  bool all_sinc = true;
  for (Atom a : g.factors()) all_sinc = all_sinc && a == Atom::Sinc;

  if (all_sinc) {
    // Exactly one alias per axis survives; the sum is finite for any s.
    double value = 0.0;
    std::vector<std::int64_t> k(static_cast<std::size_t>(d), -K);
    bool done = false;
    while (!done) {
      double f2 = 1.0, n2 = 0.0;
      for (int i = 0; i < d; ++i) {
        const double u =
            std::remainder(xi[static_cast<std::size_t>(i)], 2.0 * M_PI) +
            2.0 * M_PI * static_cast<double>(k[static_cast<std::size_t>(i)]);
        f2 *= detail::atom_fourier_sq_ae(Atom::Sinc, u);
        n2 += u * u;
      }
      if (f2 != 0.0) value += f2 * std::pow(1.0 + n2, s);
      for (int i = d - 1; i >= 0; --i) {
        if (++k[static_cast<std::size_t>(i)] <= K) break;
        k[static_cast<std::size_t>(i)] = -K;
        if (i == 0) done = true;
      }
    }
    return {value, 0.0};
  }

  if (s != 0.0) {
    // The weighted multi-axis series only factorizes at s = 0 when a compact
    // atom is present; other weights would need an uncertified remainder.
    throw unsupported_error(
        "bracket_product: generators with compact atoms support only s = 0 "
        "in dimension >= 2");
  }

  // s = 0 in d >= 2: the alias sum factorizes axis by axis; combine the
  // per-axis value/remainder intervals into a product interval.
  double value = 1.0, upper = 1.0;
  for (int i = 0; i < d; ++i) {
    const auto b = detail::bracket_1d(g.factors()[static_cast<std::size_t>(i)],
                                      0.0, xi[static_cast<std::size_t>(i)], K);
    value *= b.value;
    upper *= b.value + b.remainder;
  }
  return {value, upper - value};
}

/*
 * Certified upper bound for sup over xi of the s = 0 alias sum, taken on a
 * dense per-axis grid with Lipschitz padding (grid max + L h / 2, where L is
 * the atom's certified derivative bound). Factorizes across axes at s = 0.
 */
inline double bracket0_sup(const Generator& g, std::int64_t grid_nodes = 4096,
                           std::int64_t K = 200) {
  double sup = 1.0;
  const double h = 2.0 * M_PI / static_cast<double>(grid_nodes);
  for (int i = 0; i < g.dim(); ++i) {
    const Atom atom = g.factors()[static_cast<std::size_t>(i)];
    double axis_sup = 0.0;
    for (std::int64_t j = 0; j < grid_nodes; ++j) {
      const auto b = detail::bracket_1d(atom, 0.0, h * static_cast<double>(j), K);
      axis_sup = std::max(axis_sup, b.value + b.remainder);
    }
    axis_sup += g.bracket0_lipschitz(i) * h / 2.0;
    sup *= axis_sup;
  }
  return sup;
}

}  // namespace framelet
