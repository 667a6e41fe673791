#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "framelet/bracket.hpp"
#include "framelet/errors.hpp"
#include "framelet/generator.hpp"

namespace framelet {

/*
 * Closed-form error exponents and tail constants for sampled reconstructions
 * in H^s. Parameter names: s is the target smoothness, varsigma the declared
 * smoothness of the sampled function, kappa1 the number of sum rules of the
 * generator mask (kappa + 1), alpha the cluster exponent of the scatter,
 * d the dimension, m the uniform expansion rate, N the refinement level.
 */
struct BoundParams {
  double s = 1.0;
  double t = 0.0;  // dual-side smoothness offset; carried for reporting only
  double varsigma = 1.4;
  int kappa1 = 2;
  double alpha = 0.5;
  int d = 1;
  double m = 2.0;
  int N = 0;
};

// Uniform-sampling convergence exponent:
// eta = (kappa1 - s)(varsigma - s) / (kappa1 + varsigma - s).
inline double eta_exponent(int kappa1, double s, double varsigma) {
  if (!(s < varsigma))
    throw argument_error("eta_exponent: requires s < varsigma, got s = " +
                         std::to_string(s) + ", varsigma = " +
                         std::to_string(varsigma));
  if (!(varsigma <= static_cast<double>(kappa1)))
    throw argument_error(
        "eta_exponent: requires varsigma <= kappa1 (the declared smoothness "
        "cannot exceed the sum-rule order)");
  return (kappa1 - s) * (varsigma - s) / (kappa1 + varsigma - s);
}

inline double eta_exponent(const BoundParams& p) {
  return eta_exponent(p.kappa1, p.s, p.varsigma);
}

inline void check_alpha_pairing(double s, double alpha, int d) {
  const double cap = std::min(2.0 * s - static_cast<double>(d), 2.0);
  if (!(s > d / 2.0))
    throw argument_error("requires s > d/2, got s = " + std::to_string(s) +
                         ", d = " + std::to_string(d));
  if (!(alpha > 0.0 && alpha < cap))
    throw argument_error("alpha = " + std::to_string(alpha) +
                         " outside (0, min(2s - d, 2)) = (0, " +
                         std::to_string(cap) + ")");
}

// Jittered-sampling convergence exponent:
// zeta = min{ varsigma - s, 1, ((4s + (alpha-2)d)/(2s - alpha + 2) + d)/2 }.
inline double zeta_exponent(double s, double varsigma, double alpha, int d) {
  if (!(varsigma > s))
    throw argument_error("zeta_exponent: requires varsigma > s");
  check_alpha_pairing(s, alpha, d);
  const double third =
      ((4.0 * s + (alpha - 2.0) * d) / (2.0 * s - alpha + 2.0) + d) / 2.0;
  return std::min(std::min(varsigma - s, 1.0), third);
}

inline double zeta_exponent(const BoundParams& p) {
  return zeta_exponent(p.s, p.varsigma, p.alpha, p.d);
}

/*
 * Closed-form bound for the lattice tail sum_{||j||_2 >= m^J} ||j||_2^(-2s):
 *
 *   d^(1+s-d) 2^(2s) [ (2s-d+1)/(2s-d) + 2s/(2s-1) ] m^(-J(2s-d))
 *
 * valid for J >= log_m d, 2s > d and 2s > 1.
 */
inline double tail_sum_bound(double J, double s, int d, double m) {
  if (!(m > 1.0)) throw argument_error("tail_sum_bound: m must be > 1");
  if (!(2.0 * s > d))
    throw argument_error("tail_sum_bound: requires 2s > d");
  if (!(2.0 * s > 1.0))
    throw argument_error("tail_sum_bound: requires 2s > 1");
  const double jmin = std::log(static_cast<double>(d)) / std::log(m);
  if (J < jmin - 1e-12)
    throw argument_error("tail_sum_bound: requires J >= log_m d = " +
                         std::to_string(jmin));
  return std::pow(static_cast<double>(d), 1.0 + s - d) * std::pow(2.0, 2.0 * s) *
         ((2.0 * s - d + 1.0) / (2.0 * s - d) + 2.0 * s / (2.0 * s - 1.0)) *
         std::pow(m, -J * (2.0 * s - d));
}

struct TailSum {
  double value = 0.0;      // partial sum over m^J <= ||j||_2 <= radius
  double remainder = 0.0;  // certified bound on the part beyond the radius
};

/*
 * Direct enumeration of the same lattice tail over the shell
 * m^J <= ||j||_2 <= radius. The remainder bound covers ||j||_2 > radius by
 * the cube-covering integral test: each unit cube around such a j lies
 * outside the ball of radius R - sqrt(d)/2, and ||j|| >= ||x|| - sqrt(d)/2
 * on the cube, so the dropped sum is at most
 * integral over ||x|| > R - sqrt(d)/2 of (||x|| - sqrt(d)/2)^(-2s) dx.
 */
inline TailSum tail_sum_bruteforce(double J, double s, int d, double m,
                                   double radius) {
  if (!(2.0 * s > d))
    throw argument_error("tail_sum_bruteforce: series diverges for 2s <= d");
  if (!(m > 1.0)) throw argument_error("tail_sum_bruteforce: m must be > 1");
  if (d < 1 || d > 3)
    throw argument_error("tail_sum_bruteforce: dimension must be 1..3");
  const double start = std::pow(m, J);
  if (!(radius >= start))
    throw argument_error("tail_sum_bruteforce: radius must reach m^J = " +
                         std::to_string(start));
  const auto R = static_cast<std::int64_t>(std::floor(radius));
  const double ops = std::pow(2.0 * static_cast<double>(R) + 1.0, d);
  if (ops > 4e9)
    throw resource_error("tail_sum_bruteforce: " + std::to_string(ops) +
                         " lattice points exceed the enumeration budget; "
                         "shrink the radius");
  // Tiny slack keeps exact boundary hits (e.g. ||j|| = m^J integer) inside.
  const double lo2 = start * start * (1.0 - 1e-12);
  const double hi2 = radius * radius * (1.0 + 1e-12);

  double sum = 0.0;
  if (d == 1) {
    for (std::int64_t j = -R; j <= R; ++j) {
      const double n2 = static_cast<double>(j) * static_cast<double>(j);
      if (n2 >= lo2 && n2 <= hi2) sum += std::pow(n2, -s);
    }
  } else if (d == 2) {
    for (std::int64_t j0 = -R; j0 <= R; ++j0) {
      const double a2 = static_cast<double>(j0) * static_cast<double>(j0);
      for (std::int64_t j1 = -R; j1 <= R; ++j1) {
        const double n2 = a2 + static_cast<double>(j1) * static_cast<double>(j1);
        if (n2 >= lo2 && n2 <= hi2) sum += std::pow(n2, -s);
      }
    }
  } else {
    for (std::int64_t j0 = -R; j0 <= R; ++j0) {
      const double a2 = static_cast<double>(j0) * static_cast<double>(j0);
      for (std::int64_t j1 = -R; j1 <= R; ++j1) {
        const double b2 = a2 + static_cast<double>(j1) * static_cast<double>(j1);
        if (b2 > hi2) continue;
        for (std::int64_t j2 = -R; j2 <= R; ++j2) {
          const double n2 = b2 + static_cast<double>(j2) * static_cast<double>(j2);
          if (n2 >= lo2 && n2 <= hi2) sum += std::pow(n2, -s);
        }
      }
    }
  }

  TailSum out;
  out.value = sum;
  const double a = std::sqrt(static_cast<double>(d)) / 2.0;
  if (d == 1) {
    // Integral test: the dropped integers exceed `radius`, and each term
    // j^(-2s) is at most the integral over [j-1, j].
    if (!(radius > 1.0))
      throw argument_error("tail_sum_bruteforce: radius must exceed 1");
    out.remainder = 2.0 * std::pow(radius - 1.0, 1.0 - 2.0 * s) / (2.0 * s - 1.0);
  } else {
    const double A = radius - 2.0 * a;  // lower limit after shifting by a
    if (!(A > 0.0))
      throw argument_error("tail_sum_bruteforce: radius too small for the "
                           "remainder bound, need radius > sqrt(d)");
    if (d == 2) {
      out.remainder = 2.0 * M_PI * (std::pow(A, 2.0 - 2.0 * s) / (2.0 * s - 2.0) +
                                    a * std::pow(A, 1.0 - 2.0 * s) / (2.0 * s - 1.0));
    } else {
      out.remainder =
          4.0 * M_PI * (std::pow(A, 3.0 - 2.0 * s) / (2.0 * s - 3.0) +
                        2.0 * a * std::pow(A, 2.0 - 2.0 * s) / (2.0 * s - 2.0) +
                        a * a * std::pow(A, 1.0 - 2.0 * s) / (2.0 * s - 1.0));
    }
  }
  return out;
}

struct PerturbationConstants {
  double C3 = 0.0;
  double C2 = 0.0;
  double bracket0_sup = 0.0;  // certified sup of the s = 0 alias sum
};

/*
 * Stability constants of the jittered sampling bound:
 *
 *   C3 = (2 pi)^(alpha - 2 + d - 2s) 2^(4s+2) d^(1+s-d)
 *        [ (2s-d+1)/(2s-d) + 2s/(2s-1) ]
 *   C2 = dual_sup * sqrt( sup B_0 / (2 pi)^(d-2) * (C3 + 4 (2 pi)^(2d)) )
 *
 * dual_sup is the sup of the dual window's Fourier modulus (1 for the
 * point-evaluation dual).
 */
inline PerturbationConstants perturbation_constants(const BoundParams& p,
                                                    const Generator& g,
                                                    double dual_sup = 1.0) {
  check_alpha_pairing(p.s, p.alpha, p.d);
  if (!(2.0 * p.s > 1.0))
    throw argument_error("perturbation_constants: requires 2s > 1");
  if (g.dim() != p.d)
    throw argument_error("perturbation_constants: generator dimension " +
                         std::to_string(g.dim()) + " != d = " +
                         std::to_string(p.d));
  const double two_pi = 2.0 * M_PI;
  PerturbationConstants out;
  out.C3 = std::pow(two_pi, p.alpha - 2.0 + p.d - 2.0 * p.s) *
           std::pow(2.0, 4.0 * p.s + 2.0) *
           std::pow(static_cast<double>(p.d), 1.0 + p.s - p.d) *
           ((2.0 * p.s - p.d + 1.0) / (2.0 * p.s - p.d) +
            2.0 * p.s / (2.0 * p.s - 1.0));
  out.bracket0_sup = bracket0_sup(g);
  out.C2 = dual_sup * std::sqrt(out.bracket0_sup / std::pow(two_pi, p.d - 2) *
                                (out.C3 + 4.0 * std::pow(two_pi, 2.0 * p.d)));
  return out;
}

}  // namespace framelet
