#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "framelet/approximant.hpp"
#include "framelet/box.hpp"
#include "framelet/errors.hpp"
#include "framelet/parallel.hpp"
#include "framelet/test_function.hpp"

namespace framelet {

/*
 * Quadratures with certified tails. All integrals use the composite midpoint
 * rule with fixed-chunk deterministic accumulation; the returned error bound
 * combines the decay-certificate tail outside the cutoff box with a
 * Richardson-style refinement delta for the discretization.
 */

struct ValueWithError {
  double value = 0.0;
  double error_bound = 0.0;
};

// Midpoint-rule quadrature region for frequency-side integrals: the box
// [-cutoff, cutoff]^d with nodes_per_axis cells per axis.
struct FourierQuadrature {
  double cutoff = 64.0;
  std::int64_t nodes_per_axis = 4096;
};

namespace detail {

inline double surface_measure(int d) {
  if (d == 1) return 2.0;
  if (d == 2) return 2.0 * M_PI;
  return 4.0 * M_PI;
}

// Certified bound on the integral of |f_hat|^2 (1+||xi||^2)^s outside the
// ball of radius `cutoff`.
inline double fourier_tail_bound(const TestFunction& f, double s,
                                 double cutoff) {
  const int d = f.d;
  const double omega = surface_measure(d);
  if (const auto* pd = std::get_if<PowerFourierDecay>(&f.fourier_decay)) {
    // (1+r^2)^s <= 2^max(-s,0) (1+r)^(2s); integrand <= C^2 fac (1+r)^(2s-2p+d-1).
    const double expo = 2.0 * s - 2.0 * pd->p + d;
    if (!(expo < 0.0))
      throw argument_error(
          "sobolev_norm: decay certificate of '" + f.id +
          "' cannot certify convergence at s = " + std::to_string(s));
    const double fac = s < 0.0 ? std::pow(2.0, -s) : 1.0;
    return pd->C * pd->C * fac * omega * std::pow(1.0 + cutoff, expo) / (-expo);
  }
  if (const auto* gd = std::get_if<GaussianFourierDecay>(&f.fourier_decay)) {
    // Split e^{-2cr^2} = G(r) e^{-cr^2} with G decreasing past the cutoff.
    const double need =
        std::max(1.0, std::sqrt((d + 2.0 * std::abs(s) + 2.0) / (2.0 * gd->c)));
    if (cutoff < need)
      throw argument_error("sobolev_norm: Gaussian tail needs a cutoff >= " +
                           std::to_string(need));
    const double G = std::pow(cutoff, d - 1) *
                     std::pow(1.0 + cutoff * cutoff, std::max(s, 0.0)) *
                     std::exp(-gd->c * cutoff * cutoff);
    return gd->C * gd->C * omega * G * std::exp(-gd->c * cutoff * cutoff) /
           (2.0 * gd->c * cutoff);
  }
  if (const auto* bd = std::get_if<BandlimitedFourierDecay>(&f.fourier_decay)) {
    if (cutoff < bd->band)
      throw argument_error("sobolev_norm: cutoff must cover the band " +
                           std::to_string(bd->band));
    return 0.0;
  }
  throw unsupported_error("sobolev_norm: '" + f.id +
                          "' carries no Fourier decay certificate");
}

// Midpoint integral of |f_hat|^2 (1+||xi||^2)^s over [-cutoff, cutoff]^d.
inline double fourier_box_integral(const TestFunction& f, double s,
                                   double cutoff, std::int64_t n) {
  const int d = f.d;
  const double h = 2.0 * cutoff / static_cast<double>(n);
  std::int64_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= n;
  const double cellvol = std::pow(h, d);
  const double sum = chunked_sum(cells, [&](std::int64_t c) {
    std::vector<double> xi(static_cast<std::size_t>(d));
    std::int64_t rem = c;
    double n2 = 0.0;
    for (int i = d - 1; i >= 0; --i) {
      const double v = -cutoff + (static_cast<double>(rem % n) + 0.5) * h;
      xi[static_cast<std::size_t>(i)] = v;
      n2 += v * v;
      rem /= n;
    }
    const double mod = std::abs(f.fourier(xi));
    return mod * mod * std::pow(1.0 + n2, s);
  });
  return sum * cellvol;
}

}  // namespace detail

/*
 * H^s norm from the frequency side:
 *
 *   ||f||_{H^s} = (2 pi)^(-d/2) ( integral |f_hat|^2 (1+||xi||^2)^s dxi )^(1/2)
 *
 * The error bound propagates (tail certificate + coarse/fine refinement
 * delta) through the square root.
 */
inline ValueWithError sobolev_norm(const TestFunction& f, double s,
                                   const FourierQuadrature& q) {
  if (!f.fourier)
    throw unsupported_error("sobolev_norm: '" + f.id +
                            "' has no closed Fourier form");
  if (!(q.cutoff > 0.0) || q.nodes_per_axis < 4)
    throw argument_error("sobolev_norm: invalid quadrature spec");
  const double tail = detail::fourier_tail_bound(f, s, q.cutoff);
  const double fine =
      detail::fourier_box_integral(f, s, q.cutoff, q.nodes_per_axis);
  const double coarse =
      detail::fourier_box_integral(f, s, q.cutoff, q.nodes_per_axis / 2);
  const double integral_err = tail + std::abs(fine - coarse);
  const double scale = std::pow(2.0 * M_PI, -f.d / 2.0);
  ValueWithError out;
  out.value = scale * std::sqrt(fine);
  out.error_bound =
      fine > 0.0 ? scale * integral_err / (2.0 * std::sqrt(fine))
                 : scale * std::sqrt(integral_err);
  return out;
}

// Direct spatial L2 norm over a box (midpoint rule, `nodes_per_axis` cells),
// with the tail outside the box certified by the spatial decay record.
inline ValueWithError spatial_l2_norm(const TestFunction& f, const RealBox& box,
                                      std::int64_t nodes_per_axis) {
  if (box.dim() != f.d)
    throw argument_error("spatial_l2_norm: box dimension mismatch");
  if (nodes_per_axis < 4)
    throw argument_error("spatial_l2_norm: need at least 4 cells per axis");
  const int d = f.d;

  double tail = 0.0;
  if (const auto* ed = std::get_if<ExpSpatialDecay>(&f.spatial_decay)) {
    // Complement of the box is covered by 2d half-slabs |x_i| > X_i.
    for (int i = 0; i < d; ++i) {
      const double X = std::min(-box.lo[static_cast<std::size_t>(i)],
                                box.hi[static_cast<std::size_t>(i)]);
      if (!(X > 0.0))
        throw argument_error("spatial_l2_norm: box must contain the origin "
                             "for the tail certificate");
      tail += ed->C * ed->C * std::exp(-2.0 * ed->c * X) / (2.0 * ed->c) *
              std::pow(1.0 / ed->c, d - 1);
    }
  } else if (const auto* pd = std::get_if<PowerSpatialDecay>(&f.spatial_decay)) {
    double X = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i)
      X = std::min(X, std::min(-box.lo[static_cast<std::size_t>(i)],
                               box.hi[static_cast<std::size_t>(i)]));
    if (!(X > 0.0))
      throw argument_error("spatial_l2_norm: box must contain the origin for "
                           "the tail certificate");
    const double expo = d - 2.0 * pd->p;
    if (!(expo < 0.0))
      throw argument_error("spatial_l2_norm: decay certificate of '" + f.id +
                           "' does not give an L2 tail");
    tail += pd->C * pd->C * detail::surface_measure(d) *
            std::pow(1.0 + X, expo) / (-expo);
  } else {
    throw unsupported_error("spatial_l2_norm: '" + f.id +
                            "' carries no spatial decay certificate");
  }

  auto box_integral = [&](std::int64_t n) {
    std::int64_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= n;
    double cellvol = 1.0;
    for (int i = 0; i < d; ++i) cellvol *= box.width(i) / static_cast<double>(n);
    const double sum = chunked_sum(cells, [&](std::int64_t c) {
      std::vector<double> x(static_cast<std::size_t>(d));
      std::int64_t rem = c;
      for (int i = d - 1; i >= 0; --i) {
        const double h = box.width(i) / static_cast<double>(n);
        x[static_cast<std::size_t>(i)] =
            box.lo[static_cast<std::size_t>(i)] +
            (static_cast<double>(rem % n) + 0.5) * h;
        rem /= n;
      }
      const double v = f.eval(x);
      return v * v;
    });
    return sum * cellvol;
  };
  const double fine = box_integral(nodes_per_axis);
  const double coarse = box_integral(nodes_per_axis / 2);
  const double integral_err = tail + std::abs(fine - coarse);
  ValueWithError out;
  out.value = std::sqrt(fine);
  out.error_bound = fine > 0.0 ? integral_err / (2.0 * std::sqrt(fine))
                               : std::sqrt(integral_err);
  return out;
}

/*
 * Relative L2 error of a reconstruction against its reference on a domain:
 * ||f - a||_{L2(domain)} / ||f||_{L2(domain)}, midpoint rule with
 * `resolution` cells per coordinate unit (at least 2 m^N per unit resolves
 * the finest translates; callers warn below that). Deterministic for any
 * thread count.
 */
inline double relative_l2_error(const TestFunction& f, const Approximant& a,
                                const RealBox& domain, double resolution) {
  if (domain.dim() != f.d || a.gen.dim() != f.d)
    throw argument_error("relative_l2_error: dimension mismatch");
  if (!(resolution > 0.0))
    throw argument_error("relative_l2_error: resolution must be positive");
  const int d = f.d;
  std::int64_t cells = 1;
  std::vector<std::int64_t> n(static_cast<std::size_t>(d));
  std::vector<double> h(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    n[static_cast<std::size_t>(i)] = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(domain.width(i) * resolution)));
    h[static_cast<std::size_t>(i)] =
        domain.width(i) / static_cast<double>(n[static_cast<std::size_t>(i)]);
    if (cells > (std::int64_t{1} << 62) / n[static_cast<std::size_t>(i)])
      throw resource_error("relative_l2_error: cell count overflow");
    cells *= n[static_cast<std::size_t>(i)];
  }

  const std::int64_t chunk = kDefaultChunk;
  const std::int64_t num_chunks = (cells + chunk - 1) / chunk;
  std::vector<double> num_part(static_cast<std::size_t>(num_chunks), 0.0);
  std::vector<double> den_part(static_cast<std::size_t>(num_chunks), 0.0);
  parallel_for_chunked(cells, chunk,
                       [&](std::int64_t c, std::int64_t b, std::int64_t e) {
    double num = 0.0, den = 0.0;
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::int64_t idx = b; idx < e; ++idx) {
      std::int64_t rem = idx;
      for (int i = d - 1; i >= 0; --i) {
        x[static_cast<std::size_t>(i)] =
            domain.lo[static_cast<std::size_t>(i)] +
            (static_cast<double>(rem % n[static_cast<std::size_t>(i)]) + 0.5) *
                h[static_cast<std::size_t>(i)];
        rem /= n[static_cast<std::size_t>(i)];
      }
      const double fv = f.eval(x);
      const double av = eval_approximant(a, x);
      num += (fv - av) * (fv - av);
      den += fv * fv;
    }
    num_part[static_cast<std::size_t>(c)] = num;
    den_part[static_cast<std::size_t>(c)] = den;
  });
  double num = 0.0, den = 0.0;
  for (std::int64_t c = 0; c < num_chunks; ++c) {
    num += num_part[static_cast<std::size_t>(c)];
    den += den_part[static_cast<std::size_t>(c)];
  }
  if (!(den > 0.0))
    throw argument_error("relative_l2_error: reference vanishes on the domain");
  return std::sqrt(num / den);
}

}  // namespace framelet
