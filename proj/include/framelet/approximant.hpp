#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "framelet/box.hpp"
#include "framelet/errors.hpp"
#include "framelet/generator.hpp"
#include "framelet/jitter.hpp"
#include "framelet/lattice.hpp"
#include "framelet/parallel.hpp"
#include "framelet/test_function.hpp"

namespace framelet {

/*
 * Sampled reconstruction at refinement level N:
 *
 *   A f (x) = sum_k f( M^-N (k + eps_k) ) phi( M^N x - k ),
 *
 * with k running over an index box and eps_k the per-node displacement.
 * Samples are taken once at build time and cached; evaluation touches only
 * the translates whose support contains M^N x.
 */

// Uniform evaluation grid: `nodes[i]` points per axis, endpoints included
// (a single node degenerates to the axis midpoint).
struct Grid {
  RealBox box;
  std::vector<std::int64_t> nodes;

  Grid() = default;
  Grid(RealBox box_, std::vector<std::int64_t> nodes_)
      : box(std::move(box_)), nodes(std::move(nodes_)) {
    if (static_cast<int>(nodes.size()) != box.dim())
      throw argument_error("Grid: nodes list does not match box dimension");
    for (std::int64_t n : nodes)
      if (n < 1) throw argument_error("Grid: need at least one node per axis");
  }

  int dim() const { return box.dim(); }

  std::int64_t cardinality() const {
    std::int64_t card = 1;
    for (std::int64_t n : nodes) {
      if (card > (std::int64_t{1} << 62) / n)
        throw resource_error("Grid: node count overflows 64-bit range");
      card *= n;
    }
    return card;
  }

  double coordinate(int axis, std::int64_t j) const {
    const auto a = static_cast<std::size_t>(axis);
    if (nodes[a] == 1) return (box.lo[a] + box.hi[a]) / 2.0;
    return box.lo[a] + static_cast<double>(j) * (box.hi[a] - box.lo[a]) /
                           static_cast<double>(nodes[a] - 1);
  }

  std::vector<double> point(std::int64_t flat) const {
    std::vector<double> x(static_cast<std::size_t>(dim()));
    for (int i = dim() - 1; i >= 0; --i) {
      const std::int64_t n = nodes[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(i)] = coordinate(i, flat % n);
      flat /= n;
    }
    return x;
  }
};

struct Approximant {
  Generator gen;
  DilationScheme scheme;
  int N = 0;
  PerturbationSequence pert;
  std::vector<double> samples;  // cached f(M^-N(k+eps_k)), flattened over pert.box
};

struct EvalInfo {
  double value = 0.0;
  bool covered = true;  // every translate meeting x lies inside the sample box
  std::int64_t terms = 0;
};

inline Approximant build_approximant(const Generator& gen,
                                     const DilationScheme& scheme, int N,
                                     PerturbationSequence pert,
                                     const TestFunction& f) {
  if (gen.dim() != scheme.d || gen.dim() != pert.dim() || gen.dim() != f.d)
    throw argument_error(
        "build_approximant: generator/scheme/perturbation/function dimensions "
        "disagree");
  if (N < 0) throw argument_error("build_approximant: level must be >= 0");
  Approximant a{gen, scheme, N, std::move(pert), {}};
  const std::int64_t card = a.pert.box.cardinality();
  a.samples.resize(static_cast<std::size_t>(card));
  const int d = gen.dim();

  parallel_for_chunked(card, kDefaultChunk,
                       [&](std::int64_t, std::int64_t b, std::int64_t e) {
    for (std::int64_t c = b; c < e; ++c) {
      const auto k = a.pert.box.unflatten(c);
      std::vector<double> shifted(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        shifted[static_cast<std::size_t>(i)] =
            static_cast<double>(k[static_cast<std::size_t>(i)]) +
            a.pert.theta[static_cast<std::size_t>(c * d + i)] +
            a.pert.lambda[static_cast<std::size_t>(i)];
      const auto x = dilation_power_apply(scheme, -N, shifted);
      const double v = f.eval(x);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "build_approximant: sample of '" << f.id << "' at index (";
        for (int i = 0; i < d; ++i) os << (i ? "," : "") << k[static_cast<std::size_t>(i)];
        os << ") is not finite";
        throw data_error(os.str());
      }
      a.samples[static_cast<std::size_t>(c)] = v;
    }
  });
  return a;
}

namespace detail {

// Contributing translate range on one axis: integers k with u - k inside the
// open support (compact atoms vanish on their support boundary, so the open
// interval is exact and keeps the touched-translate count minimal).
inline void axis_translate_range(Atom atom, double u, double sinc_radius,
                                 std::int64_t& lo, std::int64_t& hi) {
  if (atom == Atom::BSpline2) {
    lo = static_cast<std::int64_t>(std::floor(u - 2.0)) + 1;
    hi = static_cast<std::int64_t>(std::ceil(u)) - 1;
  } else {
    lo = static_cast<std::int64_t>(std::ceil(u - sinc_radius));
    hi = static_cast<std::int64_t>(std::floor(u + sinc_radius));
  }
}

// Values phi_axis(u - k) for k = lo..hi. For the band-limited atom the sign
// alternation sin(pi(u-k)) = (-1)^k sin(pi u) turns the fill into one sine
// evaluation plus a division per translate.
inline void axis_translate_values(Atom atom, double u, std::int64_t lo,
                                  std::int64_t hi, std::vector<double>& out) {
  out.clear();
  if (atom == Atom::BSpline2) {
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double t = u - static_cast<double>(k);
      out.push_back(t <= 0.0 || t >= 2.0 ? 0.0 : (t < 1.0 ? t : 2.0 - t));
    }
    return;
  }
  const double spu = std::sin(M_PI * u);
  double sign = (lo % 2 == 0) ? 1.0 : -1.0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double t = u - static_cast<double>(k);
    out.push_back(t == 0.0 ? 1.0 : sign * spu / (M_PI * t));
    sign = -sign;
  }
}

}  // namespace detail

inline EvalInfo eval_approximant_checked(const Approximant& a,
                                         const std::vector<double>& x) {
  const int d = a.gen.dim();
  if (static_cast<int>(x.size()) != d)
    throw argument_error("eval_approximant: point dimension mismatch");
  const auto u = dilation_power_apply(a.scheme, a.N, x);

  EvalInfo info;
  std::int64_t lo[3], hi[3];
  std::vector<double> vals[3];
  std::int64_t count = 1;
  for (int i = 0; i < d; ++i) {
    detail::axis_translate_range(a.gen.factors()[static_cast<std::size_t>(i)],
                                 u[static_cast<std::size_t>(i)],
                                 a.gen.sinc_radius(), lo[i], hi[i]);
    if (lo[i] < a.pert.box.lo[static_cast<std::size_t>(i)]) {
      info.covered = false;
      lo[i] = a.pert.box.lo[static_cast<std::size_t>(i)];
    }
    if (hi[i] > a.pert.box.hi[static_cast<std::size_t>(i)]) {
      info.covered = false;
      hi[i] = a.pert.box.hi[static_cast<std::size_t>(i)];
    }
    if (lo[i] > hi[i]) return info;  // nothing in range on this axis
    detail::axis_translate_values(a.gen.factors()[static_cast<std::size_t>(i)],
                                  u[static_cast<std::size_t>(i)], lo[i], hi[i],
                                  vals[i]);
    count *= hi[i] - lo[i] + 1;
  }
  info.terms = count;

  // Fixed row-major accumulation over the translate ranges.
  const IndexBox& box = a.pert.box;
  if (d == 1) {
    const std::int64_t base = lo[0] - box.lo[0];
    double s = 0.0;
    for (std::int64_t j = 0; j <= hi[0] - lo[0]; ++j)
      s += a.samples[static_cast<std::size_t>(base + j)] *
           vals[0][static_cast<std::size_t>(j)];
    info.value = s;
    return info;
  }
  if (d == 2) {
    const std::int64_t span1 = box.span(1);
    double s = 0.0;
    for (std::int64_t j0 = 0; j0 <= hi[0] - lo[0]; ++j0) {
      const std::int64_t row =
          (lo[0] + j0 - box.lo[0]) * span1 + (lo[1] - box.lo[1]);
      double inner = 0.0;
      for (std::int64_t j1 = 0; j1 <= hi[1] - lo[1]; ++j1)
        inner += a.samples[static_cast<std::size_t>(row + j1)] *
                 vals[1][static_cast<std::size_t>(j1)];
      s += vals[0][static_cast<std::size_t>(j0)] * inner;
    }
    info.value = s;
    return info;
  }
  const std::int64_t span1 = box.span(1), span2 = box.span(2);
  double s = 0.0;
  for (std::int64_t j0 = 0; j0 <= hi[0] - lo[0]; ++j0) {
    double mid = 0.0;
    for (std::int64_t j1 = 0; j1 <= hi[1] - lo[1]; ++j1) {
      const std::int64_t row = ((lo[0] + j0 - box.lo[0]) * span1 +
                                (lo[1] + j1 - box.lo[1])) * span2 +
                               (lo[2] - box.lo[2]);
      double inner = 0.0;
      for (std::int64_t j2 = 0; j2 <= hi[2] - lo[2]; ++j2)
        inner += a.samples[static_cast<std::size_t>(row + j2)] *
                 vals[2][static_cast<std::size_t>(j2)];
      mid += vals[1][static_cast<std::size_t>(j1)] * inner;
    }
    s += vals[0][static_cast<std::size_t>(j0)] * mid;
  }
  info.value = s;
  return info;
}

inline double eval_approximant(const Approximant& a,
                               const std::vector<double>& x) {
  return eval_approximant_checked(a, x).value;
}

inline constexpr std::int64_t kGridGuard = std::int64_t{1} << 25;

// Values of the approximant at every grid node, row-major. Nodes are
// independent, so results are identical for any thread count.
inline std::vector<double> eval_approximant_grid(const Approximant& a,
                                                 const Grid& grid) {
  if (grid.dim() != a.gen.dim())
    throw argument_error("eval_approximant_grid: grid dimension mismatch");
  const std::int64_t card = grid.cardinality();
  if (card > kGridGuard)
    throw resource_error("eval_approximant_grid: " + std::to_string(card) +
                         " nodes exceed the guard of " +
                         std::to_string(kGridGuard) +
                         "; lower the per-axis node counts");
  std::vector<double> out(static_cast<std::size_t>(card));
  parallel_for_chunked(card, kDefaultChunk,
                       [&](std::int64_t, std::int64_t b, std::int64_t e) {
                         for (std::int64_t c = b; c < e; ++c)
                           out[static_cast<std::size_t>(c)] =
                               eval_approximant(a, grid.point(c));
                       });
  return out;
}

}  // namespace framelet
