#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framelet/errors.hpp"
#include "framelet/lattice.hpp"

namespace framelet {

/*
 * Shift-invariant reconstruction generators.
 *
 * Two 1-D atoms are shipped, plus tensor products of them:
 *
 *   bspline2  piecewise-linear hat on [0,2]: t on [0,1), 2-t on [1,2].
 *             Fourier form ((1 - e^{-i xi}) / (i xi))^2, refinement mask
 *             e^{-i xi} cos^2(xi/2). Two sum rules; lies in H^s for s < 3/2.
 *
 *   sinc      sin(pi t)/(pi t), evaluated with a hard truncation radius R
 *             (terms beyond |t| > R are dropped; the slow 1/t decay makes
 *             the truncation error of an expansion O(R^-1/2), so R must be
 *             generous). Fourier form: indicator of [-pi, pi]. Its mask is
 *             an ideal low-pass filter, not a trigonometric polynomial.
 *
 * Fourier convention throughout: f_hat(xi) = integral f(x) e^{-i x.xi} dx.
 */

enum class Atom { Sinc, BSpline2 };

enum class GeneratorKind { Sinc, BSpline2, Tensor };

inline constexpr double kDefaultSincRadius = 200.0;

namespace detail {

inline double sin_over_arg(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

inline double atom_eval(Atom a, double t, double sinc_radius) {
  if (a == Atom::BSpline2) {
    if (t <= 0.0 || t >= 2.0) return 0.0;
    return t < 1.0 ? t : 2.0 - t;
  }
  if (std::abs(t) > sinc_radius) return 0.0;
  return sin_over_arg(M_PI * t);
}

inline std::complex<double> atom_fourier(Atom a, double xi) {
  if (a == Atom::BSpline2) {
    const double s = sin_over_arg(xi / 2.0);
    return std::exp(std::complex<double>(0.0, -xi)) * (s * s);
  }
  return std::abs(xi) <= M_PI ? 1.0 : 0.0;
}

// |phi_hat|^2 with the band edge counted half-open, so that lattice sums over
// aliases count each frequency exactly once (a.e. convention; only differs
// from |atom_fourier|^2 on the measure-zero set |xi| = pi).
inline double atom_fourier_sq_ae(Atom a, double xi) {
  if (a == Atom::BSpline2) {
    const double s = sin_over_arg(xi / 2.0);
    return s * s * s * s;
  }
  return (xi >= -M_PI && xi < M_PI) ? 1.0 : 0.0;
}

inline std::complex<double> atom_mask(Atom a, double xi) {
  if (a == Atom::BSpline2) {
    const double c = std::cos(xi / 2.0);
    return std::exp(std::complex<double>(0.0, -xi)) * (c * c);
  }
  // Ideal low-pass: 1 on [-pi/2, pi/2] modulo 2 pi.
  const double r = std::remainder(xi, 2.0 * M_PI);
  return std::abs(r) <= M_PI / 2.0 ? 1.0 : 0.0;
}

}  // namespace detail

class Generator {
 public:
  Generator(std::vector<Atom> factors, double sinc_radius = kDefaultSincRadius)
      : factors_(std::move(factors)), sinc_radius_(sinc_radius) {
    if (factors_.empty() || factors_.size() > 3)
      throw argument_error("generator: dimension must be 1..3");
    if (!(sinc_radius_ > 0.0))
      throw argument_error("generator: truncation radius must be positive");
  }

  int dim() const { return static_cast<int>(factors_.size()); }
  const std::vector<Atom>& factors() const { return factors_; }
  double sinc_radius() const { return sinc_radius_; }

  GeneratorKind kind() const {
    if (dim() > 1) return GeneratorKind::Tensor;
    return factors_[0] == Atom::Sinc ? GeneratorKind::Sinc
                                     : GeneratorKind::BSpline2;
  }

  std::string id() const {
    auto base = [](Atom a) {
      return a == Atom::Sinc ? std::string("sinc") : std::string("bspline2");
    };
    if (dim() == 1) return base(factors_[0]);
    bool uniform = true;
    for (Atom a : factors_) uniform = uniform && a == factors_[0];
    if (uniform)
      return "tensor:" + base(factors_[0]) + "^" + std::to_string(dim());
    std::string s = "tensor:";
    for (int i = 0; i < dim(); ++i)
      s += (i ? "*" : "") + base(factors_[static_cast<std::size_t>(i)]);
    return s;
  }

  // Point value phi(x).
  double eval(const std::vector<double>& x) const {
    check_dim(x.size(), "eval");
    double p = 1.0;
    for (int i = 0; i < dim(); ++i)
      p *= detail::atom_eval(factors_[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)],
                             sinc_radius_);
    return p;
  }

  // phi_hat(xi); the band-limited atom takes the value 1 on its closed band.
  std::complex<double> fourier(const std::vector<double>& xi) const {
    check_dim(xi.size(), "fourier");
    std::complex<double> p = 1.0;
    for (int i = 0; i < dim(); ++i)
      p *= detail::atom_fourier(factors_[static_cast<std::size_t>(i)],
                                xi[static_cast<std::size_t>(i)]);
    return p;
  }

  // |phi_hat(xi)|^2 with half-open band edges (used by alias lattice sums).
  double fourier_sq_ae(const std::vector<double>& xi) const {
    check_dim(xi.size(), "fourier_sq_ae");
    double p = 1.0;
    for (int i = 0; i < dim(); ++i)
      p *= detail::atom_fourier_sq_ae(factors_[static_cast<std::size_t>(i)],
                                      xi[static_cast<std::size_t>(i)]);
    return p;
  }

  // Refinement mask symbol a_hat(xi), for the dyadic scheme M = 2 I.
  std::complex<double> mask_symbol(const std::vector<double>& xi) const {
    check_dim(xi.size(), "mask_symbol");
    std::complex<double> p = 1.0;
    for (int i = 0; i < dim(); ++i)
      p *= detail::atom_mask(factors_[static_cast<std::size_t>(i)],
                             xi[static_cast<std::size_t>(i)]);
    return p;
  }

  bool mask_is_polynomial() const {
    for (Atom a : factors_)
      if (a == Atom::Sinc) return false;
    return true;
  }

  // Coefficients c_k of a_hat(xi) = sum_k c_k e^{-i k.xi}. Only defined when
  // the mask is a trigonometric polynomial.
  std::map<std::vector<std::int64_t>, double> mask_coefficients() const {
    if (!mask_is_polynomial())
      throw unsupported_error(
          "mask_coefficients: the ideal low-pass mask of '" + id() +
          "' is not a trigonometric polynomial");
    // 1-D hat: a_hat(xi) = 1/4 + 1/2 e^{-i xi} + 1/4 e^{-2 i xi}.
    std::map<std::vector<std::int64_t>, double> coeffs;
    std::vector<std::int64_t> k(static_cast<std::size_t>(dim()), 0);
    const double c1[3] = {0.25, 0.5, 0.25};
    std::function<void(int, double)> rec = [&](int axis, double c) {
      if (axis == dim()) {
        coeffs[k] = c;
        return;
      }
      for (int j = 0; j <= 2; ++j) {
        k[static_cast<std::size_t>(axis)] = j;
        rec(axis + 1, c * c1[j]);
      }
    };
    rec(0, 1.0);
    return coeffs;
  }

  // Per-axis support of phi as closed intervals (the truncated band-limited
  // atom reports its truncation window).
  std::vector<std::pair<double, double>> support_intervals() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(factors_.size());
    for (Atom a : factors_)
      out.emplace_back(a == Atom::BSpline2
                           ? std::pair<double, double>{0.0, 2.0}
                           : std::pair<double, double>{-sinc_radius_, sinc_radius_});
    return out;
  }

  bool compact_support() const {
    for (Atom a : factors_)
      if (a == Atom::Sinc) return false;
    return true;
  }

  // Declared number of sum rules of the mask (nullopt = unbounded, for the
  // ideal low-pass mask which annihilates every polynomial).
  std::optional<int> sum_rule_order() const {
    std::optional<int> order;
    for (Atom a : factors_)
      if (a == Atom::BSpline2) order = 2;
    return order;
  }

  // Open interval of s with phi in H^s: the hat fails at s = 3/2, the
  // band-limited atom lies in every H^s.
  std::pair<double, double> smoothness_interval() const {
    double hi = std::numeric_limits<double>::infinity();
    for (Atom a : factors_)
      if (a == Atom::BSpline2) hi = 1.5;
    return {-std::numeric_limits<double>::infinity(), hi};
  }

  // Certified bound on |d/dxi| of the 1-D s=0 alias sum of axis `i`
  // (2/3 + cos(xi)/3 for the hat, constant 1 for the band-limited atom).
  double bracket0_lipschitz(int axis) const {
    return factors_[static_cast<std::size_t>(axis)] == Atom::BSpline2 ? 0.4 : 0.0;
  }

 private:
  void check_dim(std::size_t n, const char* op) const {
    if (static_cast<int>(n) != dim())
      throw argument_error(std::string(op) + ": point has dimension " +
                           std::to_string(n) + ", generator has " +
                           std::to_string(dim()));
  }

  std::vector<Atom> factors_;
  double sinc_radius_;
};

inline Generator make_sinc(double radius = kDefaultSincRadius) {
  return Generator({Atom::Sinc}, radius);
}

inline Generator make_bspline2() { return Generator({Atom::BSpline2}); }

inline Generator tensor_power(const Generator& g, int d) {
  if (g.dim() != 1)
    throw argument_error("tensor_power: base generator must be 1-D");
  if (d < 1 || d > 3) throw argument_error("tensor_power: dimension must be 1..3");
  return Generator(std::vector<Atom>(static_cast<std::size_t>(d), g.factors()[0]),
                   g.sinc_radius());
}

// Parses "sinc", "bspline2", "tensor:<base>^<d>".
inline Generator parse_generator(const std::string& id,
                                 double sinc_radius = kDefaultSincRadius) {
  auto base_atom = [](const std::string& b) -> std::optional<Atom> {
    if (b == "sinc") return Atom::Sinc;
    if (b == "bspline2") return Atom::BSpline2;
    return std::nullopt;
  };
  if (auto a = base_atom(id)) return Generator({*a}, sinc_radius);
  const std::string prefix = "tensor:";
  if (id.rfind(prefix, 0) == 0) {
    const std::string body = id.substr(prefix.size());
    const auto caret = body.find('^');
    if (caret != std::string::npos) {
      const auto a = base_atom(body.substr(0, caret));
      int d = 0;
      try {
        d = std::stoi(body.substr(caret + 1));
      } catch (const std::exception&) {
        d = 0;
      }
      if (a && d >= 1 && d <= 3)
        return Generator(std::vector<Atom>(static_cast<std::size_t>(d), *a),
                         sinc_radius);
    }
  }
  throw argument_error("unknown generator id '" + id +
                       "' (expected sinc, bspline2, or tensor:<base>^<d>)");
}

/*
 * Numerical zero order of a symbol at a point: the slope of log|f| against
 * log h for probes point + h u along a fixed generic direction u, fitted by
 * least squares over h in {1e-2, 1e-3, 1e-4}. Accepted when within 0.1 of an
 * integer, else a consistency error.
 */
inline int estimate_zero_order(
    const std::function<double(const std::vector<double>&)>& abs_symbol,
    const std::vector<double>& point) {
  const int d = static_cast<int>(point.size());
  // Golden-ratio direction components avoid accidental alignment with the
  // lattice directions of a tensor mask.
  const double raw[3] = {1.0, 0.6180339887498949, 0.3819660112501051};
  double norm2 = 0.0;
  for (int i = 0; i < d; ++i) norm2 += raw[i] * raw[i];
  const double inv = 1.0 / std::sqrt(norm2);

  const double hs[3] = {1e-2, 1e-3, 1e-4};
  double lx[3], ly[3];
  for (int t = 0; t < 3; ++t) {
    std::vector<double> p(point);
    for (int i = 0; i < d; ++i)
      p[static_cast<std::size_t>(i)] += hs[t] * raw[i] * inv;
    const double v = abs_symbol(p);
    if (!(v > 0.0))
      throw consistency_error(
          "estimate_zero_order: symbol vanished identically along the probe");
    lx[t] = std::log(hs[t]);
    ly[t] = std::log(v);
  }
  double mx = 0.0, my = 0.0;
  for (int t = 0; t < 3; ++t) {
    mx += lx[t] / 3.0;
    my += ly[t] / 3.0;
  }
  double sxx = 0.0, sxy = 0.0;
  for (int t = 0; t < 3; ++t) {
    sxx += (lx[t] - mx) * (lx[t] - mx);
    sxy += (lx[t] - mx) * (ly[t] - my);
  }
  const double slope = sxy / sxx;
  const double rounded = std::round(slope);
  if (std::abs(slope - rounded) > 0.1)
    throw consistency_error("estimate_zero_order: fitted slope " +
                            std::to_string(slope) +
                            " is not within 0.1 of an integer");
  return static_cast<int>(rounded);
}

// Verifies the declared sum-rule order of the mask against the measured zero
// orders at the nonzero aliasing points 2 pi gamma of the scheme.
inline int sum_rule_order_check(const Generator& g, const DilationScheme& s) {
  if (!g.mask_is_polynomial())
    throw unsupported_error(
        "sum_rule_order_check: '" + g.id() +
        "' has a non-polynomial mask; its zero order at aliasing points is "
        "not finite");
  if (s.d != g.dim())
    throw argument_error("sum_rule_order_check: scheme dimension mismatch");
  const auto declared = g.sum_rule_order();
  int measured = std::numeric_limits<int>::max();
  for (const auto& gamma : coset_representatives(s)) {
    bool zero = true;
    for (double c : gamma) zero = zero && c == 0.0;
    if (zero) continue;
    std::vector<double> point(gamma);
    for (double& c : point) c *= 2.0 * M_PI;
    const int order = estimate_zero_order(
        [&](const std::vector<double>& xi) { return std::abs(g.mask_symbol(xi)); },
        point);
    measured = std::min(measured, order);
  }
  if (measured == std::numeric_limits<int>::max())
    throw argument_error("sum_rule_order_check: scheme has no nonzero cosets");
  if (declared && *declared != measured)
    throw consistency_error("sum_rule_order_check: measured order " +
                            std::to_string(measured) + " != declared order " +
                            std::to_string(*declared));
  return measured;
}

}  // namespace framelet
