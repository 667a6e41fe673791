#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "framelet/box.hpp"
#include "framelet/errors.hpp"

namespace framelet {

namespace detail {

using IMat = std::vector<std::int64_t>;  // row-major d*d

inline std::int64_t imat_at(const IMat& a, int d, int i, int j) {
  return a[static_cast<std::size_t>(i * d + j)];
}

inline IMat imat_identity(int d) {
  IMat e(static_cast<std::size_t>(d * d), 0);
  for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i * d + i)] = 1;
  return e;
}

inline IMat imat_mul(const IMat& a, const IMat& b, int d) {
  IMat c(static_cast<std::size_t>(d * d), 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      __int128 acc = 0;
      for (int k = 0; k < d; ++k)
        acc += static_cast<__int128>(imat_at(a, d, i, k)) * imat_at(b, d, k, j);
      if (acc > INT64_MAX || acc < INT64_MIN)
        throw resource_error(
            "dilation power: integer matrix entry overflows 64-bit range");
      c[static_cast<std::size_t>(i * d + j)] = static_cast<std::int64_t>(acc);
    }
  return c;
}

inline IMat imat_pow(const IMat& a, int d, int n) {
  IMat p = imat_identity(d);
  for (int i = 0; i < n; ++i) p = imat_mul(p, a, d);
  return p;
}

inline IMat imat_transpose(const IMat& a, int d) {
  IMat t(a.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      t[static_cast<std::size_t>(j * d + i)] = imat_at(a, d, i, j);
  return t;
}

inline std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw resource_error(std::string(what) + " overflows 64-bit range");
  return static_cast<std::int64_t>(v);
}

inline std::int64_t imat_det(const IMat& a, int d) {
  auto at = [&](int i, int j) { return static_cast<__int128>(imat_at(a, d, i, j)); };
  __int128 det = 0;
  if (d == 1) {
    det = at(0, 0);
  } else if (d == 2) {
    det = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
  } else if (d == 3) {
    det = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
          at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
          at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  } else {
    throw unsupported_error("determinant: only dimensions 1..3 are supported");
  }
  return checked_i64(det, "determinant");
}

// Adjugate matrix, so that adj(A) * A = det(A) * I exactly over the integers.
inline IMat imat_adjugate(const IMat& a, int d) {
  auto at = [&](int i, int j) { return static_cast<__int128>(imat_at(a, d, i, j)); };
  IMat adj(static_cast<std::size_t>(d * d), 0);
  if (d == 1) {
    adj[0] = 1;
  } else if (d == 2) {
    adj[0] = checked_i64(at(1, 1), "adjugate");
    adj[1] = checked_i64(-at(0, 1), "adjugate");
    adj[2] = checked_i64(-at(1, 0), "adjugate");
    adj[3] = checked_i64(at(0, 0), "adjugate");
  } else if (d == 3) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
        const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        // adj(A)_ij is the (j,i) cofactor.
        __int128 cof = at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
        adj[static_cast<std::size_t>(i * 3 + j)] = checked_i64(cof, "adjugate");
      }
  } else {
    throw unsupported_error("adjugate: only dimensions 1..3 are supported");
  }
  return adj;
}

// Moduli of the eigenvalues of an integer matrix, d <= 3, via the
// characteristic polynomial (quadratic / depressed-cubic closed forms).
inline std::vector<double> eigen_moduli(const IMat& a, int d) {
  auto at = [&](int i, int j) { return static_cast<double>(imat_at(a, d, i, j)); };
  if (d == 1) return {std::abs(at(0, 0))};
  if (d == 2) {
    const double tr = at(0, 0) + at(1, 1);
    const double det = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) {
      const double mod = std::sqrt(det);  // conjugate pair, |lambda|^2 = det
      return {mod, mod};
    }
    const double r = std::sqrt(disc);
    return {std::abs((tr + r) / 2.0), std::abs((tr - r) / 2.0)};
  }
  if (d == 3) {
    // lambda^3 - c2 lambda^2 + c1 lambda - c0
    const double c2 = at(0, 0) + at(1, 1) + at(2, 2);
    const double c1 = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0) +
                      at(0, 0) * at(2, 2) - at(0, 2) * at(2, 0) +
                      at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1);
    const double c0 = static_cast<double>(imat_det(a, 3));
    // Depressed form t^3 + p t + q with lambda = t + c2/3.
    const double sh = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -c0 + c2 * c1 / 3.0 - 2.0 * c2 * c2 * c2 / 27.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc >= 0.0) {
      // Three real roots, trigonometric form.
      std::vector<double> out;
      const double r = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
      const double arg = r == 0.0 ? 0.0
                                  : std::clamp(3.0 * q / (p * r), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k)
        out.push_back(std::abs(r * std::cos(phi - 2.0 * M_PI * k / 3.0) + sh));
      return out;
    }
    // One real root (Cardano), complex pair modulus from the root product.
    const double u = std::cbrt(-q / 2.0 + std::sqrt(q * q / 4.0 + p * p * p / 27.0));
    const double v = (u == 0.0) ? 0.0 : -p / (3.0 * u);
    const double real_root = u + v + sh;
    const double pair_mod = std::sqrt(std::abs(c0 / real_root));
    return {std::abs(real_root), pair_mod, pair_mod};
  }
  throw unsupported_error("eigenvalues: only dimensions 1..3 are supported");
}

}  // namespace detail

/*
 * An integer expansive dilation matrix M together with its certificate data:
 * all eigenvalue moduli coincide (within 1e-9 relative) with the common value
 * m = |det M|^(1/d) > 1. Scaling a lattice refinement by M^N then contracts
 * every direction at the uniform rate m^N.
 */
struct DilationScheme {
  int d = 0;
  detail::IMat matrix;      // row-major d*d
  std::int64_t det = 0;     // signed determinant
  double m = 0.0;           // |det|^(1/d)

  std::int64_t abs_det() const { return det < 0 ? -det : det; }
};

inline constexpr double kIsotropyTol = 1e-9;

inline DilationScheme certify_isotropic(
    const std::vector<std::vector<std::int64_t>>& rows) {
  const int d = static_cast<int>(rows.size());
  if (d < 1 || d > 3)
    throw argument_error("dilation matrix: dimension must be 1..3, got " +
                         std::to_string(d));
  detail::IMat a;
  a.reserve(static_cast<std::size_t>(d * d));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d)
      throw argument_error("dilation matrix: not square");
    for (std::int64_t v : row) a.push_back(v);
  }
  const std::int64_t det = detail::imat_det(a, d);
  const std::int64_t adet = det < 0 ? -det : det;
  if (adet < 2)
    throw argument_error("dilation matrix: |det| = " + std::to_string(adet) +
                         ", needs |det| >= 2 to be expansive");
  const double m = std::pow(static_cast<double>(adet), 1.0 / d);
  const auto moduli = detail::eigen_moduli(a, d);
  for (int i = 0; i < d; ++i) {
    if (!(moduli[static_cast<std::size_t>(i)] > 1.0))
      throw argument_error("dilation matrix: eigenvalue modulus " +
                           std::to_string(moduli[static_cast<std::size_t>(i)]) +
                           " is not > 1");
    for (int j = i + 1; j < d; ++j) {
      const double mi = moduli[static_cast<std::size_t>(i)];
      const double mj = moduli[static_cast<std::size_t>(j)];
      if (std::abs(mi - mj) > kIsotropyTol * std::max(mi, mj)) {
        std::ostringstream os;
        os << "dilation matrix is not isotropic: eigenvalue moduli " << mi
           << " (index " << i << ") and " << mj << " (index " << j
           << ") differ";
        throw argument_error(os.str());
      }
    }
  }
  DilationScheme s;
  s.d = d;
  s.matrix = std::move(a);
  s.det = det;
  s.m = m;
  return s;
}

// Applies M^N (N may be negative; the inverse power is solved exactly through
// the integer adjugate, followed by a residual check).
inline std::vector<double> dilation_power_apply(const DilationScheme& s, int N,
                                                const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != s.d)
    throw argument_error("dilation_power_apply: vector has dimension " +
                         std::to_string(v.size()) + ", scheme has " +
                         std::to_string(s.d));
  const int d = s.d;
  if (N == 0) return v;
  const detail::IMat p = detail::imat_pow(s.matrix, d, N < 0 ? -N : N);
  std::vector<double> y(static_cast<std::size_t>(d), 0.0);
  if (N > 0) {
    for (int i = 0; i < d; ++i) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j)
        acc += static_cast<double>(detail::imat_at(p, d, i, j)) *
               v[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }
  // y = adj(P) v / det(P); adjugate and determinant are exact integers.
  const detail::IMat adj = detail::imat_adjugate(p, d);
  const double pdet = static_cast<double>(detail::imat_det(p, d));
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j)
      acc += static_cast<double>(detail::imat_at(adj, d, i, j)) *
             v[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc / pdet;
  }
  double vmax = 1.0, rmax = 0.0;
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j)
      acc += static_cast<double>(detail::imat_at(p, d, i, j)) *
             y[static_cast<std::size_t>(j)];
    rmax = std::max(rmax, std::abs(acc - v[static_cast<std::size_t>(i)]));
    vmax = std::max(vmax, std::abs(v[static_cast<std::size_t>(i)]));
  }
  if (rmax > 1e-10 * vmax)
    throw consistency_error("dilation_power_apply: inverse solve residual " +
                            std::to_string(rmax) + " exceeds tolerance");
  return y;
}

// Physical location of lattice node k at refinement level N, optionally
// displaced by eps (in index units): M^-N (k + eps).
inline std::vector<double> sample_point(const DilationScheme& s, int N,
                                        const std::vector<std::int64_t>& k,
                                        const std::vector<double>& eps = {}) {
  if (static_cast<int>(k.size()) != s.d)
    throw argument_error("sample_point: index dimension mismatch");
  if (!eps.empty() && eps.size() != k.size())
    throw argument_error("sample_point: displacement dimension mismatch");
  std::vector<double> v(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    v[i] = static_cast<double>(k[i]) + (eps.empty() ? 0.0 : eps[i]);
  return dilation_power_apply(s, -N, v);
}

inline constexpr std::int64_t kIndexBoxGuard = std::int64_t{1} << 25;

namespace detail {

inline IndexBox index_box_unguarded(
    const DilationScheme& s, int N, const RealBox& domain,
    const std::vector<std::pair<double, double>>& support) {
  const int d = s.d;
  // Per-axis extent of M^N(domain), scanned over the 2^d corners.
  std::vector<double> a(static_cast<std::size_t>(d),
                        std::numeric_limits<double>::infinity());
  std::vector<double> b(static_cast<std::size_t>(d),
                        -std::numeric_limits<double>::infinity());
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<double> corner(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      corner[static_cast<std::size_t>(i)] =
          (mask >> i & 1) ? domain.hi[static_cast<std::size_t>(i)]
                          : domain.lo[static_cast<std::size_t>(i)];
    const auto img = dilation_power_apply(s, N, corner);
    for (int i = 0; i < d; ++i) {
      a[static_cast<std::size_t>(i)] =
          std::min(a[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(i)]);
      b[static_cast<std::size_t>(i)] =
          std::max(b[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(i)]);
    }
  }
  // k contributes on axis i when (u - k) can land in [inf_i, sup_i] for some
  // u in [a_i, b_i]; the small slack keeps exact boundary hits inside.
  std::vector<std::int64_t> lo(static_cast<std::size_t>(d));
  std::vector<std::int64_t> hi(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto [inf_i, sup_i] = support[static_cast<std::size_t>(i)];
    lo[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
        std::ceil(a[static_cast<std::size_t>(i)] - sup_i - 1e-9));
    hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
        std::floor(b[static_cast<std::size_t>(i)] - inf_i + 1e-9));
  }
  return IndexBox(std::move(lo), std::move(hi));
}

}  // namespace detail

// Smallest index box containing every k whose translate phi(M^N . - k) can
// meet the domain, given per-axis support intervals of phi.
inline IndexBox index_box_for_domain(
    const DilationScheme& s, int N, const RealBox& domain,
    const std::vector<std::pair<double, double>>& support,
    std::int64_t max_cardinality = kIndexBoxGuard) {
  if (domain.dim() != s.d)
    throw argument_error("index_box_for_domain: domain dimension " +
                         std::to_string(domain.dim()) + " != scheme dimension " +
                         std::to_string(s.d));
  if (static_cast<int>(support.size()) != s.d)
    throw argument_error("index_box_for_domain: support list has wrong length");
  IndexBox box = detail::index_box_unguarded(s, N, domain, support);
  const std::int64_t card = box.cardinality();
  if (card > max_cardinality) {
    int fit = -1;
    for (int n = N - 1; n >= 0; --n) {
      if (detail::index_box_unguarded(s, n, domain, support).cardinality() <=
          max_cardinality) {
        fit = n;
        break;
      }
    }
    std::ostringstream os;
    os << "index box " << box.to_string() << " holds " << card
       << " indices, over the guard of " << max_cardinality << "; ";
    if (fit >= 0)
      os << "the largest level that fits this domain is N = " << fit;
    else
      os << "no level fits this domain, shrink the domain";
    throw resource_error(os.str());
  }
  return box;
}

// Representatives, inside [0,1)^d, of the distinct residues of (M^T)^-1 Z^d
// modulo Z^d. There are exactly |det M| of them; values are exact rationals
// with denominator |det M|, returned in lexicographic order.
inline std::vector<std::vector<double>> coset_representatives(
    const DilationScheme& s) {
  const int d = s.d;
  const detail::IMat mt = detail::imat_transpose(s.matrix, d);
  const detail::IMat adj = detail::imat_adjugate(mt, d);
  const std::int64_t det = detail::imat_det(mt, d);
  const std::int64_t D = det < 0 ? -det : det;
  const std::int64_t sign = det < 0 ? -1 : 1;

  std::set<std::vector<std::int64_t>> residues;
  std::vector<std::int64_t> n(static_cast<std::size_t>(d), 0);
  // Every residue class of Z^d / M^T Z^d has a representative with all
  // coordinates in [0, D), since D e_i = +-(M^T adj e_i) lies in M^T Z^d.
  const auto total = static_cast<std::int64_t>(std::pow(D, d) + 0.5);
  for (std::int64_t c = 0; c < total; ++c) {
    std::int64_t rem = c;
    for (int i = d - 1; i >= 0; --i) {
      n[static_cast<std::size_t>(i)] = rem % D;
      rem /= D;
    }
    std::vector<std::int64_t> r(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      __int128 num = 0;
      for (int j = 0; j < d; ++j)
        num += static_cast<__int128>(detail::imat_at(adj, d, i, j)) *
               n[static_cast<std::size_t>(j)];
      num *= sign;  // (M^T)^-1 n = sign * adj(M^T) n / |det|
      std::int64_t rr = static_cast<std::int64_t>(num % D);
      if (rr < 0) rr += D;
      r[static_cast<std::size_t>(i)] = rr;
    }
    residues.insert(std::move(r));
  }
  if (static_cast<std::int64_t>(residues.size()) != D)
    throw consistency_error(
        "coset_representatives: found " + std::to_string(residues.size()) +
        " residues, expected " + std::to_string(D));
  std::vector<std::vector<double>> out;
  out.reserve(residues.size());
  for (const auto& r : residues) {
    std::vector<double> g(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      g[static_cast<std::size_t>(i)] =
          static_cast<double>(r[static_cast<std::size_t>(i)]) /
          static_cast<double>(D);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace framelet
