#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "framelet/approximant.hpp"
#include "framelet/bounds.hpp"
#include "framelet/bracket.hpp"
#include "framelet/errors.hpp"
#include "framelet/generator.hpp"
#include "framelet/jitter.hpp"
#include "framelet/lattice.hpp"
#include "framelet/norms.hpp"
#include "framelet/rng.hpp"
#include "framelet/test_function.hpp"

namespace framelet {

/*
 * Self-check suites shared by the CLI `verify` subcommand and the test
 * binaries. Each check compares a computed quantity against a closed-form
 * value or a certified bound; tolerances are pinned here, next to the checks.
 */

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

inline CheckResult check_le(const std::string& suite, const std::string& name,
                            double value, double bound) {
  CheckResult r{suite, name, value <= bound, ""};
  r.detail = num(value) + (r.passed ? " <= " : " > ") + num(bound);
  return r;
}

inline CheckResult check_close(const std::string& suite, const std::string& name,
                               double value, double expected, double tol) {
  const double err = std::abs(value - expected);
  CheckResult r{suite, name, err <= tol, ""};
  r.detail = "got " + num(value) + ", want " + num(expected) + " (|diff| = " +
             num(err) + ", tol " + num(tol) + ")";
  return r;
}

}  // namespace detail

// Lattice tail sums: brute-force value plus certified remainder must sit
// under the closed-form bound across a (d, s, J) grid, and a 1-D case with a
// zeta-function closed form anchors the brute-force machinery itself.
inline std::vector<CheckResult> verify_tail_suite() {
  std::vector<CheckResult> out;
  const double m = 2.0;
  for (int d = 1; d <= 2; ++d) {
    for (double s : {0.8, 1.0, 1.5, 2.5}) {
      if (!(2.0 * s > std::max(d, 1) + 1e-12)) continue;
      const int j_lo = static_cast<int>(std::ceil(std::log2(d)));
      for (int J = j_lo; J <= 5; ++J) {
        const double radius = d == 1 ? 20000.0 : 400.0;
        const TailSum ts = tail_sum_bruteforce(J, s, d, m, radius);
        const double bound = tail_sum_bound(J, s, d, m);
        std::ostringstream name;
        name << "tail sum within bound, d=" << d << " s=" << s << " J=" << J;
        out.push_back(detail::check_le("tail", name.str(),
                                       ts.value + ts.remainder, bound));
      }
    }
  }
  // sum_{|k| >= 4} |k|^-2 = 2 (pi^2/6 - 1 - 1/4 - 1/9)
  const double anchor = 0.56764591147423063;
  const TailSum ts = tail_sum_bruteforce(2.0, 1.0, 1, 2.0, 1.0e7);
  out.push_back(detail::check_close("tail", "1-D closed-form anchor (s=1, J=2)",
                                    ts.value, anchor, 1.0e-6));
  out.push_back(detail::check_le("tail", "anchor remainder is small",
                                 ts.remainder, 1.0e-6));
  return out;
}

// Periodized Fourier autocorrelations against closed forms: the hat
// generator's is (2 + cos xi) / 3, the band-limited generator's is constant 1.
inline std::vector<CheckResult> verify_bracket_suite() {
  std::vector<CheckResult> out;
  const Generator hat = make_bspline2();
  const Generator band = make_sinc();
  double hat_worst = 0.0, hat_rem = 0.0, band_worst = 0.0, band_rem = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double xi = -10.0 + 20.0 * i / 99.0;
    const BracketValue bh = bracket_product(hat, 0.0, {xi}, 500);
    hat_worst = std::max(hat_worst,
                         std::abs(bh.value - (2.0 + std::cos(xi)) / 3.0));
    hat_rem = std::max(hat_rem, bh.remainder);
    const BracketValue bs = bracket_product(band, 0.0, {xi}, 500);
    band_worst = std::max(band_worst, std::abs(bs.value - 1.0));
    band_rem = std::max(band_rem, bs.remainder);
  }
  out.push_back(detail::check_le(
      "bracket", "hat generator matches (2 + cos xi)/3 on 100 points",
      hat_worst, 1.0e-8));
  out.push_back(detail::check_le("bracket", "hat truncation remainder",
                                 hat_rem, 1.0e-8));
  out.push_back(detail::check_le(
      "bracket", "band-limited generator bracket is 1 on 100 points",
      band_worst, 1.0e-10));
  out.push_back(detail::check_le("bracket", "band-limited remainder is zero",
                                 band_rem, 0.0));
  return out;
}

// Polynomial structure of the hat generator: translates sum to one, the
// first-moment combination reproduces x, and a unit shared offset makes the
// sampled expansion reproduce linear functions exactly.
inline std::vector<CheckResult> verify_poly_suite() {
  std::vector<CheckResult> out;
  const Generator hat = make_bspline2();
  double pu_worst = 0.0, shift_worst = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double x = -3.0 + 6.0 * i / 256.0;
    double pu = 0.0, shift = 0.0;
    for (std::int64_t k = static_cast<std::int64_t>(std::floor(x)) - 2;
         k <= static_cast<std::int64_t>(std::ceil(x)) + 2; ++k) {
      const double v = hat.eval({x - static_cast<double>(k)});
      pu += v;
      shift += (static_cast<double>(k) + 1.0) * v;
    }
    pu_worst = std::max(pu_worst, std::abs(pu - 1.0));
    shift_worst = std::max(shift_worst, std::abs(shift - x));
  }
  out.push_back(detail::check_le(
      "poly", "partition of unity on 257 points", pu_worst, 1.0e-12));
  out.push_back(detail::check_le(
      "poly", "sum (k+1) phi(x-k) reproduces x", shift_worst, 1.0e-10));

  // Unit shared offset: samples f(2^-N (k + 1)) with coefficients phi(2^N x - k)
  // cancel the one-step shift bias, so f(x) = x comes back exactly.
  const DilationScheme scheme = certify_isotropic({{2}});
  const int N = 2;
  const RealBox sample_domain({-4.0}, {4.0});
  const IndexBox box = index_box_for_domain(scheme, N, sample_domain,
                                            hat.support_intervals());
  std::vector<double> theta(
      static_cast<std::size_t>(box.cardinality()), 0.0);
  PerturbationSequence pert(box, {1.0}, std::move(theta), 0.5);
  const TestFunction f = make_linear();
  const Approximant a = build_approximant(hat, scheme, N, std::move(pert), f);
  double worst = 0.0;
  bool all_covered = true;
  const std::uint64_t key = subkey(0x706f6c79u, 11);
  for (std::uint64_t j = 0; j < 1000; ++j) {
    const double x = -3.0 + 6.0 * counter_uniform01(key, j);
    const EvalInfo info = eval_approximant_checked(a, {x});
    all_covered = all_covered && info.covered;
    worst = std::max(worst, std::abs(info.value - x));
  }
  CheckResult cov{"poly", "offset-compensated expansion covers the probes",
                  all_covered, all_covered ? "1000/1000 covered"
                                           : "uncovered probe points"};
  out.push_back(cov);
  out.push_back(detail::check_le(
      "poly", "unit offset reproduces f(x) = x on 1000 points", worst,
      1.0e-10));
  return out;
}

// Norm machinery against closed forms for f(x) = exp(-|x|): unit L2 norm,
// H^1 norm sqrt(2), and frequency/spatial Plancherel agreement.
inline std::vector<CheckResult> verify_norms_suite() {
  std::vector<CheckResult> out;
  const TestFunction f = make_exp_abs(1);
  const FourierQuadrature q{256.0, 1 << 16};
  const ValueWithError l2 = sobolev_norm(f, 0.0, q);
  out.push_back(detail::check_close("norms", "L2 norm of exp(-|x|) is 1",
                                    l2.value, 1.0, 1.0e-6));
  // The H^1 integrand 4/(1+xi^2) has a xi^-2 tail; the cutoff must be wide
  // for the missing mass to clear the 1e-5 tolerance.
  const FourierQuadrature q_wide{1.0e5, 1 << 20};
  const ValueWithError h1 = sobolev_norm(f, 1.0, q_wide);
  out.push_back(detail::check_close("norms", "H^1 norm of exp(-|x|) is sqrt 2",
                                    h1.value, std::sqrt(2.0), 1.0e-5));
  const ValueWithError sp = spatial_l2_norm(f, RealBox({-40.0}, {40.0}), 1 << 16);
  out.push_back(detail::check_le(
      "norms", "spatial and frequency L2 norms agree (Plancherel)",
      std::abs(sp.value - l2.value),
      sp.error_bound + l2.error_bound + 1.0e-9));
  return out;
}

inline std::vector<std::string> verify_suite_names() {
  return {"tail", "bracket", "poly", "norms"};
}

inline std::vector<CheckResult> run_verify_suite(const std::string& name) {
  if (name == "tail") return verify_tail_suite();
  if (name == "bracket") return verify_bracket_suite();
  if (name == "poly") return verify_poly_suite();
  if (name == "norms") return verify_norms_suite();
  throw argument_error("unknown verify suite '" + name + "'");
}

}  // namespace framelet
