#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "framelet/approximant.hpp"
#include "framelet/bounds.hpp"
#include "framelet/bracket.hpp"
#include "framelet/errors.hpp"
#include "framelet/generator.hpp"
#include "framelet/jitter.hpp"
#include "framelet/lattice.hpp"
#include "framelet/norms.hpp"
#include "framelet/rate.hpp"
#include "framelet/test_function.hpp"

namespace {

using namespace framelet;

TEST(RateExponents, FrozenValues) {
  EXPECT_NEAR(eta_exponent(2, 1.0, 1.25), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(eta_exponent(2, 0.6, 1.4), 0.4, 1e-15);
  BoundParams p;
  p.kappa1 = 2;
  p.s = 1.0;
  p.varsigma = 1.25;
  EXPECT_DOUBLE_EQ(eta_exponent(p), eta_exponent(2, 1.0, 1.25));
}

TEST(RateExponents, VanishesAsSourceApproachesTarget) {
  EXPECT_LT(eta_exponent(2, 1.0, 1.0 + 1e-12), 1e-11);
  double prev = 0.0;
  for (double varsigma : {1.1, 1.4, 1.8, 2.0}) {
    const double e = eta_exponent(2, 1.0, varsigma);
    EXPECT_GT(e, prev);
    prev = e;
  }
}

TEST(RateExponents, RejectsInvalidOrdering) {
  EXPECT_THROW(eta_exponent(2, 1.4, 1.4), argument_error);
  EXPECT_THROW(eta_exponent(2, 1.5, 1.2), argument_error);
  EXPECT_THROW(eta_exponent(2, 1.0, 3.5), argument_error);
}

TEST(ScatterExponents, FrozenValues) {
  EXPECT_NEAR(zeta_exponent(1.0, 1.4, 0.5, 1), 0.4, 1e-15);
  EXPECT_NEAR(zeta_exponent(1.0, 3.0, 0.5, 1), 6.0 / 7.0, 1e-12);
  EXPECT_NEAR(zeta_exponent(1.0, 1.05, 0.5, 1), 0.05, 1e-15);
}

TEST(ScatterExponents, MonotoneInSourceSmoothness) {
  double prev = 0.0;
  for (double varsigma : {1.1, 1.3, 1.6, 2.0}) {
    const double z = zeta_exponent(1.0, varsigma, 0.5, 1);
    EXPECT_GE(z, prev);
    prev = z;
  }
}

TEST(ScatterExponents, PairingRules) {
  EXPECT_NO_THROW(check_alpha_pairing(1.0, 0.5, 1));
  EXPECT_THROW(check_alpha_pairing(0.9, 0.9, 1), argument_error);
  EXPECT_THROW(check_alpha_pairing(1.0, 1.0, 1), argument_error);
  EXPECT_THROW(zeta_exponent(1.0, 0.9, 0.5, 1), argument_error);
  EXPECT_THROW(zeta_exponent(0.5, 1.4, 0.5, 1), argument_error);
  EXPECT_THROW(zeta_exponent(1.0, 1.4, 1.5, 1), argument_error);
}

TEST(TailBounds, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(tail_sum_bound(2.0, 1.0, 1, 2.0), 4.0);
  EXPECT_NEAR(tail_sum_bound(1.0, 1.5, 1, 2.0), 6.0, 1e-12);
  EXPECT_NEAR(tail_sum_bound(1.0, 2.0, 2, 2.0), 68.0 / 3.0, 1e-12);
}

TEST(TailBounds, RejectsInvalidParameters) {
  EXPECT_THROW(tail_sum_bound(0.0, 1.0, 2, 2.0), argument_error);
  EXPECT_THROW(tail_sum_bound(1.0, 0.5, 1, 2.0), argument_error);
  EXPECT_THROW(tail_sum_bound(1.0, 0.4, 1, 2.0), argument_error);
  EXPECT_THROW(tail_sum_bound(1.0, 1.0, 1, 1.0), argument_error);
}

TEST(TailBounds, BruteForceMatchesAnalyticSums) {
  // J = 2, s = 1, d = 1: the full lattice tail is 2 (pi^2/6 - 49/36).
  const double exact4 = 2.0 * (M_PI * M_PI / 6.0 - 49.0 / 36.0);
  const auto t = tail_sum_bruteforce(2.0, 1.0, 1, 2.0, 1e7);
  EXPECT_NEAR(t.value, 0.5676459114742306, 1e-6);
  EXPECT_LE(t.value, exact4 + 1e-12);
  EXPECT_GE(t.value + t.remainder, exact4 - 1e-12);

  // J = 0, s = 1, d = 1: the full sum over j != 0 is pi^2/3.
  const double exact1 = M_PI * M_PI / 3.0;
  const auto u = tail_sum_bruteforce(0.0, 1.0, 1, 2.0, 1e6);
  EXPECT_NEAR(u.value, exact1, 3e-6);
  EXPECT_LE(u.value, exact1 + 1e-12);
  EXPECT_GE(u.value + u.remainder, exact1 - 1e-12);
}

TEST(TailBounds, BruteForceStaysUnderClosedBound) {
  struct Case {
    double J;
    double s;
    int d;
    double radius;
  };
  const Case cases[] = {{0.0, 1.0, 1, 20000.0}, {2.0, 1.5, 1, 20000.0},
                        {1.0, 1.5, 2, 400.0},   {3.0, 2.5, 2, 400.0},
                        {2.0, 2.5, 3, 60.0}};
  for (const auto& c : cases) {
    const auto t = tail_sum_bruteforce(c.J, c.s, c.d, 2.0, c.radius);
    const double bound = tail_sum_bound(c.J, c.s, c.d, 2.0);
    EXPECT_LE(t.value + t.remainder, bound)
        << "J = " << c.J << ", s = " << c.s << ", d = " << c.d;
    EXPECT_GT(t.value, 0.0);
  }
}

TEST(TailBounds, BruteForceGuards) {
  EXPECT_THROW(tail_sum_bruteforce(1.0, 0.5, 1, 2.0, 100.0), argument_error);
  EXPECT_THROW(tail_sum_bruteforce(3.0, 1.0, 1, 2.0, 4.0), argument_error);
  EXPECT_THROW(tail_sum_bruteforce(0.0, 1.0, 1, 2.0, 1.0), argument_error);
  EXPECT_THROW(tail_sum_bruteforce(1.0, 1.0, 1, 1.0, 100.0), argument_error);
  EXPECT_THROW(tail_sum_bruteforce(0.0, 2.5, 3, 2.0, 3000.0), resource_error);
}

TEST(StabilityConstants, FrozenValues) {
  BoundParams p;
  p.s = 1.0;
  p.alpha = 0.5;
  p.d = 1;
  const auto c = perturbation_constants(p, make_bspline2());
  EXPECT_NEAR(c.C3, 2.5869634595357804, 1e-12);
  // C2 with the certified alias-sum sup; the sup itself is barely above 1.
  EXPECT_NEAR(c.C2, 31.75618403663702, 0.01);
  EXPECT_GE(c.C2, 31.75618403663702 * (1.0 - 1e-12));
  EXPECT_GE(c.bracket0_sup, 1.0);
  EXPECT_LE(c.bracket0_sup, 1.0005);
}

TEST(StabilityConstants, InternalConsistency) {
  BoundParams p;
  p.s = 1.0;
  p.alpha = 0.5;
  p.d = 1;
  const auto c = perturbation_constants(p, make_bspline2());
  const double two_pi = 2.0 * M_PI;
  const double rebuilt =
      std::sqrt(c.bracket0_sup / std::pow(two_pi, p.d - 2) *
                (c.C3 + 4.0 * std::pow(two_pi, 2.0 * p.d)));
  EXPECT_NEAR(c.C2, rebuilt, 1e-12 * rebuilt);
  const auto doubled = perturbation_constants(p, make_bspline2(), 2.0);
  EXPECT_NEAR(doubled.C2, 2.0 * c.C2, 1e-12 * c.C2);
  EXPECT_DOUBLE_EQ(doubled.C3, c.C3);
}

TEST(StabilityConstants, PositiveAcrossParameterGrid) {
  for (double s : {0.8, 1.0, 1.3}) {
    BoundParams p;
    p.s = s;
    p.alpha = 0.5;
    p.d = 1;
    const auto c = perturbation_constants(p, make_bspline2());
    EXPECT_GT(c.C3, 0.0);
    EXPECT_GT(c.C2, 0.0);
  }
}

TEST(StabilityConstants, TensorCase) {
  BoundParams p;
  p.s = 1.2;
  p.alpha = 0.3;
  p.d = 2;
  const auto c = perturbation_constants(p, parse_generator("tensor:bspline2^2"));
  const double sup1 = bracket0_sup(make_bspline2());
  EXPECT_NEAR(c.bracket0_sup, sup1 * sup1, 1e-12);
  EXPECT_GT(c.C2, 0.0);
}

TEST(StabilityConstants, RejectsInvalidPairings) {
  BoundParams p;
  p.s = 0.9;
  p.alpha = 0.9;
  p.d = 1;
  EXPECT_THROW(perturbation_constants(p, make_bspline2()), argument_error);
  BoundParams q;
  q.s = 1.0;
  q.alpha = 0.5;
  q.d = 2;
  EXPECT_THROW(perturbation_constants(q, make_bspline2()), argument_error);
}

TEST(SobolevNorms, ExponentialKernelOracles) {
  const TestFunction f = make_exp_abs(1);
  const auto l2 = sobolev_norm(f, 0.0, FourierQuadrature{256.0, 65536});
  EXPECT_NEAR(l2.value, 1.0, 1e-6);
  EXPECT_LE(std::abs(l2.value - 1.0), l2.error_bound + 1e-9);

  const auto h1 = sobolev_norm(f, 1.0, FourierQuadrature{1e5, 1 << 20});
  EXPECT_NEAR(h1.value, std::sqrt(2.0), 1e-5);
  EXPECT_LE(std::abs(h1.value - std::sqrt(2.0)), h1.error_bound + 1e-9);
}

TEST(SobolevNorms, GaussianOracle) {
  const TestFunction f = make_gauss(1);
  const auto l2 = sobolev_norm(f, 0.0, FourierQuadrature{16.0, 65536});
  // ||e^{-x^2}||_{L2} = (pi/2)^{1/4}.
  EXPECT_NEAR(l2.value, std::pow(M_PI / 2.0, 0.25), 1e-6);
  EXPECT_LE(std::abs(l2.value - std::pow(M_PI / 2.0, 0.25)),
            l2.error_bound + 1e-9);
}

TEST(SobolevNorms, BandLimitedCombination) {
  const TestFunction f = make_sinc_combo();
  const auto l2 = sobolev_norm(f, 0.0, FourierQuadrature{16.0, 1 << 16});
  // Orthonormal integer shifts of sinc: ||f||^2 = 1 + 1/4 + 1/16.
  EXPECT_NEAR(l2.value, std::sqrt(1.3125), 2e-3);
  const auto h2 = sobolev_norm(f, 2.0, FourierQuadrature{16.0, 1 << 16});
  EXPECT_GE(h2.value, l2.value);
}

TEST(SobolevNorms, ScalesLinearly) {
  const TestFunction base = make_gauss(1);
  TestFunction scaled = base;
  scaled.eval = [&base](const std::vector<double>& x) {
    return 3.0 * base.eval(x);
  };
  scaled.fourier = [&base](const std::vector<double>& xi) {
    return 3.0 * base.fourier(xi);
  };
  const FourierQuadrature q{16.0, 8192};
  const auto a = sobolev_norm(base, 0.7, q);
  const auto b = sobolev_norm(scaled, 0.7, q);
  EXPECT_NEAR(b.value, 3.0 * a.value, 1e-12 * a.value);
}

TEST(SobolevNorms, PlancherelConsistency) {
  {
    const TestFunction f = make_exp_abs(1);
    const auto freq = sobolev_norm(f, 0.0, FourierQuadrature{256.0, 65536});
    const auto spat = spatial_l2_norm(f, RealBox({-40.0}, {40.0}), 65536);
    EXPECT_LE(std::abs(freq.value - spat.value),
              freq.error_bound + spat.error_bound + 1e-9);
  }
  {
    const TestFunction f = make_gauss(1);
    const auto freq = sobolev_norm(f, 0.0, FourierQuadrature{16.0, 65536});
    const auto spat = spatial_l2_norm(f, RealBox({-10.0}, {10.0}), 65536);
    EXPECT_LE(std::abs(freq.value - spat.value),
              freq.error_bound + spat.error_bound + 1e-9);
  }
  {
    const TestFunction f = make_exp_abs(2);
    const auto freq = sobolev_norm(f, 0.0, FourierQuadrature{64.0, 2048});
    const auto spat =
        spatial_l2_norm(f, RealBox({-20.0, -20.0}, {20.0, 20.0}), 2048);
    EXPECT_LE(std::abs(freq.value - spat.value),
              freq.error_bound + spat.error_bound + 1e-9);
  }
  {
    const TestFunction f = make_sinc_combo();
    const auto freq = sobolev_norm(f, 0.0, FourierQuadrature{16.0, 1 << 16});
    const auto spat = spatial_l2_norm(f, RealBox({-2000.0}, {2000.0}), 1 << 22);
    EXPECT_LE(std::abs(freq.value - spat.value),
              freq.error_bound + spat.error_bound + 1e-9);
  }
}

TEST(SobolevNorms, GuardsAndUnsupportedInputs) {
  EXPECT_THROW(sobolev_norm(make_const_one(1), 0.0, FourierQuadrature{16.0, 4096}),
               unsupported_error);
  // 2s - 4 + 1 >= -1: the certificate cannot integrate the tail.
  EXPECT_THROW(sobolev_norm(make_exp_abs(1), 1.5, FourierQuadrature{16.0, 4096}),
               argument_error);
  EXPECT_THROW(sobolev_norm(make_gauss(1), 0.0, FourierQuadrature{1.0, 4096}),
               argument_error);
  EXPECT_THROW(sobolev_norm(make_sinc_combo(), 0.0, FourierQuadrature{2.0, 4096}),
               argument_error);
  EXPECT_THROW(sobolev_norm(make_gauss(1), 0.0, FourierQuadrature{16.0, 2}),
               argument_error);
  EXPECT_THROW(spatial_l2_norm(make_gauss(1), RealBox({2.0}, {4.0}), 4096),
               argument_error);
  EXPECT_THROW(spatial_l2_norm(make_gauss(1), RealBox({-4.0}, {4.0}), 2),
               argument_error);
  EXPECT_THROW(spatial_l2_norm(make_linear(), RealBox({-4.0}, {4.0}), 4096),
               unsupported_error);
}

PerturbationSequence zero_sequence(const IndexBox& box) {
  const int d = box.dim();
  return PerturbationSequence(
      box, std::vector<double>(static_cast<std::size_t>(d), 0.0),
      std::vector<double>(
          static_cast<std::size_t>(box.cardinality()) * static_cast<std::size_t>(d),
          0.0),
      0.5);
}

TEST(RelativeError, ExactForConstantWindow) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-20}, {20});
  const auto a = build_approximant(make_bspline2(), scheme, 2,
                                   zero_sequence(box), make_const_one(1));
  EXPECT_LT(relative_l2_error(make_const_one(1), a, RealBox({-1.0}, {1.0}), 32.0),
            1e-12);
}

TEST(RelativeError, ZeroReconstructionGivesFullError) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-8}, {8});
  TestFunction zero = make_exp_abs(1);
  zero.id = "zero";
  zero.eval = [](const std::vector<double>&) { return 0.0; };
  const auto a = build_approximant(make_bspline2(), scheme, 1,
                                   zero_sequence(box), zero);
  EXPECT_DOUBLE_EQ(relative_l2_error(make_exp_abs(1), a, RealBox({-2.0}, {2.0}),
                                     64.0),
                   1.0);
}

TEST(RelativeError, FrozenLevelPair) {
  const auto scheme = certify_isotropic({{2}});
  const TestFunction f = make_exp_abs(1);
  const RealBox domain({-8.0}, {8.0});
  const Generator g = make_bspline2();
  double err[2];
  const int levels[2] = {3, 6};
  for (int i = 0; i < 2; ++i) {
    const int N = levels[i];
    const auto box = index_box_for_domain(scheme, N, domain,
                                          g.support_intervals());
    const auto a = build_approximant(g, scheme, N, zero_sequence(box), f);
    err[i] = relative_l2_error(f, a, domain, 4.0 * std::pow(2.0, N));
  }
  EXPECT_NEAR(err[0], 0.11986151495665012, 1e-9);
  EXPECT_NEAR(err[1], 0.015541545570775648, 1e-9);
  EXPECT_LT(err[1], err[0]);
}

TEST(RelativeError, ArgumentChecks) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-4}, {4});
  const auto a = build_approximant(make_bspline2(), scheme, 1,
                                   zero_sequence(box), make_exp_abs(1));
  EXPECT_THROW(relative_l2_error(make_exp_abs(1), a, RealBox({-2.0}, {2.0}), 0.0),
               argument_error);
  EXPECT_THROW(relative_l2_error(make_exp_abs(1), a, RealBox({-2.0}, {2.0}), -4.0),
               argument_error);
  EXPECT_THROW(relative_l2_error(make_exp_abs(2), a,
                                 RealBox({-2.0, -2.0}, {2.0, 2.0}), 16.0),
               argument_error);
  TestFunction zero = make_exp_abs(1);
  zero.id = "zero";
  zero.eval = [](const std::vector<double>&) { return 0.0; };
  const auto az = build_approximant(make_bspline2(), scheme, 1,
                                    zero_sequence(box), zero);
  EXPECT_THROW(relative_l2_error(zero, az, RealBox({-2.0}, {2.0}), 16.0),
               argument_error);
}

TEST(RateFitting, RecoversExactGeometricDecay) {
  {
    const std::vector<RatePoint> pts = {{1, 0.4}, {2, 0.2}, {3, 0.1}, {4, 0.05}};
    const auto r = rate_fit(pts, 2.0);
    EXPECT_NEAR(r.slope, 1.0, 1e-12);
    EXPECT_NEAR(r.residual_rms, 0.0, 1e-12);
    EXPECT_FALSE(r.exact_floor);
  }
  {
    std::vector<RatePoint> pts;
    for (int n = 1; n <= 5; ++n)
      pts.push_back({n, 0.3 * std::pow(4.0, -n)});
    const auto r = rate_fit(pts, 2.0);
    EXPECT_NEAR(r.slope, 2.0, 1e-12);
  }
}

TEST(RateFitting, OutlierBarelyMovesSlope) {
  std::vector<RatePoint> clean;
  for (int n = 1; n <= 6; ++n) clean.push_back({n, 0.4 * std::pow(2.0, -n)});
  auto bumped = clean;
  bumped[2].error *= 1.01;
  const double s0 = rate_fit(clean, 2.0).slope;
  const double s1 = rate_fit(bumped, 2.0).slope;
  EXPECT_NEAR(s0, 1.0, 1e-12);
  EXPECT_LE(std::abs(s1 - s0), 0.02);
}

TEST(RateFitting, FlagsExactnessFloor) {
  const std::vector<RatePoint> pts = {{1, 1e-9}, {2, 3e-10}, {3, 0.0}};
  const auto r = rate_fit(pts, 2.0);
  EXPECT_TRUE(r.exact_floor);
  EXPECT_DOUBLE_EQ(r.slope, 0.0);
  // A zero above the floor has no log-scale representation.
  const std::vector<RatePoint> mixed = {{1, 0.1}, {2, 0.0}, {3, 0.2}};
  EXPECT_THROW(rate_fit(mixed, 2.0), argument_error);
}

TEST(RateFitting, ArgumentChecks) {
  const std::vector<RatePoint> two = {{1, 0.4}, {2, 0.2}};
  EXPECT_THROW(rate_fit(two, 2.0), argument_error);
  const std::vector<RatePoint> flat = {{2, 0.4}, {2, 0.2}, {2, 0.1}};
  EXPECT_THROW(rate_fit(flat, 2.0), argument_error);
  const std::vector<RatePoint> neg = {{1, 0.4}, {2, -0.2}, {3, 0.1}};
  EXPECT_THROW(rate_fit(neg, 2.0), argument_error);
  const std::vector<RatePoint> ok = {{1, 0.4}, {2, 0.2}, {3, 0.1}};
  EXPECT_THROW(rate_fit(ok, 1.0), argument_error);
}

}  // namespace
