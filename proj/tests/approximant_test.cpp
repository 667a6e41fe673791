#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "framelet/approximant.hpp"
#include "framelet/errors.hpp"
#include "framelet/generator.hpp"
#include "framelet/jitter.hpp"
#include "framelet/lattice.hpp"
#include "framelet/parallel.hpp"
#include "framelet/rng.hpp"
#include "framelet/test_function.hpp"

namespace {

using namespace framelet;

PerturbationSequence rest_sequence(const IndexBox& box) {
  const int d = box.dim();
  return PerturbationSequence(
      box, std::vector<double>(static_cast<std::size_t>(d), 0.0),
      std::vector<double>(
          static_cast<std::size_t>(box.cardinality()) * static_cast<std::size_t>(d),
          0.0),
      0.5);
}

PerturbationSequence offset_sequence(const IndexBox& box, double lambda) {
  auto seq = rest_sequence(box);
  for (double& v : seq.lambda) v = lambda;
  return seq;
}

TEST(SampleCache, StoresPointSamples) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-4}, {4});
  const auto a = build_approximant(make_bspline2(), scheme, 1,
                                   rest_sequence(box), make_exp_abs(1));
  ASSERT_EQ(a.samples.size(), 9u);
  // Node k = -1 sits at -1/2, so the cached value is e^{-1/2}.
  EXPECT_DOUBLE_EQ(a.samples[box.flatten({-1})], std::exp(-0.5));
  EXPECT_DOUBLE_EQ(a.samples[box.flatten({0})], 1.0);

  const auto lin = build_approximant(make_bspline2(), scheme, 1,
                                     rest_sequence(box), make_linear());
  EXPECT_DOUBLE_EQ(lin.samples[box.flatten({3})], 1.5);

  const auto window = build_approximant(make_bspline2(), scheme, 0,
                                        rest_sequence(box), make_const_one(1));
  for (double v : window.samples) EXPECT_EQ(v, 1.0);
}

TEST(SampleCache, DisplacementShiftsSampleSites) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-4}, {4});
  const auto a = build_approximant(make_bspline2(), scheme, 2,
                                   offset_sequence(box, 0.5), make_linear());
  // Node k = 3 with offset 0.5 samples at (3 + 0.5) / 4.
  EXPECT_DOUBLE_EQ(a.samples[box.flatten({3})], 0.875);
}

TEST(SampleCache, RejectsNonFiniteSamples) {
  TestFunction f = make_exp_abs(1);
  f.id = "reciprocal";
  f.eval = [](const std::vector<double>& x) { return 1.0 / x[0]; };
  const auto scheme = certify_isotropic({{2}});
  try {
    build_approximant(make_bspline2(), scheme, 1, rest_sequence(IndexBox({-2}, {2})), f);
    FAIL() << "expected data_error";
  } catch (const data_error& e) {
    EXPECT_NE(std::string(e.what()).find("(0)"), std::string::npos);
  }
}

TEST(SampleCache, RejectsMismatchedDimensions) {
  const auto s1 = certify_isotropic({{2}});
  const auto s2 = certify_isotropic({{2, 0}, {0, 2}});
  const IndexBox box({-2}, {2});
  EXPECT_THROW(build_approximant(make_bspline2(), s2, 1, rest_sequence(box),
                                 make_exp_abs(1)),
               argument_error);
  EXPECT_THROW(build_approximant(make_bspline2(), s1, 1, rest_sequence(box),
                                 make_exp_abs(2)),
               argument_error);
  EXPECT_THROW(build_approximant(make_bspline2(), s1, -1, rest_sequence(box),
                                 make_exp_abs(1)),
               argument_error);
}

TEST(SampleCache, DeterministicRebuild) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-40}, {40});
  const auto pert = generate_uniform_jitter(box, 0.8, 0.5, 17);
  const auto a = build_approximant(make_bspline2(), scheme, 3, pert,
                                   make_exp_abs(1));
  const auto b = build_approximant(make_bspline2(), scheme, 3, pert,
                                   make_exp_abs(1));
  EXPECT_EQ(a.samples, b.samples);
}

TEST(PointEvaluation, PartitionOfUnityWindow) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-20}, {20});
  const auto a = build_approximant(make_bspline2(), scheme, 2,
                                   rest_sequence(box), make_const_one(1));
  for (int i = 0; i <= 100; ++i) {
    const double x = -3.0 + 6.0 * i / 100.0;
    const auto info = eval_approximant_checked(a, {x});
    EXPECT_NEAR(info.value, 1.0, 1e-12);
    EXPECT_TRUE(info.covered);
    EXPECT_LE(info.terms, 2);
  }
}

TEST(PointEvaluation, LinearReproductionUnderUnitOffset) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-24}, {24});
  // Uniform sampling of f(x) = x reconstructs x - 2^-N (one translate lag).
  const auto plain = build_approximant(make_bspline2(), scheme, 0,
                                       rest_sequence(box), make_linear());
  EXPECT_NEAR(eval_approximant(plain, {5.0}), 4.0, 1e-12);
  EXPECT_NEAR(eval_approximant(plain, {4.5}), 3.5, 1e-12);
  // A shared offset lambda = 1 cancels the lag exactly.
  const auto shifted = build_approximant(make_bspline2(), scheme, 0,
                                         offset_sequence(box, 1.0), make_linear());
  EXPECT_NEAR(eval_approximant(shifted, {5.0}), 5.0, 1e-10);
  for (int i = 0; i < 200; ++i) {
    const double x = -10.0 + 20.0 * counter_uniform01(subkey(23, 1), i);
    EXPECT_NEAR(eval_approximant(shifted, {x}), x, 1e-10) << "x = " << x;
  }
}

TEST(PointEvaluation, CoverageFlag) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-8}, {8});
  const auto a = build_approximant(make_bspline2(), scheme, 1,
                                   rest_sequence(box), make_const_one(1));
  EXPECT_TRUE(eval_approximant_checked(a, {0.0}).covered);
  const auto outside = eval_approximant_checked(a, {30.0});
  EXPECT_FALSE(outside.covered);
  EXPECT_EQ(outside.value, 0.0);
}

TEST(PointEvaluation, CompactSupportLocality) {
  const auto s2 = certify_isotropic({{2, 0}, {0, 2}});
  const IndexBox box({-10, -10}, {10, 10});
  const auto a = build_approximant(parse_generator("tensor:bspline2^2"), s2, 1,
                                   rest_sequence(box), make_exp_abs(2));
  for (int i = 0; i < 50; ++i) {
    const double x = -3.0 + 6.0 * counter_uniform01(subkey(29, 1), 2 * i);
    const double y = -3.0 + 6.0 * counter_uniform01(subkey(29, 1), 2 * i + 1);
    const auto info = eval_approximant_checked(a, {x, y});
    EXPECT_LE(info.terms, 4);
    EXPECT_TRUE(info.covered);
  }
}

TEST(PointEvaluation, MatchesDirectSummation) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-30}, {30});
  const auto pert = generate_uniform_jitter(box, 0.6, 0.5, 41);
  {
    const Generator g = make_bspline2();
    const auto a = build_approximant(g, scheme, 2, pert, make_exp_abs(1));
    for (double x : {-2.7, -0.4, 0.0, 1.3, 3.9}) {
      double brute = 0.0;
      box.for_each([&](const std::vector<std::int64_t>& k) {
        brute += a.samples[box.flatten(k)] *
                 g.eval({4.0 * x - static_cast<double>(k[0])});
      });
      EXPECT_NEAR(eval_approximant(a, {x}), brute, 1e-13) << "x = " << x;
    }
  }
  {
    const Generator g = make_sinc(30.0);
    const auto a = build_approximant(g, scheme, 1, pert, make_exp_abs(1));
    for (double x : {-1.9, 0.3, 2.1}) {
      double brute = 0.0;
      box.for_each([&](const std::vector<std::int64_t>& k) {
        brute += a.samples[box.flatten(k)] *
                 g.eval({2.0 * x - static_cast<double>(k[0])});
      });
      EXPECT_NEAR(eval_approximant(a, {x}), brute, 1e-13) << "x = " << x;
    }
  }
}

TEST(Interpolation, BandLimitedCardinalValues) {
  // Sampling sinc(. - 3) at the integers keeps a single nonzero coefficient,
  // so the reconstruction is the translate itself.
  TestFunction f = make_sinc_combo();
  f.id = "shifted-cardinal";
  f.eval = [](const std::vector<double>& x) {
    const double t = x[0] - 3.0;
    return t == 0.0 ? 1.0 : std::sin(M_PI * t) / (M_PI * t);
  };
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-60}, {60});
  const auto a = build_approximant(make_sinc(120.0), scheme, 0,
                                   rest_sequence(box), f);
  EXPECT_NEAR(eval_approximant(a, {0.5}), 0.12732395447351627, 1e-12);
  for (int j = 0; j <= 5; ++j) {
    EXPECT_NEAR(eval_approximant(a, {static_cast<double>(j)}), j == 3 ? 1.0 : 0.0,
                1e-12);
  }
}

TEST(Interpolation, ExactOnBandLimitedCombination) {
  const TestFunction f = make_sinc_combo();
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-80}, {80});
  // Truncation window of +-60 around any probe point stays inside the box,
  // and every integer sample of the combination is hit exactly.
  const auto a = build_approximant(make_sinc(60.0), scheme, 0,
                                   rest_sequence(box), f);
  for (int i = -40; i <= 40; ++i) {
    const double x = i / 4.0;
    const auto info = eval_approximant_checked(a, {x});
    EXPECT_TRUE(info.covered);
    EXPECT_NEAR(info.value, f.eval({x}), 1e-10) << "x = " << x;
  }
}

TEST(GridEvaluation, MatchesPointwiseEvaluation) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-20}, {20});
  const auto a = build_approximant(make_bspline2(), scheme, 2,
                                   generate_uniform_jitter(box, 0.5, 0.5, 3),
                                   make_exp_abs(1));
  const Grid grid(RealBox({-4.0}, {4.0}), {101});
  const auto values = eval_approximant_grid(a, grid);
  ASSERT_EQ(values.size(), 101u);
  for (std::int64_t j = 0; j < 101; ++j) {
    EXPECT_EQ(values[static_cast<std::size_t>(j)],
              eval_approximant(a, grid.point(j)));
  }
  EXPECT_DOUBLE_EQ(grid.coordinate(0, 0), -4.0);
  EXPECT_DOUBLE_EQ(grid.coordinate(0, 100), 4.0);
  const Grid single(RealBox({-4.0}, {4.0}), {1});
  EXPECT_DOUBLE_EQ(single.coordinate(0, 0), 0.0);
}

TEST(GridEvaluation, ThreadCountInvariant) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-40}, {40});
  const auto a = build_approximant(make_bspline2(), scheme, 3,
                                   generate_uniform_jitter(box, 1.0, 0.5, 5),
                                   make_exp_abs(1));
  const Grid grid(RealBox({-5.0}, {5.0}), {20001});
  set_thread_count(1);
  const auto serial = eval_approximant_grid(a, grid);
  set_thread_count(4);
  const auto parallel = eval_approximant_grid(a, grid);
  set_thread_count(0);
  EXPECT_EQ(serial, parallel);
}

TEST(GridEvaluation, GuardsAndArgumentChecks) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-2}, {2});
  const auto a = build_approximant(make_bspline2(), scheme, 0,
                                   rest_sequence(box), make_const_one(1));
  EXPECT_THROW(eval_approximant_grid(a, Grid(RealBox({0.0, 0.0}, {1.0, 1.0}),
                                             {4, 4})),
               argument_error);
  EXPECT_THROW(eval_approximant_grid(
                   a, Grid(RealBox({0.0}, {1.0}), {(std::int64_t{1} << 25) + 1})),
               resource_error);
  EXPECT_THROW(Grid(RealBox({0.0}, {1.0}), {0}), argument_error);
  EXPECT_THROW(Grid(RealBox({0.0}, {1.0}), {4, 4}), argument_error);
  EXPECT_THROW(eval_approximant_checked(a, {0.0, 0.0}), argument_error);
}

TEST(OperatorLinearity, LinearCombinationOfSamples) {
  const auto scheme = certify_isotropic({{2}});
  const IndexBox box({-30}, {30});
  const auto pert = generate_uniform_jitter(box, 0.7, 0.5, 71);
  const TestFunction f1 = make_exp_abs(1);
  const TestFunction f2 = make_gauss(1);
  TestFunction combo = make_exp_abs(1);
  combo.id = "combo";
  combo.eval = [&](const std::vector<double>& x) {
    return 2.0 * f1.eval(x) - 0.7 * f2.eval(x);
  };
  const auto a1 = build_approximant(make_bspline2(), scheme, 3, pert, f1);
  const auto a2 = build_approximant(make_bspline2(), scheme, 3, pert, f2);
  const auto ac = build_approximant(make_bspline2(), scheme, 3, pert, combo);
  for (double x : {-3.1, -0.8, 0.2, 1.9}) {
    EXPECT_NEAR(eval_approximant(ac, {x}),
                2.0 * eval_approximant(a1, {x}) - 0.7 * eval_approximant(a2, {x}),
                1e-12);
  }
}

}  // namespace
