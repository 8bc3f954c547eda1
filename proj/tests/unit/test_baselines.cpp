#include "oracles.hpp"

#include <fsdr/baselines.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace fsdr;
using namespace fsdr::baselines;

namespace {

Matrix gaussian(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = g(rng);
  return x;
}

Vector noise(Index n, std::uint64_t seed, double sd = 1.0) {
  return gaussian(n, 1, seed).col(0) * sd;
}

void expect_contract(const SelectionResult& r, int t, Index d) {
  EXPECT_LE(r.t_prime(), t);
  EXPECT_TRUE(std::is_sorted(r.selected.begin(), r.selected.end()));
  EXPECT_EQ(std::adjacent_find(r.selected.begin(), r.selected.end()), r.selected.end());
  for (int j : r.selected) {
    EXPECT_GE(j, 1);
    EXPECT_LE(j, d);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MI

TEST(Mi, BinsByRank) {
  const std::vector<double> v = {0.5, -1.0, 3.0, 2.0, 2.0, 10.0, 7.0, 0.0};
  const auto b = equal_frequency_bins(v, 4);
  // Sorted ranks -1:0 0:1 0.5:2 2:3 2:4 3:5 7:6 10:7; the tied 2s share rank 3.
  EXPECT_EQ(b, (std::vector<int>{1, 0, 2, 1, 1, 3, 3, 0}));
  EXPECT_THROW(equal_frequency_bins(v, 1), InvalidInput);
}

TEST(Mi, MatchesContingencyOracle) {
  const Matrix x = gaussian(37, 3, 1);
  Vector y = x.col(1);
  const data::Dataset ds(x, y);
  const auto scores = mutual_information_scores(ds, 4);
  const auto yb = equal_frequency_bins(std::span<const double>(y.data(), 37), 4);
  for (Index j = 0; j < 3; ++j) {
    const Vector col = x.col(j);
    const auto xb = equal_frequency_bins(std::span<const double>(col.data(), 37), 4);
    EXPECT_NEAR(scores[static_cast<std::size_t>(j)], oracle::contingency_mi(xb, yb), 1e-12);
  }
  // Identical binnings give the entropy of the bins.
  EXPECT_GT(scores[1], scores[0]);
  EXPECT_GT(scores[1], scores[2]);
}

TEST(Mi, CopyRanksFirstAndNoiseStillReturnsT) {
  const Matrix x = gaussian(400, 10, 2);
  const data::Dataset copy(x, x.col(6));
  const auto r = mi_select(copy, 1);
  EXPECT_EQ(r.selected, FeatureSet{7});
  const data::Dataset indep(x, noise(400, 99));
  const auto scores = mutual_information_scores(indep, 16);
  for (double s : scores) EXPECT_LT(s, 0.5);
  const auto r3 = mi_select(indep, 3);
  EXPECT_EQ(r3.t_prime(), 3);
  expect_contract(r3, 3, 10);
}

TEST(Mi, InvariantUnderMonotoneTransform) {
  Matrix x = gaussian(150, 4, 3);
  const Vector y = x.col(0).array().square() + noise(150, 4, 0.1).array();
  const data::Dataset a(x, y);
  Matrix z = x;
  z.col(0) = x.col(0).array().exp();
  z.col(2) = x.col(2).array().cube() * 5.0 + 1.0;
  const data::Dataset b(z, y);
  EXPECT_EQ(mutual_information_scores(a, 8), mutual_information_scores(b, 8));
}

TEST(Mi, ConstantFeatureScoresZeroAndTiesGoLow) {
  Matrix x = gaussian(50, 4, 5);
  x.col(1).setConstant(2.0);
  x.col(3).setConstant(-1.0);
  const data::Dataset ds(x, x.col(0));
  const auto s = mutual_information_scores(ds, 8);
  EXPECT_EQ(s[1], 0.0);
  EXPECT_EQ(s[3], 0.0);
  // Column 2 beats the constants; among the two constants feature 2 wins the tie.
  const auto r = mi_select(ds, 3);
  EXPECT_EQ(r.selected, (FeatureSet{1, 2, 3}));
}

// ---------------------------------------------------------------------------
// SFS

TEST(Sfs, PerfectPredictorFirst) {
  const Matrix x = gaussian(120, 5, 6);
  const data::Dataset ds(x, x.col(2));
  const auto r = sfs_select(ds, 1);
  EXPECT_EQ(r.selected, FeatureSet{3});
  ASSERT_TRUE(r.order);
  EXPECT_EQ(*r.order, std::vector<int>{3});
}

TEST(Sfs, FirstPickIsExhaustiveArgmax) {
  const Matrix x = gaussian(90, 6, 7);
  const Vector y = 0.6 * x.col(4) + 0.5 * x.col(1) + noise(90, 8, 0.8);
  const data::Dataset ds(x, y);
  const auto [train, val] = inner_split(90, 0.2, 0);
  int best = 0;
  double best_r2 = -1e300;
  for (int j = 1; j <= 6; ++j) {
    const std::vector<int> f = {j};
    const double r2 = ridge_validation_r2(ds, f, train, val, 1e-3);
    if (r2 > best_r2) {
      best_r2 = r2;
      best = j;
    }
  }
  const auto r = sfs_select(ds, 1);
  EXPECT_EQ(r.selected, FeatureSet{best});
}

TEST(Sfs, SecondPickIsExhaustiveGivenFirst) {
  const Matrix x = gaussian(100, 6, 9);
  const Vector y = x.col(0) - 0.7 * x.col(3) + 0.4 * x.col(5) + noise(100, 10, 0.5);
  const data::Dataset ds(x, y);
  const auto r = sfs_select(ds, 2);
  ASSERT_TRUE(r.order);
  const int first = r.order->at(0);
  const auto [train, val] = inner_split(100, 0.2, 0);
  int best = 0;
  double best_r2 = -1e300;
  for (int j = 1; j <= 6; ++j) {
    if (j == first) continue;
    const std::vector<int> f = {first, j};
    const double r2 = ridge_validation_r2(ds, f, train, val, 1e-3);
    if (r2 > best_r2) {
      best_r2 = r2;
      best = j;
    }
  }
  EXPECT_EQ(r.order->at(1), best);
}

TEST(Sfs, IncrementalScoresMatchDirectRidge) {
  // A greedy path checked step by step against full refits.
  const Matrix x = gaussian(80, 8, 11);
  const Vector y = x.col(1) + x.col(6) * 0.5 + noise(80, 12, 0.3);
  const data::Dataset ds(x, y);
  const auto r = sfs_select(ds, 5);
  const auto [train, val] = inner_split(80, 0.2, 0);
  std::vector<int> chosen;
  for (int step = 0; step < 5; ++step) {
    int best = 0;
    double best_r2 = -1e300;
    for (int j = 1; j <= 8; ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      auto f = chosen;
      f.push_back(j);
      const double r2 = ridge_validation_r2(ds, f, train, val, 1e-3);
      if (r2 > best_r2 + 1e-12) {
        best_r2 = r2;
        best = j;
      }
    }
    chosen.push_back(best);
  }
  EXPECT_EQ(*r.order, chosen);
}

TEST(Sfs, AllFeaturesWhenTEqualsD) {
  const Matrix x = gaussian(60, 5, 13);
  const data::Dataset ds(x, x.col(0) + noise(60, 14));
  const auto r = sfs_select(ds, 5);
  EXPECT_EQ(r.selected, (FeatureSet{1, 2, 3, 4, 5}));
  EXPECT_EQ(r.order->size(), 5u);
}

TEST(Sfs, SkipsConstantColumnWithWarning) {
  Matrix x = gaussian(60, 4, 15);
  x.col(2).setConstant(1.0);
  const data::Dataset ds(x, x.col(0) + noise(60, 16, 0.1));
  const auto r = sfs_select(ds, 4);
  EXPECT_EQ(r.selected, (FeatureSet{1, 2, 4}));
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("3"), std::string::npos);
}

TEST(Sfs, MlpInnerModelRuns) {
  const Matrix x = gaussian(200, 4, 17);
  const data::Dataset ds(x, x.col(3).array().tanh().matrix());
  SfsOptions o;
  o.inner = SfsInner::mlp;
  o.mlp.epochs = 200;
  const auto r = sfs_select(ds, 1, o);
  EXPECT_EQ(r.selected, FeatureSet{4});
}

// ---------------------------------------------------------------------------
// LASSO

TEST(Lasso, OrthonormalDesignClosedForm) {
  const Index n = 64;
  const Index d = 5;
  // Columns orthogonal to the constant vector and to each other, scaled so
  // that X^T X / N = I.
  Eigen::MatrixXd basis(n, d + 1);
  basis.col(0).setOnes();
  basis.rightCols(d) = gaussian(n, d, 19);
  const Eigen::MatrixXd qq =
      Eigen::HouseholderQR<Eigen::MatrixXd>(basis).householderQ() * Eigen::MatrixXd::Identity(n, d + 1);
  const Matrix x = qq.rightCols(d) * std::sqrt(static_cast<double>(n));
  const Vector y = x * (Vector(d) << 2.0, -1.0, 0.3, 0.0, -0.05).finished() + noise(n, 20, 0.1);
  const double lambda = 0.2;
  const auto fit = lasso_coordinate_descent(x, y, lambda);
  const Vector yc = y.array() - y.mean();
  for (Index j = 0; j < d; ++j) {
    const double z = x.col(j).dot(yc) / static_cast<double>(n);
    const double expect = std::copysign(std::max(std::abs(z) - lambda, 0.0), z);
    EXPECT_NEAR(fit.coefficients(j), expect, 1e-8) << j;
  }
}

TEST(Lasso, ZeroLambdaIsOls) {
  const Matrix x = gaussian(50, 4, 21);
  const Vector y = x * Vector::LinSpaced(4, -1, 2) + noise(50, 22, 0.3) + Vector::Constant(50, 3.0);
  const auto fit = lasso_coordinate_descent(x, y, 0.0);
  const auto [beta, intercept] = oracle::ols(x, y);
  for (Index j = 0; j < 4; ++j) EXPECT_NEAR(fit.coefficients(j), beta(j), 1e-8);
  EXPECT_NEAR(fit.intercept, intercept, 1e-8);
}

TEST(Lasso, ObjectiveNeverIncreases) {
  const Matrix x = gaussian(70, 30, 23);
  const Vector y = x.col(3) + x.col(10) * 0.5 + noise(70, 24, 0.5);
  const auto fit = lasso_coordinate_descent(x, y, 0.02);
  ASSERT_GT(fit.objective_trace.size(), 1u);
  for (std::size_t k = 1; k < fit.objective_trace.size(); ++k) {
    EXPECT_LE(fit.objective_trace[k], fit.objective_trace[k - 1] * (1 + 1e-14) + 1e-16) << k;
  }
  EXPECT_NEAR(fit.objective_trace.back(), lasso_objective(x, y, fit.coefficients, fit.intercept, 0.02), 1e-12);
}

TEST(Lasso, FullShrinkageWarns) {
  const Matrix x = gaussian(40, 6, 25);
  const data::Dataset ds(x, x.col(0) + noise(40, 26));
  LassoOptions o;
  o.lambda_path = {1e6};
  const auto r = lasso_select(ds, 3, o);
  EXPECT_EQ(r.t_prime(), 0);
  ASSERT_FALSE(r.warnings.empty());
}

TEST(Lasso, SelectsTopCoefficients) {
  const Matrix x = gaussian(200, 12, 27);
  const Vector y = 3 * x.col(2) - 2 * x.col(7) + x.col(9) + noise(200, 28, 0.2);
  const data::Dataset ds(x, y);
  const auto r = lasso_select(ds, 3);
  EXPECT_EQ(r.selected, (FeatureSet{3, 8, 10}));
  expect_contract(r, 3, 12);
  const auto r2 = lasso_select(ds, 2);
  EXPECT_EQ(r2.selected, (FeatureSet{3, 8}));
}

TEST(Lasso, PathAndErrors) {
  const Matrix x = gaussian(30, 3, 29);
  const Vector y = x.col(0);
  const auto path = default_lambda_path(x, y, 50, 1e-3);
  ASSERT_EQ(path.size(), 50u);
  EXPECT_NEAR(path.front(), lambda_max(x, y), 1e-15);
  EXPECT_NEAR(path.back(), lambda_max(x, y) * 1e-3, 1e-15);
  // At lambda_max every coefficient is zero.
  EXPECT_EQ(lasso_coordinate_descent(x, y, path.front()).coefficients.cwiseAbs().maxCoeff(), 0.0);
  LassoOptions bad;
  bad.lambda_path = {0.1, 0.2};
  EXPECT_THROW(lasso_select(data::Dataset(x, y), 1, bad), InvalidInput);
  LassoOptions tight;
  tight.max_sweeps = 1;
  try {
    lasso_coordinate_descent(gaussian(30, 10, 30), noise(30, 31), 1e-4, tight);
    FAIL();
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda"), std::string::npos);
  }
  // Selection keeps the last iterate and says so.
  tight.require_convergence = false;
  const auto loose = lasso_coordinate_descent(gaussian(30, 10, 30), noise(30, 31), 1e-4, tight);
  EXPECT_FALSE(loose.converged);
  EXPECT_EQ(loose.sweeps, 1);
  tight.require_convergence = true;  // lasso_select overrides it
  const auto sel = lasso_select(data::Dataset(gaussian(30, 10, 30), noise(30, 31)), 3, tight);
  EXPECT_EQ(sel.t_prime(), 3);
  ASSERT_FALSE(sel.warnings.empty());
  EXPECT_NE(sel.warnings.front().find("sweep budget"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Common interface

TEST(Selectors, ParseAndDispatch) {
  EXPECT_EQ(parse_method("lasso"), Method::lasso);
  EXPECT_EQ(to_string(Method::sfs), "sfs");
  EXPECT_THROW(parse_method("rfe"), InvalidInput);
  const Matrix x = gaussian(80, 10, 32);
  const data::Dataset ds(x, x.col(1) + 0.5 * x.col(4));
  for (Method m : {Method::mi, Method::sfs, Method::lasso, Method::fsdr}) {
    SelectorSpec spec;
    spec.method = m;
    spec.t = 3;
    spec.fsdr.epochs = 5;
    spec.fsdr.batch_size = 16;
    const auto a = run_selector(ds, spec, 4);
    const auto b = run_selector(ds, spec, 4);
    expect_contract(a, 3, 10);
    EXPECT_EQ(a.selected, b.selected) << to_string(m);
    EXPECT_EQ(a.method, to_string(m));
    if (m != Method::lasso && m != Method::fsdr) EXPECT_EQ(a.t_prime(), 3);
    EXPECT_GT(a.wall_time_seconds, 0.0);
  }
}

TEST(Selectors, RejectBadTargetSize) {
  const Matrix x = gaussian(20, 4, 33);
  const data::Dataset ds(x, x.col(0));
  EXPECT_THROW(mi_select(ds, 0), InvalidInput);
  EXPECT_THROW(sfs_select(ds, 5), InvalidInput);
  EXPECT_THROW(lasso_select(ds, 5), InvalidInput);
}
