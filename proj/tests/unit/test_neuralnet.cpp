#include "oracles.hpp"

#include <fsdr/neuralnet.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace fsdr;
using namespace fsdr::nn;

namespace {

Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

MlpModel randomized(std::vector<int> dims, std::uint64_t seed) {
  MlpModel m = init_model(dims, seed);
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> g(0.0, 0.5);
  for (double& p : m.params.values()) p = g(rng);  // non-zero biases too
  return m;
}

double loss_of(const MlpModel& m, const Matrix& x, const Vector& y) {
  return mse_loss(predict(m, x), y).loss;
}

}  // namespace

TEST(Mlp, InitShapes) {
  const std::vector<int> dims = {5, 15, 10, 1};
  const auto m = init_model(dims, 1);
  ASSERT_EQ(m.params.n_layers(), 3u);
  EXPECT_EQ(m.params.weights(0).rows(), 5);
  EXPECT_EQ(m.params.weights(0).cols(), 15);
  EXPECT_EQ(m.params.weights(1).rows(), 15);
  EXPECT_EQ(m.params.weights(1).cols(), 10);
  EXPECT_EQ(m.params.weights(2).rows(), 10);
  EXPECT_EQ(m.params.weights(2).cols(), 1);
  EXPECT_EQ(m.params.size(), 5u * 15 + 15 + 15 * 10 + 10 + 10 + 1);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(m.params.bias(l).norm(), 0.0);
  // Xavier-uniform bound on the first layer.
  const double bound = std::sqrt(6.0 / (5 + 15));
  EXPECT_LE(m.params.weights(0).cwiseAbs().maxCoeff(), bound);
}

TEST(Mlp, InitIsDeterministic) {
  const std::vector<int> dims = {3, 4, 1};
  const auto a = init_model(dims, 42);
  const auto b = init_model(dims, 42);
  const auto c = init_model(dims, 43);
  EXPECT_TRUE(std::equal(a.params.values().begin(), a.params.values().end(), b.params.values().begin()));
  EXPECT_FALSE(std::equal(a.params.values().begin(), a.params.values().end(), c.params.values().begin()));
}

TEST(Mlp, InitRejectsBadDims) {
  EXPECT_THROW(init_model(std::vector<int>{3}, 0), InvalidInput);
  EXPECT_THROW(init_model(std::vector<int>{3, 4, 2}, 0), InvalidInput);
  EXPECT_THROW(init_model(std::vector<int>{3, 0, 1}, 0), InvalidInput);
}

TEST(Mlp, ZeroModelPredictsZero) {
  auto m = init_model(std::vector<int>{3, 4, 1}, 0);
  m.params.set_zero();
  const auto p = predict(m, random_matrix(7, 3, 1));
  EXPECT_EQ(p.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mlp, ForwardMatchesNaiveOracle) {
  const auto m = randomized({4, 15, 10, 1}, 3);
  const Matrix x = random_matrix(9, 4, 4);
  std::vector<std::vector<double>> rows;
  for (Index i = 0; i < x.rows(); ++i) rows.emplace_back(x.row(i).data(), x.row(i).data() + 4);
  const auto ref = oracle::naive_forward(m, rows);
  const auto got = forward(m, x).predictions;
  for (Index i = 0; i < x.rows(); ++i) EXPECT_NEAR(got(i), ref[static_cast<std::size_t>(i)], 1e-12);
}

TEST(Mlp, BatchIndependence) {
  const auto m = randomized({3, 5, 1}, 8);
  const Matrix x = random_matrix(64, 3, 9);
  const auto all = predict(m, x);
  const Matrix first = x.topRows(1);
  EXPECT_EQ(predict(m, first)(0), all(0));
}

TEST(Mlp, ForwardRejectsWrongWidth) {
  const auto m = init_model(std::vector<int>{3, 4, 1}, 0);
  EXPECT_THROW(forward(m, random_matrix(2, 2, 0)), InvalidInput);
}

TEST(Mse, ClosedForms) {
  Vector p(1), y(1);
  p << 1.0;
  y << 0.0;
  const auto r = mse_loss(p, y);
  EXPECT_DOUBLE_EQ(r.loss, 1.0);
  EXPECT_DOUBLE_EQ(r.grad(0), 2.0);
  const auto z = mse_loss(y, y);
  EXPECT_EQ(z.loss, 0.0);
  EXPECT_EQ(z.grad(0), 0.0);
  EXPECT_THROW(mse_loss(Vector::Zero(2), Vector::Zero(3)), InvalidInput);
}

TEST(Mse, GradientMatchesFiniteDifference) {
  const Vector p = random_matrix(6, 1, 1).col(0);
  const Vector y = random_matrix(6, 1, 2).col(0);
  const auto r = mse_loss(p, y);
  for (Index i = 0; i < p.size(); ++i) {
    auto f = [&](double v) {
      Vector q = p;
      q(i) = v;
      return mse_loss(q, y).loss;
    };
    EXPECT_NEAR(r.grad(i), oracle::central_difference(f, p(i), 1e-6), 1e-7);
  }
}

TEST(Backward, MatchesFiniteDifferences) {
  auto m = randomized({3, 4, 2, 1}, 5);
  const Matrix x = random_matrix(5, 3, 6);
  const Vector y = random_matrix(5, 1, 7).col(0);
  const auto fwd = forward(m, x);
  const auto g = backward(m, fwd.cache, mse_loss(fwd.predictions, y).grad);

  const double h = 1e-5;
  double worst = 0.0;
  auto values = m.params.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double keep = values[k];
    values[k] = keep + h;
    const double up = loss_of(m, x, y);
    values[k] = keep - h;
    const double down = loss_of(m, x, y);
    values[k] = keep;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, oracle::rel_error(g.params.values()[k], fd, 1e-6));
  }
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      Matrix xp = x, xm = x;
      xp(i, j) += h;
      xm(i, j) -= h;
      const double fd = (loss_of(m, xp, y) - loss_of(m, xm, y)) / (2 * h);
      worst = std::max(worst, oracle::rel_error(g.inputs(i, j), fd, 1e-6));
    }
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Backward, ZeroUpstreamGivesZero) {
  const auto m = randomized({3, 4, 1}, 2);
  const auto fwd = forward(m, random_matrix(4, 3, 3));
  const auto g = backward(m, fwd.cache, Vector::Zero(4));
  for (double v : g.params.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(g.inputs.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Backward, RejectsMismatchedCache) {
  const auto m = randomized({3, 4, 1}, 2);
  const auto other = randomized({2, 4, 1}, 2);
  const auto fwd = forward(other, random_matrix(4, 2, 3));
  EXPECT_THROW(backward(m, fwd.cache, Vector::Zero(4)), InvalidInput);
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
  std::vector<double> p = {1.0, -2.0, 0.5};
  const std::vector<double> g = {0.3, -7.0, 1e-3};
  AdamState st(3, AdamConfig{.learning_rate = 0.01});
  ASSERT_TRUE(adam_step(p, g, st));
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  EXPECT_NEAR(p[0], 1.0 - 0.01 * 0.3 / (0.3 + 1e-8), 1e-15);
  EXPECT_NEAR(p[1], -2.0 + 0.01 * 7.0 / (7.0 + 1e-8), 1e-15);
  EXPECT_NEAR(p[2], 0.5 - 0.01 * 1e-3 / (1e-3 + 1e-8), 1e-15);
  EXPECT_EQ(st.step(), 1);
}

TEST(Adam, ZeroGradientLeavesParametersAndDecaysMoments) {
  std::vector<double> p = {1.0};
  AdamState st(1);
  ASSERT_TRUE(adam_step(p, std::vector<double>{1.0}, st));
  const double m1 = st.first_moment()[0];
  const double v1 = st.second_moment()[0];
  const double after_first = p[0];
  ASSERT_TRUE(adam_step(p, std::vector<double>{0.0}, st));
  EXPECT_DOUBLE_EQ(st.first_moment()[0], 0.9 * m1);
  EXPECT_DOUBLE_EQ(st.second_moment()[0], 0.999 * v1);
  // Momentum keeps moving p; a fresh state with zero gradient does not.
  EXPECT_LT(p[0], after_first);
  std::vector<double> q = {1.0};
  AdamState fresh(1);
  ASSERT_TRUE(adam_step(q, std::vector<double>{0.0}, fresh));
  EXPECT_EQ(q[0], 1.0);
}

TEST(Adam, ConstantGradientDescends) {
  std::vector<double> p = {0.0, 0.0};
  AdamState st(2);
  for (int k = 0; k < 100; ++k) ASSERT_TRUE(adam_step(p, std::vector<double>{2.0, -0.5}, st));
  EXPECT_LT(p[0], 0.0);
  EXPECT_GT(p[1], 0.0);
}

TEST(Adam, SkipsNonFiniteAndRejectsMismatch) {
  std::vector<double> p = {1.0, 2.0};
  AdamState st(2);
  EXPECT_FALSE(adam_step(p, std::vector<double>{std::nan(""), 1.0}, st));
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], 2.0);
  EXPECT_EQ(st.step(), 0);
  EXPECT_THROW(adam_step(p, std::vector<double>{1.0}, st), InvalidInput);
}

TEST(Checkpoint, RoundTrip) {
  const auto m = randomized({3, 4, 2, 1}, 4);
  const auto j = to_json(m);
  EXPECT_EQ(j.at("activation"), "tanh");
  const auto back = model_from_json(j);
  EXPECT_EQ(back.layer_dims(), m.layer_dims());
  EXPECT_TRUE(std::equal(back.params.values().begin(), back.params.values().end(), m.params.values().begin()));
  auto bad = j;
  bad["parameters"].erase(0);
  EXPECT_THROW(model_from_json(bad), InvalidInput);
}

TEST(Regressor, DeterministicAndLearns) {
  const Matrix x = random_matrix(200, 2, 1);
  const Vector y = x.col(0) * 0.8 - x.col(1) * 0.3;
  RegressorConfig cfg;
  cfg.epochs = 100;
  const auto a = fit_regressor(x, y, cfg, 3);
  const auto b = fit_regressor(x, y, cfg, 3);
  EXPECT_TRUE(std::equal(a.params.values().begin(), a.params.values().end(), b.params.values().begin()));
  const double var = (y.array() - y.mean()).square().mean();
  EXPECT_LT(loss_of(a, x, y), 0.05 * var);
}
