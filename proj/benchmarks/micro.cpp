#include <fsdr/baselines.hpp>
#include <fsdr/dataset.hpp>
#include <fsdr/neuralnet.hpp>
#include <fsdr/relaxation.hpp>
#include <fsdr/spline.hpp>

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

using namespace fsdr;

namespace {

data::Dataset synthetic(Index n, Index d) {
  data::SyntheticSpec spec;
  spec.n_samples = n;
  spec.n_features = d;
  spec.planted_bands = {static_cast<int>(d / 4), static_cast<int>(d / 2), static_cast<int>(3 * d / 4)};
  spec.seed = 1;
  return data::standardize(data::generate_synthetic(spec).dataset).first;
}

void spline_fit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(spline::fit_natural_cubic(values));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(spline_fit)->RangeMultiplier(8)->Range(64, 4096)->Complexity();

void spline_eval(benchmark::State& state) {
  std::vector<double> values(512);
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = std::sin(0.05 * static_cast<double>(j));
  const auto s = spline::fit_natural_cubic(values);
  double x = 0.0;
  for (auto _ : state) {
    double v, d;
    s.eval_with_deriv(x, v, d);
    benchmark::DoNotOptimize(v + d);
    x += 0.000731;
    if (x > 1.0) x -= 1.0;
  }
}
BENCHMARK(spline_eval);

void mlp_forward_backward(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const std::vector<int> dims = {t, 15, 10, 1};
  const auto model = nn::init_model(dims, 1);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Matrix x(64, t);
  Vector y(64);
  for (Index i = 0; i < 64; ++i) {
    for (Index j = 0; j < t; ++j) x(i, j) = g(rng);
    y(i) = g(rng);
  }
  for (auto _ : state) {
    const auto fwd = nn::forward(model, x);
    const auto loss = nn::mse_loss(fwd.predictions, y);
    benchmark::DoNotOptimize(nn::backward(model, fwd.cache, loss.grad));
  }
}
BENCHMARK(mlp_forward_backward)->Arg(2)->Arg(10)->Arg(20);

void gather_batch(benchmark::State& state) {
  const auto ds = synthetic(256, state.range(0));
  const auto c = spline::relax_dataset(ds);
  const auto s = map_to_s(init_indices(10, static_cast<int>(ds.n_features())));
  std::vector<Index> batch(64);
  std::iota(batch.begin(), batch.end(), Index{0});
  for (auto _ : state) benchmark::DoNotOptimize(gather(c, s, batch));
}
BENCHMARK(gather_batch)->Arg(512)->Arg(4096);

void fsdr_train(benchmark::State& state) {
  const auto ds = synthetic(500, state.range(0));
  FsdrConfig cfg;
  cfg.epochs = 20;
  for (auto _ : state) benchmark::DoNotOptimize(train(ds, 5, cfg));
}
BENCHMARK(fsdr_train)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void sfs_ridge(benchmark::State& state) {
  const auto ds = synthetic(500, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(baselines::sfs_select(ds, 5));
}
BENCHMARK(sfs_ridge)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void lasso_path(benchmark::State& state) {
  const auto ds = synthetic(500, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(baselines::lasso_select(ds, 5));
}
BENCHMARK(lasso_path)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
