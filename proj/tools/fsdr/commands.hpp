#pragma once

#include <fsdr/baselines.hpp>
#include <fsdr/dataset.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fsdr::cli {

/// Preprocessing applied to every loaded CSV, in this order.
struct InputOptions {
  std::string response = "soc";
  bool absorbance = false;
  int dwt_levels = 0;
  long truncate = 0;
};

struct SelectorOptions {
  int epochs = 400;
  int batch_size = 64;
  double network_lr = 3e-3;
  double index_lr = 1e-2;
  int warmup = 50;
  int bins = 16;
  std::string sfs_inner = "ridge";
  double ridge_lambda = 1e-3;
  int n_lambda = 50;
  double lambda_min_ratio = 1e-3;
  bool verbose = false;
};

struct GenOptions {
  long n = 1000;
  long d = 512;
  std::vector<int> planted = {50, 150, 250, 350, 450};
  double smoothness = 8.0;
  double noise = 0.05;
  std::uint64_t seed = 0;
  int dwt_levels = 0;
  std::string out;
  std::string truth;
};

struct SelectOptions {
  std::string data;
  InputOptions input;
  SelectorOptions selector;
  std::string method = "fsdr";
  int t = 5;
  std::uint64_t seed = 0;
  std::string out;
  bool s_trace = false;
};

struct BenchOptions {
  std::vector<std::string> data;
  InputOptions input;
  SelectorOptions selector;
  std::vector<std::string> methods = {"fsdr", "mi", "sfs", "lasso"};
  std::vector<int> t = {2, 5, 10, 15, 20};
  std::vector<std::uint64_t> seeds = {0};
  double test_fraction = 0.1;
  int eval_epochs = 300;
  std::string out = "report";
};

struct SweepOptions {
  std::string data;
  InputOptions input;
  std::uint64_t seed = 0;
  int epochs = 50;
  double test_fraction = 0.1;
  std::string out;
};

data::Dataset load_input(const std::string& path, const InputOptions& input, std::uint64_t seed);
baselines::SelectorSpec make_selector(const std::string& method, const SelectorOptions& options);

int run_gen(const GenOptions& options);
int run_select(const SelectOptions& options);
int run_bench(const BenchOptions& options, const std::string& config_text);
int run_sweep(const SweepOptions& options);

/// Fills options the user did not give on the command line from a JSON
/// object whose keys are long flag names.
void apply_config_file(CLI::App& command, const std::string& path);

}  // namespace fsdr::cli
