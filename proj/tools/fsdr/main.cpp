#include "commands.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <vector>

namespace {

void add_input_flags(CLI::App& cmd, fsdr::cli::InputOptions& input) {
  cmd.add_option("--response", input.response, "Name of the response column");
  cmd.add_flag("--absorbance", input.absorbance, "Convert absorbance values to reflectance (10^-A)");
  cmd.add_option("--dwt-levels", input.dwt_levels, "Haar downsampling stages applied after loading");
  cmd.add_option("--truncate", input.truncate, "Keep a random subset of this many rows (0 keeps all)");
}

void add_selector_flags(CLI::App& cmd, fsdr::cli::SelectorOptions& s) {
  cmd.add_option("--epochs", s.epochs, "FSDR training epochs");
  cmd.add_option("--batch-size", s.batch_size, "FSDR minibatch size");
  cmd.add_option("--network-lr", s.network_lr, "FSDR Adam learning rate for the network");
  cmd.add_option("--index-lr", s.index_lr, "FSDR Adam learning rate for the index coordinates");
  cmd.add_option("--warmup", s.warmup, "FSDR epochs with frozen indices at the start");
  cmd.add_option("--bins", s.bins, "MI equal-frequency bins");
  cmd.add_option("--sfs-inner", s.sfs_inner, "SFS inner model")->check(CLI::IsMember({"ridge", "mlp"}));
  cmd.add_option("--ridge-lambda", s.ridge_lambda, "SFS ridge penalty");
  cmd.add_option("--n-lambda", s.n_lambda, "LASSO path length");
  cmd.add_option("--lambda-min-ratio", s.lambda_min_ratio, "LASSO smallest lambda / lambda_max");
  cmd.add_flag("--verbose", s.verbose, "Log FSDR epoch losses to stderr");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = fsdr::cli;
  CLI::App app{"Feature selection by discrete relaxation, with MI/SFS/LASSO baselines"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  std::string config_path;

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a planted-band synthetic dataset and its ground truth");
  gen_cmd->add_option("--n", gen.n, "Number of samples");
  gen_cmd->add_option("--d", gen.d, "Number of features");
  gen_cmd->add_option("--planted", gen.planted, "Planted band indices (1-based)")->delimiter(',');
  gen_cmd->add_option("--smoothness", gen.smoothness, "Gaussian smoothing width in bands");
  gen_cmd->add_option("--noise", gen.noise, "Response noise standard deviation");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--dwt-levels", gen.dwt_levels, "Haar downsampling stages applied before writing");
  gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();
  gen_cmd->add_option("--truth", gen.truth, "Ground-truth JSON path (default: <out>.truth.json)");
  gen_cmd->add_option("--config", config_path, "JSON file with flag values (flags win)");

  cli::SelectOptions select;
  auto* select_cmd = app.add_subcommand("select", "Run one selector and print its result as JSON");
  select_cmd->add_option("--data", select.data, "Input CSV")->required();
  add_input_flags(*select_cmd, select.input);
  select_cmd->add_option("--method", select.method, "Selector")
      ->check(CLI::IsMember({"fsdr", "mi", "sfs", "lasso"}));
  select_cmd->add_option("--t", select.t, "Target number of features");
  select_cmd->add_option("--seed", select.seed, "Random seed");
  select_cmd->add_option("--out", select.out, "Output JSON path (default: stdout)");
  select_cmd->add_flag("--s-trace", select.s_trace, "Include the per-epoch index trace");
  add_selector_flags(*select_cmd, select.selector);
  select_cmd->add_option("--config", config_path, "JSON file with flag values (flags win)");

  cli::BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark selectors over datasets, target sizes and seeds");
  bench_cmd->add_option("--data", bench.data, "Input CSV files")->delimiter(',');
  add_input_flags(*bench_cmd, bench.input);
  bench_cmd->add_option("--methods", bench.methods, "Selectors")
      ->delimiter(',')
      ->check(CLI::IsMember({"fsdr", "mi", "sfs", "lasso"}));
  bench_cmd->add_option("--t", bench.t, "Target sizes")->delimiter(',');
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds (one split and run per seed)")->delimiter(',');
  bench_cmd->add_option("--seed", bench.seeds, "Alias of --seeds")->delimiter(',');
  bench_cmd->add_option("--test-fraction", bench.test_fraction, "Held-out test fraction");
  bench_cmd->add_option("--eval-epochs", bench.eval_epochs, "Epochs of the evaluation regressor");
  bench_cmd->add_option("--out", bench.out, "Report path prefix (writes <out>.csv and <out>.json)");
  add_selector_flags(*bench_cmd, bench.selector);
  bench_cmd->add_option("--config", config_path, "JSON file with flag values (flags win)");

  cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate every band pair and write the r2 grid");
  sweep_cmd->add_option("--data", sweep.data, "Input CSV")->required();
  add_input_flags(*sweep_cmd, sweep.input);
  sweep_cmd->add_option("--seed", sweep.seed, "Random seed");
  sweep_cmd->add_option("--epochs", sweep.epochs, "Epochs per pair regressor");
  sweep_cmd->add_option("--test-fraction", sweep.test_fraction, "Held-out test fraction");
  sweep_cmd->add_option("--out", sweep.out, "Output grid CSV")->required();
  sweep_cmd->add_option("--config", config_path, "JSON file with flag values (flags win)");

  // Required flags may come from the config file, so they are checked after
  // it has been applied rather than by the parser.
  std::vector<CLI::Option*> required;
  for (auto* cmd : {gen_cmd, select_cmd, bench_cmd, sweep_cmd}) {
    for (auto* opt : cmd->get_options()) {
      if (!opt->get_required()) continue;
      opt->required(false);
      opt->description(opt->get_description() + " (required)");
      required.push_back(opt);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (!config_path.empty()) cli::apply_config_file(*cmd, config_path);
    for (auto* opt : cmd->get_options()) {
      if (opt->count() == 0 && std::find(required.begin(), required.end(), opt) != required.end()) {
        throw fsdr::InvalidInput(cmd->get_name() + ": " + opt->get_name() + " is required");
      }
    }
    if (cmd == gen_cmd) return cli::run_gen(gen);
    if (cmd == select_cmd) return cli::run_select(select);
    if (cmd == bench_cmd) {
      // The hash identifies the experiment, so the output location is left out.
      std::istringstream all(cmd->config_to_str(true, false));
      std::string text, line;
      while (std::getline(all, line)) {
        if (line.rfind("out=", 0) != 0) text += line + '\n';
      }
      return cli::run_bench(bench, text);
    }
    return cli::run_sweep(sweep);
  } catch (const fsdr::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fsdr::TrainingError& e) {
    std::cerr << "training failed: " << e.what() << '\n';
    if (!e.last_state().empty()) {
      std::cerr << "last index coordinates:";
      for (double v : e.last_state()) std::cerr << ' ' << v;
      std::cerr << '\n';
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
