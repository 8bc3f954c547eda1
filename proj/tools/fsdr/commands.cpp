#include "commands.hpp"

#include <fsdr/evaluation.hpp>
#include <fsdr/report.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>

namespace fsdr::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

}  // namespace

data::Dataset load_input(const std::string& path, const InputOptions& input, std::uint64_t seed) {
  if (input.dwt_levels < 0) throw InvalidInput("--dwt-levels must be >= 0");
  if (input.truncate < 0) throw InvalidInput("--truncate must be >= 0");
  auto dataset = data::load_csv(path, input.response);
  if (input.absorbance) dataset = data::absorbance_to_reflectance(dataset);
  if (input.dwt_levels > 0) dataset = data::dwt_downsample(dataset, input.dwt_levels);
  if (input.truncate > 0) dataset = data::truncate_samples(dataset, input.truncate, seed);
  return dataset;
}

baselines::SelectorSpec make_selector(const std::string& method, const SelectorOptions& options) {
  baselines::SelectorSpec spec;
  spec.method = baselines::parse_method(method);
  spec.mi.bins = options.bins;
  if (options.sfs_inner == "ridge") {
    spec.sfs.inner = baselines::SfsInner::ridge;
  } else if (options.sfs_inner == "mlp") {
    spec.sfs.inner = baselines::SfsInner::mlp;
  } else {
    throw InvalidInput("--sfs-inner must be ridge or mlp, got '" + options.sfs_inner + "'");
  }
  spec.sfs.ridge_lambda = options.ridge_lambda;
  spec.lasso.n_lambda = options.n_lambda;
  spec.lasso.lambda_min_ratio = options.lambda_min_ratio;
  spec.fsdr.epochs = options.epochs;
  spec.fsdr.batch_size = options.batch_size;
  spec.fsdr.network_lr = options.network_lr;
  spec.fsdr.index_lr = options.index_lr;
  spec.fsdr.index_warmup_epochs = options.warmup;
  if (options.verbose) {
    spec.fsdr.on_epoch = [](int epoch, double loss) {
      std::cerr << "epoch " << epoch << " loss " << loss << '\n';
    };
  }
  if (options.bins < 2) throw InvalidInput("--bins must be >= 2");
  if (options.ridge_lambda < 0.0) throw InvalidInput("--ridge-lambda must be >= 0");
  return spec;
}

int run_gen(const GenOptions& options) {
  if (options.out.empty()) throw InvalidInput("gen needs --out");
  data::SyntheticSpec spec;
  spec.n_samples = options.n;
  spec.n_features = options.d;
  spec.planted_bands = options.planted;
  spec.smoothness = options.smoothness;
  spec.noise_std = options.noise;
  spec.seed = options.seed;
  data::validate(spec);
  if (options.dwt_levels < 0) throw InvalidInput("--dwt-levels must be >= 0");
  if (options.dwt_levels > 0 && data::downsampled_length(options.d, options.dwt_levels) < 2) {
    throw InvalidInput("--dwt-levels " + std::to_string(options.dwt_levels) +
                       ": resulting dimension too small");
  }

  const auto synthetic = data::generate_synthetic(spec);
  auto truth = data::ground_truth_json(synthetic);
  data::Dataset dataset = synthetic.dataset;
  if (options.dwt_levels > 0) {
    dataset = data::dwt_downsample(dataset, options.dwt_levels);
    std::vector<int> mapped;
    for (int b : synthetic.planted_bands) mapped.push_back(((b - 1) >> options.dwt_levels) + 1);
    truth["dwt_levels"] = options.dwt_levels;
    truth["planted_bands_downsampled"] = mapped;
  }

  std::filesystem::path truth_path = options.truth;
  if (truth_path.empty()) truth_path = std::filesystem::path(options.out).replace_extension(".truth.json");
  {
    auto out = open_output(options.out);
    data::write_csv(dataset, out);
    if (!out) throw std::runtime_error("failed while writing '" + options.out + "'");
  }
  write_text(truth_path, truth.dump(2) + "\n");
  return 0;
}

int run_select(const SelectOptions& options) {
  if (options.t < 1) throw InvalidInput("--t must be >= 1, got " + std::to_string(options.t));
  auto spec = make_selector(options.method, options.selector);
  spec.t = options.t;
  const auto dataset = load_input(options.data, options.input, options.seed);
  if (options.t > dataset.n_features()) {
    throw InvalidInput("--t " + std::to_string(options.t) + " exceeds the " +
                       std::to_string(dataset.n_features()) + " features of '" + options.data + "'");
  }
  if (spec.method == baselines::Method::fsdr) validate(spec.fsdr, dataset.n_samples());
  const auto standardized = data::standardize(dataset).first;
  const auto result = baselines::run_selector(standardized, spec, options.seed);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  const std::string text = to_json(result, options.s_trace).dump(2) + "\n";
  if (options.out.empty()) {
    std::cout << text;
  } else {
    write_text(options.out, text);
  }
  return 0;
}

int run_bench(const BenchOptions& options, const std::string& config_text) {
  if (options.data.empty()) throw InvalidInput("bench needs at least one --data file");
  if (options.methods.empty()) throw InvalidInput("bench needs at least one method");
  if (options.t.empty()) throw InvalidInput("bench needs at least one target size");
  for (int t : options.t) {
    if (t < 1) throw InvalidInput("target sizes must be >= 1, got " + std::to_string(t));
  }
  if (options.eval_epochs < 0) throw InvalidInput("--eval-epochs must be >= 0");
  if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) {
    throw InvalidInput("--test-fraction must lie in (0, 1)");
  }

  std::vector<baselines::SelectorSpec> selectors;
  for (const auto& m : options.methods) selectors.push_back(make_selector(m, options.selector));

  std::vector<data::Dataset> datasets;
  std::set<std::string> names;
  for (const auto& path : options.data) {
    std::string name = std::filesystem::path(path).stem().string();
    while (!names.insert(name).second) name += "_";
    datasets.push_back(load_input(path, options.input, options.seeds.front()).renamed(name));
  }
  for (const auto& spec : selectors) {
    if (spec.method != baselines::Method::fsdr) continue;
    for (const auto& d : datasets) {
      validate(spec.fsdr, d.n_samples() - static_cast<Index>(std::llround(
                                              static_cast<double>(d.n_samples()) * options.test_fraction)));
    }
  }

  eval::BenchmarkOptions bench;
  bench.test_fraction = options.test_fraction;
  bench.evaluator.epochs = options.eval_epochs;
  bench.on_row = [](const eval::BenchmarkRow& row) {
    std::cerr << row.dataset << ' ' << row.selector << " t=" << row.t << " seed=" << row.seed
              << (row.error ? " error: " + *row.error : " done") << '\n';
  };
  auto report = eval::run_benchmark(datasets, selectors, options.t, options.seeds, bench);
  report.config_hash = eval::config_hash(config_text);
  report.timestamp = eval::utc_timestamp();

  {
    auto out = open_output(options.out + ".csv");
    eval::write_report_csv(report, out);
  }
  write_text(options.out + ".json", eval::report_to_json(report).dump(2) + "\n");

  std::cout << std::left << std::setw(16) << "dataset" << std::setw(8) << "method" << std::right
            << std::setw(4) << "t" << std::setw(4) << "t'" << std::setw(12) << "time_s" << std::setw(10)
            << "r2" << std::setw(10) << "rmse" << "  seed\n";
  std::size_t failures = 0;
  for (const auto& row : report.rows) {
    std::cout << std::left << std::setw(16) << row.dataset << std::setw(8) << row.selector << std::right
              << std::setw(4) << row.t << std::setw(4) << row.t_prime << std::fixed << std::setprecision(4)
              << std::setw(12) << row.time_s;
    if (row.error) {
      ++failures;
      std::cout.unsetf(std::ios::floatfield);
      std::cout << "  error: " << *row.error << '\n';
      continue;
    }
    std::cout << std::setw(10) << row.r2 << std::setw(10) << row.rmse << "  " << row.seed << '\n';
    std::cout.unsetf(std::ios::floatfield);
  }
  return failures == report.rows.size() ? 1 : 0;
}

int run_sweep(const SweepOptions& options) {
  if (options.out.empty()) throw InvalidInput("sweep needs --out");
  const auto dataset = load_input(options.data, options.input, options.seed);
  eval::PairSweepOptions sweep;
  sweep.epochs = options.epochs;
  sweep.test_fraction = options.test_fraction;
  const auto grid = eval::pair_sweep(dataset, options.seed, sweep);
  {
    auto out = open_output(options.out);
    eval::write_grid_csv(grid, out);
  }
  std::cout << "pairs " << grid.n_pairs << " smoothness " << grid.smoothness << '\n';
  return 0;
}

void apply_config_file(CLI::App& command, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("config file '" + path + "': " + e.what());
  }
  if (!config.is_object()) throw InvalidInput("config file '" + path + "' must hold a JSON object");

  // A section named after this command overrides the shared top level.
  nlohmann::json merged = nlohmann::json::object();
  std::set<std::string> sections = {"gen", "select", "bench", "sweep"};
  for (const auto& [key, value] : config.items()) {
    if (!sections.contains(key)) merged[key] = value;
  }
  if (config.contains(command.get_name())) {
    const auto& section = config.at(command.get_name());
    if (!section.is_object()) throw InvalidInput("config section '" + command.get_name() + "' must be an object");
    for (const auto& [key, value] : section.items()) merged[key] = value;
  }

  for (const auto& [key, value] : merged.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = command.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw InvalidInput("config file '" + path + "': unknown key '" + key + "' for " + command.get_name());
    }
    if (key == "config" || opt->count() > 0) continue;
    auto as_text = [](const nlohmann::json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    opt->clear();
    if (value.is_array()) {
      std::string joined;
      for (std::size_t k = 0; k < value.size(); ++k) {
        if (k) joined += ',';
        joined += as_text(value[k]);
      }
      opt->add_result(joined);
    } else if (value.is_boolean()) {
      opt->add_result(value.get<bool>() ? "true" : "false");
    } else {
      opt->add_result(as_text(value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InvalidInput("config file '" + path + "': key '" + key + "': " + e.what());
    }
  }
}

}  // namespace fsdr::cli
