#include "cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "cli/commands.hpp"
#include "dmfd/data_io.hpp"
#include "dmfd/error.hpp"

namespace dmfd::cli {

std::vector<std::string> config_to_args(const std::string& text) {
  std::vector<std::string> args;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (value == "false") continue;
    args.push_back("--" + key);
    if (value != "true") args.push_back(value);
  }
  return args;
}

namespace {

const std::map<std::string, Activation> kActivations{{"identity", Activation::Identity},
                                                     {"sigmoid", Activation::Sigmoid},
                                                     {"relu", Activation::Relu},
                                                     {"softsign", Activation::Softsign}};
const std::map<std::string, Scheme> kSchemes{{"gd", Scheme::GradientDescent},
                                             {"fd", Scheme::FiniteDifference}};
const std::map<std::string, EnergyVariant> kEnergies{{"eq3", EnergyVariant::Reconstruction},
                                                     {"eq5", EnergyVariant::Recirculation}};

constexpr const char* kSubcommands[] = {"train-rbm",    "train-stack", "collinearity-scan",
                                        "feature-scan", "gradcheck",   "reconstruct"};

std::vector<std::size_t> parse_sizes(const std::string& text, const char* flag) {
  std::vector<std::size_t> sizes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": bad size '" + item + "'");
    }
  }
  return sizes;
}

struct TrainFlags {
  std::string scheme = "gd";
  std::optional<double> rate;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  std::string energy = "eq3";
  bool no_shuffle = false;

  void add(CLI::App& app) {
    app.add_option("--scheme", scheme, "gd or fd")->transform(CLI::IsMember(kSchemes));
    app.add_option("--rate", rate, "learning rate (default 0.01 gd, 0.005 fd)")
        ->check(CLI::PositiveNumber);
    app.add_option("--epochs", epochs, "training epochs");
    app.add_option("--seed", seed, "PRNG seed");
    app.add_option("--energy", energy, "eq3 (reconstruction) or eq5 (recirculation)")
        ->check(CLI::IsMember(kEnergies));
    app.add_flag("--no-shuffle", no_shuffle, "visit samples in file order");
  }

  TrainConfig config() const {
    TrainConfig c;
    c.scheme = kSchemes.at(scheme);
    c.rate.scalar = rate.value_or(default_rate(c.scheme));
    c.energy = kEnergies.at(energy);
    c.epochs = epochs;
    c.seed = seed;
    c.shuffle = !no_shuffle;
    return c;
  }
};

void add_source(CLI::App& app, ImageSource& source, bool split) {
  app.add_option("--images", source.images, "IDX image file (.gz accepted)")->required();
  if (split) app.add_option("--train-count", source.train_count, "training images");
  app.add_option("--test-count", source.test_count, "held-out images after the training split");
  app.add_option("--downsample", source.downsample, "box-average factor")
      ->check(CLI::PositiveNumber);
}

void add_out(CLI::App& app, std::filesystem::path& out) {
  app.add_option("--out", out, "output directory")->envname("DMFD_OUTPUT_DIR");
}

Activation activation(const std::string& name) { return kActivations.at(name); }

void print_summary(const ImageRunSummary& s) {
  std::printf("initial_test_mse %.9g\nfinal_test_mse %.9g\nclamped_pixels %zu\n",
              s.initial_test_mse, s.final_test_mse, s.clamped_pixels);
}

void print_curve(const ErrorCurve& curve) {
  std::printf("%8s %14s %14s %s\n", "sweep", "mse", "log_adjusted", "flag");
  for (const auto& p : curve.points) {
    const char* flag = p.diverged ? "diverged" : p.log_adjusted.out_of_range ? "mse>=1" : "ok";
    std::printf("%8zu %14.6e %14.6g %s\n", p.sweep, p.mse, p.log_adjusted.value, flag);
  }
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::filesystem::path> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file");
      config = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!config) return out;

  std::ifstream in(*config);
  if (!in) throw IoError("cannot read config file " + config->string());
  std::stringstream text;
  text << in.rdbuf();
  const auto extra = config_to_args(text.str());

  // File values go right after the subcommand so later command-line flags
  // take precedence.
  auto it = std::find_if(out.begin(), out.end(), [](const std::string& a) {
    return std::find(std::begin(kSubcommands), std::end(kSubcommands), a) != std::end(kSubcommands);
  });
  if (it == out.end()) throw ConfigError("--config needs a subcommand");
  out.insert(it + 1, extra.begin(), extra.end());
  return out;
}

int dispatch(const std::vector<std::string>& raw) {
  CLI::App app{"Data-mapping RBM training and experiments"};
  app.name("dmfd");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", "dmfd 0.1.0");

  std::function<int()> action;

  // train-rbm
  TrainRbmOptions rbm;
  TrainFlags rbm_flags;
  std::string rbm_shape = "784,49", rbm_act_h = "identity", rbm_act_v = "identity";
  auto* train_rbm_cmd = app.add_subcommand("train-rbm", "train one data-mapping layer on images");
  add_source(*train_rbm_cmd, rbm.source, true);
  train_rbm_cmd->add_option("--shape", rbm_shape, "visible,hidden");
  train_rbm_cmd->add_option("--act-h", rbm_act_h)->check(CLI::IsMember(kActivations));
  train_rbm_cmd->add_option("--act-v", rbm_act_v)->check(CLI::IsMember(kActivations));
  train_rbm_cmd->add_option("--triplets", rbm.triplets, "test images to render");
  rbm_flags.add(*train_rbm_cmd);
  add_out(*train_rbm_cmd, rbm.out_dir);
  train_rbm_cmd->callback([&] {
    action = [&] {
      const auto shape = parse_sizes(rbm_shape, "--shape");
      if (shape.size() != 2) throw ConfigError("--shape expects visible,hidden");
      rbm.visible = shape[0];
      rbm.hidden = shape[1];
      rbm.act_h = activation(rbm_act_h);
      rbm.act_v = activation(rbm_act_v);
      rbm.train = rbm_flags.config();
      rbm.progress = true;
      print_summary(train_rbm(rbm));
      return int{kOk};
    };
  });

  // train-stack
  TrainStackOptions stack;
  TrainFlags stack_flags;
  std::string stack_sizes = "784,784,196,49", st_act_h = "softsign", st_act_v = "relu",
              st_act_v_inner = "identity";
  auto* train_stack_cmd = app.add_subcommand("train-stack", "greedy layer-wise stack training");
  add_source(*train_stack_cmd, stack.source, true);
  train_stack_cmd->add_option("--stack", stack_sizes, "layer sizes, bottom first");
  train_stack_cmd->add_option("--act-h", st_act_h)->check(CLI::IsMember(kActivations));
  train_stack_cmd->add_option("--act-v", st_act_v, "bottom visible activation")
      ->check(CLI::IsMember(kActivations));
  train_stack_cmd->add_option("--act-v-inner", st_act_v_inner, "visible activation above layer 0")
      ->check(CLI::IsMember(kActivations));
  train_stack_cmd->add_option("--triplets", stack.triplets, "test images to render");
  stack_flags.add(*train_stack_cmd);
  add_out(*train_stack_cmd, stack.out_dir);
  train_stack_cmd->callback([&] {
    action = [&] {
      stack.sizes = parse_sizes(stack_sizes, "--stack");
      if (stack.sizes.size() < 2) throw ConfigError("--stack needs at least two sizes");
      stack.act_h = activation(st_act_h);
      stack.act_v = activation(st_act_v);
      stack.act_v_inner = activation(st_act_v_inner);
      stack.train = stack_flags.config();
      stack.progress = true;
      print_summary(train_stack(stack));
      return int{kOk};
    };
  });

  // scans
  auto add_scan = [&](const char* name, const char* help, const char* file,
                      ErrorCurve (*run_scan)(const ScanOptions&)) {
    auto opts = std::make_shared<ScanOptions>();
    auto scheme = std::make_shared<std::string>("gd");
    auto no_std = std::make_shared<bool>(false);
    auto out = std::make_shared<std::filesystem::path>(".");
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--seed", opts->seed, "base seed; point k uses seed + k");
    cmd->add_option("--epochs", opts->epochs);
    cmd->add_option("--scheme", *scheme)->check(CLI::IsMember(kSchemes));
    cmd->add_option("--rate", opts->rate)->check(CLI::PositiveNumber);
    cmd->add_flag("--no-standardize", *no_std, "skip per-sequence standardization");
    cmd->add_option("--threads", opts->threads, "worker threads (0: all cores)");
    add_out(*cmd, *out);
    cmd->callback([&action, opts, scheme, no_std, out, file, run_scan] {
      action = [opts, scheme, no_std, out, file, run_scan] {
        opts->scheme = kSchemes.at(*scheme);
        opts->standardize = !*no_std;
        const ErrorCurve curve = run_scan(*opts);
        std::filesystem::create_directories(*out);
        curve.write_csv(*out / file);
        print_curve(curve);
        return int{kOk};
      };
    });
  };
  add_scan("collinearity-scan", "hidden nodes 1..12 on mixed sequences", "collinearity.csv",
           &collinearity_scan);
  add_scan("feature-scan", "feature dimensions 25..60 on mixed sequences", "feature_scan.csv",
           &feature_scan);

  // gradcheck
  GradcheckOptions gc;
  std::string gc_energy = "eq3";
  std::optional<std::filesystem::path> gc_report;
  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "compare gradients to central differences");
  gradcheck_cmd->add_option("--seeds", gc.seeds, "instances per cell");
  gradcheck_cmd->add_option("--tolerance", gc.tolerance);
  gradcheck_cmd->add_option("--step", gc.step, "central difference step");
  gradcheck_cmd->add_option("--energy", gc_energy)->check(CLI::IsMember(kEnergies));
  gradcheck_cmd->add_option("--report", gc_report, "also write the table as CSV");
  gradcheck_cmd->callback([&] {
    action = [&] {
      gc.energy = kEnergies.at(gc_energy);
      const auto cells = gradcheck(gc);
      bool ok = true;
      std::vector<std::vector<double>> rows;
      std::printf("%-9s %-9s %6s %14s %8s %s\n", "hidden", "visible", "shape", "max_rel_err",
                  "repairs", "result");
      for (const auto& c : cells) {
        char shape[32];
        std::snprintf(shape, sizeof shape, "%zux%zux%zu", c.visible_nodes, c.hidden_nodes,
                      c.columns);
        std::printf("%-9s %-9s %6s %14.3e %8zu %s\n", std::string(name(c.hidden)).c_str(),
                    std::string(name(c.visible)).c_str(), shape, c.max_rel_error, c.kink_repairs,
                    c.pass ? "pass" : "FAIL");
        ok = ok && c.pass;
        rows.push_back({static_cast<double>(c.hidden), static_cast<double>(c.visible),
                        static_cast<double>(c.visible_nodes), static_cast<double>(c.hidden_nodes),
                        static_cast<double>(c.columns), c.max_rel_error,
                        static_cast<double>(c.kink_repairs), c.pass ? 1.0 : 0.0});
      }
      if (gc_report) {
        const std::vector<std::string> header{"hidden_act", "visible_act", "m", "n", "d",
                                              "max_rel_error", "kink_repairs", "pass"};
        write_csv(*gc_report, rows, header);
      }
      return int{ok ? kOk : kCheckFailed};
    };
  });

  // reconstruct
  ReconstructOptions rec;
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "render triplets from a saved model");
  reconstruct_cmd->add_option("--model", rec.model, "DMFD layer or DMFS stack")->required();
  add_source(*reconstruct_cmd, rec.source, true);
  reconstruct_cmd->add_option("--count", rec.count, "test images to render");
  add_out(*reconstruct_cmd, rec.out_dir);
  reconstruct_cmd->callback([&] {
    action = [&] {
      print_summary(reconstruct(rec));
      return int{kOk};
    };
  });

  std::vector<std::string> reversed(raw.rbegin(), raw.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  return action();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return dispatch(expand_config(args));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const ShapeError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIoError;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "diverged: %s\n", e.what());
    return kDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCheckFailed;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace dmfd::cli
