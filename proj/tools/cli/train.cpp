#include <cstdio>
#include <string>

#include "cli/commands.hpp"
#include "cli/images.hpp"
#include "dmfd/data_io.hpp"
#include "dmfd/error.hpp"
#include "dmfd/serialize.hpp"
#include "dmfd/stack.hpp"

namespace dmfd::cli {
namespace {

void write_trace(const std::vector<double>& trace, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (std::size_t e = 0; e < trace.size(); ++e)
    rows.push_back({static_cast<double>(e + 1), trace[e]});
  const std::vector<std::string> header{"epoch", "mean_energy"};
  write_csv(path, rows, header);
}

const std::vector<Matrix>& triplet_source(const ImageSplit& split) {
  return split.test.empty() ? split.train : split.test;
}

TripletWriter stack_writer(const RbmStack& stack, const ImageSplit& split) {
  return {split.rows, split.cols, [&stack](const Matrix& x) { return encode(stack, x); },
          [&stack](const Matrix& y) { return decode(stack, y); }};
}

void log_epoch(const char* what, std::size_t epoch, double energy) {
  std::fprintf(stderr, "%s epoch %zu mean energy %.6g\n", what, epoch, energy);
}

}  // namespace

ImageRunSummary train_rbm(const TrainRbmOptions& o) {
  ImageSplit split = load_split(o.source);
  const std::size_t pixels = split.rows * split.cols;
  if (o.visible != pixels)
    throw ConfigError("shape visible size " + std::to_string(o.visible) + " does not match " +
                      std::to_string(pixels) + " pixels per image");
  std::filesystem::create_directories(o.out_dir);

  Prng init_rng(o.train.seed, 1);
  RbmParams params = init_params(o.visible, o.hidden, 1, o.act_h, o.act_v, init_rng);
  const RbmStack initial({params});

  TrainCallbacks callbacks;
  if (o.progress) callbacks.on_epoch = [](std::size_t e, double m) { log_epoch("rbm", e, m); };
  TrainResult result = train(std::move(params), split.train, o.train, callbacks);

  save_rbm(result.params, o.out_dir / "model.dmfd");
  write_trace(result.epoch_energy, o.out_dir / "energy.csv");

  const RbmStack trained({result.params});
  const auto& images = triplet_source(split);
  ImageRunSummary summary;
  summary.initial_test_mse = reconstruction_mse(images, stack_writer(initial, split));
  summary.final_test_mse = reconstruction_mse(images, stack_writer(trained, split));
  summary.clamped_pixels = write_triplets(images, o.triplets, stack_writer(trained, split), o.out_dir);
  write_summary(summary, o.out_dir);
  return summary;
}

ImageRunSummary train_stack(const TrainStackOptions& o) {
  ImageSplit split = load_split(o.source);
  const std::size_t pixels = split.rows * split.cols;
  const StackSpec spec = make_stack_spec(o.sizes, o.act_h, o.act_v, o.act_v_inner);
  if (spec.visible != pixels)
    throw ConfigError("stack visible size " + std::to_string(spec.visible) + " does not match " +
                      std::to_string(pixels) + " pixels per image");
  std::filesystem::create_directories(o.out_dir);

  // Same per-layer init streams as train_greedy, for the untrained baseline.
  std::vector<RbmParams> init_layers;
  std::size_t visible = spec.visible;
  for (std::size_t k = 0; k < spec.layers.size(); ++k) {
    Prng rng(o.train.seed, k + 1);
    const auto& ls = spec.layers[k];
    init_layers.push_back(init_params(visible, ls.hidden, 1, ls.hidden_act, ls.visible_act, rng));
    visible = ls.hidden;
  }
  const RbmStack initial(std::move(init_layers));

  StackCallbacks callbacks;
  if (o.progress) callbacks.on_epoch = [](std::size_t layer, std::size_t e, double m) {
    const std::string what = "layer " + std::to_string(layer);
    log_epoch(what.c_str(), e, m);
  };
  StackTrainResult result = train_greedy(spec, split.train, o.train, callbacks);

  save_stack(result.stack, o.out_dir / "stack.dmfs");
  for (std::size_t k = 0; k < result.stack.size(); ++k) {
    save_rbm(result.stack.layer(k), o.out_dir / ("layer_" + std::to_string(k) + ".dmfd"));
    write_trace(result.traces[k], o.out_dir / ("energy_layer" + std::to_string(k) + ".csv"));
  }

  const auto& images = triplet_source(split);
  ImageRunSummary summary;
  summary.initial_test_mse = reconstruction_mse(images, stack_writer(initial, split));
  summary.final_test_mse = reconstruction_mse(images, stack_writer(result.stack, split));
  summary.clamped_pixels =
      write_triplets(images, o.triplets, stack_writer(result.stack, split), o.out_dir);
  write_summary(summary, o.out_dir);
  return summary;
}

ImageRunSummary reconstruct(const ReconstructOptions& o) {
  const auto bytes = read_file(o.model);
  if (bytes.size() < 4) throw IoError(o.model.string() + ": not a model file");
  const std::string magic(bytes.begin(), bytes.begin() + 4);
  RbmStack stack;
  if (magic == "DMFD") {
    stack = RbmStack({decode_rbm(bytes)});
  } else if (magic == "DMFS") {
    stack = decode_stack(bytes);
  } else {
    throw IoError(o.model.string() + ": unknown model format");
  }

  ImageSplit split = load_split(o.source);
  if (stack.visible_nodes() != split.rows * split.cols || stack.layer(0).columns() != 1)
    throw ConfigError("model input size does not match the images");
  std::filesystem::create_directories(o.out_dir);

  const auto& images = triplet_source(split);
  ImageRunSummary summary;
  summary.final_test_mse = reconstruction_mse(images, stack_writer(stack, split));
  summary.initial_test_mse = summary.final_test_mse;
  summary.clamped_pixels = write_triplets(images, o.count, stack_writer(stack, split), o.out_dir);
  write_summary(summary, o.out_dir);
  return summary;
}

}  // namespace dmfd::cli
