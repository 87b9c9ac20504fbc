#include "dmfd/stack.hpp"

#include <string>

#include "dmfd/error.hpp"

namespace dmfd {

RbmStack::RbmStack(std::vector<RbmParams> layers) : layers_(std::move(layers)) {
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    layers_[k].validate();
    if (k == 0) continue;
    const RbmParams& below = layers_[k - 1];
    const RbmParams& above = layers_[k];
    if (below.hidden_nodes() != above.visible_nodes() || below.columns() != above.columns())
      throw ShapeError("RbmStack: layer " + std::to_string(k) +
                       " visible shape does not match hidden shape of layer " +
                       std::to_string(k - 1));
  }
}

std::size_t RbmStack::visible_nodes() const {
  return layers_.empty() ? 0 : layers_.front().visible_nodes();
}

std::size_t RbmStack::code_nodes() const {
  return layers_.empty() ? 0 : layers_.back().hidden_nodes();
}

void StackSpec::validate() const {
  if (layers.empty()) throw ConfigError("stack needs at least one layer");
  if (visible == 0 || columns == 0) throw ConfigError("stack visible size must be positive");
  for (const auto& l : layers)
    if (l.hidden == 0) throw ConfigError("stack layer sizes must be positive");
}

StackSpec make_stack_spec(std::span<const std::size_t> sizes, Activation hidden,
                          Activation first_visible, Activation inner_visible) {
  if (sizes.size() < 2) throw ConfigError("stack sizes need at least two entries");
  StackSpec spec{sizes.front(), 1, {}};
  for (std::size_t k = 1; k < sizes.size(); ++k)
    spec.layers.push_back({sizes[k], hidden, k == 1 ? first_visible : inner_visible});
  spec.validate();
  return spec;
}

StackTrainResult train_greedy(const StackSpec& spec, std::span<const Matrix> dataset,
                              const TrainConfig& config, const StackCallbacks& callbacks) {
  spec.validate();
  if (dataset.empty()) throw ConfigError("train_greedy: empty dataset");

  std::vector<RbmParams> trained;
  std::vector<std::vector<double>> traces;
  std::vector<Matrix> features;
  std::span<const Matrix> current = dataset;
  std::size_t visible = spec.visible;

  for (std::size_t k = 0; k < spec.layers.size(); ++k) {
    const StackLayerSpec& ls = spec.layers[k];
    if (callbacks.on_layer_start) callbacks.on_layer_start(k);
    Prng init_rng(config.seed, k + 1);
    RbmParams params =
        init_params(visible, ls.hidden, spec.columns, ls.hidden_act, ls.visible_act, init_rng);

    TrainCallbacks per_layer;
    if (callbacks.on_epoch)
      per_layer.on_epoch = [&](std::size_t epoch, double e) { callbacks.on_epoch(k, epoch, e); };
    TrainResult r = train(std::move(params), current, config, per_layer);
    if (callbacks.on_layer_done) callbacks.on_layer_done(k, r.epoch_energy);

    if (k + 1 < spec.layers.size()) {
      std::vector<Matrix> next;
      next.reserve(current.size());
      for (const Matrix& x : current) next.push_back(project(r.params, x).post);
      features = std::move(next);
      current = features;
    }
    trained.push_back(std::move(r.params));
    traces.push_back(std::move(r.epoch_energy));
    visible = ls.hidden;
  }
  return {RbmStack(std::move(trained)), std::move(traces)};
}

Matrix encode(const RbmStack& stack, const Matrix& x) {
  if (stack.empty()) throw ShapeError("encode: empty stack");
  Matrix h = x;
  for (const RbmParams& layer : stack.layers()) h = project(layer, h).post;
  return h;
}

Matrix decode(const RbmStack& stack, const Matrix& code) {
  if (stack.empty()) throw ShapeError("decode: empty stack");
  Matrix v = code;
  for (auto it = stack.layers().rbegin(); it != stack.layers().rend(); ++it)
    v = reconstruct(*it, v).post;
  return v;
}

}  // namespace dmfd
