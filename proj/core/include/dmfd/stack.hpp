#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dmfd/activation.hpp"
#include "dmfd/matrix.hpp"
#include "dmfd/rbm.hpp"

namespace dmfd {

/// Layers of stacked data mappings; layer k's hidden layer is layer k+1's
/// visible layer.
class RbmStack {
 public:
  RbmStack() = default;
  /// Throws ShapeError unless adjacent layers are compatible.
  explicit RbmStack(std::vector<RbmParams> layers);

  std::size_t size() const noexcept { return layers_.size(); }
  bool empty() const noexcept { return layers_.empty(); }
  const RbmParams& layer(std::size_t k) const { return layers_.at(k); }
  const std::vector<RbmParams>& layers() const noexcept { return layers_; }

  std::size_t visible_nodes() const;
  std::size_t code_nodes() const;

  friend bool operator==(const RbmStack&, const RbmStack&) = default;

 private:
  std::vector<RbmParams> layers_;
};

struct StackLayerSpec {
  std::size_t hidden = 0;
  Activation hidden_act = Activation::Softsign;
  Activation visible_act = Activation::Identity;
};

struct StackSpec {
  std::size_t visible = 0;
  std::size_t columns = 1;
  std::vector<StackLayerSpec> layers;

  void validate() const;
};

/// Sizes "784,784,196,49" with the bottom layer's visible activation
/// `first_visible`, `inner_visible` above it, and `hidden` everywhere.
StackSpec make_stack_spec(std::span<const std::size_t> sizes, Activation hidden,
                          Activation first_visible, Activation inner_visible);

struct StackCallbacks {
  std::function<void(std::size_t layer)> on_layer_start;
  std::function<void(std::size_t layer, const std::vector<double>& trace)> on_layer_done;
  std::function<void(std::size_t layer, std::size_t epoch, double mean_energy)> on_epoch;
};

struct StackTrainResult {
  RbmStack stack;
  std::vector<std::vector<double>> traces;  ///< per layer, per epoch
};

/// Greedy layer-wise training. Layer k is initialized from
/// Prng(config.seed, k + 1) only when its turn comes, trained on the hidden
/// outputs of the trained layer k-1, and never revisited.
StackTrainResult train_greedy(const StackSpec& spec, std::span<const Matrix> dataset,
                              const TrainConfig& config, const StackCallbacks& callbacks = {});

/// Bottom-up composition of projections.
Matrix encode(const RbmStack& stack, const Matrix& x);
/// Top-down composition of reconstructions, last layer first.
Matrix decode(const RbmStack& stack, const Matrix& code);

}  // namespace dmfd
