#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsr/patch_record.hpp"
#include "gsr/raster.hpp"

namespace gsr {

/// Shallow per-pixel MLP mapping [standardized guide channels, grid
/// coordinates] to one output value. Parameters are stored flat, per
/// layer: weights (row-major out x in) then biases. The fixed output
/// affine re-scales the network output into source units; it is not part
/// of theta and is untouched by fitting and regularization.
struct P2pNet {
  std::vector<int> layer_dims;  // e.g. {17, 32, 32, 1}
  std::vector<double> params;
  double output_scale = 1.0;
  double output_shift = 0.0;

  int layer_count() const { return static_cast<int>(layer_dims.size()) - 1; }
  std::size_t weight_offset(int layer) const;
  std::size_t bias_offset(int layer) const;
  std::size_t param_count() const;

  void validate() const;
};

/// Hyperparameters of the per-sample fit.
struct P2pConfig {
  double lambda = 1e-4;       // l2 regularization constant
  double step_size = 1e-3;    // Adam learning rate
  /// Total geometric decay of the step across max_iters; 1.0 keeps the
  /// step constant, 0.1 anneals it to a tenth by the final iteration.
  double step_decay = 1.0;
  int max_iters = 2000;
  int plateau_window = 100;   // stop when the best loss stalls this long
  double plateau_tol = 1e-5;  // relative improvement that resets the stall
  std::uint64_t seed = 0;
  std::vector<int> hidden_dims{32, 32};
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero,
/// deterministic in the seed.
P2pNet net_init(const std::vector<int>& layer_dims, std::uint64_t seed);

/// Batch forward pass over per-pixel feature vectors (row-major
/// n x feature_dim). Hidden layers are affine + ReLU, the final layer
/// affine; the output affine is applied last. Requires finite features
/// and a single output unit.
std::vector<double> net_forward(const P2pNet& net, const std::vector<double>& features, int feature_dim);

/// Per-pixel fit features: standardized guide channels followed by the
/// two normalized pixel-center coordinates; row-major H*W x (C+2).
std::vector<double> p2p_features(const Raster& guide, int* feature_dim = nullptr);

/// Unsupervised objective: sum over LR pixels of |S_p - pooled
/// prediction at p| plus lambda * ||theta||^2, where pooling is the
/// alpha x alpha block mean.
double p2p_loss(const P2pNet& net, const PatchRecord& record, const P2pConfig& config);

/// Exact reverse-mode gradient of p2p_loss with respect to every
/// parameter, in storage order.
std::vector<double> p2p_grad(const P2pNet& net, const PatchRecord& record, const P2pConfig& config);

struct FitDiagnostics {
  int iterations = 0;
  double final_loss = 0.0;
  std::vector<double> loss_curve;  // one entry per evaluated iterate
  std::string stop_reason;         // "max_iters" or "plateau"
  double source_mean = 0.0;        // output affine used by the fit
  double source_std = 1.0;
  bool guide_standardized = true;
};

struct FitResult {
  Raster prediction;
  FitDiagnostics diagnostics;
};

/// Fits a fresh net to one sample with Adam, full-batch gradients and the
/// plateau stopping rule, then returns the prediction at the final
/// iterate. Deterministic in (record, config): repeated calls give
/// bit-identical loss curves for any thread count. Throws
/// divergence_error when the loss becomes non-finite.
FitResult p2p_fit_predict(const Raster& source, const Raster& guide, int alpha, const P2pConfig& config);
FitResult p2p_fit_predict(const PatchRecord& record, const P2pConfig& config);

}  // namespace gsr
