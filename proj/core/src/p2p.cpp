#include "gsr/p2p.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gsr/errors.hpp"
#include "gsr/parallel.hpp"
#include "gsr/raster.hpp"
#include "gsr/rng.hpp"

namespace gsr {
namespace {

constexpr std::size_t kPixelChunk = 2048;

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_dims_chain(const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("P2pNet: layer_dims needs at least input and output sizes");
  for (const int d : dims) {
    if (d < 1) throw std::invalid_argument("P2pNet: layer dims must be positive");
  }
}

/// Activations of every layer over all pixels, plus scratch for the
/// backward pass. Buffers are written in disjoint pixel chunks, so the
/// parallel fill is race-free and bit-reproducible.
struct Workspace {
  std::vector<std::vector<double>> acts;  // acts[l]: n x dims[l+1], post-activation
  std::vector<std::vector<double>> wt;    // transposed weights, in_dim x out_dim per layer
  std::vector<double> pred;               // n, after the output affine
  std::vector<double> pooled;             // LR pixels
  std::vector<double> resid;              // LR pixels
  std::vector<double> dpred;              // n, backprop seed
  std::vector<std::vector<double>> grad_partial;  // per chunk, param_count
  std::vector<std::vector<double>> delta_scratch;  // per chunk, 2 * chunk_span * max_dim

  void resize(const P2pNet& net, std::size_t n, std::size_t lr_pixels) {
    const int layers = net.layer_count();
    acts.resize(static_cast<std::size_t>(layers));
    wt.resize(static_cast<std::size_t>(layers));
    for (int l = 0; l < layers; ++l) {
      acts[static_cast<std::size_t>(l)].resize(n * static_cast<std::size_t>(net.layer_dims[l + 1]));
      wt[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(net.layer_dims[l]) * net.layer_dims[l + 1]);
    }
    pred.resize(n);
    pooled.resize(lr_pixels);
    resid.resize(lr_pixels);
    dpred.resize(n);
    const std::size_t chunks = (n + kPixelChunk - 1) / kPixelChunk;
    const auto max_dim = static_cast<std::size_t>(*std::max_element(net.layer_dims.begin(), net.layer_dims.end()));
    grad_partial.resize(chunks);
    delta_scratch.resize(chunks);
    for (auto& g : grad_partial) g.assign(net.param_count(), 0.0);
    for (auto& d : delta_scratch) d.assign(2 * kPixelChunk * max_dim, 0.0);
  }

  /// Refresh the transposed weight copies; call once before each forward
  /// launch, outside the parallel section.
  void load_weights(const P2pNet& net) {
    for (int l = 0; l < net.layer_count(); ++l) {
      const int in_dim = net.layer_dims[l];
      const int out_dim = net.layer_dims[l + 1];
      const double* w = net.params.data() + net.weight_offset(l);
      double* t = wt[static_cast<std::size_t>(l)].data();
      for (int o = 0; o < out_dim; ++o) {
        for (int i = 0; i < in_dim; ++i) t[static_cast<std::size_t>(i) * out_dim + o] = w[static_cast<std::size_t>(o) * in_dim + i];
      }
    }
  }
};

/// One affine layer for one pixel, outputs accumulated across transposed
/// weight rows. The fixed-width variant keeps the accumulators in
/// registers; zero inputs (dead ReLUs upstream) are skipped, which leaves
/// the sums bit-identical.
template <int kOut>
void dense_fixed(const double* __restrict x, const double* __restrict wt, const double* __restrict bias,
                 double* __restrict y, int in_dim, bool relu) {
  double acc[kOut];
  for (int o = 0; o < kOut; ++o) acc[o] = bias[o];
  for (int i = 0; i < in_dim; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* w = wt + static_cast<std::size_t>(i) * kOut;
    for (int o = 0; o < kOut; ++o) acc[o] += w[o] * xi;
  }
  if (relu) {
    for (int o = 0; o < kOut; ++o) y[o] = acc[o] > 0.0 ? acc[o] : 0.0;
  } else {
    for (int o = 0; o < kOut; ++o) y[o] = acc[o];
  }
}

void dense_generic(const double* __restrict x, const double* __restrict wt, const double* __restrict bias,
                   double* __restrict y, int in_dim, int out_dim, bool relu) {
  for (int o = 0; o < out_dim; ++o) y[o] = bias[o];
  for (int i = 0; i < in_dim; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* w = wt + static_cast<std::size_t>(i) * out_dim;
    for (int o = 0; o < out_dim; ++o) y[o] += w[o] * xi;
  }
  if (relu) {
    for (int o = 0; o < out_dim; ++o) y[o] = y[o] > 0.0 ? y[o] : 0.0;
  }
}

void forward_chunk(const P2pNet& net, const std::vector<double>& features, Workspace& ws,
                   std::size_t n0, std::size_t n1) {
  const int layers = net.layer_count();
  for (int l = 0; l < layers; ++l) {
    const int in_dim = net.layer_dims[l];
    const int out_dim = net.layer_dims[l + 1];
    const double* wt = ws.wt[static_cast<std::size_t>(l)].data();
    const double* biases = net.params.data() + net.bias_offset(l);
    const double* in = l == 0 ? features.data() : ws.acts[static_cast<std::size_t>(l - 1)].data();
    double* out = ws.acts[static_cast<std::size_t>(l)].data();
    const bool hidden = l + 1 < layers;
    for (std::size_t nn = n0; nn < n1; ++nn) {
      const double* x = in + nn * static_cast<std::size_t>(in_dim);
      double* y = out + nn * static_cast<std::size_t>(out_dim);
      switch (out_dim) {
        case 32: dense_fixed<32>(x, wt, biases, y, in_dim, hidden); break;
        case 16: dense_fixed<16>(x, wt, biases, y, in_dim, hidden); break;
        case 8: dense_fixed<8>(x, wt, biases, y, in_dim, hidden); break;
        case 1: dense_fixed<1>(x, wt, biases, y, in_dim, hidden); break;
        default: dense_generic(x, wt, biases, y, in_dim, out_dim, hidden); break;
      }
    }
  }
  const double* y = ws.acts.back().data();
  for (std::size_t nn = n0; nn < n1; ++nn) ws.pred[nn] = net.output_scale * y[nn] + net.output_shift;
}

/// dL/dy for the chunk arrives via `dpred` (per HR pixel, already scaled
/// by the output affine); accumulates this chunk's parameter gradients.
void backward_chunk(const P2pNet& net, const std::vector<double>& features, int feature_dim,
                    const std::vector<double>& dpred, Workspace& ws, std::size_t chunk, std::size_t n0,
                    std::size_t n1) {
  const int layers = net.layer_count();
  double* grad = ws.grad_partial[chunk].data();
  const std::size_t span = n1 - n0;
  const auto max_dim = static_cast<std::size_t>(*std::max_element(net.layer_dims.begin(), net.layer_dims.end()));
  double* delta = ws.delta_scratch[chunk].data();
  double* delta_prev = delta + kPixelChunk * max_dim;

  for (std::size_t k = 0; k < span; ++k) delta[k] = dpred[n0 + k];

  for (int l = layers - 1; l >= 0; --l) {
    const int in_dim = net.layer_dims[l];
    const int out_dim = net.layer_dims[l + 1];
    const double* weights = net.params.data() + net.weight_offset(l);
    double* dw = grad + net.weight_offset(l);
    double* db = grad + net.bias_offset(l);
    const double* in = l == 0 ? features.data() + n0 * static_cast<std::size_t>(feature_dim)
                              : ws.acts[static_cast<std::size_t>(l - 1)].data() + n0 * static_cast<std::size_t>(in_dim);
    for (std::size_t k = 0; k < span; ++k) {
      const double* x = in + k * static_cast<std::size_t>(in_dim);
      const double* d = delta + k * static_cast<std::size_t>(out_dim);
      for (int o = 0; o < out_dim; ++o) {
        const double g = d[o];
        if (g == 0.0) continue;
        double* w_row = dw + static_cast<std::size_t>(o) * in_dim;
        for (int i = 0; i < in_dim; ++i) w_row[i] += g * x[i];
        db[o] += g;
      }
    }
    if (l == 0) break;
    // delta_prev = (delta . W) masked by the previous layer's ReLU.
    for (std::size_t k = 0; k < span; ++k) {
      const double* d = delta + k * static_cast<std::size_t>(out_dim);
      const double* act = in + k * static_cast<std::size_t>(in_dim);
      double* dp = delta_prev + k * static_cast<std::size_t>(in_dim);
      for (int i = 0; i < in_dim; ++i) dp[i] = 0.0;
      for (int o = 0; o < out_dim; ++o) {
        const double g = d[o];
        if (g == 0.0) continue;
        const double* w_row = weights + static_cast<std::size_t>(o) * in_dim;
        for (int i = 0; i < in_dim; ++i) dp[i] += g * w_row[i];
      }
      for (int i = 0; i < in_dim; ++i) {
        if (act[i] <= 0.0) dp[i] = 0.0;
      }
    }
    std::swap(delta, delta_prev);
  }
}

struct EvalContext {
  std::size_t n = 0;
  int feature_dim = 0;
  int alpha = 1;
  int lr_h = 0;
  int lr_w = 0;
  int hr_w = 0;
  const float* source = nullptr;
};

/// Block means of the HR prediction, residuals against the source and the
/// L1 data loss; fixed LR-major accumulation order.
double pool_and_residuals(const EvalContext& ctx, Workspace& ws) {
  const double inv_area = 1.0 / (static_cast<double>(ctx.alpha) * ctx.alpha);
  double data_loss = 0.0;
  for (int by = 0; by < ctx.lr_h; ++by) {
    for (int bx = 0; bx < ctx.lr_w; ++bx) {
      double sum = 0.0;
      for (int dy = 0; dy < ctx.alpha; ++dy) {
        const double* row = ws.pred.data() + (static_cast<std::size_t>(by * ctx.alpha + dy) * ctx.hr_w +
                                              static_cast<std::size_t>(bx) * ctx.alpha);
        for (int dx = 0; dx < ctx.alpha; ++dx) sum += row[dx];
      }
      const std::size_t lr_index = static_cast<std::size_t>(by) * ctx.lr_w + bx;
      ws.pooled[lr_index] = sum * inv_area;
      ws.resid[lr_index] = static_cast<double>(ctx.source[lr_index]) - ws.pooled[lr_index];
      data_loss += std::abs(ws.resid[lr_index]);
    }
  }
  return data_loss;
}

double l2_penalty(const P2pNet& net, double lambda) {
  if (lambda == 0.0) return 0.0;
  double acc = 0.0;
  for (const double p : net.params) acc += p * p;
  return lambda * acc;
}

/// d(data)/d(pred): each LR residual's sign spread over its block.
void seed_backprop(const P2pNet& net, const EvalContext& ctx, Workspace& ws) {
  const double scale = net.output_scale / (static_cast<double>(ctx.alpha) * ctx.alpha);
  for (std::size_t i = 0; i < ctx.n; ++i) {
    const std::size_t y = i / static_cast<std::size_t>(ctx.hr_w);
    const std::size_t x = i % static_cast<std::size_t>(ctx.hr_w);
    const std::size_t lr_index = (y / ctx.alpha) * ctx.lr_w + (x / ctx.alpha);
    ws.dpred[i] = -sign_of(ws.resid[lr_index]) * scale;
  }
}

std::vector<double> run_grad(const P2pNet& net, const std::vector<double>& features, const EvalContext& ctx,
                             double lambda, Workspace& ws) {
  ws.load_weights(net);
  parallel_chunks(ctx.n, kPixelChunk,
                  [&](std::size_t, std::size_t n0, std::size_t n1) { forward_chunk(net, features, ws, n0, n1); });
  pool_and_residuals(ctx, ws);
  seed_backprop(net, ctx, ws);

  for (auto& g : ws.grad_partial) std::fill(g.begin(), g.end(), 0.0);
  parallel_chunks(ctx.n, kPixelChunk, [&](std::size_t chunk, std::size_t n0, std::size_t n1) {
    backward_chunk(net, features, ctx.feature_dim, ws.dpred, ws, chunk, n0, n1);
  });

  std::vector<double> grad(net.param_count(), 0.0);
  for (const auto& partial : ws.grad_partial) {
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += partial[i];
  }
  if (lambda != 0.0) {
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += 2.0 * lambda * net.params[i];
  }
  return grad;
}

EvalContext make_context(const Raster& source, const Raster& guide, int alpha, int feature_dim) {
  EvalContext ctx;
  ctx.n = guide.pixel_count();
  ctx.feature_dim = feature_dim;
  ctx.alpha = alpha;
  ctx.lr_h = source.height;
  ctx.lr_w = source.width;
  ctx.hr_w = guide.width;
  ctx.source = source.channel(0);
  return ctx;
}

void check_record_for_fit(const Raster& source, const Raster& guide, int alpha) {
  if (alpha < 1) throw std::invalid_argument("p2p: alpha must be >= 1");
  if (source.channels != 1) throw dimension_error("p2p: source must have a single channel");
  if (guide.height != source.height * alpha || guide.width != source.width * alpha) {
    throw dimension_error("p2p: guide dims are not alpha * source dims");
  }
}

}  // namespace

std::size_t P2pNet::weight_offset(int layer) const {
  std::size_t offset = 0;
  for (int l = 0; l < layer; ++l) {
    offset += static_cast<std::size_t>(layer_dims[l]) * layer_dims[l + 1] + layer_dims[l + 1];
  }
  return offset;
}

std::size_t P2pNet::bias_offset(int layer) const {
  return weight_offset(layer) + static_cast<std::size_t>(layer_dims[layer]) * layer_dims[layer + 1];
}

std::size_t P2pNet::param_count() const {
  std::size_t count = 0;
  for (int l = 0; l + 1 < static_cast<int>(layer_dims.size()); ++l) {
    count += static_cast<std::size_t>(layer_dims[l]) * layer_dims[l + 1] + layer_dims[l + 1];
  }
  return count;
}

void P2pNet::validate() const {
  check_dims_chain(layer_dims);
  if (params.size() != param_count()) {
    throw std::invalid_argument("P2pNet: parameter vector length does not match layer_dims");
  }
  for (const double p : params) {
    if (!std::isfinite(p)) throw std::invalid_argument("P2pNet: non-finite parameter");
  }
  if (!std::isfinite(output_scale) || !std::isfinite(output_shift)) {
    throw std::invalid_argument("P2pNet: non-finite output affine");
  }
}

void P2pConfig::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("P2pConfig: lambda must be >= 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("P2pConfig: step_size must be > 0");
  if (!(step_decay > 0.0) || step_decay > 1.0) {
    throw std::invalid_argument("P2pConfig: step_decay must be in (0, 1]");
  }
  if (max_iters < 1) throw std::invalid_argument("P2pConfig: max_iters must be >= 1");
  if (plateau_window < 1) throw std::invalid_argument("P2pConfig: plateau_window must be >= 1");
  if (plateau_tol < 0.0) throw std::invalid_argument("P2pConfig: plateau_tol must be >= 0");
  for (const int d : hidden_dims) {
    if (d < 1) throw std::invalid_argument("P2pConfig: hidden dims must be positive");
  }
}

P2pNet net_init(const std::vector<int>& layer_dims, std::uint64_t seed) {
  check_dims_chain(layer_dims);
  P2pNet net;
  net.layer_dims = layer_dims;
  net.params.assign(net.param_count(), 0.0);
  Xoshiro256ss rng(seed);
  for (int l = 0; l + 1 < static_cast<int>(layer_dims.size()); ++l) {
    const int fan_in = layer_dims[l];
    const int fan_out = layer_dims[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    double* w = net.params.data() + net.weight_offset(l);
    const std::size_t count = static_cast<std::size_t>(fan_in) * fan_out;
    for (std::size_t i = 0; i < count; ++i) w[i] = rng.uniform(-limit, limit);
    // biases stay zero
  }
  return net;
}

std::vector<double> net_forward(const P2pNet& net, const std::vector<double>& features, int feature_dim) {
  net.validate();
  if (feature_dim != net.layer_dims.front()) {
    throw std::invalid_argument("net_forward: feature_dim does not match the input layer");
  }
  if (net.layer_dims.back() != 1) throw std::invalid_argument("net_forward: output layer must have one unit");
  if (feature_dim < 1 || features.size() % static_cast<std::size_t>(feature_dim) != 0) {
    throw std::invalid_argument("net_forward: feature buffer is not n x feature_dim");
  }
  for (const double f : features) {
    if (!std::isfinite(f)) throw std::invalid_argument("net_forward: non-finite feature");
  }
  const std::size_t n = features.size() / static_cast<std::size_t>(feature_dim);
  Workspace ws;
  ws.resize(net, n, 1);
  ws.load_weights(net);
  parallel_chunks(n, kPixelChunk,
                  [&](std::size_t, std::size_t n0, std::size_t n1) { forward_chunk(net, features, ws, n0, n1); });
  return ws.pred;
}

std::vector<double> p2p_features(const Raster& guide, int* feature_dim) {
  const auto stats = channel_stats(guide);
  const int channels = guide.channels;
  const int fdim = channels + 2;
  if (feature_dim) *feature_dim = fdim;
  const std::size_t n = guide.pixel_count();
  std::vector<double> features(n * static_cast<std::size_t>(fdim));
  const CoordGrid grid = coord_grid(guide.height, guide.width);
  for (std::size_t i = 0; i < n; ++i) {
    double* f = features.data() + i * static_cast<std::size_t>(fdim);
    for (int c = 0; c < channels; ++c) {
      const double stddev = stats.stddev[c] > 1e-12 ? stats.stddev[c] : 1.0;
      f[c] = (guide.values[static_cast<std::size_t>(c) * n + i] - stats.mean[c]) / stddev;
    }
    f[channels] = grid.values[i];
    f[channels + 1] = grid.values[n + i];
  }
  return features;
}

double p2p_loss(const P2pNet& net, const PatchRecord& record, const P2pConfig& config) {
  record.validate();
  net.validate();
  config.validate();
  int feature_dim = 0;
  const auto features = p2p_features(record.guide, &feature_dim);
  if (feature_dim != net.layer_dims.front()) {
    throw std::invalid_argument("p2p_loss: net input dim must equal guide channels + 2");
  }
  if (net.layer_dims.back() != 1) throw std::invalid_argument("p2p_loss: output layer must have one unit");
  const EvalContext ctx = make_context(record.source, record.guide, record.alpha, feature_dim);
  Workspace ws;
  ws.resize(net, ctx.n, record.source.pixel_count());
  ws.load_weights(net);
  parallel_chunks(ctx.n, kPixelChunk,
                  [&](std::size_t, std::size_t n0, std::size_t n1) { forward_chunk(net, features, ws, n0, n1); });
  return pool_and_residuals(ctx, ws) + l2_penalty(net, config.lambda);
}

std::vector<double> p2p_grad(const P2pNet& net, const PatchRecord& record, const P2pConfig& config) {
  record.validate();
  net.validate();
  config.validate();
  int feature_dim = 0;
  const auto features = p2p_features(record.guide, &feature_dim);
  if (feature_dim != net.layer_dims.front()) {
    throw std::invalid_argument("p2p_grad: net input dim must equal guide channels + 2");
  }
  if (net.layer_dims.back() != 1) throw std::invalid_argument("p2p_grad: output layer must have one unit");
  const EvalContext ctx = make_context(record.source, record.guide, record.alpha, feature_dim);
  Workspace ws;
  ws.resize(net, ctx.n, record.source.pixel_count());
  return run_grad(net, features, ctx, config.lambda, ws);
}

FitResult p2p_fit_predict(const Raster& source, const Raster& guide, int alpha, const P2pConfig& config) {
  config.validate();
  check_record_for_fit(source, guide, alpha);

  int feature_dim = 0;
  const auto features = p2p_features(guide, &feature_dim);
  const EvalContext ctx = make_context(source, guide, alpha, feature_dim);

  std::vector<int> dims;
  dims.push_back(feature_dim);
  for (const int h : config.hidden_dims) dims.push_back(h);
  dims.push_back(1);

  P2pNet net = net_init(dims, config.seed);
  {
    // Output calibration: predict in standardized source units so the fit
    // behaves identically across data scales.
    const auto stats = channel_stats(source);
    net.output_shift = stats.mean[0];
    net.output_scale = stats.stddev[0] > 1e-9 ? stats.stddev[0] : 1.0;
  }

  Workspace ws;
  ws.resize(net, ctx.n, source.pixel_count());

  std::vector<double> m(net.param_count(), 0.0);
  std::vector<double> v(net.param_count(), 0.0);

  FitDiagnostics diag;
  diag.source_mean = net.output_shift;
  diag.source_std = net.output_scale;
  diag.stop_reason = "max_iters";
  diag.loss_curve.reserve(static_cast<std::size_t>(config.max_iters));

  double best = std::numeric_limits<double>::infinity();
  int last_improvement = 0;

  // Each iteration evaluates the current iterate, then updates it; every
  // exit path leaves ws.pred matching the recorded final loss.
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    ws.load_weights(net);
    parallel_chunks(ctx.n, kPixelChunk,
                    [&](std::size_t, std::size_t n0, std::size_t n1) { forward_chunk(net, features, ws, n0, n1); });
    const double data_loss = pool_and_residuals(ctx, ws);
    const double loss = data_loss + l2_penalty(net, config.lambda);
    if (!std::isfinite(loss)) {
      throw divergence_error("p2p fit diverged: non-finite loss at iteration " + std::to_string(iter));
    }
    diag.loss_curve.push_back(loss);
    diag.iterations = iter;

    if (loss < best * (1.0 - config.plateau_tol)) {
      best = loss;
      last_improvement = iter;
    } else if (iter - last_improvement >= config.plateau_window) {
      diag.stop_reason = "plateau";
      break;
    }
    if (iter == config.max_iters) break;

    // Backward + Adam step.
    seed_backprop(net, ctx, ws);
    for (auto& g : ws.grad_partial) std::fill(g.begin(), g.end(), 0.0);
    parallel_chunks(ctx.n, kPixelChunk, [&](std::size_t chunk, std::size_t n0, std::size_t n1) {
      backward_chunk(net, features, feature_dim, ws.dpred, ws, chunk, n0, n1);
    });
    const double bc1 = 1.0 - std::pow(config.beta1, iter);
    const double bc2 = 1.0 - std::pow(config.beta2, iter);
    const double step =
        config.step_decay == 1.0 || config.max_iters == 1
            ? config.step_size
            : config.step_size * std::pow(config.step_decay, static_cast<double>(iter - 1) / (config.max_iters - 1));
    for (std::size_t i = 0; i < net.params.size(); ++i) {
      double g = 2.0 * config.lambda * net.params[i];
      for (const auto& partial : ws.grad_partial) g += partial[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      net.params[i] -= step * mhat / (std::sqrt(vhat) + config.epsilon);
    }
  }

  diag.final_loss = diag.loss_curve.back();

  FitResult result;
  result.prediction = Raster(1, guide.height, guide.width, source.units);
  for (std::size_t i = 0; i < ctx.n; ++i) result.prediction.values[i] = static_cast<float>(ws.pred[i]);
  result.diagnostics = std::move(diag);
  return result;
}

FitResult p2p_fit_predict(const PatchRecord& record, const P2pConfig& config) {
  record.validate();
  return p2p_fit_predict(record.source, record.guide, record.alpha, config);
}

}  // namespace gsr
