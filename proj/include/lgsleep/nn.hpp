#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lgsleep/array.hpp"
#include "lgsleep/rng.hpp"

namespace lgsleep::nn {

enum class Mode { Train, Infer };

struct Param {
  Array value;
  Array grad;
  std::string name;

  Param() = default;
  Param(std::string name_, std::vector<std::size_t> shape)
      : value(shape), grad(std::move(shape)), name(std::move(name_)) {}

  void zero_grad() { grad.fill(0.0); }
};

// Glorot-uniform fill: limit = sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Array& a, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// ---------------------------------------------------------------------------
// conv1d: cross-correlation along L with zero same-padding (extra pad on the
// right for even kernels). x (B,L,Cin), kernel (K,Cin,Cout), bias (Cout).
Array conv1d_forward(const Array& x, const Array& kernel, const Array& bias);

/// dx may be null when the input gradient is not needed (first layer).
/// dkernel/dbias are accumulated into.
void conv1d_backward(const Array& x, const Array& kernel, const Array& dy, Array* dx,
                     Array& dkernel, Array& dbias);

// ---------------------------------------------------------------------------
// maxpool1d over non-overlapping windows; ties resolve to the first index.
// argmax records the in-window winner per output element (for backward).
Array maxpool1d_forward(const Array& x, std::size_t pool, std::vector<std::uint8_t>& argmax);
Array maxpool1d_backward(const Array& dy, const std::vector<std::uint8_t>& argmax,
                         std::size_t pool);

// ---------------------------------------------------------------------------
Array relu_forward(const Array& x);
void relu_inplace(Array& x);
/// Pass-through where the forward OUTPUT is positive (0 at the kink).
Array relu_backward(const Array& dy, const Array& y);
void relu_backward_inplace(Array& dy, const Array& y);

// ---------------------------------------------------------------------------
// Per-channel batch normalization over (B,L) of a (B,L,C) input.
class BatchNorm1d {
 public:
  BatchNorm1d(const std::string& prefix, std::size_t channels);

  struct Cache {
    std::vector<double> mean, inv_std;  // per channel, training batch stats
  };

  /// Training mode uses batch statistics and updates running stats (unless
  /// update_running is false, e.g. during gradient checking); inference mode
  /// requires at least one prior training update.
  Array forward(const Array& x, Mode mode, Cache* cache, bool update_running = true);
  /// Returns dx; accumulates gamma/beta grads. x is the forward input.
  Array backward(const Array& dy, const Array& x, const Cache& cache);

  Param gamma, beta;
  Array running_mean, running_var;
  bool initialized = false;
  double momentum = 0.9;
  double eps = 1e-5;
};

// ---------------------------------------------------------------------------
// Inverted dropout: zero with probability rate, scale survivors by 1/(1-rate).
Array dropout_forward(const Array& x, double rate, Mode mode, Rng& rng,
                      std::vector<std::uint8_t>& mask);
Array dropout_backward(const Array& dy, double rate, const std::vector<std::uint8_t>& mask);

// ---------------------------------------------------------------------------
// LSTM over (B,T,D) with packed gate order (i, f, g, o); h0 = c0 = 0.
class LstmCell {
 public:
  LstmCell(const std::string& prefix, std::size_t input_dim, std::size_t hidden);

  struct Cache {
    Array gates;   // (B,T,4H), post-activation
    Array c;       // (B,T,H)
    Array tanh_c;  // (B,T,H)
    Array h;       // (B,T,H)
  };

  /// Returns the full hidden sequence (B,T,H).
  Array forward(const Array& x, Cache& cache) const;
  /// Full BPTT. dh carries upstream gradients for every step (callers that
  /// consume only the last state pass zeros elsewhere). Returns dx.
  Array backward(const Array& dh, const Array& x, const Cache& cache);

  void init_params(Rng& rng);  // Glorot W/U, zero bias with forget gate at 1

  std::size_t input_dim() const { return d_; }
  std::size_t hidden() const { return h_; }

  Param W;  // (D,4H)
  Param U;  // (H,4H)
  Param b;  // (4H)

 private:
  std::size_t d_ = 0, h_ = 0;
};

// ---------------------------------------------------------------------------
Array dense_forward(const Array& x, const Array& W, const Array& b);
void dense_backward(const Array& x, const Array& W, const Array& dy, Array* dx, Array& dW,
                    Array& db);

// ---------------------------------------------------------------------------
// Nearest-neighbour repetition of each timestep `factor` times; backward sums
// each repeated block.
Array upsample1d_forward(const Array& x, std::size_t factor);
Array upsample1d_backward(const Array& dy, std::size_t factor);

// ---------------------------------------------------------------------------
Array softmax(const Array& logits);

struct XentResult {
  double loss = 0.0;
  Array dlogits;
  Array probs;
};
/// Class-weighted mean of -log softmax(logits)[label]; normalized by row count.
XentResult softmax_xent(const Array& logits, const std::vector<int>& labels,
                        const std::array<double, 3>& class_weights);

/// Mean over all elements of the squared difference.
double mse(const Array& x, const Array& xhat);
Array mse_backward(const Array& x, const Array& xhat);

// ---------------------------------------------------------------------------
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long t = 0;
  std::vector<Array> m, v;  // parallel to the param list it was initialized with

  void init(const std::vector<Param*>& params, double lr_);
};

/// Standard bias-corrected Adam update over `params` (paired with state slots).
void adam_step(AdamState& state, const std::vector<Param*>& params);

// ---------------------------------------------------------------------------
// Central finite differences against the analytic gradient currently stored in
// each param's grad. The loss closure must be a pure function of param values;
// it reports a digest of non-smooth branch decisions (ReLU masks, pool argmax)
// so coordinates whose +/-h evaluations land on different branches are skipped
// rather than compared across a kink.
struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t n_checked = 0;
  std::size_t n_skipped = 0;
};

GradCheckReport grad_check(const std::function<double(std::uint64_t* digest)>& loss,
                           const std::vector<Param*>& params, double h = 1e-5,
                           std::size_t sample_per_param = 200, std::uint64_t seed = 17);

}  // namespace lgsleep::nn
