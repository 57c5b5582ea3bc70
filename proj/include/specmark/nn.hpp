#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace specmark {

// Activation tensor: channels x rows x cols, row-major within a channel.
struct Tensor3 {
    int ch = 0;
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor3() = default;
    Tensor3(int c, int r, int w, double fill = 0.0)
        : ch(c), rows(r), cols(w), v(static_cast<size_t>(c) * r * w, fill) {}

    double& at(int c, int r, int w) {
        return v[(static_cast<size_t>(c) * rows + r) * cols + w];
    }
    double at(int c, int r, int w) const {
        return v[(static_cast<size_t>(c) * rows + r) * cols + w];
    }
};

// Bank of square cross-correlation kernels, one per (out, in) channel pair.
// No bias term.
struct ConvLayer {
    int in_ch = 0;
    int out_ch = 0;
    int ksize = 0;
    std::vector<double> w;  // [out][in][ky][kx]

    ConvLayer() = default;
    ConvLayer(int in, int out, int k);

    double& wt(int o, int i, int ky, int kx) {
        return w[((static_cast<size_t>(o) * in_ch + i) * ksize + ky) * ksize + kx];
    }
    double wt(int o, int i, int ky, int kx) const {
        return w[((static_cast<size_t>(o) * in_ch + i) * ksize + ky) * ksize + kx];
    }
};

// Exact delta kernels: conv with this layer is the identity map.
ConvLayer delta_layer(int channels, int ksize);

// Delta kernels plus Gaussian weight noise, the standard starting point.
ConvLayer near_identity_layer(int channels, int ksize, double sigma, std::mt19937_64& rng);

struct ConvStack {
    std::vector<ConvLayer> layers;
    double alpha = 0.01;  // LeakyReLU negative slope
};

ConvStack identity_stack(int depth, int channels, int ksize, double alpha);
ConvStack near_identity_stack(int depth, int channels, int ksize, double alpha, double sigma,
                              std::mt19937_64& rng);

// 'same'-size cross-correlation with reflective boundary handling.
Tensor3 conv_forward(const ConvLayer& layer, const Tensor3& in);

// Gradients of the same op: fills d(input) and d(weights) given the upstream
// gradient. The input scatter uses the same reflected indices as the forward
// gather, so the pair is an exact adjoint.
void conv_backward(const ConvLayer& layer, const Tensor3& in, const Tensor3& dout, Tensor3& din,
                   std::vector<double>& dw);

Tensor3 leaky_relu(const Tensor3& t, double alpha);

// Everything the backward pass needs from a forward run.
struct StackTape {
    std::vector<Tensor3> inputs;
    std::vector<Tensor3> preacts;
};

Tensor3 stack_forward(const ConvStack& s, const Tensor3& in, StackTape* tape = nullptr);

// One weight-gradient vector per layer, same layout as ConvLayer::w.
using StackGrads = std::vector<std::vector<double>>;

// Returns d(input); grads is resized to match the stack.
Tensor3 stack_backward(const ConvStack& s, const StackTape& tape, const Tensor3& dout,
                       StackGrads& grads);

// Adam with bias correction. State buffers are sized on first use.
// Non-finite gradients raise a divergence error before any state changes.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int64_t t = 0;
};

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& st,
               double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace specmark
