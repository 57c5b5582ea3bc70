#include "specmark/nn.hpp"

#include <cmath>

#include "specmark/errors.hpp"

namespace specmark {

namespace {

// Symmetric reflection that repeats the edge sample: -1 -> 0, n -> n-1.
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

void check_layer(const ConvLayer& l) {
    if (l.in_ch <= 0 || l.out_ch <= 0) throw config_error("conv layer has no channels");
    if (l.ksize < 1 || l.ksize % 2 == 0) throw config_error("conv kernel size must be odd and >= 1");
    if (l.w.size() != static_cast<size_t>(l.in_ch) * l.out_ch * l.ksize * l.ksize)
        throw config_error("conv weight buffer does not match its declared shape");
}

}  // namespace

ConvLayer::ConvLayer(int in, int out, int k) : in_ch(in), out_ch(out), ksize(k) {
    if (in <= 0 || out <= 0 || k < 1 || k % 2 == 0)
        throw config_error("conv layer needs positive channels and an odd kernel size");
    w.assign(static_cast<size_t>(in) * out * k * k, 0.0);
}

ConvLayer delta_layer(int channels, int ksize) {
    ConvLayer l(channels, channels, ksize);
    const int c = ksize / 2;
    for (int i = 0; i < channels; ++i) l.wt(i, i, c, c) = 1.0;
    return l;
}

ConvLayer near_identity_layer(int channels, int ksize, double sigma, std::mt19937_64& rng) {
    ConvLayer l = delta_layer(channels, ksize);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& x : l.w) x += noise(rng);
    return l;
}

ConvStack identity_stack(int depth, int channels, int ksize, double alpha) {
    ConvStack s;
    s.alpha = alpha;
    for (int i = 0; i < depth; ++i) s.layers.push_back(delta_layer(channels, ksize));
    return s;
}

ConvStack near_identity_stack(int depth, int channels, int ksize, double alpha, double sigma,
                              std::mt19937_64& rng) {
    ConvStack s;
    s.alpha = alpha;
    for (int i = 0; i < depth; ++i) s.layers.push_back(near_identity_layer(channels, ksize, sigma, rng));
    return s;
}

Tensor3 conv_forward(const ConvLayer& layer, const Tensor3& in) {
    check_layer(layer);
    if (in.ch != layer.in_ch) throw config_error("conv input channel count mismatch");
    if (layer.ksize > in.rows || layer.ksize > in.cols)
        throw config_error("conv kernel larger than its input plane");
    const int h = in.rows, w = in.cols, k = layer.ksize, half = k / 2;
    Tensor3 out(layer.out_ch, h, w, 0.0);
    for (int o = 0; o < layer.out_ch; ++o) {
        for (int i = 0; i < layer.in_ch; ++i) {
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wt = layer.wt(o, i, ky, kx);
                    if (wt == 0.0) continue;
                    for (int y = 0; y < h; ++y) {
                        const int sy = reflect(y + ky - half, h);
                        for (int x = 0; x < w; ++x) {
                            const int sx = reflect(x + kx - half, w);
                            out.at(o, y, x) += wt * in.at(i, sy, sx);
                        }
                    }
                }
            }
        }
    }
    return out;
}

void conv_backward(const ConvLayer& layer, const Tensor3& in, const Tensor3& dout, Tensor3& din,
                   std::vector<double>& dw) {
    check_layer(layer);
    if (in.ch != layer.in_ch || dout.ch != layer.out_ch || dout.rows != in.rows ||
        dout.cols != in.cols)
        throw config_error("conv backward shape mismatch");
    const int h = in.rows, w = in.cols, k = layer.ksize, half = k / 2;
    din = Tensor3(layer.in_ch, h, w, 0.0);
    dw.assign(layer.w.size(), 0.0);
    for (int o = 0; o < layer.out_ch; ++o) {
        for (int i = 0; i < layer.in_ch; ++i) {
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wt = layer.wt(o, i, ky, kx);
                    double grad_w = 0.0;
                    for (int y = 0; y < h; ++y) {
                        const int sy = reflect(y + ky - half, h);
                        for (int x = 0; x < w; ++x) {
                            const int sx = reflect(x + kx - half, w);
                            const double g = dout.at(o, y, x);
                            grad_w += g * in.at(i, sy, sx);
                            din.at(i, sy, sx) += g * wt;
                        }
                    }
                    dw[((static_cast<size_t>(o) * layer.in_ch + i) * k + ky) * k + kx] += grad_w;
                }
            }
        }
    }
}

Tensor3 leaky_relu(const Tensor3& t, double alpha) {
    Tensor3 out = t;
    for (double& x : out.v)
        if (x < 0.0) x *= alpha;
    return out;
}

Tensor3 stack_forward(const ConvStack& s, const Tensor3& in, StackTape* tape) {
    if (tape) {
        tape->inputs.clear();
        tape->preacts.clear();
    }
    Tensor3 cur = in;
    for (const ConvLayer& layer : s.layers) {
        if (tape) tape->inputs.push_back(cur);
        Tensor3 pre = conv_forward(layer, cur);
        if (tape) tape->preacts.push_back(pre);
        cur = leaky_relu(pre, s.alpha);
    }
    return cur;
}

Tensor3 stack_backward(const ConvStack& s, const StackTape& tape, const Tensor3& dout,
                       StackGrads& grads) {
    const size_t k = s.layers.size();
    if (tape.inputs.size() != k || tape.preacts.size() != k)
        throw config_error("stack tape does not match the stack");
    grads.assign(k, {});
    Tensor3 cur = dout;
    for (size_t li = k; li-- > 0;) {
        // gradient through the nonlinearity, slope 1 at and above zero
        Tensor3 dpre = cur;
        const Tensor3& pre = tape.preacts[li];
        for (size_t j = 0; j < dpre.v.size(); ++j)
            if (pre.v[j] < 0.0) dpre.v[j] *= s.alpha;
        Tensor3 din;
        conv_backward(s.layers[li], tape.inputs[li], dpre, din, grads[li]);
        cur = std::move(din);
    }
    return cur;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& st,
               double lr, double beta1, double beta2, double eps) {
    if (params.size() != grads.size()) throw config_error("adam: parameter/gradient size mismatch");
    for (double g : grads)
        if (!std::isfinite(g)) throw divergence_error("adam: non-finite gradient");
    if (st.m.empty()) {
        st.m.assign(params.size(), 0.0);
        st.v.assign(params.size(), 0.0);
    }
    if (st.m.size() != params.size()) throw config_error("adam: state size mismatch");

    st.t += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.t));
    for (size_t i = 0; i < params.size(); ++i) {
        st.m[i] = beta1 * st.m[i] + (1.0 - beta1) * grads[i];
        st.v[i] = beta2 * st.v[i] + (1.0 - beta2) * grads[i] * grads[i];
        const double mhat = st.m[i] / bc1;
        const double vhat = st.v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace specmark
