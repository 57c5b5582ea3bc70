#include "specmark/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include "specmark/decoder.hpp"
#include "specmark/errors.hpp"
#include "specmark/metrics.hpp"
#include "specmark/seedmix.hpp"

namespace specmark {

namespace {

constexpr uint64_t kMsgTag = 0x6d736773ULL;
constexpr uint64_t kBatchTag = 0x62746368ULL;
constexpr uint64_t kProbeTag = 0x70726f62ULL;

// Folds gradients of the duplicated edge row/column back onto the source.
Plane pad_adjoint(const Plane& g, int rows, int cols) {
    Plane out(rows, cols);
    for (int y = 0; y < g.rows; ++y)
        for (int x = 0; x < g.cols; ++x)
            out.at(std::min(y, rows - 1), std::min(x, cols - 1)) += g.at(y, x);
    return out;
}

Plane zero_extend(const Plane& g, int rows, int cols) {
    Plane out(rows, cols);
    for (int y = 0; y < g.rows; ++y)
        for (int x = 0; x < g.cols; ++x) out.at(y, x) = g.at(y, x);
    return out;
}

// Gradient with respect to the channel plane, given the gradient with
// respect to the deepest diagonal band that analyze_channel produced.
Plane analysis_adjoint(const ChannelDecomp& d, const Plane& d_hh) {
    const size_t depth = d.levels.size();
    const Plane& deep = d.levels[depth - 1].ll;
    SubBands bands;
    bands.ll = Plane(deep.rows, deep.cols);
    bands.lh = Plane(deep.rows, deep.cols);
    bands.hl = Plane(deep.rows, deep.cols);
    bands.hh = d_hh;
    Plane g = haar_reconstruct(bands);
    g = pad_adjoint(g, d.unpadded[depth - 1].first, d.unpadded[depth - 1].second);
    for (size_t t = depth - 1; t-- > 0;) {
        const Plane& ref = d.levels[t].ll;
        SubBands b;
        b.ll = std::move(g);
        b.lh = Plane(ref.rows, ref.cols);
        b.hl = Plane(ref.rows, ref.cols);
        b.hh = Plane(ref.rows, ref.cols);
        g = haar_reconstruct(b);
        g = pad_adjoint(g, d.unpadded[t].first, d.unpadded[t].second);
    }
    return g;
}

// Gradient with respect to the replaced diagonal band, given the gradient
// with respect to the synthesized channel plane.
Plane synthesize_adjoint(const ChannelDecomp& d, const Plane& dout) {
    const size_t depth = d.levels.size();
    Plane g = dout;
    for (size_t t = 0; t < depth; ++t) {
        const int pr = d.levels[t].ll.rows * 2;
        const int pc = d.levels[t].ll.cols * 2;
        if (g.rows != pr || g.cols != pc) g = zero_extend(g, pr, pc);
        SubBands b = haar_decompose(g);
        if (t + 1 == depth) return b.hh;
        g = std::move(b.ll);
    }
    throw config_error("synthesize_adjoint: empty decomposition");
}

struct CoverCache {
    std::vector<ChannelDecomp> decomps;
    Tensor3 spectral;
};

CoverCache make_cover_cache(const Image& cover, const RunConfig& cfg) {
    CoverCache cc;
    cc.decomps.reserve(cover.channels);
    for (int c = 0; c < cover.channels; ++c)
        cc.decomps.push_back(analyze_channel(image_channel(cover, c), cfg.wavelet_levels));
    cc.spectral = spectral_tensor(cc.decomps);
    return cc;
}

Plane tensor_channel(const Tensor3& t, int c) {
    Plane p(t.rows, t.cols);
    for (int y = 0; y < t.rows; ++y)
        for (int x = 0; x < t.cols; ++x) p.at(y, x) = t.at(c, y, x);
    return p;
}

void set_tensor_channel(Tensor3& t, int c, const Plane& p) {
    for (int y = 0; y < t.rows; ++y)
        for (int x = 0; x < t.cols; ++x) t.at(c, y, x) = p.at(y, x);
}

struct ForwardState {
    StackTape enc_tape;
    Tensor3 written;   // encoder output with the message written in
    Tensor3 harm_pre;  // harmonize pre-activation, when present
    Tensor3 pipe_out;  // spectral tensor fed to the inverse transform
    Image embedded;    // unclamped
    std::vector<ChannelDecomp> emb_decomps;
    StackTape dec_tape;
    Tensor3 dec_out;
    std::vector<std::pair<int, int>> coords;
    size_t slots = 0;
    std::vector<double> scores;
    std::vector<int> counts;
    std::vector<double> probs;
    double enc_loss = 0.0;
    double dec_loss = 0.0;
    double total = 0.0;
};

ForwardState run_forward(const Image& cover, const CoverCache& cc, const std::vector<int>& bits,
                         const RunConfig& cfg, const Model& model, double le, double ld) {
    check_pipeline_input(cover, cfg);
    if (static_cast<int>(bits.size()) != cfg.bit_length)
        throw config_error("message length does not match configured bit_length");

    ForwardState fs;
    ConvStack enc{model.encoder, model.alpha};
    Tensor3 e = stack_forward(enc, cc.spectral, &fs.enc_tape);

    DiscMask mask = disc_mask(e.rows, e.cols, cfg.radius);
    ExpandedMessage em = expand_message(bits, mask.coords.size(), cfg.redundancy);
    fs.coords = std::move(mask.coords);
    fs.slots = em.slot_bits.size();
    for (size_t s = 0; s < fs.slots; ++s) {
        const auto [y, x] = fs.coords[s];
        const double val = em.slot_bits[s] * cfg.strength;
        if (cfg.embed_mode == EmbedMode::additive)
            e.at(cfg.channel, y, x) += val;
        else
            e.at(cfg.channel, y, x) = val;
    }
    fs.written = std::move(e);

    if (model.harmonize) {
        fs.harm_pre = conv_forward(*model.harmonize, fs.written);
        fs.pipe_out = leaky_relu(fs.harm_pre, model.alpha);
    } else {
        fs.pipe_out = fs.written;
    }

    fs.embedded = cover;
    for (int c = 0; c < cover.channels; ++c) {
        ChannelDecomp d = cc.decomps[c];
        d.levels.back().hh = idct2d(tensor_channel(fs.pipe_out, c));
        set_image_channel(fs.embedded, c, synthesize_channel(d));
    }
    fs.enc_loss = encoder_loss(cover, fs.embedded);

    fs.emb_decomps.reserve(cover.channels);
    for (int c = 0; c < cover.channels; ++c)
        fs.emb_decomps.push_back(analyze_channel(image_channel(fs.embedded, c), cfg.wavelet_levels));
    Tensor3 s2 = spectral_tensor(fs.emb_decomps);
    ConvStack dec{model.decoder, model.alpha};
    fs.dec_out = stack_forward(dec, s2, &fs.dec_tape);

    const size_t l = bits.size();
    fs.scores.assign(l, 0.0);
    fs.counts.assign(l, 0);
    for (size_t s = 0; s < fs.slots; ++s) {
        const auto [y, x] = fs.coords[s];
        fs.scores[s % l] += fs.dec_out.at(cfg.channel, y, x);
        fs.counts[s % l] += 1;
    }
    for (size_t i = 0; i < l; ++i) fs.scores[i] /= fs.counts[i];
    fs.probs = soft_probabilities(fs.scores, model.theta, cfg.soft_temperature);
    fs.dec_loss = decoder_loss(bits, fs.probs);
    fs.total = total_loss(fs.enc_loss, fs.dec_loss, le, ld);
    return fs;
}

LossGrads run_backward(const Image& cover, const CoverCache& cc, const std::vector<int>& bits,
                       const RunConfig& cfg, const Model& model, const ForwardState& fs,
                       double le, double ld) {
    LossGrads g;
    g.enc_loss = fs.enc_loss;
    g.dec_loss = fs.dec_loss;
    g.total = fs.total;

    const size_t l = bits.size();
    const double tau = cfg.soft_temperature;
    std::vector<double> dscore(l);
    g.theta = 0.0;
    for (size_t i = 0; i < l; ++i) {
        const double dp = ld * 2.0 * (fs.probs[i] - bits[i]) / static_cast<double>(l);
        const double slope = fs.probs[i] * (1.0 - fs.probs[i]) / tau;
        dscore[i] = dp * slope;
        g.theta -= dp * slope;
    }

    Tensor3 dD(fs.dec_out.ch, fs.dec_out.rows, fs.dec_out.cols, 0.0);
    for (size_t s = 0; s < fs.slots; ++s) {
        const auto [y, x] = fs.coords[s];
        dD.at(cfg.channel, y, x) += dscore[s % l] / fs.counts[s % l];
    }

    ConvStack dec{model.decoder, model.alpha};
    Tensor3 ds2 = stack_backward(dec, fs.dec_tape, dD, g.decoder);

    // back out of the decode analysis into the embedded image
    Image demb(fs.embedded.height, fs.embedded.width, fs.embedded.channels);
    for (int c = 0; c < demb.channels; ++c) {
        Plane dhh = idct2d(tensor_channel(ds2, c));
        set_image_channel(demb, c, analysis_adjoint(fs.emb_decomps[c], dhh));
    }
    // fidelity term lands directly on the embedded image
    const double scale = le * 2.0 / static_cast<double>(cover.samples.size());
    for (size_t i = 0; i < demb.samples.size(); ++i)
        demb.samples[i] += scale * (fs.embedded.samples[i] - cover.samples[i]);

    // back through the synthesis into the written spectral tensor
    Tensor3 dt(fs.pipe_out.ch, fs.pipe_out.rows, fs.pipe_out.cols, 0.0);
    for (int c = 0; c < demb.channels; ++c) {
        Plane dhh = synthesize_adjoint(cc.decomps[c], image_channel(demb, c));
        set_tensor_channel(dt, c, dct2d_packed(dhh));
    }

    Tensor3 dew;
    if (model.harmonize) {
        Tensor3 dpre = dt;
        for (size_t i = 0; i < dpre.v.size(); ++i)
            if (fs.harm_pre.v[i] < 0.0) dpre.v[i] *= model.alpha;
        conv_backward(*model.harmonize, fs.written, dpre, dew, g.harmonize);
    } else {
        dew = std::move(dt);
        g.harmonize.clear();
    }

    if (cfg.embed_mode == EmbedMode::substitutive)
        for (size_t s = 0; s < fs.slots; ++s) {
            const auto [y, x] = fs.coords[s];
            dew.at(cfg.channel, y, x) = 0.0;
        }

    ConvStack enc{model.encoder, model.alpha};
    stack_backward(enc, fs.enc_tape, dew, g.encoder);
    return g;
}

double probe_bra(const Image& img, const std::vector<int>& bits, RunConfig cfg, const Model& m) {
    cfg.theta = m.theta;
    Image wm = embed(img, bits, cfg, m, EmbedOptions{false});
    DecodeResult dr = extract(wm, cfg, m);
    return bit_recovery_accuracy(dr.bits, bits);
}

void validate_train_config(const TrainConfig& tc) {
    if (tc.steps < 0) throw config_error("train: steps must be >= 0");
    if (tc.batch < 1) throw config_error("train: batch size must be >= 1");
    if (tc.encoder_lr < 0.0 || tc.decoder_lr < 0.0)
        throw config_error("train: learning rates must be >= 0");
    if (tc.lambda_enc < 0.0 || tc.lambda_dec < 0.0)
        throw config_error("train: loss weights must be >= 0");
    if (tc.decoder_lr_halving < 1) throw config_error("train: lr halving interval must be >= 1");
    if (tc.checkpoint_interval < 0) throw config_error("train: checkpoint interval must be >= 0");
}

}  // namespace

double encoder_loss(const Image& cover, const Image& embedded) {
    if (!cover.same_shape(embedded)) throw config_error("encoder_loss: shape mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < cover.samples.size(); ++i) {
        const double d = embedded.samples[i] - cover.samples[i];
        acc += d * d;
    }
    return acc / static_cast<double>(cover.samples.size());
}

double decoder_loss(const std::vector<int>& bits, const std::vector<double>& probs) {
    if (bits.size() != probs.size()) throw config_error("decoder_loss: length mismatch");
    if (bits.empty()) throw config_error("decoder_loss: empty message");
    double acc = 0.0;
    for (size_t i = 0; i < bits.size(); ++i) {
        const double d = probs[i] - bits[i];
        acc += d * d;
    }
    return acc / static_cast<double>(bits.size());
}

double total_loss(double enc, double dec, double lambda_enc, double lambda_dec) {
    return lambda_enc * enc + lambda_dec * dec;
}

double decoder_lr_at(const TrainConfig& tc, int step) {
    if (step < 1) throw config_error("decoder_lr_at: steps are 1-based");
    const int halvings = step / tc.decoder_lr_halving;
    return tc.decoder_lr * std::pow(0.5, halvings);
}

double training_loss(const Image& cover, const std::vector<int>& bits, const RunConfig& cfg,
                     const Model& model, double lambda_enc, double lambda_dec) {
    CoverCache cc = make_cover_cache(cover, cfg);
    return run_forward(cover, cc, bits, cfg, model, lambda_enc, lambda_dec).total;
}

LossGrads training_gradients(const Image& cover, const std::vector<int>& bits,
                             const RunConfig& cfg, const Model& model, double lambda_enc,
                             double lambda_dec) {
    CoverCache cc = make_cover_cache(cover, cfg);
    ForwardState fs = run_forward(cover, cc, bits, cfg, model, lambda_enc, lambda_dec);
    return run_backward(cover, cc, bits, cfg, model, fs, lambda_enc, lambda_dec);
}

TrainResult train(const std::vector<Image>& corpus, const RunConfig& cfg_in, const TrainConfig& tc,
                  const Model& init) {
    validate_train_config(tc);
    if (corpus.empty()) throw config_error("train: empty corpus");

    RunConfig cfg = cfg_in;
    cfg.embed_mode = EmbedMode::additive;
    for (const Image& img : corpus) {
        check_pipeline_input(img, cfg);
        if (img.channels != corpus.front().channels)
            throw config_error("train: corpus images must share a channel count");
    }

    std::vector<CoverCache> caches;
    caches.reserve(corpus.size());
    for (const Image& img : corpus) caches.push_back(make_cover_cache(img, cfg));

    TrainResult res;
    res.model = init;

    std::vector<AdamState> enc_states(init.encoder.size() + (init.harmonize ? 1 : 0));
    std::vector<AdamState> dec_states(init.decoder.size() + 1);

    const std::vector<int> probe_bits =
        random_message(cfg.bit_length, mix_seed(tc.seed, kProbeTag));

    for (int step = 1; step <= tc.steps; ++step) {
        const auto t0 = std::chrono::steady_clock::now();
        const Model snapshot = res.model;

        StackGrads genc(res.model.encoder.size());
        for (size_t i = 0; i < genc.size(); ++i) genc[i].assign(res.model.encoder[i].w.size(), 0.0);
        std::vector<double> gharm;
        if (res.model.harmonize) gharm.assign(res.model.harmonize->w.size(), 0.0);
        StackGrads gdec(res.model.decoder.size());
        for (size_t i = 0; i < gdec.size(); ++i) gdec[i].assign(res.model.decoder[i].w.size(), 0.0);
        double gtheta = 0.0;
        double enc_sum = 0.0, dec_sum = 0.0;

        std::mt19937_64 pick(mix_seed(tc.seed, kBatchTag, static_cast<uint64_t>(step)));
        for (int item = 0; item < tc.batch; ++item) {
            const size_t idx = corpus.size() == 1 ? 0 : pick() % corpus.size();
            const std::vector<int> bits = random_message(
                cfg.bit_length,
                mix_seed(tc.seed, kMsgTag, static_cast<uint64_t>(step), static_cast<uint64_t>(item)));
            ForwardState fs =
                run_forward(corpus[idx], caches[idx], bits, cfg, res.model, tc.lambda_enc, tc.lambda_dec);
            LossGrads lg =
                run_backward(corpus[idx], caches[idx], bits, cfg, res.model, fs, tc.lambda_enc, tc.lambda_dec);
            enc_sum += lg.enc_loss;
            dec_sum += lg.dec_loss;
            for (size_t i = 0; i < genc.size(); ++i)
                for (size_t j = 0; j < genc[i].size(); ++j) genc[i][j] += lg.encoder[i][j];
            for (size_t j = 0; j < gharm.size(); ++j) gharm[j] += lg.harmonize[j];
            for (size_t i = 0; i < gdec.size(); ++i)
                for (size_t j = 0; j < gdec[i].size(); ++j) gdec[i][j] += lg.decoder[i][j];
            gtheta += lg.theta;
        }

        const double inv = 1.0 / tc.batch;
        const double enc_mean = enc_sum * inv;
        const double dec_mean = dec_sum * inv;
        const double tot = total_loss(enc_mean, dec_mean, tc.lambda_enc, tc.lambda_dec);
        if (!std::isfinite(tot)) {
            res.model = snapshot;
            res.diverged = true;
            break;
        }

        for (auto& gv : genc)
            for (double& x : gv) x *= inv;
        for (double& x : gharm) x *= inv;
        for (auto& gv : gdec)
            for (double& x : gv) x *= inv;
        gtheta *= inv;

        try {
            for (size_t i = 0; i < res.model.encoder.size(); ++i)
                adam_step(res.model.encoder[i].w, genc[i], enc_states[i], tc.encoder_lr);
            if (res.model.harmonize)
                adam_step(res.model.harmonize->w, gharm, enc_states.back(), tc.encoder_lr);
            const double dlr = decoder_lr_at(tc, step);
            for (size_t i = 0; i < res.model.decoder.size(); ++i)
                adam_step(res.model.decoder[i].w, gdec[i], dec_states[i], dlr);
            std::vector<double> th{res.model.theta};
            std::vector<double> gth{gtheta};
            adam_step(th, gth, dec_states.back(), dlr);
            res.model.theta = th[0];
        } catch (const Error&) {
            res.model = snapshot;
            res.diverged = true;
            break;
        }

        TrainStepStats st;
        st.step = step;
        st.encoder_loss = enc_mean;
        st.decoder_loss = dec_mean;
        st.total_loss = tot;
        st.theta = res.model.theta;
        if (tc.checkpoint_interval > 0 &&
            (step == 1 || step == tc.steps || step % tc.checkpoint_interval == 0))
            st.clean_bra = probe_bra(corpus.front(), probe_bits, cfg, res.model);
        st.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
        res.history.push_back(st);
        res.completed_steps = step;
    }
    return res;
}

std::string training_report_csv(const std::vector<TrainStepStats>& history) {
    std::string out = "step,L_enc,L_dec,L_total,clean_BRA\n";
    char buf[200];
    for (const TrainStepStats& st : history) {
        if (st.clean_bra >= 0.0)
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", st.step,
                          st.encoder_loss, st.decoder_loss, st.total_loss, st.clean_bra);
        else
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,\n", st.step, st.encoder_loss,
                          st.decoder_loss, st.total_loss);
        out += buf;
    }
    return out;
}

}  // namespace specmark
