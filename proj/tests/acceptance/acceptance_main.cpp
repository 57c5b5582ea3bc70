// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "specmark/attacks.hpp"
#include "specmark/bench.hpp"
#include "specmark/codec.hpp"
#include "specmark/decoder.hpp"
#include "specmark/errors.hpp"
#include "specmark/metrics.hpp"
#include "specmark/model.hpp"
#include "specmark/nn.hpp"
#include "specmark/training.hpp"
#include "specmark/transforms.hpp"
#include "testutil.hpp"

using namespace specmark;
using testutil::max_abs_diff;
using testutil::plane_energy;
using testutil::random_plane;
using testutil::smooth_image;
using testutil::synth_image;

namespace {

int g_failures = 0;

template <typename Fn>
void criterion(int num, const std::string& label, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string why;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        ok = false;
        why = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d (%s): %s (%.1f s)%s%s\n", num, label.c_str(),
                ok ? "PASS" : "FAIL", secs, why.empty() ? "" : " ", why.c_str());
    if (!ok) ++g_failures;
}

void note(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    std::printf("  - ");
    std::printf(fmt, a, b, c);
    std::printf("\n");
}

bool is_pos_inf(double v) { return std::isinf(v) && v > 0; }
bool is_neg_inf(double v) { return std::isinf(v) && v < 0; }

// Piecewise-constant blocks over a gradient base, a stand-in for photographic
// structure: flat regions, sharp edges, correlated channels.
Image blocky_image(int h, int w, int ch, uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Image img(h, w, ch);
    std::vector<double> base(static_cast<size_t>(ch));
    for (int c = 0; c < ch; ++c) base[c] = 60.0 + 60.0 * uni(g);
    for (int c = 0; c < ch; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                img.at(c, y, x) = base[c] + 60.0 * (static_cast<double>(y) / h);
    const int rects = 40;
    for (int k = 0; k < rects; ++k) {
        const int y0 = static_cast<int>(uni(g) * h);
        const int x0 = static_cast<int>(uni(g) * w);
        const int rh = 8 + static_cast<int>(uni(g) * h / 3);
        const int rw = 8 + static_cast<int>(uni(g) * w / 3);
        std::vector<double> color(static_cast<size_t>(ch));
        for (int c = 0; c < ch; ++c) color[c] = 30.0 + 190.0 * uni(g);
        for (int c = 0; c < ch; ++c)
            for (int y = y0; y < std::min(h, y0 + rh); ++y)
                for (int x = x0; x < std::min(w, x0 + rw); ++x) img.at(c, y, x) = color[c];
    }
    std::normal_distribution<double> grain(0.0, 2.0);
    for (double& v : img.samples) v = std::min(230.0, std::max(25.0, v + grain(g)));
    return img;
}

bool criterion1() {
    std::mt19937_64 rng(101);
    double worst_pair = 0.0, worst_rt = 0.0, worst_haar = 0.0, worst_direct = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng() % 128);
        Plane p = random_plane(n, n, 500 + t);
        Plane mirror = dct2d_mirror(p);
        Plane packed = dct2d_packed(p);
        worst_pair = std::max(worst_pair, max_abs_diff(mirror, packed));
        worst_rt = std::max(worst_rt, max_abs_diff(idct2d(packed), p));

        const int hr = 2 * (1 + static_cast<int>(rng() % 64));
        const int hc = 2 * (1 + static_cast<int>(rng() % 64));
        Plane q = random_plane(hr, hc, 9000 + t);
        worst_haar = std::max(worst_haar, max_abs_diff(haar_reconstruct(haar_decompose(q)), q));
    }
    for (int n = 1; n <= 16; ++n) {
        Plane p = random_plane(n, n, 700 + n);
        Plane direct = testutil::dct2d_direct(p);
        worst_direct = std::max(worst_direct, max_abs_diff(dct2d_packed(p), direct));
        worst_direct = std::max(worst_direct, max_abs_diff(dct2d_mirror(p), direct));
    }
    note("mirror vs packed %.3g, inverse %.3g, haar %.3g", worst_pair, worst_rt, worst_haar);
    note("vs direct cosine sum %.3g", worst_direct);
    return worst_pair <= 1e-9 && worst_rt <= 1e-9 && worst_haar <= 1e-9 && worst_direct <= 1e-9;
}

bool criterion2() {
    std::mt19937_64 rng(202);
    double worst = 0.0;
    auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(1.0, std::abs(want));
    };
    for (int t = 0; t < 100; ++t) {
        const int hr = 2 * (1 + static_cast<int>(rng() % 48));
        const int hc = 2 * (1 + static_cast<int>(rng() % 48));
        Plane q = random_plane(hr, hc, 2000 + t);
        SubBands b = haar_decompose(q);
        const double band_sum =
            plane_energy(b.ll) + plane_energy(b.lh) + plane_energy(b.hl) + plane_energy(b.hh);
        worst = std::max(worst, rel(band_sum, plane_energy(q)));

        const int n = 1 + static_cast<int>(rng() % 96);
        Plane p = random_plane(n, n, 2200 + t);
        worst = std::max(worst, rel(plane_energy(dct2d_packed(p)), plane_energy(p)));
        worst = std::max(worst, rel(plane_energy(dct2d_mirror(p)), plane_energy(p)));

        const int levels = 1 + t % 2;
        const int side = 4 * (1 + static_cast<int>(rng() % 24));
        Plane img = random_plane(side, side, 2400 + t, 0.0, 255.0);
        ChannelDecomp d = analyze_channel(img, levels);
        double acc = plane_energy(d.levels.back().ll);
        for (const SubBands& lv : d.levels)
            acc += plane_energy(lv.lh) + plane_energy(lv.hl) + plane_energy(lv.hh);
        worst = std::max(worst, rel(acc, plane_energy(img)));
        const double hh = plane_energy(d.levels.back().hh);
        worst = std::max(worst, rel(plane_energy(dct2d_packed(d.levels.back().hh)), hh));
    }
    note("worst relative energy error %.3g", worst);
    return worst <= 1e-9;
}

bool criterion3() {
    RunConfig cfg;
    cfg.embed_mode = EmbedMode::substitutive;
    const Model id = identity_model();
    bool all = true;
    double worst = 1.0;
    for (int i = 0; i < 20; ++i) {
        Image cover;
        if (i < 7)
            cover = synth_image(512, 512, 3, 1300 + i);
        else if (i < 14)
            cover = smooth_image(512, 512, 3, 1300 + i);
        else
            cover = blocky_image(512, 512, 3, 1300 + i);
        const std::vector<int> bits = random_message(cfg.bit_length, 4000 + i);
        const Image emb = embed(cover, bits, cfg, id);
        const DecodeResult dec = extract(emb, cfg, id);
        const double bra = bit_recovery_accuracy(dec.bits, bits);
        worst = std::min(worst, bra);
        if (bra != 1.0) all = false;
    }
    note("lowest per-image recovery %.6f over 20 images", worst);
    return all;
}

bool criterion4() {
    RunConfig cfg;
    cfg.embed_mode = EmbedMode::additive;
    const Model id = identity_model();
    const double expected =
        10.0 * std::log10(255.0 * 255.0 * 512.0 * 512.0 * 3.0 / (20.0 * 20.0 * 64.0));
    double worst_dev = 0.0;
    for (int i = 0; i < 10; ++i) {
        Image cover = synth_image(512, 512, 3, 1450 + i);
        std::vector<int> bits(128, 0);
        for (int k = 0; k < 64; ++k) bits[k] = 1;
        std::mt19937_64 shuf(1400 + i);
        std::shuffle(bits.begin(), bits.end(), shuf);
        const Image emb = embed(cover, bits, cfg, id, EmbedOptions{false});
        const double psnr = peak_signal_to_noise(cover, emb);
        worst_dev = std::max(worst_dev, std::abs(psnr - expected));
    }
    note("predicted %.4f dB, worst deviation %.3g dB", expected, worst_dev);
    return worst_dev <= 0.05;
}

bool criterion5() {
    int probes = 0;
    double worst = 0.0;
    bool ok = true;
    // small enough to stay on one side of every activation kink, large
    // enough that the central quotient keeps ~9 clean digits
    const double h = 1e-5;
    auto record = [&](double analytic, double fd) {
        const double err =
            std::abs(analytic - fd) / std::max({1.0, std::abs(analytic), std::abs(fd)});
        worst = std::max(worst, err);
        ++probes;
        if (err > 1e-4) ok = false;
    };

    // plain convolution, no activation
    {
        std::mt19937_64 rng(1500);
        std::uniform_real_distribution<double> pos(0.5, 1.5), sym(-1.0, 1.0);
        ConvLayer layer = near_identity_layer(2, 3, 0.05, rng);
        Tensor3 in(2, 6, 7), upstream(2, 6, 7);
        for (double& v : in.v) v = pos(rng);
        for (double& v : upstream.v) v = sym(rng);
        auto loss = [&](const ConvLayer& l, const Tensor3& x) {
            Tensor3 out = conv_forward(l, x);
            double s = 0.0;
            for (size_t i = 0; i < out.v.size(); ++i) s += out.v[i] * upstream.v[i];
            return s;
        };
        Tensor3 din;
        std::vector<double> dw;
        conv_backward(layer, in, upstream, din, dw);
        for (int k = 0; k < 10; ++k) {
            const size_t wi = rng() % layer.w.size();
            ConvLayer up = layer, dn = layer;
            up.w[wi] += h;
            dn.w[wi] -= h;
            record(dw[wi], (loss(up, in) - loss(dn, in)) / (2 * h));
        }
        for (int k = 0; k < 6; ++k) {
            const size_t xi = rng() % in.v.size();
            Tensor3 up = in, dn = in;
            up.v[xi] += h;
            dn.v[xi] -= h;
            record(din.v[xi], (loss(layer, up) - loss(layer, dn)) / (2 * h));
        }
    }

    // stack with the leaky activation between layers
    {
        std::mt19937_64 rng(1510);
        std::uniform_real_distribution<double> pos(0.5, 1.5), sym(-1.0, 1.0);
        ConvStack stack = near_identity_stack(2, 2, 3, 0.01, 0.05, rng);
        Tensor3 in(2, 6, 6), upstream(2, 6, 6);
        for (double& v : in.v) v = pos(rng);
        for (double& v : upstream.v) v = sym(rng);
        auto loss = [&](const ConvStack& s, const Tensor3& x) {
            Tensor3 out = stack_forward(s, x);
            double acc = 0.0;
            for (size_t i = 0; i < out.v.size(); ++i) acc += out.v[i] * upstream.v[i];
            return acc;
        };
        StackTape tape;
        stack_forward(stack, in, &tape);
        StackGrads grads;
        Tensor3 din = stack_backward(stack, tape, upstream, grads);
        for (int k = 0; k < 10; ++k) {
            const size_t li = k % 2;
            const size_t wi = rng() % stack.layers[li].w.size();
            ConvStack up = stack, dn = stack;
            up.layers[li].w[wi] += h;
            dn.layers[li].w[wi] -= h;
            record(grads[li][wi], (loss(up, in) - loss(dn, in)) / (2 * h));
        }
        for (int k = 0; k < 4; ++k) {
            const size_t xi = rng() % in.v.size();
            Tensor3 up = in, dn = in;
            up.v[xi] += h;
            dn.v[xi] -= h;
            record(din.v[xi], (loss(stack, up) - loss(stack, dn)) / (2 * h));
        }
    }

    // full pipeline: wavelet and spectral projections, stacks, soft threshold
    auto pipeline_probes = [&](EmbedMode mode, uint64_t seed, int weight_probes) {
        Image cover = synth_image(32, 32, 1, seed);
        std::mt19937_64 rng(seed + 1);
        Model model;
        model.theta = 0.3;
        model.encoder = near_identity_stack(2, 1, 3, model.alpha, 0.02, rng).layers;
        model.harmonize = near_identity_layer(1, 3, 0.02, rng);
        model.decoder = near_identity_stack(2, 1, 3, model.alpha, 0.02, rng).layers;
        RunConfig cfg;
        cfg.bit_length = 12;
        cfg.strength = 2.0;
        cfg.soft_temperature = 4.0;
        cfg.embed_mode = mode;
        const std::vector<int> bits = testutil::random_bits(cfg.bit_length, seed + 2);
        const double le = 0.7, ld = 1.0;
        LossGrads g = training_gradients(cover, bits, cfg, model, le, ld);
        auto fd_for = [&](Model& up, Model& dn) {
            return (training_loss(cover, bits, cfg, up, le, ld) -
                    training_loss(cover, bits, cfg, dn, le, ld)) /
                   (2 * h);
        };
        {
            Model up = model, dn = model;
            up.theta += h;
            dn.theta -= h;
            record(g.theta, fd_for(up, dn));
        }
        struct Slot {
            ConvLayer& (*get)(Model&);
            const std::vector<double>* grads;
        };
        const std::vector<Slot> slots = {
            {[](Model& m) -> ConvLayer& { return m.encoder[0]; }, &g.encoder[0]},
            {[](Model& m) -> ConvLayer& { return m.encoder[1]; }, &g.encoder[1]},
            {[](Model& m) -> ConvLayer& { return *m.harmonize; }, &g.harmonize},
            {[](Model& m) -> ConvLayer& { return m.decoder[0]; }, &g.decoder[0]},
            {[](Model& m) -> ConvLayer& { return m.decoder[1]; }, &g.decoder[1]},
        };
        for (const Slot& s : slots) {
            for (int k = 0; k < weight_probes; ++k) {
                const size_t wi = rng() % s.grads->size();
                Model up = model, dn = model;
                s.get(up).w[wi] += h;
                s.get(dn).w[wi] -= h;
                record((*s.grads)[wi], fd_for(up, dn));
            }
        }
    };
    pipeline_probes(EmbedMode::additive, 1520, 4);
    pipeline_probes(EmbedMode::substitutive, 1530, 1);

    note("%.0f probes, worst relative error %.3g", static_cast<double>(probes), worst);
    return ok && probes >= 50;
}

bool criterion6() {
    std::vector<Image> corpus;
    for (int i = 0; i < 32; ++i) corpus.push_back(smooth_image(128, 128, 3, 1600 + i));
    std::vector<Image> held;
    for (int i = 0; i < 4; ++i) held.push_back(smooth_image(128, 128, 3, 1700 + i));

    std::mt19937_64 rng(1650);
    Model init;
    init.theta = 0.001;
    init.encoder = near_identity_stack(2, 3, 3, init.alpha, 1e-3, rng).layers;
    init.harmonize = near_identity_layer(3, 3, 1e-3, rng);
    init.decoder = near_identity_stack(2, 3, 3, init.alpha, 1e-3, rng).layers;

    RunConfig cfg;
    cfg.bit_length = 48;
    cfg.conv_layers = 2;
    cfg.embed_mode = EmbedMode::additive;

    TrainConfig tc;
    tc.seed = 9;

    const TrainResult res = train(corpus, cfg, tc, init);
    if (res.diverged || res.history.empty()) {
        note("diverged after %.0f steps", static_cast<double>(res.completed_steps));
        return false;
    }
    const double first = res.history.front().total_loss;
    const double last = res.history.back().total_loss;
    note("total loss %.4f -> %.4f (ratio %.3f)", first, last, last / first);
    note("threshold %.5f -> %.5f", res.history.front().theta, res.model.theta);

    RunConfig dec_cfg = cfg;
    dec_cfg.theta = res.model.theta;
    double worst_bra = 1.0;
    for (size_t i = 0; i < held.size(); ++i) {
        const std::vector<int> bits = random_message(cfg.bit_length, 1750 + i);
        const Image emb = embed(held[i], bits, dec_cfg, res.model);
        const DecodeResult dec = extract(emb, dec_cfg, res.model);
        worst_bra = std::min(worst_bra, bit_recovery_accuracy(dec.bits, bits));
    }
    note("held-out clean recovery, worst of 4: %.4f", worst_bra);
    return last <= 0.5 * first && worst_bra == 1.0;
}

bool criterion7() {
    RunConfig cfg;
    cfg.embed_mode = EmbedMode::substitutive;
    cfg.redundancy = 200;
    cfg.wavelet_levels = 2;
    cfg.strength = 40.0;
    cfg.theta = 8.0;
    cfg.channel = 1;
    const Model id = identity_model();

    const int images = 10;
    std::vector<Image> covers, marked;
    std::vector<std::vector<int>> msgs;
    for (int i = 0; i < images; ++i) {
        covers.push_back(synth_image(512, 512, 3, 1800 + i, 45.0, 125.0));
        msgs.push_back(random_message(cfg.bit_length, 1850 + i));
        marked.push_back(quantized(embed(covers.back(), msgs.back(), cfg, id)));
    }

    const std::vector<AttackKind> kinds = {AttackKind::noise, AttackKind::jpeg,
                                           AttackKind::brightness, AttackKind::contrast};
    const std::vector<double> bars = {0.95, 0.90, 0.95, 0.95};
    const std::vector<double> strengths = {0.0, 0.25, 0.5, 0.75, 1.0};
    bool ok = true;
    for (size_t a = 0; a < kinds.size(); ++a) {
        double avg_p = 0.0;
        for (double x : strengths) {
            double p = 0.0;
            for (int i = 0; i < images; ++i) {
                AttackSpec spec{kinds[a], x, bench_cell_seed(777, i, kinds[a], x)};
                const Image attacked = apply_attack(marked[i], spec);
                const DecodeResult dec = extract(attacked, cfg, id);
                p += bit_recovery_accuracy(dec.bits, msgs[i]);
            }
            avg_p += p / images;
        }
        avg_p /= strengths.size();
        std::printf("  - %s: avg recovery %.4f (needs >= %.2f)\n",
                    to_string(kinds[a]).c_str(), avg_p, bars[a]);
        if (avg_p < bars[a]) ok = false;
    }
    return ok;
}

bool criterion8() {
    bool ok = true;
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9; };

    const std::vector<CurvePoint> never = {{0.0, 1.0, 0.0}, {0.5, 0.97, 2.0}, {1.0, 0.96, 5.0}};
    ok = ok && is_pos_inf(q_at_level(never, 0.95));

    const std::vector<CurvePoint> below = {{0.0, 0.9, 0.0}, {0.5, 0.8, 2.0}, {1.0, 0.2, 5.0}};
    ok = ok && is_neg_inf(q_at_level(below, 0.95));

    const std::vector<CurvePoint> cross = {{0.0, 1.0, 0.0}, {0.5, 0.96, 2.0}, {1.0, 0.90, 5.0}};
    ok = ok && close(q_at_level(cross, 0.95), 2.5);
    ok = ok && is_pos_inf(q_at_level(cross, 0.7));

    const std::vector<CurvePoint> two = {{0.0, 1.0, 0.0}, {1.0, 0.4, 0.6}};
    ok = ok && close(q_at_level(two, 0.7), 0.3);

    const std::vector<CurvePoint> grazing = {{0.0, 1.0, 0.0}, {1.0, 0.95, 3.0}};
    ok = ok && is_pos_inf(q_at_level(grazing, 0.95));

    std::vector<CurvePoint> shuffled = {{1.0, 0.90, 5.0}, {0.0, 1.0, 0.0}, {0.5, 0.96, 2.0}};
    const CurveSummary s = summarize_curve(shuffled);
    ok = ok && close(s.avg_p, (1.0 + 0.96 + 0.90) / 3.0);
    ok = ok && close(s.avg_q, (0.0 + 2.0 + 5.0) / 3.0);
    ok = ok && close(s.q_at_095p, 2.5) && is_pos_inf(s.q_at_07p);
    return ok;
}

bool criterion9() {
    const double pi = 3.14159265358979323846;
    struct Geo {
        int h, w;
    };
    const std::vector<Geo> sizes = {{64, 64}, {128, 128}, {256, 256}, {128, 64}, {256, 128}};
    const std::vector<std::pair<int, int>> chan_bits = {{1, 1}, {3, 1}, {3, 2}, {1, 2}};
    int checked = 0;
    bool ok = true;
    for (const Geo& g : sizes) {
        for (int levels = 1; levels <= 2; ++levels) {
            for (const auto& [c, nb] : chan_bits) {
                if (checked >= 20) break;
                const int rows = g.h >> levels, cols = g.w >> levels;
                const double radius = std::sqrt(0.3 * rows * cols / pi);
                const DiscMask mask = disc_mask(rows, cols, radius);
                const double f =
                    static_cast<double>(mask.coords.size()) / (static_cast<double>(rows) * cols);
                if (f < 0.2 || f > 0.5) continue;
                const long long brute =
                    static_cast<long long>(mask.coords.size()) * c * nb;
                const long long formula = capacity_bound(g.h, g.w, c, levels, f, nb);
                if (formula != brute) ok = false;
                ++checked;
            }
        }
    }
    note("%.0f geometry configurations matched the slot count", static_cast<double>(checked));

    ok = ok && capacity_bound(256, 256, 3, 1, 0.2, 1) == 9830;
    ok = ok && capacity_bound(256, 256, 3, 1, 0.5, 1) == 24576;
    for (double bad : {0.19, 0.51, -0.1, 1.1}) {
        try {
            capacity_bound(256, 256, 3, 1, bad, 1);
            ok = false;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::config) ok = false;
        }
    }
    return ok && checked == 20;
}

bool criterion10() {
    std::vector<Image> corpus;
    std::vector<std::string> names;
    for (int i = 0; i < 3; ++i) {
        corpus.push_back(synth_image(64, 64, 3, 1900 + i));
        names.push_back("img" + std::to_string(i));
    }
    RunConfig cfg;
    cfg.embed_mode = EmbedMode::substitutive;
    cfg.bit_length = 32;
    cfg.redundancy = 2;
    cfg.theta = 10.0;
    const Model id = identity_model();

    BenchOptions opt;
    opt.attacks = {AttackKind::noise, AttackKind::jpeg};
    opt.strengths = {0.0, 0.5, 1.0};
    opt.seed = 7;
    opt.threads = 1;
    const BenchReport r1 = run_bench(corpus, names, cfg, id, opt);
    opt.threads = 2;
    const BenchReport r2 = run_bench(corpus, names, cfg, id, opt);
    const bool csv_same = bench_csv(r1) == bench_csv(r2);
    const bool json_same = bench_aggregate_json(r1) == bench_aggregate_json(r2);

    std::mt19937_64 rng(1950);
    Model m;
    m.theta = 0.7;
    m.encoder = near_identity_stack(2, 3, 3, m.alpha, 0.05, rng).layers;
    m.harmonize = near_identity_layer(3, 3, 0.05, rng);
    m.decoder = near_identity_stack(2, 3, 3, m.alpha, 0.05, rng).layers;
    const auto path = std::filesystem::temp_directory_path() / "specmark_acceptance_model.json";
    save_model(m, path.string());
    const Model loaded = load_model(path.string());
    std::filesystem::remove(path);

    Image cover = synth_image(96, 96, 3, 1960);
    RunConfig mcfg;
    mcfg.bit_length = 24;
    mcfg.embed_mode = EmbedMode::additive;
    mcfg.theta = m.theta;
    const std::vector<int> bits = random_message(mcfg.bit_length, 1961);
    const Image emb_a = embed(cover, bits, mcfg, m);
    const Image emb_b = embed(cover, bits, mcfg, loaded);
    const bool emb_same = emb_a.samples == emb_b.samples;
    const DecodeResult da = extract(emb_a, mcfg, m);
    const DecodeResult db = extract(emb_b, mcfg, loaded);
    const bool bits_same = da.bits == db.bits && da.scores == db.scores;

    note("csv identical %.0f, json identical %.0f, model round trip %.0f",
         csv_same ? 1.0 : 0.0, json_same ? 1.0 : 0.0, (emb_same && bits_same) ? 1.0 : 0.0);
    return csv_same && json_same && emb_same && bits_same;
}

}  // namespace

int main() {
    criterion(1, "transform round trips and spectral agreement", criterion1);
    criterion(2, "energy preservation", criterion2);
    criterion(3, "clean-channel recovery", criterion3);
    criterion(4, "embedding energy accounting", criterion4);
    criterion(5, "finite-difference gradient agreement", criterion5);
    criterion(6, "training smoke", criterion6);
    criterion(7, "attack survival", criterion7);
    criterion(8, "quality-at-performance aggregation", criterion8);
    criterion(9, "capacity formula", criterion9);
    criterion(10, "benchmark and model determinism", criterion10);
    std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
