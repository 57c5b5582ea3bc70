#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "specmark/attacks.hpp"
#include "specmark/bench.hpp"
#include "specmark/codec.hpp"
#include "specmark/config.hpp"
#include "specmark/decoder.hpp"
#include "specmark/errors.hpp"
#include "specmark/image.hpp"
#include "specmark/metrics.hpp"
#include "specmark/model.hpp"
#include "specmark/seedmix.hpp"
#include "specmark/training.hpp"

namespace fs = std::filesystem;
using namespace specmark;

namespace {

std::vector<int> parse_bits(const std::string& s) {
    if (s.empty()) throw config_error("empty bit string");
    std::vector<int> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw config_error(std::string("bit strings may only contain 0 and 1, got '") + c +
                               "'");
        bits.push_back(c - '0');
    }
    return bits;
}

std::string bits_to_string(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

RunConfig load_config_opt(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return load_run_config(path);
}

// The config carries the initial threshold; a trained model carries the
// learned one, which wins whenever a model file is supplied.
Model load_model_opt(const std::string& path, RunConfig& cfg) {
    if (path.empty()) return identity_model(cfg.theta, cfg.alpha);
    Model m = load_model(path);
    cfg.theta = m.theta;
    return m;
}

void load_corpus(const std::string& dir, std::vector<Image>& images,
                 std::vector<std::string>& names) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw io_error("corpus directory not found: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw config_error("no .png files in corpus directory: " + dir);
    for (const std::string& f : files) {
        images.push_back(load_image(f));
        names.push_back(fs::path(f).filename().string());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw io_error("write failed: " + path);
}

std::string derived_report_path(const std::string& model_path) {
    fs::path p(model_path);
    if (p.extension() == ".json") p.replace_extension();
    return p.string() + "_train.csv";
}

void print_metric(const char* name, double v) {
    if (std::isinf(v))
        std::printf("%s: %s\n", name, v > 0 ? "inf" : "-inf");
    else
        std::printf("%s: %.4f\n", name, v);
}

struct EmbedArgs {
    std::string in, out, config, model, message;
    uint64_t message_seed = 0;
    bool have_seed = false;
};

int cmd_embed(const EmbedArgs& a) {
    RunConfig cfg = load_config_opt(a.config);
    Model model = load_model_opt(a.model, cfg);
    if (a.message.empty() == !a.have_seed)
        throw config_error("embed needs exactly one of --message or --message-seed");

    std::vector<int> bits;
    if (!a.message.empty()) {
        bits = parse_bits(a.message);
        if (static_cast<int>(bits.size()) != cfg.bit_length)
            throw config_error("message length " + std::to_string(bits.size()) +
                               " does not match configured bit_length " +
                               std::to_string(cfg.bit_length));
    } else {
        bits = random_message(cfg.bit_length, a.message_seed);
        std::printf("message: %s\n", bits_to_string(bits).c_str());
    }

    Image cover = load_image(a.in);
    Image wm = embed(cover, bits, cfg, model);
    save_image(wm, a.out);
    print_metric("psnr", peak_signal_to_noise(cover, wm));
    print_metric("ssim", structural_similarity(cover, wm));
    return 0;
}

struct ExtractArgs {
    std::string in, config, model, expect;
};

int cmd_extract(const ExtractArgs& a) {
    RunConfig cfg = load_config_opt(a.config);
    Model model = load_model_opt(a.model, cfg);
    Image img = load_image(a.in);
    DecodeResult dec = extract(img, cfg, model);
    std::printf("%s\n", bits_to_string(dec.bits).c_str());
    if (!a.expect.empty()) {
        std::vector<int> want = parse_bits(a.expect);
        if (want.size() != dec.bits.size())
            throw config_error("--expect length " + std::to_string(want.size()) +
                               " does not match decoded length " +
                               std::to_string(dec.bits.size()));
        std::printf("bra: %.4f\n", bit_recovery_accuracy(dec.bits, want));
    }
    return 0;
}

struct AttackArgs {
    std::string in, out, kind;
    double strength = 0.0;
    uint64_t seed = 0;
};

int cmd_attack(const AttackArgs& a) {
    AttackSpec spec;
    spec.kind = attack_kind_from_name(a.kind);
    spec.strength = a.strength;
    spec.seed = a.seed;
    Image img = load_image(a.in);
    save_image(apply_attack(img, spec), a.out);
    return 0;
}

struct BenchArgs {
    std::string corpus, config, model, out;
    std::vector<std::string> attacks{"rotation", "crop", "brightness", "contrast",
                                     "blur",     "noise", "jpeg"};
    std::vector<double> strengths{0.0, 0.25, 0.5, 0.75, 1.0};
    uint64_t seed = 0;
    int threads = 0;
};

int cmd_bench(const BenchArgs& a) {
    RunConfig cfg = load_config_opt(a.config);
    Model model = load_model_opt(a.model, cfg);
    std::vector<Image> images;
    std::vector<std::string> names;
    load_corpus(a.corpus, images, names);

    BenchOptions opt;
    for (const std::string& s : a.attacks) opt.attacks.push_back(attack_kind_from_name(s));
    opt.strengths = a.strengths;
    opt.seed = a.seed;
    opt.threads = a.threads;

    BenchReport rep = run_bench(images, names, cfg, model, opt);
    write_text_file(a.out + ".csv", bench_csv(rep));
    write_text_file(a.out + ".json", bench_aggregate_json(rep));

    size_t ok = 0;
    for (const BenchCell& c : rep.cells)
        if (c.ok) ++ok;
    std::printf("cells: %zu ok, %zu failed\n", ok, rep.cells.size() - ok);
    std::printf("wrote %s.csv and %s.json\n", a.out.c_str(), a.out.c_str());
    if (ok == 0) {
        for (const BenchCell& c : rep.cells)
            if (!c.ok) {
                std::fprintf(stderr, "error: every cell failed; first: %s\n", c.error.c_str());
                return c.error_exit;
            }
    }
    return 0;
}

struct TrainArgs {
    std::string corpus, config, out, report;
    int steps = 300;
    int batch = 32;
    double encoder_lr = 1e-2;
    double decoder_lr = 1e-3;
    int checkpoint_interval = 50;
    uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a) {
    RunConfig cfg = load_config_opt(a.config);
    std::vector<Image> images;
    std::vector<std::string> names;
    load_corpus(a.corpus, images, names);

    TrainConfig tc;
    tc.steps = a.steps;
    tc.batch = a.batch;
    tc.encoder_lr = a.encoder_lr;
    tc.decoder_lr = a.decoder_lr;
    tc.checkpoint_interval = a.checkpoint_interval;
    tc.seed = a.seed;

    std::mt19937_64 rng(mix_seed(a.seed, 0x696e6974ULL));
    const int ch = images.front().channels;
    Model init;
    init.alpha = cfg.alpha;
    init.theta = cfg.theta;
    init.encoder =
        near_identity_stack(cfg.conv_layers, ch, cfg.kernel_size, cfg.alpha, 1e-3, rng).layers;
    init.harmonize = near_identity_layer(ch, cfg.kernel_size, 1e-3, rng);
    init.decoder =
        near_identity_stack(cfg.conv_layers, ch, cfg.kernel_size, cfg.alpha, 1e-3, rng).layers;

    TrainResult res = train(images, cfg, tc, init);
    save_model(res.model, a.out);
    const std::string report = a.report.empty() ? derived_report_path(a.out) : a.report;
    write_text_file(report, training_report_csv(res.history));

    std::printf("completed steps: %d\n", res.completed_steps);
    if (!res.history.empty()) {
        const TrainStepStats& last = res.history.back();
        std::printf("final loss: total %.6f (enc %.6f, dec %.6f), theta %.6f\n", last.total_loss,
                    last.encoder_loss, last.decoder_loss, last.theta);
    }
    std::printf("wrote %s and %s\n", a.out.c_str(), report.c_str());
    if (res.diverged) {
        std::fprintf(stderr, "error: training diverged after step %d; saved the last finite model\n",
                     res.completed_steps);
        return static_cast<int>(ErrorCode::divergence);
    }
    return 0;
}

struct CapacityArgs {
    int width = 0, height = 0, channels = 0, level = 0;
    double fspectral = 0.0;
    int bits_per_coeff = 0;
};

int cmd_capacity(const CapacityArgs& a) {
    std::printf("%lld\n", capacity_bound(a.height, a.width, a.channels, a.level, a.fspectral,
                                         a.bits_per_coeff));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invisible frequency-domain image watermarking toolkit"};
    app.require_subcommand(1);

    EmbedArgs ea;
    CLI::App* embed = app.add_subcommand("embed", "embed a message into an image");
    embed->add_option("--in", ea.in, "cover image (png)")->required();
    embed->add_option("--out", ea.out, "watermarked output (png)")->required();
    embed->add_option("--config", ea.config, "run configuration (json)");
    embed->add_option("--model", ea.model, "trained model file");
    embed->add_option("--message", ea.message, "message as a 0/1 string");
    CLI::Option* seed_opt =
        embed->add_option("--message-seed", ea.message_seed, "derive the message from this seed");

    ExtractArgs xa;
    CLI::App* extract = app.add_subcommand("extract", "decode the message from an image");
    extract->add_option("--in", xa.in, "watermarked image (png)")->required();
    extract->add_option("--config", xa.config, "run configuration (json)");
    extract->add_option("--model", xa.model, "trained model file");
    extract->add_option("--expect", xa.expect, "expected bits; prints recovery accuracy");

    AttackArgs aa;
    CLI::App* attack = app.add_subcommand("attack", "apply a robustness attack to an image");
    attack->add_option("--in", aa.in, "input image (png)")->required();
    attack->add_option("--out", aa.out, "attacked output (png)")->required();
    attack->add_option("--kind", aa.kind, "attack kind")->required();
    attack->add_option("--strength", aa.strength, "attack strength in [0,1]");
    attack->add_option("--seed", aa.seed, "seed for stochastic attacks");

    BenchArgs ba;
    CLI::App* bench = app.add_subcommand("bench", "grid-evaluate robustness over a corpus");
    bench->add_option("--corpus", ba.corpus, "directory of png covers")->required();
    bench->add_option("--config", ba.config, "run configuration (json)");
    bench->add_option("--model", ba.model, "trained model file");
    bench->add_option("--attacks", ba.attacks, "comma-separated attack kinds")->delimiter(',');
    bench->add_option("--strengths", ba.strengths, "comma-separated strengths")->delimiter(',');
    bench->add_option("--seed", ba.seed, "global benchmark seed");
    bench->add_option("--threads", ba.threads, "worker threads (0 = hardware)");
    bench->add_option("--out", ba.out, "report path prefix")->required();

    TrainArgs ta;
    CLI::App* train = app.add_subcommand("train", "jointly train the model on a corpus");
    train->add_option("--corpus", ta.corpus, "directory of png covers")->required();
    train->add_option("--config", ta.config, "run configuration (json)");
    train->add_option("--steps", ta.steps, "optimizer steps");
    train->add_option("--batch", ta.batch, "batch size");
    train->add_option("--encoder-lr", ta.encoder_lr, "encoder/harmonize learning rate");
    train->add_option("--decoder-lr", ta.decoder_lr, "decoder/theta base learning rate");
    train->add_option("--checkpoint-interval", ta.checkpoint_interval,
                      "clean-accuracy probe cadence (0 disables)");
    train->add_option("--seed", ta.seed, "training seed");
    train->add_option("--out", ta.out, "model output path")->required();
    train->add_option("--report", ta.report, "training csv path (default: derived from --out)");

    CapacityArgs ca;
    CLI::App* capacity = app.add_subcommand("capacity", "print the theoretical slot budget");
    capacity->add_option("width", ca.width, "image width")->required();
    capacity->add_option("height", ca.height, "image height")->required();
    capacity->add_option("channels", ca.channels, "channel count")->required();
    capacity->add_option("level", ca.level, "wavelet depth")->required();
    capacity->add_option("fspectral", ca.fspectral, "usable spectral fraction in [0.2,0.5]")
        ->required();
    capacity->add_option("bits_per_coeff", ca.bits_per_coeff, "bits per coefficient")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    ea.have_seed = seed_opt->count() > 0;

    try {
        if (app.got_subcommand(embed)) return cmd_embed(ea);
        if (app.got_subcommand(extract)) return cmd_extract(xa);
        if (app.got_subcommand(attack)) return cmd_attack(aa);
        if (app.got_subcommand(bench)) return cmd_bench(ba);
        if (app.got_subcommand(train)) return cmd_train(ta);
        if (app.got_subcommand(capacity)) return cmd_capacity(ca);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
