#include "specmark/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "specmark/decoder.hpp"
#include "specmark/errors.hpp"
#include "specmark/metrics.hpp"
#include "specmark/seedmix.hpp"

#include "json.hpp"

namespace specmark {

namespace {

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

void compute_cell(const Image& cover, const RunConfig& cfg, const Model& model, BenchCell& cell) {
    try {
        const std::vector<int> bits = random_message(cfg.bit_length, mix_seed(cell.seed, 1));
        Image wm = embed(cover, bits, cfg, model);
        Image wmq = quantized(wm);
        AttackSpec spec;
        spec.kind = cell.kind;
        spec.strength = cell.strength;
        spec.seed = mix_seed(cell.seed, 2);
        Image attacked = apply_attack(wmq, spec);
        cell.psnr = peak_signal_to_noise(cover, attacked);
        cell.ssim = structural_similarity(cover, attacked);
        DecodeResult dec = extract(attacked, cfg, model);
        cell.bra = bit_recovery_accuracy(dec.bits, bits);
        cell.ok = true;
    } catch (const Error& e) {
        cell.ok = false;
        cell.error = sanitize(e.what());
        cell.error_exit = e.exit_code();
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = sanitize(e.what());
        cell.error_exit = 2;
    }
}

}  // namespace

uint64_t bench_cell_seed(uint64_t global_seed, int image_index, AttackKind kind, double strength) {
    return mix_seed(global_seed, static_cast<uint64_t>(image_index),
                    static_cast<uint64_t>(kind), std::bit_cast<uint64_t>(strength));
}

int bench_thread_count(int requested) {
    if (requested < 0) throw config_error("thread count must be >= 0");
    int n = requested;
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECMARK_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || cap < 1)
            throw config_error("SPECMARK_THREADS must be a positive integer");
        n = std::min<long>(n, cap);
    }
    return std::max(1, n);
}

BenchReport run_bench(const std::vector<Image>& corpus, const std::vector<std::string>& names,
                      const RunConfig& cfg, const Model& model, const BenchOptions& opt) {
    if (corpus.empty()) throw config_error("bench: empty corpus");
    if (names.size() != corpus.size()) throw config_error("bench: one name per image required");
    if (opt.attacks.empty()) throw config_error("bench: no attacks listed");
    if (opt.strengths.empty()) throw config_error("bench: no strengths listed");
    for (size_t i = 0; i < opt.strengths.size(); ++i) {
        const double s = opt.strengths[i];
        if (!(s >= 0.0 && s <= 1.0)) throw config_error("bench: strengths must lie in [0, 1]");
        if (i > 0 && !(s > opt.strengths[i - 1]))
            throw config_error("bench: strengths must be strictly increasing");
    }

    BenchReport rep;
    rep.image_names = names;
    rep.attacks = opt.attacks;
    rep.strengths = opt.strengths;
    for (size_t ii = 0; ii < corpus.size(); ++ii)
        for (AttackKind kind : opt.attacks)
            for (double s : opt.strengths) {
                BenchCell c;
                c.image_index = static_cast<int>(ii);
                c.kind = kind;
                c.strength = s;
                rep.cells.push_back(c);
            }

    const int workers = bench_thread_count(opt.threads);
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= rep.cells.size()) return;
            BenchCell& cell = rep.cells[i];
            cell.seed = bench_cell_seed(opt.seed, cell.image_index, cell.kind, cell.strength);
            compute_cell(corpus[cell.image_index], cfg, model, cell);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return rep;
}

std::string bench_csv(const BenchReport& r) {
    std::string out = "image,attack,strength,psnr,ssim,bra\n";
    char buf[256];
    for (const BenchCell& c : r.cells) {
        const std::string& name = r.image_names[c.image_index];
        if (c.ok) {
            std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g\n", name.c_str(),
                          to_string(c.kind).c_str(), c.strength, c.psnr, c.ssim, c.bra);
        } else {
            std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,error,error,error\n", name.c_str(),
                          to_string(c.kind).c_str(), c.strength);
        }
        out += buf;
    }
    return out;
}

std::string bench_aggregate_json(const BenchReport& r) {
    auto sentinel = [](double v) -> nlohmann::ordered_json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };

    const size_t per_image = r.attacks.size() * r.strengths.size();
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (size_t ai = 0; ai < r.attacks.size(); ++ai) {
        std::vector<CurvePoint> pts;
        for (size_t si = 0; si < r.strengths.size(); ++si) {
            double p_sum = 0.0, q_sum = 0.0;
            int n = 0;
            for (size_t ii = 0; ii < r.image_names.size(); ++ii) {
                const BenchCell& c =
                    r.cells[ii * per_image + ai * r.strengths.size() + si];
                if (!c.ok) continue;
                p_sum += c.bra;
                q_sum += 1.0 - c.ssim;
                ++n;
            }
            if (n == 0) continue;
            pts.push_back({r.strengths[si], p_sum / n, q_sum / n});
        }
        if (pts.size() < 2) continue;
        const CurveSummary s = summarize_curve(pts);
        nlohmann::ordered_json entry;
        entry["avg_p"] = sentinel(s.avg_p);
        entry["avg_q"] = sentinel(s.avg_q);
        entry["q@0.95p"] = sentinel(s.q_at_095p);
        entry["q@0.7p"] = sentinel(s.q_at_07p);
        doc[to_string(r.attacks[ai])] = entry;
    }
    return doc.dump(2) + "\n";
}

}  // namespace specmark
