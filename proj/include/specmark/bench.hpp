#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specmark/attacks.hpp"
#include "specmark/codec.hpp"
#include "specmark/config.hpp"
#include "specmark/image.hpp"
#include "specmark/model.hpp"

namespace specmark {

struct BenchOptions {
    std::vector<AttackKind> attacks;
    std::vector<double> strengths;  // strictly increasing, within [0, 1]
    uint64_t seed = 0;
    int threads = 1;  // capped by the SPECMARK_THREADS environment variable
};

struct BenchCell {
    int image_index = 0;
    AttackKind kind = AttackKind::none;
    double strength = 0.0;
    uint64_t seed = 0;  // derived, see bench_cell_seed
    bool ok = false;
    std::string error;
    int error_exit = 0;  // exit code the failure maps to
    double psnr = 0.0;  // cover vs attacked
    double ssim = 0.0;  // cover vs attacked
    double bra = 0.0;
};

struct BenchReport {
    std::vector<std::string> image_names;
    std::vector<AttackKind> attacks;
    std::vector<double> strengths;
    std::vector<BenchCell> cells;  // image-major, then attack, then strength
};

// Per cell: embed a fresh seed-derived message, quantize to 8 bits the way a
// lossless file write would, attack, extract, score. Cell seeds mix the
// global seed with the image index, attack kind and strength so any cell is
// reproducible in isolation.
BenchReport run_bench(const std::vector<Image>& corpus, const std::vector<std::string>& names,
                      const RunConfig& cfg, const Model& model, const BenchOptions& opt);

// CSV rows image,attack,strength,psnr,ssim,bra with %.17g doubles; failed
// cells carry the marker "error" in the three metric columns.
std::string bench_csv(const BenchReport& r);

// Per-attack aggregates {avg_p, avg_q, q@0.95p, q@0.7p}; infinities become
// the strings "inf" / "-inf". Attacks without two clean strengths are left
// out.
std::string bench_aggregate_json(const BenchReport& r);

// Applies the SPECMARK_THREADS cap to a requested worker count; 0 asks for
// the hardware concurrency.
int bench_thread_count(int requested);

// Derived per-cell seed, exposed so reports can be reproduced one cell at a
// time.
uint64_t bench_cell_seed(uint64_t global_seed, int image_index, AttackKind kind, double strength);

}  // namespace specmark
