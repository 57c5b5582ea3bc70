#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specmark/config.hpp"
#include "specmark/image.hpp"
#include "specmark/model.hpp"
#include "specmark/nn.hpp"
#include "specmark/transforms.hpp"

namespace specmark {

// Grid positions within Euclidean distance radius of (rows/2, cols/2),
// enumerated row-major. Capacity is coords.size().
struct DiscMask {
    int rows = 0;
    int cols = 0;
    double radius = 0.0;  // after clamping to the farthest in-plane distance
    std::vector<std::pair<int, int>> coords;
};

DiscMask disc_mask(int rows, int cols, double radius);

// Message bits laid out over consecutive mask slots, one repetition after
// another. A trailing partial repetition is kept.
struct ExpandedMessage {
    std::vector<int> slot_bits;
    int repetitions_used = 0;
};

ExpandedMessage expand_message(const std::vector<int>& bits, size_t capacity, int redundancy);

// Uniform random bit vector, reproducible from the seed.
std::vector<int> random_message(int length, uint64_t seed);

// Theoretical slot budget for a given geometry. f_spectral is the usable
// fraction of the deepest diagonal band's spectrum and must lie in [0.2, 0.5].
long long capacity_bound(int height, int width, int channels, int levels, double f_spectral,
                         int bits_per_coeff);

// Wavelet analysis state for one channel, kept so the image can be rebuilt
// around a replaced diagonal band. Planes are padded to even sizes on the
// way down and cropped back on the way up.
struct ChannelDecomp {
    std::vector<SubBands> levels;
    std::vector<std::pair<int, int>> unpadded;  // plane size fed to each level
};

ChannelDecomp analyze_channel(const Plane& p, int levels);
Plane synthesize_channel(const ChannelDecomp& d);

Plane image_channel(const Image& img, int c);
void set_image_channel(Image& img, int c, const Plane& p);

// Spectral stack of all channels' deepest diagonal bands.
Tensor3 spectral_tensor(const std::vector<ChannelDecomp>& decomps);

struct EmbedOptions {
    bool clamp_output = true;
};

// Full embedding pipeline. bits.size() must equal cfg.bit_length, the image
// must be square, and the mask must have room for at least one repetition.
Image embed(const Image& cover, const std::vector<int>& bits, const RunConfig& cfg,
            const Model& model, const EmbedOptions& opt = {});

// Shared validation used by both directions of the pipeline.
void check_pipeline_input(const Image& img, const RunConfig& cfg);

}  // namespace specmark
