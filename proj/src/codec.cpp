#include "specmark/codec.hpp"

#include <cmath>
#include <random>

#include "specmark/errors.hpp"

namespace specmark {

DiscMask disc_mask(int rows, int cols, double radius) {
    if (rows <= 0 || cols <= 0) throw config_error("disc_mask: empty plane");
    if (radius < 0.0 || !std::isfinite(radius)) throw config_error("disc_mask: radius must be finite and >= 0");

    const double cy = rows / 2.0;
    const double cx = cols / 2.0;
    double farthest = 0.0;
    for (int y : {0, rows - 1})
        for (int x : {0, cols - 1})
            farthest = std::max(farthest, std::hypot(y - cy, x - cx));
    DiscMask m;
    m.rows = rows;
    m.cols = cols;
    m.radius = std::min(radius, farthest);

    for (int y = 0; y < rows; ++y)
        for (int x = 0; x < cols; ++x)
            if (std::hypot(y - cy, x - cx) <= m.radius) m.coords.emplace_back(y, x);
    return m;
}

ExpandedMessage expand_message(const std::vector<int>& bits, size_t capacity, int redundancy) {
    if (bits.empty()) throw config_error("expand_message: empty message");
    if (redundancy < 1) throw config_error("expand_message: redundancy must be >= 1");
    for (int b : bits)
        if (b != 0 && b != 1) throw config_error("expand_message: bits must be 0 or 1");
    if (capacity < bits.size())
        throw capacity_error("mask capacity " + std::to_string(capacity) +
                             " cannot hold a message of length " + std::to_string(bits.size()));

    const size_t wanted = bits.size() * static_cast<size_t>(redundancy);
    const size_t slots = std::min(capacity, wanted);
    ExpandedMessage em;
    em.slot_bits.resize(slots);
    for (size_t s = 0; s < slots; ++s) em.slot_bits[s] = bits[s % bits.size()];
    em.repetitions_used = static_cast<int>((slots + bits.size() - 1) / bits.size());
    return em;
}

std::vector<int> random_message(int length, uint64_t seed) {
    if (length < 1) throw config_error("random_message: length must be >= 1");
    std::mt19937_64 g(seed);
    std::vector<int> bits(length);
    for (int& b : bits) b = static_cast<int>(g() & 1u);
    return bits;
}

long long capacity_bound(int height, int width, int channels, int levels, double f_spectral,
                         int bits_per_coeff) {
    if (height < 1 || width < 1 || channels < 1 || levels < 1 || bits_per_coeff < 1)
        throw config_error("capacity_bound: dimensions, levels and bit depth must be positive");
    if (!(f_spectral >= 0.2 && f_spectral <= 0.5))
        throw config_error("capacity_bound: f_spectral must lie in [0.2, 0.5]");
    const double denom = std::pow(4.0, levels);
    const double raw = static_cast<double>(height) * width * channels / denom * f_spectral *
                       bits_per_coeff;
    return static_cast<long long>(std::floor(raw));
}

ChannelDecomp analyze_channel(const Plane& p, int levels) {
    if (levels < 1) throw config_error("analyze_channel: levels must be >= 1");
    ChannelDecomp d;
    Plane cur = p;
    for (int lev = 0; lev < levels; ++lev) {
        d.unpadded.emplace_back(cur.rows, cur.cols);
        Plane padded = pad_to_even(cur);
        d.levels.push_back(haar_decompose(padded));
        cur = d.levels.back().ll;
    }
    return d;
}

Plane synthesize_channel(const ChannelDecomp& d) {
    if (d.levels.empty() || d.levels.size() != d.unpadded.size())
        throw config_error("synthesize_channel: malformed decomposition");
    Plane ll = d.levels.back().ll;
    for (size_t lev = d.levels.size(); lev-- > 0;) {
        SubBands bands = d.levels[lev];
        bands.ll = ll;
        Plane plane = haar_reconstruct(bands);
        const auto [r, c] = d.unpadded[lev];
        if (plane.rows != r || plane.cols != c) {
            Plane cropped(r, c);
            for (int y = 0; y < r; ++y)
                for (int x = 0; x < c; ++x) cropped.at(y, x) = plane.at(y, x);
            plane = std::move(cropped);
        }
        ll = std::move(plane);
    }
    return ll;
}

Plane image_channel(const Image& img, int c) {
    Plane p(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) p.at(y, x) = img.at(c, y, x);
    return p;
}

void set_image_channel(Image& img, int c, const Plane& p) {
    if (p.rows != img.height || p.cols != img.width)
        throw config_error("set_image_channel: plane size mismatch");
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(c, y, x) = p.at(y, x);
}

Tensor3 spectral_tensor(const std::vector<ChannelDecomp>& decomps) {
    if (decomps.empty()) throw config_error("spectral_tensor: no channels");
    const Plane& first = decomps[0].levels.back().hh;
    Tensor3 t(static_cast<int>(decomps.size()), first.rows, first.cols);
    for (size_t c = 0; c < decomps.size(); ++c) {
        Plane spec = dct2d_packed(decomps[c].levels.back().hh);
        for (int y = 0; y < t.rows; ++y)
            for (int x = 0; x < t.cols; ++x) t.at(static_cast<int>(c), y, x) = spec.at(y, x);
    }
    return t;
}

void check_pipeline_input(const Image& img, const RunConfig& cfg) {
    if (img.height <= 0 || img.width <= 0) throw config_error("empty image");
    if (img.height != img.width)
        throw config_error("the pipeline needs square images; got " + std::to_string(img.height) +
                           "x" + std::to_string(img.width));
    if (cfg.channel >= img.channels)
        throw config_error("carrier channel " + std::to_string(cfg.channel) +
                           " does not exist in a " + std::to_string(img.channels) +
                           "-channel image");
    if (img.channels == 1 && cfg.channel != 0)
        throw config_error("grayscale images carry bits in channel 0 only");
    // every level must leave at least a 2x2 plane to split
    int side = img.height;
    for (int lev = 0; lev < cfg.wavelet_levels; ++lev) {
        side += side % 2;
        if (side < 2)
            throw config_error("image too small for " + std::to_string(cfg.wavelet_levels) +
                               " wavelet levels");
        side /= 2;
    }
}

Image embed(const Image& cover, const std::vector<int>& bits, const RunConfig& cfg,
            const Model& model, const EmbedOptions& opt) {
    check_pipeline_input(cover, cfg);
    if (static_cast<int>(bits.size()) != cfg.bit_length)
        throw config_error("message length " + std::to_string(bits.size()) +
                           " does not match configured bit_length " +
                           std::to_string(cfg.bit_length));

    std::vector<ChannelDecomp> decomps;
    decomps.reserve(cover.channels);
    for (int c = 0; c < cover.channels; ++c)
        decomps.push_back(analyze_channel(image_channel(cover, c), cfg.wavelet_levels));

    Tensor3 z = spectral_tensor(decomps);

    ConvStack enc{model.encoder, model.alpha};
    if (!enc.layers.empty()) z = stack_forward(enc, z);

    DiscMask mask = disc_mask(z.rows, z.cols, cfg.radius);
    ExpandedMessage em = expand_message(bits, mask.coords.size(), cfg.redundancy);

    for (size_t s = 0; s < em.slot_bits.size(); ++s) {
        const auto [y, x] = mask.coords[s];
        const double val = em.slot_bits[s] * cfg.strength;
        if (cfg.embed_mode == EmbedMode::additive)
            z.at(cfg.channel, y, x) += val;
        else
            z.at(cfg.channel, y, x) = val;
    }

    if (model.harmonize) {
        z = conv_forward(*model.harmonize, z);
        z = leaky_relu(z, model.alpha);
    }

    Image out = cover;
    for (int c = 0; c < cover.channels; ++c) {
        Plane spec(z.rows, z.cols);
        for (int y = 0; y < z.rows; ++y)
            for (int x = 0; x < z.cols; ++x) spec.at(y, x) = z.at(c, y, x);
        decomps[c].levels.back().hh = idct2d(spec);
        set_image_channel(out, c, synthesize_channel(decomps[c]));
    }
    if (opt.clamp_output) clamp_samples(out);
    return out;
}

}  // namespace specmark
