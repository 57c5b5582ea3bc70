#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace specmark {

// Planar real-valued image. Samples live on the 0..255 scale so that an
// embedding strength of 20 means the same thing it does for 8-bit pixels.
// Layout: channel-major, then row-major within a channel.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> samples;

    Image() = default;
    Image(int h, int w, int c, double fill = 0.0);

    double& at(int c, int y, int x) {
        return samples[(static_cast<size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return samples[(static_cast<size_t>(c) * height + y) * width + x];
    }

    size_t sample_count() const { return samples.size(); }
    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

// Lossless 8-bit PNG, grayscale or RGB. Alpha channels are rejected.
Image load_image(const std::string& path);

// Rounds half away from zero, clamps to [0,255], writes 8-bit PNG.
void save_image(const Image& img, const std::string& path);

// Clamps all samples to [0,255] in place. Idempotent.
void clamp_samples(Image& img);

// What a save/load round trip would produce: rounded and clamped copy.
Image quantized(const Image& img);

}  // namespace specmark
