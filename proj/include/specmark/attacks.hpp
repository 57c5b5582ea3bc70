#pragma once

#include <cstdint>
#include <string>

#include "specmark/image.hpp"

namespace specmark {

enum class AttackKind {
    none,
    rotation,
    crop,
    brightness,
    contrast,
    blur,
    noise,
    jpeg,
    geo,      // rotation then crop
    deg,      // blur, noise, jpeg
    combine,  // geo then deg
    flip_h,
    flip_v,
    rescale,
    saturation,
};

AttackKind attack_kind_from_name(const std::string& name);
std::string to_string(AttackKind kind);

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    double strength = 0.0;  // in [0, 1]
    uint64_t seed = 0;
};

// Family parameters at a given strength. Strength 0 and 1 hit the mildest
// and harshest table entries; everything between is linear.
struct AttackParams {
    double rotation_deg = 0.0;
    double crop_ratio = 0.0;   // removed area fraction
    double gain = 1.0;         // brightness/contrast multiplier
    double kernel_px = 0.0;    // blur window extent
    double gauss_sigma = 0.0;  // kernel_px / 4
    double noise_sigma = 0.0;  // on the 0-1 sample scale
    int jpeg_quality = 100;
};

AttackParams attack_params(AttackKind kind, double strength);

// Deterministic for a fixed (image, spec) pair. Output is clamped to [0,255]
// and keeps the input dimensions.
Image apply_attack(const Image& img, const AttackSpec& spec);

// Primitive operators, exposed for direct testing.
Image rotate_image(const Image& img, double degrees);
Image resize_bilinear(const Image& img, int new_h, int new_w);
Image central_crop_resize(const Image& img, double removed_area_ratio);
Image gaussian_blur(const Image& img, double kernel_px);
Image add_gaussian_noise(const Image& img, double sigma_255, uint64_t seed);
Image jpeg_roundtrip(const Image& img, int quality);
Image flip_horizontal(const Image& img);
Image flip_vertical(const Image& img);
Image adjust_brightness(const Image& img, double gain);
Image adjust_contrast(const Image& img, double gain);
Image boost_saturation(const Image& img, double factor);

}  // namespace specmark
