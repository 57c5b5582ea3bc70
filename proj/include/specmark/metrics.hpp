#pragma once

#include <vector>

#include "specmark/image.hpp"

namespace specmark {

// Mean squared error after dividing samples by 255.
double mean_squared_error(const Image& a, const Image& b);

// Peak signal-to-noise ratio in dB against a 255 peak. Identical images
// give +infinity.
double peak_signal_to_noise(const Image& a, const Image& b);

// Mean local structural similarity, 11x11 Gaussian window with sigma 1.5,
// K1=0.01, K2=0.03 on a 255 dynamic range, averaged over channels.
double structural_similarity(const Image& a, const Image& b);

// Fraction of positions where the two bit vectors agree.
double bit_recovery_accuracy(const std::vector<int>& got, const std::vector<int>& expected);

// One benchmark curve sample: attack strength, recovery rate p, quality
// degradation q.
struct CurvePoint {
    double strength = 0.0;
    double p = 0.0;
    double q = 0.0;
};

struct CurveSummary {
    double avg_p = 0.0;
    double avg_q = 0.0;
    double q_at_095p = 0.0;
    double q_at_07p = 0.0;
};

// Quality degradation where p first crosses the given level, linearly
// interpolated between neighbouring strengths. +infinity when p never drops
// below the level, -infinity when it is already below at the weakest
// strength.
double q_at_level(const std::vector<CurvePoint>& sorted_by_strength, double level);

CurveSummary summarize_curve(std::vector<CurvePoint> pts);

}  // namespace specmark
