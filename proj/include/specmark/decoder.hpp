#pragma once

#include <vector>

#include "specmark/codec.hpp"
#include "specmark/config.hpp"
#include "specmark/image.hpp"
#include "specmark/model.hpp"

namespace specmark {

struct DecodeResult {
    std::vector<int> bits;
    std::vector<double> scores;  // per-bit aggregate over repetitions
    int repetitions_used = 0;
};

// How the repeated readings of one bit collapse into its score. Mean is the
// default; median shrugs off single corrupted repetitions.
enum class ScoreAggregation { mean, median };

// Runs the analysis half of the pipeline and thresholds the aggregated slot
// values. A bit is 1 only when its score strictly exceeds theta.
DecodeResult extract(const Image& img, const RunConfig& cfg, const Model& model,
                     ScoreAggregation agg = ScoreAggregation::mean);

// Logistic relaxation of the hard threshold, sigma((score - theta) / tau).
std::vector<double> soft_probabilities(const std::vector<double>& scores, double theta,
                                       double tau);

// Plain gradient step on the threshold.
double updated_threshold(double theta, double eta, double dloss_dtheta);

}  // namespace specmark
