#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specmark/nn.hpp"

namespace specmark {

// Trained state of the pipeline: an encoder stack applied before the message
// is written, an optional smoothing layer applied right after, a decoder
// stack applied before thresholding, and the threshold itself.
struct Model {
    double alpha = 0.01;
    double theta = 0.001;
    std::vector<ConvLayer> encoder;
    std::optional<ConvLayer> harmonize;
    std::vector<ConvLayer> decoder;

    bool is_identity() const { return encoder.empty() && !harmonize && decoder.empty(); }
};

// Empty stacks, pure transform pipeline.
Model identity_model(double theta = 0.001, double alpha = 0.01);

// JSON document, format tag "specmark_model_v1". Weights survive a
// save/load round trip bit for bit.
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

}  // namespace specmark
