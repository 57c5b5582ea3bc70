#pragma once

#include <cstdint>
#include <string>

namespace specmark {

enum class EmbedMode { additive, substitutive };

// Every knob the pipeline reads. The JSON form accepts exactly these keys;
// anything else is rejected so typos cannot silently fall back to defaults.
struct RunConfig {
    double radius = 100.0;        // disc radius over the spectral plane
    double strength = 20.0;       // per-coefficient write amplitude
    int channel = 0;              // which image channel carries the bits
    int conv_layers = 32;         // stack depth used when training
    int kernel_size = 3;
    double theta = 0.001;         // decision threshold on per-bit scores
    int bit_length = 128;
    EmbedMode embed_mode = EmbedMode::additive;
    int redundancy = 1;           // repetitions averaged at decode time
    int wavelet_levels = 1;
    double alpha = 0.01;          // LeakyReLU negative slope
    double soft_temperature = 1.0;
    uint64_t seed = 0;
};

std::string to_string(EmbedMode m);
EmbedMode embed_mode_from_string(const std::string& s);

RunConfig run_config_from_json_text(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json_text(const RunConfig& cfg);

}  // namespace specmark
