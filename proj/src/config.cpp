#include "specmark/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specmark/errors.hpp"

namespace specmark {

namespace {

using nlohmann::json;

double want_number(const json& j, const char* key) {
    if (!j.is_number()) throw config_error(std::string("config key '") + key + "' must be a number");
    return j.get<double>();
}

int want_int(const json& j, const char* key) {
    if (!j.is_number_integer()) throw config_error(std::string("config key '") + key + "' must be an integer");
    return j.get<int>();
}

}  // namespace

std::string to_string(EmbedMode m) {
    return m == EmbedMode::additive ? "additive" : "substitutive";
}

EmbedMode embed_mode_from_string(const std::string& s) {
    if (s == "additive") return EmbedMode::additive;
    if (s == "substitutive") return EmbedMode::substitutive;
    throw config_error("embed_mode must be 'additive' or 'substitutive', got '" + s + "'");
}

RunConfig run_config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config must be a JSON object");

    RunConfig cfg;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "radius") cfg.radius = want_number(v, "radius");
        else if (k == "strength") cfg.strength = want_number(v, "strength");
        else if (k == "channel") cfg.channel = want_int(v, "channel");
        else if (k == "conv_layers") cfg.conv_layers = want_int(v, "conv_layers");
        else if (k == "kernel_size") cfg.kernel_size = want_int(v, "kernel_size");
        else if (k == "theta") cfg.theta = want_number(v, "theta");
        else if (k == "bit_length") cfg.bit_length = want_int(v, "bit_length");
        else if (k == "embed_mode") {
            if (!v.is_string()) throw config_error("config key 'embed_mode' must be a string");
            cfg.embed_mode = embed_mode_from_string(v.get<std::string>());
        }
        else if (k == "redundancy") cfg.redundancy = want_int(v, "redundancy");
        else if (k == "wavelet_levels") cfg.wavelet_levels = want_int(v, "wavelet_levels");
        else if (k == "alpha") cfg.alpha = want_number(v, "alpha");
        else if (k == "soft_temperature") cfg.soft_temperature = want_number(v, "soft_temperature");
        else if (k == "seed") {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw config_error("config key 'seed' must be a non-negative integer");
            cfg.seed = v.get<uint64_t>();
        }
        else throw config_error("config has unknown key: '" + k + "'");
    }

    if (cfg.radius < 0.0) throw config_error("radius must be >= 0");
    if (cfg.strength <= 0.0) throw config_error("strength must be > 0");
    if (cfg.channel < 0) throw config_error("channel must be >= 0");
    if (cfg.conv_layers < 0) throw config_error("conv_layers must be >= 0");
    if (cfg.kernel_size < 1 || cfg.kernel_size % 2 == 0)
        throw config_error("kernel_size must be odd and >= 1");
    if (cfg.bit_length < 1) throw config_error("bit_length must be >= 1");
    if (cfg.redundancy < 1) throw config_error("redundancy must be >= 1");
    if (cfg.wavelet_levels < 1) throw config_error("wavelet_levels must be >= 1");
    if (cfg.alpha <= 0.0) throw config_error("alpha must be > 0");
    if (cfg.soft_temperature <= 0.0) throw config_error("soft_temperature must be > 0");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return run_config_from_json_text(ss.str());
}

std::string run_config_to_json_text(const RunConfig& cfg) {
    json doc{{"radius", cfg.radius},
             {"strength", cfg.strength},
             {"channel", cfg.channel},
             {"conv_layers", cfg.conv_layers},
             {"kernel_size", cfg.kernel_size},
             {"theta", cfg.theta},
             {"bit_length", cfg.bit_length},
             {"embed_mode", to_string(cfg.embed_mode)},
             {"redundancy", cfg.redundancy},
             {"wavelet_levels", cfg.wavelet_levels},
             {"alpha", cfg.alpha},
             {"soft_temperature", cfg.soft_temperature},
             {"seed", cfg.seed}};
    return doc.dump(2);
}

}  // namespace specmark
