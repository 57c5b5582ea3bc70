#include "specmark/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specmark/errors.hpp"

namespace specmark {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "specmark_model_v1";

json layer_to_json(const ConvLayer& l, const std::string& role) {
    json weights = json::array();
    for (int o = 0; o < l.out_ch; ++o) {
        json per_in = json::array();
        for (int i = 0; i < l.in_ch; ++i) {
            json rows = json::array();
            for (int ky = 0; ky < l.ksize; ++ky) {
                json row = json::array();
                for (int kx = 0; kx < l.ksize; ++kx) row.push_back(l.wt(o, i, ky, kx));
                rows.push_back(std::move(row));
            }
            per_in.push_back(std::move(rows));
        }
        weights.push_back(std::move(per_in));
    }
    return json{{"role", role}, {"k_size", l.ksize}, {"weights", std::move(weights)}};
}

ConvLayer layer_from_json(const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "role" && k != "k_size" && k != "weights")
            throw io_error("model layer has unknown field: " + k);
    }
    if (!j.contains("k_size") || !j["k_size"].is_number_integer())
        throw io_error("model layer is missing an integer k_size");
    if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].empty())
        throw io_error("model layer is missing its weights");

    const int ksize = j["k_size"].get<int>();
    const json& w = j["weights"];
    const int out_ch = static_cast<int>(w.size());
    if (!w[0].is_array() || w[0].empty()) throw io_error("malformed model weights");
    const int in_ch = static_cast<int>(w[0].size());

    ConvLayer l(in_ch, out_ch, ksize);
    for (int o = 0; o < out_ch; ++o) {
        if (!w[o].is_array() || static_cast<int>(w[o].size()) != in_ch)
            throw io_error("model weight rows are ragged");
        for (int i = 0; i < in_ch; ++i) {
            const json& kern = w[o][i];
            if (!kern.is_array() || static_cast<int>(kern.size()) != ksize)
                throw io_error("model kernel does not match k_size");
            for (int ky = 0; ky < ksize; ++ky) {
                const json& row = kern[ky];
                if (!row.is_array() || static_cast<int>(row.size()) != ksize)
                    throw io_error("model kernel does not match k_size");
                for (int kx = 0; kx < ksize; ++kx) {
                    if (!row[kx].is_number()) throw io_error("model weight is not a number");
                    l.wt(o, i, ky, kx) = row[kx].get<double>();
                }
            }
        }
    }
    return l;
}

}  // namespace

Model identity_model(double theta, double alpha) {
    Model m;
    m.theta = theta;
    m.alpha = alpha;
    return m;
}

std::string model_to_json(const Model& m) {
    json layers = json::array();
    for (const ConvLayer& l : m.encoder) layers.push_back(layer_to_json(l, "encoder"));
    if (m.harmonize) layers.push_back(layer_to_json(*m.harmonize, "harmonize"));
    for (const ConvLayer& l : m.decoder) layers.push_back(layer_to_json(l, "decoder"));
    json doc{{"format", kFormatTag},
             {"alpha", m.alpha},
             {"layers", std::move(layers)},
             {"theta", m.theta}};
    return doc.dump(2);
}

Model model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw io_error(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw io_error("model file must hold a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        if (k != "format" && k != "alpha" && k != "layers" && k != "theta")
            throw io_error("model file has unknown field: " + k);
    }
    if (!doc.contains("format") || doc["format"] != kFormatTag)
        throw io_error("model file has a missing or unsupported format tag");
    if (!doc.contains("alpha") || !doc["alpha"].is_number())
        throw io_error("model file is missing alpha");
    if (!doc.contains("theta") || !doc["theta"].is_number())
        throw io_error("model file is missing theta");
    if (!doc.contains("layers") || !doc["layers"].is_array())
        throw io_error("model file is missing its layer list");

    Model m;
    m.alpha = doc["alpha"].get<double>();
    m.theta = doc["theta"].get<double>();
    if (m.alpha <= 0.0) throw io_error("model alpha must be positive");

    bool seen_decoder = false;
    for (const json& lj : doc["layers"]) {
        if (!lj.is_object() || !lj.contains("role") || !lj["role"].is_string())
            throw io_error("model layer is missing its role");
        const std::string role = lj["role"].get<std::string>();
        ConvLayer layer = layer_from_json(lj);
        if (role == "encoder") {
            if (m.harmonize || seen_decoder) throw io_error("model layers are out of order");
            m.encoder.push_back(std::move(layer));
        } else if (role == "harmonize") {
            if (m.harmonize || seen_decoder) throw io_error("model has a misplaced harmonize layer");
            m.harmonize = std::move(layer);
        } else if (role == "decoder") {
            seen_decoder = true;
            m.decoder.push_back(std::move(layer));
        } else {
            throw io_error("model layer has unknown role: " + role);
        }
    }
    return m;
}

void save_model(const Model& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open model file for writing: " + path);
    f << model_to_json(m) << '\n';
    if (!f) throw io_error("failed writing model file: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace specmark
