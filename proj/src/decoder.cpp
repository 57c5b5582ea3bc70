#include "specmark/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "specmark/errors.hpp"

namespace specmark {

DecodeResult extract(const Image& img, const RunConfig& cfg, const Model& model,
                     ScoreAggregation agg) {
    check_pipeline_input(img, cfg);

    std::vector<ChannelDecomp> decomps;
    decomps.reserve(img.channels);
    for (int c = 0; c < img.channels; ++c)
        decomps.push_back(analyze_channel(image_channel(img, c), cfg.wavelet_levels));

    Tensor3 z = spectral_tensor(decomps);

    ConvStack dec{model.decoder, model.alpha};
    if (!dec.layers.empty()) z = stack_forward(dec, z);

    DiscMask mask = disc_mask(z.rows, z.cols, cfg.radius);
    const size_t l = static_cast<size_t>(cfg.bit_length);
    if (mask.coords.size() < l)
        throw capacity_error("mask capacity " + std::to_string(mask.coords.size()) +
                             " cannot hold a message of length " + std::to_string(l));

    const size_t slots = std::min(mask.coords.size(), l * static_cast<size_t>(cfg.redundancy));

    DecodeResult res;
    res.scores.assign(l, 0.0);
    std::vector<std::vector<double>> readings(l);
    for (size_t s = 0; s < slots; ++s) {
        const auto [y, x] = mask.coords[s];
        readings[s % l].push_back(z.at(cfg.channel, y, x));
    }
    for (size_t i = 0; i < l; ++i) {
        std::vector<double>& r = readings[i];
        if (agg == ScoreAggregation::mean) {
            double acc = 0.0;
            for (double v : r) acc += v;
            res.scores[i] = acc / static_cast<double>(r.size());
        } else {
            std::sort(r.begin(), r.end());
            const size_t n = r.size();
            res.scores[i] = n % 2 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]);
        }
    }
    res.repetitions_used = static_cast<int>((slots + l - 1) / l);

    res.bits.resize(l);
    for (size_t i = 0; i < l; ++i) res.bits[i] = res.scores[i] > cfg.theta ? 1 : 0;
    return res;
}

std::vector<double> soft_probabilities(const std::vector<double>& scores, double theta,
                                       double tau) {
    if (tau <= 0.0) throw config_error("soft_probabilities: tau must be > 0");
    std::vector<double> probs(scores.size());
    for (size_t i = 0; i < scores.size(); ++i)
        probs[i] = 1.0 / (1.0 + std::exp(-(scores[i] - theta) / tau));
    return probs;
}

double updated_threshold(double theta, double eta, double dloss_dtheta) {
    return theta - eta * dloss_dtheta;
}

}  // namespace specmark
