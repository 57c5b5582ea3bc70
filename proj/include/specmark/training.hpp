#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specmark/codec.hpp"
#include "specmark/config.hpp"
#include "specmark/image.hpp"
#include "specmark/model.hpp"
#include "specmark/nn.hpp"

namespace specmark {

struct TrainConfig {
    int steps = 300;
    int batch = 32;
    double encoder_lr = 1e-2;     // encoder stack + harmonize layer, no schedule
    double decoder_lr = 1e-3;     // decoder stack + theta
    int decoder_lr_halving = 100; // halve the decoder lr every this many steps
    double lambda_enc = 0.7;
    double lambda_dec = 1.0;
    uint64_t seed = 0;
    int checkpoint_interval = 50; // clean-accuracy probe cadence; 0 disables
};

struct TrainStepStats {
    int step = 0;
    double encoder_loss = 0.0;
    double decoder_loss = 0.0;
    double total_loss = 0.0;
    double theta = 0.0;
    double clean_bra = -1.0;  // negative when not probed at this step
    double millis = 0.0;
};

struct TrainResult {
    Model model;
    std::vector<TrainStepStats> history;
    bool diverged = false;
    int completed_steps = 0;
};

// Mean squared sample difference on the raw 0-255 scale.
double encoder_loss(const Image& cover, const Image& embedded);

// Mean squared gap between soft bit probabilities and the message.
double decoder_loss(const std::vector<int>& bits, const std::vector<double>& probs);

double total_loss(double enc, double dec, double lambda_enc, double lambda_dec);

// Decoder learning rate at a 1-based step under the halving schedule.
double decoder_lr_at(const TrainConfig& tc, int step);

// Loss and every parameter gradient for one (cover, message) pair. The
// forward pass runs the configured embedding without clamping, then the
// decode analysis and the soft threshold.
struct LossGrads {
    double enc_loss = 0.0;
    double dec_loss = 0.0;
    double total = 0.0;
    StackGrads encoder;                // one vector per encoder layer
    std::vector<double> harmonize;     // empty when the model has no such layer
    StackGrads decoder;
    double theta = 0.0;
};

double training_loss(const Image& cover, const std::vector<int>& bits, const RunConfig& cfg,
                     const Model& model, double lambda_enc, double lambda_dec);

LossGrads training_gradients(const Image& cover, const std::vector<int>& bits,
                             const RunConfig& cfg, const Model& model, double lambda_enc,
                             double lambda_dec);

// Joint optimization of both stacks, the harmonize layer and theta. Runs
// the additive embedding regardless of cfg.embed_mode. A non-finite batch
// loss aborts the loop and the model reverts to the last finite step.
TrainResult train(const std::vector<Image>& corpus, const RunConfig& cfg, const TrainConfig& tc,
                  const Model& init);

// CSV report: step,L_enc,L_dec,L_total,clean_BRA (probe column left empty
// on steps without a checkpoint).
std::string training_report_csv(const std::vector<TrainStepStats>& history);

}  // namespace specmark
