#pragma once

#include <vector>

#include "heb/types.hpp"

namespace heb {

// Probabilities are clamped to [eps, 1-eps] before any log so saturated
// predictions stay finite.
inline constexpr double kProbEps = 1e-7;

struct BceResult {
    double loss;      // -(y ln p + (1-y) ln(1-p))
    double gradient;  // d loss / d p on the clamped value
};

BceResult bce(double p, double y);

struct CiouResult {
    double iou;
    double ciou;  // IoU - rho^2/c^2 - alpha*v, in (-1, 1]
    double loss;  // 1 - ciou
};

// Complete IoU: IoU penalized by normalized center distance and
// aspect-ratio mismatch. Equals IoU when centers coincide and aspect
// ratios are equal; always <= IoU.
CiouResult ciou(const BoxXYXY& a, const BoxXYXY& b);

// Probabilities over integer bins 0..n, normalized to 1 +- 1e-9.
struct BinDistribution {
    std::vector<double> probs;

    int top_bin() const { return static_cast<int>(probs.size()) - 1; }
    void validate() const;
};

// Distribution focal loss: cross-entropy against the two integer bins
// bracketing the continuous target y. For integer y this is -ln S_y.
double dfl(const BinDistribution& dist, double y);

struct LossPair {
    BoxXYXY pred_box;
    BoxXYXY target_box;
    double pred_prob;    // classification score for the target class
    double target_prob;  // 1 for positives
    BinDistribution pred_dist;
    double dfl_target;
};

struct LossTriple {
    double box_loss;  // mean CIoU loss
    double cls_loss;  // mean BCE
    double dfl_loss;  // mean DFL
};

// Arithmetic means over the batch; throws std::invalid_argument when empty.
LossTriple loss_triple_report(const std::vector<LossPair>& batch);

}  // namespace heb
