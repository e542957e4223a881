#include "heb/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace heb {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

}  // namespace

BceResult bce(double p, double y) {
    if (!std::isfinite(p) || !std::isfinite(y)) {
        throw std::invalid_argument("bce: non-finite input");
    }
    double pc = clamp_prob(p);
    double loss = -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
    double gradient = (pc - y) / (pc * (1.0 - pc));
    return {loss, gradient};
}

CiouResult ciou(const BoxXYXY& a, const BoxXYXY& b) {
    if (a.width() <= 0.0 || a.height() <= 0.0 || b.width() <= 0.0 || b.height() <= 0.0) {
        throw std::invalid_argument("ciou: degenerate box");
    }
    double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    double inter = ix * iy;
    double uni = a.area() + b.area() - inter;
    double iou_v = inter / uni;

    // squared center distance over squared enclosing-box diagonal
    double acx = (a.x1 + a.x2) / 2.0, acy = (a.y1 + a.y2) / 2.0;
    double bcx = (b.x1 + b.x2) / 2.0, bcy = (b.y1 + b.y2) / 2.0;
    double rho2 = (acx - bcx) * (acx - bcx) + (acy - bcy) * (acy - bcy);
    double ew = std::max(a.x2, b.x2) - std::min(a.x1, b.x1);
    double eh = std::max(a.y2, b.y2) - std::min(a.y1, b.y1);
    double c2 = ew * ew + eh * eh;

    double v = 4.0 / (std::numbers::pi * std::numbers::pi) *
               std::pow(std::atan(b.width() / b.height()) -
                            std::atan(a.width() / a.height()),
                        2.0);
    double alpha = v > 0.0 ? v / ((1.0 - iou_v) + v) : 0.0;

    double value = iou_v - rho2 / c2 - alpha * v;
    return {iou_v, value, 1.0 - value};
}

void BinDistribution::validate() const {
    if (probs.size() < 2) {
        throw std::invalid_argument("BinDistribution: needs at least 2 bins");
    }
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("BinDistribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("BinDistribution: probabilities must sum to 1");
    }
}

double dfl(const BinDistribution& dist, double y) {
    dist.validate();
    int n = dist.top_bin();
    if (y < 0.0 || y > static_cast<double>(n)) {
        throw std::out_of_range("dfl: target outside [0, n]");
    }
    int lo = static_cast<int>(std::floor(y));
    if (lo == n) lo = n - 1;  // y == n uses the top bracket with weight 1
    int hi = lo + 1;
    double w_hi = y - static_cast<double>(lo);
    double w_lo = 1.0 - w_hi;
    double s_lo = std::max(dist.probs[static_cast<size_t>(lo)], kProbEps);
    double s_hi = std::max(dist.probs[static_cast<size_t>(hi)], kProbEps);
    return -(w_lo * std::log(s_lo) + w_hi * std::log(s_hi));
}

LossTriple loss_triple_report(const std::vector<LossPair>& batch) {
    if (batch.empty()) throw std::invalid_argument("loss_triple_report: empty batch");
    double box = 0.0, cls = 0.0, dfl_sum = 0.0;
    for (const auto& pair : batch) {
        box += ciou(pair.pred_box, pair.target_box).loss;
        cls += bce(pair.pred_prob, pair.target_prob).loss;
        dfl_sum += dfl(pair.pred_dist, pair.dfl_target);
    }
    double n = static_cast<double>(batch.size());
    return {box / n, cls / n, dfl_sum / n};
}

}  // namespace heb
