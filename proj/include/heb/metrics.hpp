#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heb/types.hpp"

namespace heb {

// Intersection over union of two normalized center-format boxes.
double iou(const BBoxNorm& a, const BBoxNorm& b);

// Greedy per-class NMS by descending confidence; stable tie-break by input
// order. Suppresses same-class boxes with IoU strictly greater than the
// threshold against a kept box.
std::vector<Prediction> nms(const std::vector<Prediction>& predictions,
                            double iou_threshold);

// One evaluated image: ground truth plus scored detections.
struct ImageSample {
    std::vector<Annotation> gts;
    std::vector<Prediction> preds;
};
using Dataset = std::vector<ImageSample>;

struct MatchRecord {
    size_t pred_index;  // into the input prediction list
    int gt_index;       // -1 when unmatched (FP)
    double iou;
};

struct MatchSet {
    std::vector<MatchRecord> matches;  // one per prediction, confidence order
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t fn = 0;
};

// Confidence-descending greedy matching: each prediction takes the unmatched
// same-class ground truth of maximal IoU >= threshold (ties to the lower GT
// index). TP + FN = #GT always holds.
MatchSet match_detections(const std::vector<Prediction>& preds,
                          const std::vector<Annotation>& gts, double iou_threshold);

struct ScoredDetection {
    double confidence;
    bool tp;
    uint64_t image_id;
    size_t input_order;
};

struct PRPoint {
    double recall;
    double precision;
};

struct PRCurve {
    std::vector<PRPoint> points;            // one per detection, rank order
    std::vector<ScoredDetection> sequence;  // canonical sort that generated it
    size_t gt_count = 0;
};

// Single-class curve over the whole dataset at one IoU threshold. The
// canonical sort (confidence desc, image id, input order) makes aggregation
// independent of evaluation order.
PRCurve pr_curve(const Dataset& dataset, int class_id, double iou_threshold);

// Area under the all-point precision envelope. Returns 0 with no
// detections; throws std::domain_error when the class has no ground truth.
double average_precision(const PRCurve& curve);

struct ClassAP {
    int class_id;
    double ap;
    size_t gt_count;
};

// Mean AP over classes with at least one ground truth.
// Throws std::domain_error when no class has ground truth.
double map_at(const Dataset& dataset, int class_count, double iou_threshold,
              std::vector<ClassAP>* per_class = nullptr);

// Mean of map_at over the threshold sweep [t_lo, t_hi] step `step`.
double map_sweep(const Dataset& dataset, int class_count, double t_lo = 0.50,
                 double t_hi = 0.95, double step = 0.05);

struct ConfidenceCurves {
    std::vector<double> confidence;  // 101 samples, 0.00 .. 1.00
    std::vector<double> precision;   // P = 1 when no predictions survive
    std::vector<double> recall;
    std::vector<double> f1;
    double best_f1 = 0.0;
    double best_f1_confidence = 0.0;
};

ConfidenceCurves confidence_curves(const Dataset& dataset, double iou_threshold = 0.5);

// (C+1) x (C+1) counts; rows = predicted class (+background), columns =
// true class (+background).
struct ConfusionMatrix {
    int class_count = 0;
    std::vector<int64_t> cells;

    explicit ConfusionMatrix(int classes = 0)
        : class_count(classes),
          cells(static_cast<size_t>(classes + 1) * static_cast<size_t>(classes + 1), 0) {}

    int64_t& at(int pred, int tru) {
        return cells[static_cast<size_t>(pred) * static_cast<size_t>(class_count + 1) +
                     static_cast<size_t>(tru)];
    }
    int64_t at(int pred, int tru) const {
        return cells[static_cast<size_t>(pred) * static_cast<size_t>(class_count + 1) +
                     static_cast<size_t>(tru)];
    }
    int background() const { return class_count; }
};

// Class-agnostic IoU matching (so misclassifications land off-diagonal);
// unmatched predictions count against background, unmatched ground truth
// counts as predicted-background.
ConfusionMatrix det_confusion_matrix(const Dataset& dataset, int class_count,
                                     double conf_threshold = 0.25,
                                     double iou_threshold = 0.45);

// Fraction of rows whose true label ranks within the k best scores (ties
// broken by lower class index). Throws std::invalid_argument when k exceeds
// the class count.
double topk_accuracy(const std::vector<std::vector<double>>& probability_rows,
                     const std::vector<int>& true_labels, int k);

struct ClsConfusion {
    ConfusionMatrix matrix;          // background row/column stay zero
    std::vector<double> recall;      // normalized diagonal per true class
    double top1 = 0.0;               // trace / N
};

ClsConfusion cls_confusion_matrix(const std::vector<int>& predicted_labels,
                                  const std::vector<int>& true_labels, int class_count);

struct EvalReport {
    std::vector<ClassAP> per_class_ap;  // at IoU 0.5
    double map50 = 0.0;
    double map_sweep = 0.0;
    double sweep_lo = 0.50;
    double sweep_hi = 0.95;
    double precision = 0.0;  // at the best-F1 confidence
    double recall = 0.0;
    ConfidenceCurves curves;
    ConfusionMatrix confusion;
};

EvalReport evaluate_detections(const Dataset& dataset, int class_count,
                               double sweep_lo = 0.50, double sweep_hi = 0.95,
                               double cm_conf_threshold = 0.25,
                               double cm_iou_threshold = 0.45);

}  // namespace heb
