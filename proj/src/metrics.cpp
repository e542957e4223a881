#include "heb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace heb {

namespace {

// Canonical detection ordering: confidence desc, then image id, then input
// order. Every aggregation sorts by this key so results are
// parallelism-independent.
bool canonical_less(const ScoredDetection& a, const ScoredDetection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    return a.input_order < b.input_order;
}

std::vector<size_t> confidence_order(const std::vector<Prediction>& preds) {
    std::vector<size_t> order(preds.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return preds[a].confidence > preds[b].confidence;
    });
    return order;
}

}  // namespace

double iou(const BBoxNorm& a, const BBoxNorm& b) {
    auto ca = BoxXYXY::from_norm(a);
    auto cb = BoxXYXY::from_norm(b);
    double ix = std::max(0.0, std::min(ca.x2, cb.x2) - std::max(ca.x1, cb.x1));
    double iy = std::max(0.0, std::min(ca.y2, cb.y2) - std::max(ca.y1, cb.y1));
    double inter = ix * iy;
    double uni = ca.area() + cb.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Prediction> nms(const std::vector<Prediction>& predictions,
                            double iou_threshold) {
    if (iou_threshold < 0.0 || iou_threshold > 1.0) {
        throw std::invalid_argument("nms threshold outside [0,1]");
    }
    auto order = confidence_order(predictions);
    std::vector<bool> suppressed(predictions.size(), false);
    std::vector<Prediction> kept;
    for (size_t oi = 0; oi < order.size(); ++oi) {
        size_t i = order[oi];
        if (suppressed[i]) continue;
        kept.push_back(predictions[i]);
        for (size_t oj = oi + 1; oj < order.size(); ++oj) {
            size_t j = order[oj];
            if (suppressed[j] || predictions[j].class_id != predictions[i].class_id) continue;
            if (iou(predictions[i].box, predictions[j].box) > iou_threshold) {
                suppressed[j] = true;
            }
        }
    }
    return kept;
}

MatchSet match_detections(const std::vector<Prediction>& preds,
                          const std::vector<Annotation>& gts, double iou_threshold) {
    MatchSet result;
    std::vector<bool> gt_taken(gts.size(), false);
    for (size_t i : confidence_order(preds)) {
        int best_gt = -1;
        double best_iou = 0.0;
        for (size_t g = 0; g < gts.size(); ++g) {
            if (gt_taken[g] || gts[g].class_id != preds[i].class_id) continue;
            double v = iou(preds[i].box, gts[g].box);
            if (v >= iou_threshold && v > best_iou) {
                best_iou = v;
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt >= 0) {
            gt_taken[static_cast<size_t>(best_gt)] = true;
            result.matches.push_back({i, best_gt, best_iou});
            ++result.tp;
        } else {
            result.matches.push_back({i, -1, 0.0});
            ++result.fp;
        }
    }
    result.fn = static_cast<int64_t>(gts.size()) - result.tp;
    return result;
}

PRCurve pr_curve(const Dataset& dataset, int class_id, double iou_threshold) {
    PRCurve curve;
    for (size_t img = 0; img < dataset.size(); ++img) {
        const auto& sample = dataset[img];
        for (const auto& g : sample.gts) {
            if (g.class_id == class_id) ++curve.gt_count;
        }
        auto match = match_detections(sample.preds, sample.gts, iou_threshold);
        for (const auto& m : match.matches) {
            const auto& p = sample.preds[m.pred_index];
            if (p.class_id != class_id) continue;
            curve.sequence.push_back(
                {p.confidence, m.gt_index >= 0, static_cast<uint64_t>(img), m.pred_index});
        }
    }
    std::sort(curve.sequence.begin(), curve.sequence.end(), canonical_less);

    int64_t tp = 0, fp = 0;
    for (const auto& d : curve.sequence) {
        d.tp ? ++tp : ++fp;
        double recall = curve.gt_count > 0
                            ? static_cast<double>(tp) / static_cast<double>(curve.gt_count)
                            : 0.0;
        curve.points.push_back(
            {recall, static_cast<double>(tp) / static_cast<double>(tp + fp)});
    }
    return curve;
}

double average_precision(const PRCurve& curve) {
    if (curve.gt_count == 0) {
        throw std::domain_error("average_precision: class has no ground truth");
    }
    if (curve.points.empty()) return 0.0;
    // all-point interpolation: precision envelope from the right, area under
    // the staircase over recall
    double ap = 0.0;
    double envelope = 0.0;
    for (size_t i = curve.points.size(); i-- > 0;) {
        envelope = std::max(envelope, curve.points[i].precision);
        double prev_recall = i > 0 ? curve.points[i - 1].recall : 0.0;
        ap += (curve.points[i].recall - prev_recall) * envelope;
    }
    return ap;
}

double map_at(const Dataset& dataset, int class_count, double iou_threshold,
              std::vector<ClassAP>* per_class) {
    double sum = 0.0;
    int evaluated = 0;
    if (per_class) per_class->clear();
    for (int c = 0; c < class_count; ++c) {
        auto curve = pr_curve(dataset, c, iou_threshold);
        if (curve.gt_count == 0) {
            if (per_class) per_class->push_back({c, std::nan(""), 0});
            continue;
        }
        double ap = average_precision(curve);
        if (per_class) per_class->push_back({c, ap, curve.gt_count});
        sum += ap;
        ++evaluated;
    }
    if (evaluated == 0) throw std::domain_error("empty evaluation: no ground truth");
    return sum / evaluated;
}

double map_sweep(const Dataset& dataset, int class_count, double t_lo, double t_hi,
                 double step) {
    int n = static_cast<int>(std::lround((t_hi - t_lo) / step)) + 1;
    if (n < 1) throw std::invalid_argument("map_sweep: empty threshold range");
    double sum = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : sum)
    for (int i = 0; i < n; ++i) {
        sum += map_at(dataset, class_count, t_lo + step * i);
    }
    return sum / n;
}

ConfidenceCurves confidence_curves(const Dataset& dataset, double iou_threshold) {
    ConfidenceCurves out;
    out.confidence.resize(101);
    out.precision.resize(101);
    out.recall.resize(101);
    out.f1.resize(101);
    int64_t total_gt = 0;
    for (const auto& s : dataset) total_gt += static_cast<int64_t>(s.gts.size());

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i <= 100; ++i) {
        double c = i / 100.0;
        int64_t tp = 0, fp = 0;
        for (const auto& sample : dataset) {
            std::vector<Prediction> surviving;
            for (const auto& p : sample.preds) {
                if (p.confidence >= c) surviving.push_back(p);
            }
            auto m = match_detections(surviving, sample.gts, iou_threshold);
            tp += m.tp;
            fp += m.fp;
        }
        double precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
        double recall = total_gt > 0 ? static_cast<double>(tp) / total_gt : 1.0;
        double f1 = (precision + recall) > 0.0
                        ? 2.0 * precision * recall / (precision + recall)
                        : 0.0;
        out.confidence[static_cast<size_t>(i)] = c;
        out.precision[static_cast<size_t>(i)] = precision;
        out.recall[static_cast<size_t>(i)] = recall;
        out.f1[static_cast<size_t>(i)] = f1;
    }
    for (int i = 0; i <= 100; ++i) {
        if (out.f1[static_cast<size_t>(i)] > out.best_f1) {
            out.best_f1 = out.f1[static_cast<size_t>(i)];
            out.best_f1_confidence = out.confidence[static_cast<size_t>(i)];
        }
    }
    return out;
}

ConfusionMatrix det_confusion_matrix(const Dataset& dataset, int class_count,
                                     double conf_threshold, double iou_threshold) {
    ConfusionMatrix cm(class_count);
    int bg = cm.background();
    for (const auto& sample : dataset) {
        std::vector<Prediction> surviving;
        for (const auto& p : sample.preds) {
            if (p.confidence >= conf_threshold) surviving.push_back(p);
        }
        // class-agnostic greedy matching by confidence
        std::vector<bool> gt_taken(sample.gts.size(), false);
        for (size_t i : confidence_order(surviving)) {
            int best_gt = -1;
            double best_iou = 0.0;
            for (size_t g = 0; g < sample.gts.size(); ++g) {
                if (gt_taken[g]) continue;
                double v = iou(surviving[i].box, sample.gts[g].box);
                if (v >= iou_threshold && v > best_iou) {
                    best_iou = v;
                    best_gt = static_cast<int>(g);
                }
            }
            if (best_gt >= 0) {
                gt_taken[static_cast<size_t>(best_gt)] = true;
                cm.at(surviving[i].class_id,
                      sample.gts[static_cast<size_t>(best_gt)].class_id) += 1;
            } else {
                cm.at(surviving[i].class_id, bg) += 1;
            }
        }
        for (size_t g = 0; g < sample.gts.size(); ++g) {
            if (!gt_taken[g]) cm.at(bg, sample.gts[g].class_id) += 1;
        }
    }
    return cm;
}

double topk_accuracy(const std::vector<std::vector<double>>& probability_rows,
                     const std::vector<int>& true_labels, int k) {
    if (probability_rows.size() != true_labels.size()) {
        throw std::invalid_argument("topk_accuracy: rows and labels differ in length");
    }
    if (probability_rows.empty()) return 0.0;
    size_t classes = probability_rows.front().size();
    if (k < 1 || static_cast<size_t>(k) > classes) {
        throw std::invalid_argument("topk_accuracy: k outside [1, class count]");
    }
    size_t hits = 0;
    for (size_t r = 0; r < probability_rows.size(); ++r) {
        const auto& row = probability_rows[r];
        if (row.size() != classes) {
            throw std::invalid_argument("topk_accuracy: ragged score rows");
        }
        int truth = true_labels[r];
        double truth_score = row[static_cast<size_t>(truth)];
        // rank = classes strictly better, plus equal-scored classes with a
        // lower index (the tie-break)
        int rank = 0;
        for (size_t c = 0; c < classes; ++c) {
            if (row[c] > truth_score ||
                (row[c] == truth_score && static_cast<int>(c) < truth)) {
                ++rank;
            }
        }
        if (rank < k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(probability_rows.size());
}

ClsConfusion cls_confusion_matrix(const std::vector<int>& predicted_labels,
                                  const std::vector<int>& true_labels, int class_count) {
    if (predicted_labels.size() != true_labels.size()) {
        throw std::invalid_argument("cls_confusion_matrix: label sequences differ");
    }
    ClsConfusion out;
    out.matrix = ConfusionMatrix(class_count);
    for (size_t i = 0; i < predicted_labels.size(); ++i) {
        out.matrix.at(predicted_labels[i], true_labels[i]) += 1;
    }
    out.recall.assign(static_cast<size_t>(class_count), 0.0);
    int64_t trace = 0;
    for (int c = 0; c < class_count; ++c) {
        int64_t col = 0;
        for (int p = 0; p < class_count; ++p) col += out.matrix.at(p, c);
        if (col > 0) {
            out.recall[static_cast<size_t>(c)] =
                static_cast<double>(out.matrix.at(c, c)) / static_cast<double>(col);
        }
        trace += out.matrix.at(c, c);
    }
    if (!true_labels.empty()) {
        out.top1 = static_cast<double>(trace) / static_cast<double>(true_labels.size());
    }
    return out;
}

EvalReport evaluate_detections(const Dataset& dataset, int class_count,
                               double sweep_lo, double sweep_hi,
                               double cm_conf_threshold, double cm_iou_threshold) {
    EvalReport report;
    report.sweep_lo = sweep_lo;
    report.sweep_hi = sweep_hi;
    report.map50 = map_at(dataset, class_count, 0.5, &report.per_class_ap);
    report.map_sweep = map_sweep(dataset, class_count, sweep_lo, sweep_hi);
    report.curves = confidence_curves(dataset, 0.5);
    // headline precision/recall reported at the best-F1 confidence
    size_t best = 0;
    for (size_t i = 0; i < report.curves.confidence.size(); ++i) {
        if (report.curves.confidence[i] == report.curves.best_f1_confidence) best = i;
    }
    report.precision = report.curves.precision[best];
    report.recall = report.curves.recall[best];
    report.confusion = det_confusion_matrix(dataset, class_count, cm_conf_threshold,
                                            cm_iou_threshold);
    return report;
}

}  // namespace heb
