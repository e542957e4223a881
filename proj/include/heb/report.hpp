#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heb/manifest.hpp"
#include "heb/metrics.hpp"

namespace heb {

// CSV emitters. Column order and headers are fixed; all reals use %.6f.
std::string per_class_ap_csv(const EvalReport& report,
                             const std::vector<std::string>& class_names);
std::string curves_csv(const ConfidenceCurves& curves);
std::string confusion_csv(const ConfusionMatrix& cm,
                          const std::vector<std::string>& class_names,
                          bool normalized);
std::string stats_csv(const CorpusStats& stats,
                      const std::vector<std::string>& class_names);

// "P R mAP50 mAP50-95" one-line summary (the sweep range is labelled
// explicitly since the upper bound is configurable).
std::string summary_line(const EvalReport& report);

// CSV schema "epoch_or_batch,box_loss,cls_loss,dfl_loss".
struct LossRow {
    std::string label;
    double box_loss;
    double cls_loss;
    double dfl_loss;
};
std::string loss_csv(const std::vector<LossRow>& rows);

// Minimal internal plotting: line and bar charts only.
struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};
std::string svg_line_chart(const std::vector<Series>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label);
std::string svg_bar_chart(const std::vector<double>& values,
                          const std::vector<std::string>& labels,
                          const std::string& title);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace heb
