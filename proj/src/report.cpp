#include "heb/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace heb {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string per_class_ap_csv(const EvalReport& report,
                             const std::vector<std::string>& class_names) {
    std::string out = "class_id,class_name,gt_count,ap50\n";
    for (const auto& c : report.per_class_ap) {
        std::string name = static_cast<size_t>(c.class_id) < class_names.size()
                               ? class_names[static_cast<size_t>(c.class_id)]
                               : std::to_string(c.class_id);
        out += std::to_string(c.class_id) + "," + name + "," +
               std::to_string(c.gt_count) + "," +
               (std::isnan(c.ap) ? std::string("NA") : fmt(c.ap)) + "\n";
    }
    return out;
}

std::string curves_csv(const ConfidenceCurves& curves) {
    std::string out = "confidence,precision,recall,f1\n";
    for (size_t i = 0; i < curves.confidence.size(); ++i) {
        out += fmt(curves.confidence[i]) + "," + fmt(curves.precision[i]) + "," +
               fmt(curves.recall[i]) + "," + fmt(curves.f1[i]) + "\n";
    }
    return out;
}

std::string confusion_csv(const ConfusionMatrix& cm,
                          const std::vector<std::string>& class_names,
                          bool normalized) {
    auto name_of = [&](int c) -> std::string {
        if (c == cm.background()) return "background";
        if (static_cast<size_t>(c) < class_names.size())
            return class_names[static_cast<size_t>(c)];
        return std::to_string(c);
    };
    std::string out = "predicted\\true";
    for (int c = 0; c <= cm.class_count; ++c) out += "," + name_of(c);
    out += "\n";

    std::vector<int64_t> col_sums(static_cast<size_t>(cm.class_count) + 1, 0);
    if (normalized) {
        for (int t = 0; t <= cm.class_count; ++t) {
            for (int p = 0; p <= cm.class_count; ++p) {
                col_sums[static_cast<size_t>(t)] += cm.at(p, t);
            }
        }
    }
    for (int p = 0; p <= cm.class_count; ++p) {
        out += name_of(p);
        for (int t = 0; t <= cm.class_count; ++t) {
            if (normalized) {
                double denom = static_cast<double>(col_sums[static_cast<size_t>(t)]);
                out += "," + fmt(denom > 0.0 ? cm.at(p, t) / denom : 0.0);
            } else {
                out += "," + std::to_string(cm.at(p, t));
            }
        }
        out += "\n";
    }
    return out;
}

std::string stats_csv(const CorpusStats& stats,
                      const std::vector<std::string>& class_names) {
    std::string out = "class_id,class_name,annotations\n";
    for (size_t c = 0; c < stats.per_class.size(); ++c) {
        std::string name = c < class_names.size() ? class_names[c] : std::to_string(c);
        out += std::to_string(c) + "," + name + "," +
               std::to_string(stats.per_class[c]) + "\n";
    }
    return out;
}

std::string summary_line(const EvalReport& report) {
    char hi[16], lo[16];
    std::snprintf(lo, sizeof lo, "%.0f", report.sweep_lo * 100);
    std::snprintf(hi, sizeof hi, "%.0f", report.sweep_hi * 100);
    return "P=" + fmt3(report.precision) + " R=" + fmt3(report.recall) +
           " mAP50=" + fmt3(report.map50) + " mAP" + lo + "-" + hi + "=" +
           fmt3(report.map_sweep);
}

std::string loss_csv(const std::vector<LossRow>& rows) {
    std::string out = "epoch_or_batch,box_loss,cls_loss,dfl_loss\n";
    for (const auto& r : rows) {
        out += r.label + "," + fmt(r.box_loss) + "," + fmt(r.cls_loss) + "," +
               fmt(r.dfl_loss) + "\n";
    }
    return out;
}

namespace {

constexpr int kW = 800;
constexpr int kH = 500;
constexpr int kMargin = 60;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b"};

std::string svg_header(const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kW) +
           "\" height=\"" + std::to_string(kH) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           "<text x=\"" +
           std::to_string(kW / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + title + "</text>\n";
}

}  // namespace

std::string svg_line_chart(const std::vector<Series>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label) {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                min_x = max_x = s.x[i];
                min_y = max_y = s.y[i];
                first = false;
            }
            min_x = std::min(min_x, s.x[i]);
            max_x = std::max(max_x, s.x[i]);
            min_y = std::min(min_y, s.y[i]);
            max_y = std::max(max_y, s.y[i]);
        }
    }
    if (max_x == min_x) max_x = min_x + 1.0;
    if (max_y == min_y) max_y = min_y + 1.0;

    auto px = [&](double x) {
        return kMargin + (x - min_x) / (max_x - min_x) * (kW - 2 * kMargin);
    };
    auto py = [&](double y) {
        return kH - kMargin - (y - min_y) / (max_y - min_y) * (kH - 2 * kMargin);
    };

    std::string svg = svg_header(title);
    svg += "<line x1=\"" + fmt(px(min_x)) + "\" y1=\"" + fmt(py(min_y)) + "\" x2=\"" +
           fmt(px(max_x)) + "\" y2=\"" + fmt(py(min_y)) +
           "\" stroke=\"black\"/>\n<line x1=\"" + fmt(px(min_x)) + "\" y1=\"" +
           fmt(py(min_y)) + "\" x2=\"" + fmt(px(min_x)) + "\" y2=\"" + fmt(py(max_y)) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(kW / 2) + "\" y=\"" + std::to_string(kH - 16) +
           "\" text-anchor=\"middle\">" + x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + std::to_string(kH / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           std::to_string(kH / 2) + ")\">" + y_label + "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 6];
        std::string pts;
        for (size_t i = 0; i < series[s].x.size(); ++i) {
            pts += fmt(px(series[s].x[i])) + "," + fmt(py(series[s].y[i])) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + std::to_string(kW - kMargin + 4) + "\" y=\"" +
               std::to_string(kMargin + 16 * static_cast<int>(s)) + "\" fill=\"" + color +
               "\">" + series[s].name + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string svg_bar_chart(const std::vector<double>& values,
                          const std::vector<std::string>& labels,
                          const std::string& title) {
    double max_v = 1.0;
    for (double v : values) max_v = std::max(max_v, v);
    size_t n = std::max<size_t>(values.size(), 1);
    double slot = static_cast<double>(kW - 2 * kMargin) / static_cast<double>(n);

    std::string svg = svg_header(title);
    for (size_t i = 0; i < values.size(); ++i) {
        double h = values[i] / max_v * (kH - 2 * kMargin);
        double x = kMargin + slot * static_cast<double>(i) + slot * 0.1;
        double y = kH - kMargin - h;
        svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
               fmt(slot * 0.8) + "\" height=\"" + fmt(h) + "\" fill=\"#1f77b4\"/>\n";
        if (i < labels.size()) {
            svg += "<text x=\"" + fmt(x + slot * 0.4) + "\" y=\"" +
                   std::to_string(kH - kMargin + 14) + "\" text-anchor=\"middle\">" +
                   labels[i] + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace heb
