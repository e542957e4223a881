// hebpipe: corpus, preprocessing, augmentation, evaluation and speech
// pipeline for Hebrew-letter detection datasets.

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "heb/augment.hpp"
#include "heb/config.hpp"
#include "heb/image_io.hpp"
#include "heb/imageproc.hpp"
#include "heb/labels.hpp"
#include "heb/manifest.hpp"
#include "heb/metrics.hpp"
#include "heb/registry.hpp"
#include "heb/report.hpp"
#include "heb/rng.hpp"
#include "heb/speech.hpp"
#include "heb/synth.hpp"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitParse = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> default_class_names(int class_count) {
    std::vector<std::string> names;
    for (int c = 0; c < class_count; ++c) {
        names.push_back(class_count == heb::kLetterClassCount
                            ? heb::phonetic_name(c)
                            : "class_" + std::to_string(c));
    }
    return names;
}

// ---------------------------------------------------------------- stats ---

int cmd_stats(const fs::path& manifest_path, const fs::path& out_dir) {
    auto manifest = heb::parse_manifest(manifest_path);
    auto stats = heb::corpus_stats(manifest);

    fs::create_directories(out_dir);
    heb::write_text_file(out_dir / "stats.csv",
                         heb::stats_csv(stats, manifest.class_names));
    std::vector<double> values(stats.per_class.begin(), stats.per_class.end());
    heb::write_text_file(out_dir / "stats.svg",
                         heb::svg_bar_chart(values, manifest.class_names,
                                            "Annotations per class"));

    std::cout << "classes=" << manifest.class_count() << " annotations=" << stats.total
              << " labeled_images=" << stats.labeled_images
              << " background_images=" << stats.background_images << "\n";
    if (stats.min_class >= 0) {
        std::cout << "min_class=" << manifest.class_names[static_cast<size_t>(stats.min_class)]
                  << " (" << stats.per_class[static_cast<size_t>(stats.min_class)] << ")"
                  << " max_class=" << manifest.class_names[static_cast<size_t>(stats.max_class)]
                  << " (" << stats.per_class[static_cast<size_t>(stats.max_class)] << ")\n";
    }
    return kExitOk;
}

// -------------------------------------------------------------- prepare ---

struct PrepareItem {
    size_t record_index;
    int copy_index;  // -1 = original
    std::string name;
    std::string split;
};

heb::LoadedImage load_and_orient(const heb::DatasetRecord& rec,
                                 const heb::PreprocessConfig& pre) {
    auto loaded = heb::load_image(rec.image_path);
    if (pre.auto_orient && loaded.exif_orientation != 1) {
        loaded.raster = heb::auto_orient(loaded.raster, loaded.exif_orientation);
        loaded.exif_orientation = 1;
    }
    return loaded;
}

// preprocessing chain: contrast/equalize/bilateral on the raw frame, then
// letterbox (which transports the boxes)
heb::AugmentedImage preprocess(heb::Raster raster, std::vector<heb::Annotation> anns,
                               const heb::PreprocessConfig& pre) {
    if (pre.auto_contrast) raster = heb::auto_contrast(raster, pre.contrast_clip_percent);
    if (pre.hist_equalize) raster = heb::hist_equalize(raster);
    if (pre.bilateral) {
        raster = heb::bilateral_filter(raster, pre.bilateral_sigma_space,
                                       pre.bilateral_sigma_range);
    }
    if (pre.letterbox) {
        auto lb = heb::letterbox_resize(raster, anns, pre.letterbox_target);
        return {std::move(lb.raster), std::move(lb.annotations)};
    }
    return {std::move(raster), std::move(anns)};
}

int cmd_prepare(const heb::PipelineConfig& cfg, int jobs) {
    auto manifest = heb::parse_manifest(cfg.manifest_path);
    auto records = manifest.all_records();
    if (records.empty()) throw std::runtime_error("prepare: manifest has no records");

    // plan all output items up front so the split assignment and the run
    // manifest are independent of worker scheduling
    std::vector<PrepareItem> items;
    for (size_t r = 0; r < records.size(); ++r) {
        char prefix[16];
        std::snprintf(prefix, sizeof prefix, "%05zu_", r);
        std::string stem = records[r].image_path.stem().string();
        if (cfg.augment.keep_originals) {
            items.push_back({r, -1, prefix + stem, {}});
        }
        for (int k = 0; k < cfg.augment.copies_per_image; ++k) {
            items.push_back({r, k, prefix + stem + "_aug" + std::to_string(k), {}});
        }
    }

    auto counts = heb::resolve_split_counts(cfg.split, items.size());
    std::vector<size_t> order(items.size());
    std::iota(order.begin(), order.end(), size_t{0});
    heb::SplitMix64 rng(cfg.split.seed);
    for (size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.next_below(i)]);
    }
    size_t cursor = 0;
    for (size_t s = 0; s < cfg.split.names.size(); ++s) {
        for (size_t k = 0; k < counts[s]; ++k) {
            items[order[cursor++]].split = cfg.split.names[s];
        }
    }

    fs::create_directories(cfg.out_dir);
    for (const auto& split : cfg.split.names) {
        fs::create_directories(cfg.out_dir / split / "images");
        fs::create_directories(cfg.out_dir / split / "labels");
    }

    std::exception_ptr first_error;
    (void)jobs;
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < static_cast<int64_t>(items.size()); ++i) {
        if (first_error) continue;
        try {
            const auto& item = items[static_cast<size_t>(i)];
            const auto& rec = records[item.record_index];
            auto loaded = load_and_orient(rec, cfg.preprocess);
            std::vector<heb::Annotation> anns;
            if (!rec.background) {
                anns = heb::parse_label_file(read_file(rec.label_path),
                                             manifest.class_count());
            }
            auto processed = preprocess(std::move(loaded.raster), std::move(anns),
                                        cfg.preprocess);
            if (item.copy_index >= 0) {
                processed = heb::augment_record(
                    processed.raster, processed.annotations, cfg.augment,
                    item.record_index, static_cast<uint64_t>(item.copy_index));
            }
            fs::path split_dir = cfg.out_dir / item.split;
            heb::save_png(split_dir / "images" / (item.name + ".png"), processed.raster);
            heb::write_text_file(split_dir / "labels" / (item.name + ".txt"),
                                 heb::write_label_file(processed.annotations));
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) {
        heb::write_text_file(cfg.out_dir / "_PARTIAL",
                             "prepare aborted; output tree is incomplete\n");
        std::rethrow_exception(first_error);
    }

    // lineage + parameters, ordered by item index (scheduling-independent)
    json lineage = json::array();
    for (const auto& item : items) {
        lineage.push_back({{"source", records[item.record_index].image_path.string()},
                           {"output", item.split + "/images/" + item.name + ".png"},
                           {"copy", item.copy_index}});
    }
    json run{{"command", "prepare"},
             {"seed", cfg.seed},
             {"split_seed", cfg.split.seed},
             {"copies_per_image", cfg.augment.copies_per_image},
             {"keep_originals", cfg.augment.keep_originals},
             {"items", items.size()},
             {"lineage", lineage}};
    heb::write_text_file(cfg.out_dir / "run_manifest.json", run.dump(2) + "\n");

    std::cout << "prepared " << items.size() << " items into " << cfg.out_dir.string()
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- split ---

int cmd_split(const fs::path& manifest_path, heb::SplitSpec spec, const fs::path& out_dir) {
    auto manifest = heb::parse_manifest(manifest_path);
    auto records = manifest.all_records();
    auto parts = heb::split_dataset(records, spec);
    fs::create_directories(out_dir);
    for (const auto& [name, recs] : parts) {
        std::string listing;
        for (const auto& r : recs) listing += r.image_path.string() + "\n";
        heb::write_text_file(out_dir / (name + ".txt"), listing);
        std::cout << name << "=" << recs.size() << " ";
    }
    std::cout << "\n";
    return kExitOk;
}

// ------------------------------------------------------------- eval-det ---

heb::Dataset load_detection_dataset(const fs::path& gt_dir, const fs::path& pred_dir,
                                    int class_count) {
    if (!fs::is_directory(gt_dir)) {
        throw heb::ParseError("eval-det: ground-truth directory not found: " +
                              gt_dir.string());
    }
    std::vector<fs::path> gt_files;
    for (const auto& e : fs::directory_iterator(gt_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") {
            gt_files.push_back(e.path());
        }
    }
    std::sort(gt_files.begin(), gt_files.end());
    if (gt_files.empty()) {
        throw heb::ParseError("eval-det: no ground-truth label files in " +
                              gt_dir.string());
    }

    std::set<std::string> gt_stems;
    heb::Dataset dataset;
    for (const auto& gt_path : gt_files) {
        gt_stems.insert(gt_path.stem().string());
        heb::ImageSample sample;
        sample.gts = heb::parse_label_file(read_file(gt_path), class_count);
        fs::path pred_path = pred_dir / gt_path.filename();
        if (fs::is_regular_file(pred_path)) {
            sample.preds = heb::parse_prediction_file(read_file(pred_path), class_count);
        } else {
            // scored as all-FN rather than skipped
            std::cerr << "warning: missing prediction file for "
                      << gt_path.filename().string() << ", scoring as all-FN\n";
        }
        dataset.push_back(std::move(sample));
    }
    if (fs::is_directory(pred_dir)) {
        for (const auto& e : fs::directory_iterator(pred_dir)) {
            if (e.is_regular_file() && e.path().extension() == ".txt" &&
                !gt_stems.count(e.path().stem().string())) {
                std::cerr << "warning: prediction file " << e.path().filename().string()
                          << " has no ground truth, excluded\n";
            }
        }
    }
    return dataset;
}

int cmd_eval_det(const fs::path& gt_dir, const fs::path& pred_dir, int class_count,
                 const fs::path& out_dir, const heb::MetricsConfig& metrics) {
    auto dataset = load_detection_dataset(gt_dir, pred_dir, class_count);
    auto report = heb::evaluate_detections(dataset, class_count, metrics.sweep_lo,
                                           metrics.sweep_hi, metrics.cm_conf_threshold,
                                           metrics.cm_iou_threshold);
    auto names = default_class_names(class_count);

    fs::create_directories(out_dir);
    heb::write_text_file(out_dir / "per_class_ap.csv", heb::per_class_ap_csv(report, names));
    heb::write_text_file(out_dir / "curves.csv", heb::curves_csv(report.curves));
    heb::write_text_file(out_dir / "confusion.csv",
                         heb::confusion_csv(report.confusion, names, false));
    heb::write_text_file(out_dir / "confusion_normalized.csv",
                         heb::confusion_csv(report.confusion, names, true));
    heb::write_text_file(
        out_dir / "curves.svg",
        heb::svg_line_chart({{"precision", report.curves.confidence, report.curves.precision},
                             {"recall", report.curves.confidence, report.curves.recall},
                             {"f1", report.curves.confidence, report.curves.f1}},
                            "Metrics vs confidence", "confidence", "value"));
    std::string summary = heb::summary_line(report);
    heb::write_text_file(out_dir / "summary.txt", summary + "\n");
    std::cout << summary << "\n";
    return kExitOk;
}

// ------------------------------------------------------------- eval-cls ---

int cmd_eval_cls(const fs::path& pred_file, int k, const fs::path& out_dir) {
    std::string text = read_file(pred_file);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    size_t class_count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int truth;
        if (!(ls >> truth)) {
            throw heb::ParseError("eval-cls: bad true label at line " +
                                  std::to_string(line_no));
        }
        std::vector<double> scores;
        double v;
        while (ls >> v) scores.push_back(v);
        if (scores.empty()) {
            throw heb::ParseError("eval-cls: no scores at line " + std::to_string(line_no));
        }
        if (class_count == 0) class_count = scores.size();
        if (scores.size() != class_count) {
            throw heb::ParseError("eval-cls: score row length mismatch at line " +
                                  std::to_string(line_no));
        }
        if (truth < 0 || static_cast<size_t>(truth) >= class_count) {
            throw heb::ParseError("eval-cls: true label out of range at line " +
                                  std::to_string(line_no));
        }
        rows.push_back(std::move(scores));
        labels.push_back(truth);
    }
    if (rows.empty()) throw heb::ParseError("eval-cls: empty prediction file");

    if (k > static_cast<int>(class_count)) {
        std::cerr << "warning: k=" << k << " clamped to class count " << class_count
                  << "\n";
        k = static_cast<int>(class_count);
    }
    double top1 = heb::topk_accuracy(rows, labels, 1);
    double topk = heb::topk_accuracy(rows, labels, k);

    std::vector<int> predicted;
    for (const auto& row : rows) {
        predicted.push_back(static_cast<int>(
            std::max_element(row.begin(), row.end()) - row.begin()));
    }
    auto confusion =
        heb::cls_confusion_matrix(predicted, labels, static_cast<int>(class_count));
    auto names = default_class_names(static_cast<int>(class_count));

    fs::create_directories(out_dir);
    heb::write_text_file(out_dir / "cls_confusion.csv",
                         heb::confusion_csv(confusion.matrix, names, false));
    heb::write_text_file(out_dir / "cls_confusion_normalized.csv",
                         heb::confusion_csv(confusion.matrix, names, true));

    char buf[96];
    std::snprintf(buf, sizeof buf, "top1=%.6f top%d=%.6f", top1, k, topk);
    heb::write_text_file(out_dir / "cls_summary.txt", std::string(buf) + "\n");
    std::cout << buf << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- synth ---

int cmd_synth(const heb::SynthSpec& spec, const fs::path& out_dir) {
    auto ledger = heb::write_synth_corpus(out_dir, spec);
    json run{{"command", "synth"},
             {"seed", spec.seed},
             {"scenes", spec.n_scenes},
             {"image_size", spec.image_size},
             {"class_count", spec.class_count},
             {"fp_rate", spec.corruption.fp_rate},
             {"fn_rate", spec.corruption.fn_rate},
             {"jitter", spec.corruption.jitter}};
    heb::write_text_file(out_dir / "run_manifest.json", run.dump(2) + "\n");
    std::cout << "scenes=" << ledger.scenes << " gt=" << ledger.total_gt
              << " tp=" << ledger.tp << " fp=" << ledger.fp << " fn=" << ledger.fn
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- speak ---

void draw_box_outline(heb::Raster& img, const heb::BBoxNorm& box, int class_id) {
    static const uint8_t palette[8][3] = {
        {230, 30, 30},  {30, 180, 30},  {30, 60, 230}, {230, 180, 30},
        {180, 30, 180}, {30, 180, 180}, {230, 120, 30}, {120, 120, 230},
    };
    const uint8_t* color = palette[class_id % 8];
    int x1 = std::clamp(static_cast<int>((box.cx - box.w / 2) * img.width), 0, img.width - 1);
    int x2 = std::clamp(static_cast<int>((box.cx + box.w / 2) * img.width), 0, img.width - 1);
    int y1 = std::clamp(static_cast<int>((box.cy - box.h / 2) * img.height), 0, img.height - 1);
    int y2 = std::clamp(static_cast<int>((box.cy + box.h / 2) * img.height), 0, img.height - 1);
    for (int t = 0; t < 2; ++t) {
        for (int x = x1; x <= x2; ++x) {
            for (int y : {std::min(y1 + t, img.height - 1), std::max(y2 - t, 0)}) {
                uint8_t* p = img.at(x, y);
                p[0] = color[0]; p[1] = color[1]; p[2] = color[2];
            }
        }
        for (int y = y1; y <= y2; ++y) {
            for (int x : {std::min(x1 + t, img.width - 1), std::max(x2 - t, 0)}) {
                uint8_t* p = img.at(x, y);
                p[0] = color[0]; p[1] = color[1]; p[2] = color[2];
            }
        }
    }
}

int cmd_speak(const fs::path& pred_file, const fs::path& image_path, double conf_threshold,
              bool dedupe, const fs::path& out_dir) {
    auto preds = heb::parse_prediction_file(read_file(pred_file), heb::kLetterClassCount);

    auto cfg = heb::TtsConfig::from_env();
    if (cfg.endpoint.empty()) cfg.offline = true;
    cfg.cache_dir = out_dir / "tts-cache";
    heb::TtsClient client(cfg);

    auto playlist = heb::speak_detections(client, preds, conf_threshold, dedupe);

    fs::create_directories(out_dir);
    std::string listing;
    bool any_error = false;
    for (size_t i = 0; i < playlist.size(); ++i) {
        const auto& item = playlist[i];
        listing += std::to_string(i) + " " + item.label + " ";
        if (item.ok) {
            listing += item.asset.path.string();
        } else {
            listing += "ERROR " + item.error;
            any_error = true;
        }
        listing += "\n";
    }
    heb::write_text_file(out_dir / "playlist.txt", listing);

    if (!image_path.empty()) {
        auto loaded = heb::load_image(image_path);
        if (loaded.exif_orientation != 1) {
            loaded.raster = heb::auto_orient(loaded.raster, loaded.exif_orientation);
        }
        for (const auto& item : playlist) {
            draw_box_outline(loaded.raster, item.pred.box, item.pred.class_id);
        }
        heb::save_png(out_dir / "overlay.png", loaded.raster);
    }
    std::cout << "playlist items=" << playlist.size() << "\n";
    return any_error ? kExitRuntime : kExitOk;
}

// --------------------------------------------------------------- report ---

int cmd_report(const fs::path& csv_path, const fs::path& out_dir) {
    std::string text = read_file(csv_path);
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);

    std::vector<std::vector<std::string>> cells;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        cells.push_back(std::move(row));
    }

    fs::create_directories(out_dir);
    fs::path out = out_dir / (csv_path.stem().string() + ".svg");
    if (header.rfind("confidence,", 0) == 0) {
        std::vector<double> x, p, r, f;
        for (const auto& row : cells) {
            x.push_back(std::stod(row[0]));
            p.push_back(std::stod(row[1]));
            r.push_back(std::stod(row[2]));
            f.push_back(std::stod(row[3]));
        }
        heb::write_text_file(out, heb::svg_line_chart({{"precision", x, p},
                                                       {"recall", x, r},
                                                       {"f1", x, f}},
                                                      "Metrics vs confidence",
                                                      "confidence", "value"));
    } else if (header.rfind("epoch_or_batch,", 0) == 0) {
        std::vector<double> x, box, cls, dfl;
        for (size_t i = 0; i < cells.size(); ++i) {
            x.push_back(static_cast<double>(i));
            box.push_back(std::stod(cells[i][1]));
            cls.push_back(std::stod(cells[i][2]));
            dfl.push_back(std::stod(cells[i][3]));
        }
        heb::write_text_file(out, heb::svg_line_chart({{"box_loss", x, box},
                                                       {"cls_loss", x, cls},
                                                       {"dfl_loss", x, dfl}},
                                                      "Training losses",
                                                      "epoch_or_batch", "loss"));
    } else if (header.rfind("class_id,", 0) == 0) {
        std::vector<double> values;
        std::vector<std::string> labels;
        for (const auto& row : cells) {
            labels.push_back(row[1]);
            values.push_back(std::stod(row.back() == "NA" ? "0" : row.back()));
        }
        heb::write_text_file(out, heb::svg_bar_chart(values, labels, csv_path.stem().string()));
    } else {
        throw heb::ParseError("report: unrecognized CSV schema in " + csv_path.string());
    }
    std::cout << "wrote " << out.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hebrew-letter detection dataset & evaluation pipeline"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    int jobs = 0;
    std::string out_dir = "out";
    std::string config_path;
    app.add_option("--seed", seed, "PRNG seed");
    app.add_option("--jobs", jobs, "worker threads (0 = library default)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--config", config_path, "pipeline config JSON");

    auto* stats = app.add_subcommand("stats", "per-class annotation histogram");
    std::string stats_manifest;
    stats->add_option("--manifest", stats_manifest, "dataset manifest YAML");

    auto* prepare = app.add_subcommand("prepare", "preprocess + augment + split corpus");

    auto* split = app.add_subcommand("split", "deterministic dataset split lists");
    std::string split_manifest;
    std::vector<size_t> split_counts;
    std::vector<double> split_ratios;
    split->add_option("--manifest", split_manifest, "dataset manifest YAML");
    split->add_option("--counts", split_counts, "train val test counts");
    split->add_option("--ratios", split_ratios, "train val test ratios");

    auto* eval_det = app.add_subcommand("eval-det", "detection evaluation report");
    std::string gt_dir, pred_dir;
    int classes = heb::kLetterClassCount;
    double cm_conf = 0.25, cm_iou = 0.45, sweep_lo = 0.50, sweep_hi = 0.95;
    eval_det->add_option("--gt", gt_dir, "ground-truth label directory")->required();
    eval_det->add_option("--pred", pred_dir, "prediction file directory")->required();
    eval_det->add_option("--classes", classes, "class count");
    eval_det->add_option("--cm-conf", cm_conf, "confusion matrix confidence threshold");
    eval_det->add_option("--cm-iou", cm_iou, "confusion matrix IoU threshold");
    eval_det->add_option("--sweep-lo", sweep_lo, "mAP sweep lower IoU bound");
    eval_det->add_option("--sweep-hi", sweep_hi, "mAP sweep upper IoU bound");

    auto* eval_cls = app.add_subcommand("eval-cls", "classification accuracy report");
    std::string cls_pred_file;
    int topk = 5;
    eval_cls->add_option("--pred", cls_pred_file, "classification prediction file")
        ->required();
    eval_cls->add_option("--k", topk, "top-k rank");

    auto* synth = app.add_subcommand("synth", "synthetic glyph corpus generator");
    int n_scenes = 10, image_size = 320, synth_classes = heb::kLetterClassCount;
    double fp_rate = 0.0, fn_rate = 0.0, jitter = 0.0;
    synth->add_option("--scenes", n_scenes, "number of scenes");
    synth->add_option("--size", image_size, "image size in pixels");
    synth->add_option("--classes", synth_classes, "class count");
    synth->add_option("--fp-rate", fp_rate, "planted false-positive rate");
    synth->add_option("--fn-rate", fn_rate, "planted false-negative rate");
    synth->add_option("--jitter", jitter, "box jitter fraction");

    auto* speak = app.add_subcommand("speak", "phonetic playlist for detections");
    std::string speak_pred, speak_image;
    double speak_conf = 0.25;
    bool dedupe = false;
    speak->add_option("--pred", speak_pred, "prediction file")->required();
    speak->add_option("--image", speak_image, "image to overlay boxes on");
    speak->add_option("--conf", speak_conf, "confidence threshold");
    speak->add_flag("--dedupe", dedupe, "one asset per unique letter");

    auto* report = app.add_subcommand("report", "render SVG charts from a report CSV");
    std::string report_csv;
    report->add_option("--csv", report_csv, "curves / loss / stats CSV")->required();

    CLI11_PARSE(app, argc, argv);

    if (jobs > 0) omp_set_num_threads(jobs);

    try {
        if (stats->parsed()) {
            fs::path manifest = stats_manifest;
            if (manifest.empty() && !config_path.empty()) {
                manifest = heb::load_pipeline_config(config_path).manifest_path;
            }
            if (manifest.empty()) throw heb::ParseError("stats: --manifest or --config required");
            return cmd_stats(manifest, out_dir);
        }
        if (prepare->parsed()) {
            if (config_path.empty()) throw heb::ParseError("prepare: --config required");
            auto cfg = heb::load_pipeline_config(config_path);
            if (app.count("--seed")) {
                cfg.seed = seed;
                cfg.split.seed = seed;
                cfg.augment.seed = seed;
            }
            if (app.count("--out")) cfg.out_dir = out_dir;
            return cmd_prepare(cfg, jobs);
        }
        if (split->parsed()) {
            if (split_manifest.empty()) throw heb::ParseError("split: --manifest required");
            heb::SplitSpec spec;
            spec.names = {"train", "val", "test"};
            spec.counts = split_counts;
            spec.ratios = split_counts.empty()
                              ? (split_ratios.empty() ? std::vector<double>{0.70, 0.15, 0.15}
                                                      : split_ratios)
                              : std::vector<double>{};
            spec.seed = seed;
            return cmd_split(split_manifest, spec, out_dir);
        }
        if (eval_det->parsed()) {
            heb::MetricsConfig metrics;
            metrics.cm_conf_threshold = cm_conf;
            metrics.cm_iou_threshold = cm_iou;
            metrics.sweep_lo = sweep_lo;
            metrics.sweep_hi = sweep_hi;
            return cmd_eval_det(gt_dir, pred_dir, classes, out_dir, metrics);
        }
        if (eval_cls->parsed()) return cmd_eval_cls(cls_pred_file, topk, out_dir);
        if (synth->parsed()) {
            heb::SynthSpec spec;
            spec.n_scenes = n_scenes;
            spec.seed = seed;
            spec.corruption = {fp_rate, fn_rate, jitter};
            spec.class_count = synth_classes;
            spec.image_size = image_size;
            return cmd_synth(spec, out_dir);
        }
        if (speak->parsed()) {
            return cmd_speak(speak_pred, speak_image, speak_conf, dedupe, out_dir);
        }
        if (report->parsed()) return cmd_report(report_csv, out_dir);
    } catch (const heb::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
