#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "heb/metrics.hpp"
#include "heb/raster.hpp"
#include "heb/types.hpp"

namespace heb {

// Prediction-file corruption plan. Rates are dataset-global: exactly
// floor(rate * total_gt) boxes are dropped (FN) or planted (FP).
struct CorruptionSpec {
    double fp_rate = 0.0;
    double fn_rate = 0.0;
    double jitter = 0.0;  // fractional box perturbation; keep small for IoU > 0.5
};

struct SynthScene {
    Raster raster;
    std::vector<Annotation> gts;
    std::vector<Prediction> preds;
};

// Exact bookkeeping of the planted composition, the acceptance oracle's
// ground truth.
struct SynthLedger {
    int64_t scenes = 0;
    int64_t total_gt = 0;
    int64_t tp = 0;  // kept (possibly jittered) predictions
    int64_t fp = 0;  // planted spurious boxes
    int64_t fn = 0;  // dropped ground truths

    double precision() const {
        return (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    }
    double recall() const {
        return (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    }
};

struct SynthSpec {
    int n_scenes = 10;
    uint64_t seed = 0;
    CorruptionSpec corruption;
    int class_count = 22;
    int image_size = 320;
    int min_boxes = 3;
    int max_boxes = 8;
};

// Deterministic in-memory corpus: filled rectangles as stand-in glyphs on a
// textured background; ground truth exactly matches the rendered geometry.
// With all-zero corruption the predictions equal the ground truth at
// confidence 1.0.
std::vector<SynthScene> generate_scenes(const SynthSpec& spec, SynthLedger& ledger);

// Renders the corpus to disk: images/, labels/, predictions/, manifest.yaml
// and ledger.json under `out_dir`.
SynthLedger write_synth_corpus(const std::filesystem::path& out_dir,
                               const SynthSpec& spec);

// Scene list as an evaluation dataset (GT + predictions per image).
Dataset scenes_to_dataset(const std::vector<SynthScene>& scenes);

}  // namespace heb
