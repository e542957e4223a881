#pragma once

#include <filesystem>
#include <string>

#include "heb/augment.hpp"
#include "heb/manifest.hpp"

namespace heb {

struct PreprocessConfig {
    bool auto_orient = true;
    bool letterbox = true;
    int letterbox_target = 640;
    bool auto_contrast = false;
    double contrast_clip_percent = 1.0;
    bool hist_equalize = false;
    bool bilateral = false;
    double bilateral_sigma_space = 3.0;
    double bilateral_sigma_range = 25.0;
};

struct MetricsConfig {
    double cm_conf_threshold = 0.25;
    double cm_iou_threshold = 0.45;
    double sweep_lo = 0.50;
    double sweep_hi = 0.95;
    bool include_background_in_train = true;
};

struct TtsFileConfig {
    std::string endpoint;
    bool offline = true;
    std::filesystem::path cache_dir = "tts-cache";
};

struct PipelineConfig {
    std::filesystem::path manifest_path;
    std::filesystem::path out_dir = "out";
    uint64_t seed = 0;
    PreprocessConfig preprocess;
    AugmentSpec augment;
    SplitSpec split;
    MetricsConfig metrics;
    TtsFileConfig tts;
};

// JSON config file; unknown keys are rejected to catch typos. Paths are
// resolved relative to the config file. Throws ParseError on structural
// problems or parameter values outside module preconditions.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace heb
