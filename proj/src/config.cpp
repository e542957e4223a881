#include "heb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "nlohmann/json.hpp"

namespace heb {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ParseError("config: unknown key '" + key + "' in " + where);
        }
    }
}

}  // namespace

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config: " + path.string() + ": " + e.what());
    }
    check_keys(root, {"manifest", "out_dir", "seed", "preprocess", "augment", "split",
                      "metrics", "tts"},
               "top level");

    PipelineConfig cfg;
    fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path fp = p;
        return fp.is_relative() ? base / fp : fp;
    };

    if (root.contains("manifest")) cfg.manifest_path = resolve(root["manifest"]);
    if (root.contains("out_dir")) cfg.out_dir = resolve(root["out_dir"]);
    cfg.seed = root.value("seed", uint64_t{0});

    if (root.contains("preprocess")) {
        const auto& p = root["preprocess"];
        check_keys(p, {"auto_orient", "letterbox", "auto_contrast", "hist_equalize",
                       "bilateral"},
                   "preprocess");
        cfg.preprocess.auto_orient = p.value("auto_orient", true);
        if (p.contains("letterbox")) {
            const auto& lb = p["letterbox"];
            check_keys(lb, {"enabled", "target"}, "preprocess.letterbox");
            cfg.preprocess.letterbox = lb.value("enabled", true);
            cfg.preprocess.letterbox_target = lb.value("target", 640);
            if (cfg.preprocess.letterbox_target < 1) {
                throw ParseError("config: letterbox target must be positive");
            }
        }
        if (p.contains("auto_contrast")) {
            const auto& ac = p["auto_contrast"];
            check_keys(ac, {"enabled", "clip_percent"}, "preprocess.auto_contrast");
            cfg.preprocess.auto_contrast = ac.value("enabled", false);
            cfg.preprocess.contrast_clip_percent = ac.value("clip_percent", 1.0);
            if (cfg.preprocess.contrast_clip_percent < 0.0 ||
                cfg.preprocess.contrast_clip_percent >= 50.0) {
                throw ParseError("config: contrast clip_percent outside [0,50)");
            }
        }
        cfg.preprocess.hist_equalize = p.value("hist_equalize", false);
        if (p.contains("bilateral")) {
            const auto& bl = p["bilateral"];
            check_keys(bl, {"enabled", "sigma_space", "sigma_range"},
                       "preprocess.bilateral");
            cfg.preprocess.bilateral = bl.value("enabled", false);
            cfg.preprocess.bilateral_sigma_space = bl.value("sigma_space", 3.0);
            cfg.preprocess.bilateral_sigma_range = bl.value("sigma_range", 25.0);
            if (cfg.preprocess.bilateral_sigma_space <= 0.0 ||
                cfg.preprocess.bilateral_sigma_range <= 0.0) {
                throw ParseError("config: bilateral sigmas must be positive");
            }
        }
    }

    if (root.contains("augment")) {
        const auto& a = root["augment"];
        check_keys(a,
                   {"rotation_deg", "brightness_pct", "hue_pct", "saturation_pct",
                    "noise_frac_max", "flip_horizontal", "flip_vertical",
                    "gaussian_noise", "drop_threshold", "copies_per_image",
                    "keep_originals"},
                   "augment");
        cfg.augment.rotation_deg = a.value("rotation_deg", 15.0);
        cfg.augment.brightness_pct = a.value("brightness_pct", 15.0);
        cfg.augment.hue_pct = a.value("hue_pct", 15.0);
        cfg.augment.saturation_pct = a.value("saturation_pct", 31.0);
        cfg.augment.noise_frac_max = a.value("noise_frac_max", 0.018);
        cfg.augment.flip_horizontal = a.value("flip_horizontal", false);
        cfg.augment.flip_vertical = a.value("flip_vertical", false);
        cfg.augment.gaussian_noise = a.value("gaussian_noise", false);
        cfg.augment.drop_threshold = a.value("drop_threshold", 0.2);
        cfg.augment.copies_per_image = a.value("copies_per_image", 1);
        cfg.augment.keep_originals = a.value("keep_originals", true);
        if (cfg.augment.noise_frac_max < 0.0 || cfg.augment.noise_frac_max > 1.0) {
            throw ParseError("config: noise_frac_max outside [0,1]");
        }
        if (cfg.augment.copies_per_image < 1) {
            throw ParseError("config: copies_per_image must be >= 1");
        }
        if (std::abs(cfg.augment.rotation_deg) > 180.0) {
            throw ParseError("config: rotation_deg outside [0,180]");
        }
    }

    cfg.split.names = {"train", "val", "test"};
    cfg.split.ratios = {0.70, 0.15, 0.15};
    if (root.contains("split")) {
        const auto& s = root["split"];
        check_keys(s, {"names", "counts", "ratios", "seed"}, "split");
        if (s.contains("names")) cfg.split.names = s["names"].get<std::vector<std::string>>();
        if (s.contains("counts")) {
            cfg.split.counts = s["counts"].get<std::vector<size_t>>();
            cfg.split.ratios.clear();
        } else if (s.contains("ratios")) {
            cfg.split.ratios = s["ratios"].get<std::vector<double>>();
        }
        cfg.split.seed = s.value("seed", cfg.seed);
    } else {
        cfg.split.seed = cfg.seed;
    }
    cfg.augment.seed = cfg.seed;

    if (root.contains("metrics")) {
        const auto& m = root["metrics"];
        check_keys(m,
                   {"conf_threshold", "iou_threshold", "sweep_lo", "sweep_hi",
                    "include_background_in_train"},
                   "metrics");
        cfg.metrics.cm_conf_threshold = m.value("conf_threshold", 0.25);
        cfg.metrics.cm_iou_threshold = m.value("iou_threshold", 0.45);
        cfg.metrics.sweep_lo = m.value("sweep_lo", 0.50);
        cfg.metrics.sweep_hi = m.value("sweep_hi", 0.95);
        cfg.metrics.include_background_in_train =
            m.value("include_background_in_train", true);
    }

    if (root.contains("tts")) {
        const auto& t = root["tts"];
        check_keys(t, {"endpoint", "offline", "cache_dir"}, "tts");
        cfg.tts.endpoint = t.value("endpoint", std::string{});
        cfg.tts.offline = t.value("offline", true);
        if (t.contains("cache_dir")) cfg.tts.cache_dir = resolve(t["cache_dir"]);
    }
    return cfg;
}

}  // namespace heb
