#include "heb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "heb/image_io.hpp"
#include "heb/labels.hpp"
#include "heb/registry.hpp"
#include "heb/report.hpp"
#include "heb/rng.hpp"
#include "nlohmann/json.hpp"

namespace heb {

namespace fs = std::filesystem;

namespace {

constexpr uint64_t kSceneStream = 0x5C;
constexpr uint64_t kDropStream = 0xD0;
constexpr uint64_t kJitterStream = 0x71;
constexpr uint64_t kFpStream = 0xFB;

const uint8_t kGlyphPalette[8][3] = {
    {20, 20, 20},   {160, 30, 30},  {30, 110, 30}, {30, 40, 150},
    {140, 110, 20}, {110, 30, 120}, {20, 110, 110}, {90, 60, 20},
};

struct PixelRect {
    int x, y, w, h;
};

bool rects_touch(const PixelRect& a, const PixelRect& b, int gap) {
    return a.x < b.x + b.w + gap && b.x < a.x + a.w + gap &&
           a.y < b.y + b.h + gap && b.y < a.y + a.h + gap;
}

BBoxNorm rect_to_norm(const PixelRect& r, int size) {
    return BBoxNorm{(r.x + r.w / 2.0) / size, (r.y + r.h / 2.0) / size,
                    static_cast<double>(r.w) / size, static_cast<double>(r.h) / size};
}

// Per-scene ground truth geometry; rendering happens later so corruption
// can be planned globally first.
struct SceneLayout {
    std::vector<PixelRect> rects;
    std::vector<int> classes;
};

SceneLayout layout_scene(const SynthSpec& spec, uint64_t scene_index) {
    SplitMix64 rng(mix_seed(spec.seed, kSceneStream, scene_index));
    SceneLayout layout;
    int n_boxes = spec.min_boxes +
                  static_cast<int>(rng.next_below(
                      static_cast<uint64_t>(spec.max_boxes - spec.min_boxes + 1)));
    int s = spec.image_size;
    for (int b = 0; b < n_boxes; ++b) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            PixelRect r;
            r.w = s / 10 + static_cast<int>(rng.next_below(static_cast<uint64_t>(s / 8)));
            r.h = s / 10 + static_cast<int>(rng.next_below(static_cast<uint64_t>(s / 8)));
            r.x = static_cast<int>(rng.next_below(static_cast<uint64_t>(s - r.w)));
            r.y = static_cast<int>(rng.next_below(static_cast<uint64_t>(s - r.h)));
            bool clash = false;
            for (const auto& other : layout.rects) {
                if (rects_touch(r, other, 4)) {
                    clash = true;
                    break;
                }
            }
            if (!clash) {
                layout.rects.push_back(r);
                layout.classes.push_back(static_cast<int>(
                    rng.next_below(static_cast<uint64_t>(spec.class_count))));
                break;
            }
        }
    }
    return layout;
}

Raster render_scene(const SynthSpec& spec, uint64_t scene_index,
                    const SceneLayout& layout) {
    SplitMix64 rng(mix_seed(spec.seed, kSceneStream + 1, scene_index));
    int s = spec.image_size;
    Raster img(s, s);
    for (size_t i = 0; i < img.pixels.size(); i += 3) {
        uint8_t g = static_cast<uint8_t>(90 + rng.next_below(80));
        img.pixels[i] = img.pixels[i + 1] = img.pixels[i + 2] = g;
    }
    for (size_t b = 0; b < layout.rects.size(); ++b) {
        const auto& r = layout.rects[b];
        const uint8_t* color = kGlyphPalette[layout.classes[b] % 8];
        for (int y = r.y; y < r.y + r.h; ++y) {
            for (int x = r.x; x < r.x + r.w; ++x) {
                uint8_t* p = img.at(x, y);
                p[0] = color[0];
                p[1] = color[1];
                p[2] = color[2];
            }
        }
    }
    return img;
}

double iou_norm(const BBoxNorm& a, const BBoxNorm& b) { return iou(a, b); }

// Jittered copy guaranteed to keep IoU comfortably above the 0.5 matching
// threshold (jitter is halved until the margin holds).
BBoxNorm jitter_box(const BBoxNorm& gt, double jitter, SplitMix64& rng) {
    double dx = rng.next_in(-1.0, 1.0);
    double dy = rng.next_in(-1.0, 1.0);
    double dw = rng.next_in(-1.0, 1.0);
    double dh = rng.next_in(-1.0, 1.0);
    double j = jitter;
    for (;;) {
        BBoxNorm b{gt.cx + j * gt.w * dx, gt.cy + j * gt.h * dy,
                   gt.w * (1.0 + j * dw), gt.h * (1.0 + j * dh)};
        b = clamp_box(b);
        if (j == 0.0 || iou_norm(b, gt) > 0.55) return b;
        j /= 2.0;
        if (j < 1e-9) return gt;
    }
}

BBoxNorm sample_fp_box(const std::vector<Annotation>& gts, SplitMix64& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        double scale = attempt < 100 ? 1.0 : 0.25;
        BBoxNorm b{rng.next_in(0.1, 0.9), rng.next_in(0.1, 0.9),
                   rng.next_in(0.05, 0.2) * scale, rng.next_in(0.05, 0.2) * scale};
        b = clamp_box(b);
        bool clear = true;
        for (const auto& g : gts) {
            if (iou_norm(b, g.box) >= 0.3) {
                clear = false;
                break;
            }
        }
        if (clear) return b;
    }
    // vanishingly small box cannot reach IoU 0.3 against any glyph-sized GT
    return BBoxNorm{rng.next_in(0.1, 0.9), rng.next_in(0.1, 0.9), 0.01, 0.01};
}

}  // namespace

std::vector<SynthScene> generate_scenes(const SynthSpec& spec, SynthLedger& ledger) {
    if (spec.corruption.fp_rate < 0 || spec.corruption.fp_rate > 1 ||
        spec.corruption.fn_rate < 0 || spec.corruption.fn_rate > 1) {
        throw std::invalid_argument("corruption rates must be in [0,1]");
    }
    ledger = SynthLedger{};
    ledger.scenes = spec.n_scenes;

    std::vector<SceneLayout> layouts(static_cast<size_t>(spec.n_scenes));
    for (int i = 0; i < spec.n_scenes; ++i) {
        layouts[static_cast<size_t>(i)] = layout_scene(spec, static_cast<uint64_t>(i));
        ledger.total_gt += static_cast<int64_t>(layouts[static_cast<size_t>(i)].rects.size());
    }

    // global corruption plan: exactly floor(rate * total) drops and plants
    auto fn_total = static_cast<int64_t>(
        std::floor(spec.corruption.fn_rate * static_cast<double>(ledger.total_gt)));
    auto fp_total = static_cast<int64_t>(
        std::floor(spec.corruption.fp_rate * static_cast<double>(ledger.total_gt)));

    std::vector<size_t> gt_global(static_cast<size_t>(ledger.total_gt));
    std::iota(gt_global.begin(), gt_global.end(), size_t{0});
    SplitMix64 drop_rng(mix_seed(spec.seed, kDropStream, 0));
    for (size_t i = gt_global.size(); i > 1; --i) {
        std::swap(gt_global[i - 1], gt_global[drop_rng.next_below(i)]);
    }
    std::vector<bool> dropped(static_cast<size_t>(ledger.total_gt), false);
    for (int64_t i = 0; i < fn_total; ++i) dropped[gt_global[static_cast<size_t>(i)]] = true;

    std::vector<SynthScene> scenes(static_cast<size_t>(spec.n_scenes));
    size_t global_index = 0;
    for (int i = 0; i < spec.n_scenes; ++i) {
        auto& scene = scenes[static_cast<size_t>(i)];
        const auto& layout = layouts[static_cast<size_t>(i)];
        scene.raster = render_scene(spec, static_cast<uint64_t>(i), layout);
        for (size_t b = 0; b < layout.rects.size(); ++b) {
            BBoxNorm gt = rect_to_norm(layout.rects[b], spec.image_size);
            scene.gts.push_back(Annotation{layout.classes[b], gt});
            if (dropped[global_index]) {
                ++ledger.fn;
            } else {
                SplitMix64 jit_rng(mix_seed(spec.seed, kJitterStream, global_index));
                BBoxNorm pb = spec.corruption.jitter > 0.0
                                  ? jitter_box(gt, spec.corruption.jitter, jit_rng)
                                  : gt;
                double conf = spec.corruption.jitter > 0.0 ||
                                      spec.corruption.fp_rate > 0.0 ||
                                      spec.corruption.fn_rate > 0.0
                                  ? 0.6 + 0.4 * jit_rng.next_unit()
                                  : 1.0;
                scene.preds.push_back(Prediction{layout.classes[b], pb, conf});
                ++ledger.tp;
            }
            ++global_index;
        }
    }

    for (int64_t j = 0; j < fp_total; ++j) {
        auto& scene = scenes[static_cast<size_t>(j % spec.n_scenes)];
        SplitMix64 fp_rng(mix_seed(spec.seed, kFpStream, static_cast<uint64_t>(j)));
        BBoxNorm box = sample_fp_box(scene.gts, fp_rng);
        int cls = static_cast<int>(fp_rng.next_below(static_cast<uint64_t>(spec.class_count)));
        scene.preds.push_back(Prediction{cls, box, 0.6 + 0.4 * fp_rng.next_unit()});
        ++ledger.fp;
    }
    return scenes;
}

Dataset scenes_to_dataset(const std::vector<SynthScene>& scenes) {
    Dataset dataset;
    dataset.reserve(scenes.size());
    for (const auto& s : scenes) dataset.push_back(ImageSample{s.gts, s.preds});
    return dataset;
}

SynthLedger write_synth_corpus(const fs::path& out_dir, const SynthSpec& spec) {
    SynthLedger ledger;
    auto scenes = generate_scenes(spec, ledger);

    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "labels");
    fs::create_directories(out_dir / "predictions");

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.n_scenes; ++i) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "scene_%05d", i);
        const auto& scene = scenes[static_cast<size_t>(i)];
        save_png(out_dir / "images" / (std::string(stem) + ".png"), scene.raster);
        write_text_file(out_dir / "labels" / (std::string(stem) + ".txt"),
                        write_label_file(scene.gts));
        write_text_file(out_dir / "predictions" / (std::string(stem) + ".txt"),
                        write_prediction_file(scene.preds));
    }

    std::string manifest = "names:\n";
    for (int c = 0; c < spec.class_count; ++c) {
        manifest += "  - " +
                    (spec.class_count == kLetterClassCount
                         ? phonetic_name(c)
                         : "class_" + std::to_string(c)) +
                    "\n";
    }
    manifest += "train: .\n";
    write_text_file(out_dir / "manifest.yaml", manifest);

    nlohmann::json j{{"scenes", ledger.scenes},
                     {"total_gt", ledger.total_gt},
                     {"tp", ledger.tp},
                     {"fp", ledger.fp},
                     {"fn", ledger.fn},
                     {"precision", ledger.precision()},
                     {"recall", ledger.recall()},
                     {"seed", spec.seed},
                     {"fp_rate", spec.corruption.fp_rate},
                     {"fn_rate", spec.corruption.fn_rate},
                     {"jitter", spec.corruption.jitter}};
    write_text_file(out_dir / "ledger.json", j.dump(2) + "\n");
    return ledger;
}

}  // namespace heb
