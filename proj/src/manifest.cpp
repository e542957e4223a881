#include "heb/manifest.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "heb/labels.hpp"
#include "heb/rng.hpp"

namespace heb {

namespace fs = std::filesystem;

namespace {

bool is_image_file(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<DatasetRecord> scan_split_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw ParseError("manifest: split directory not readable: " + dir.string());
    }
    fs::path image_dir = dir;
    fs::path label_dir = dir;
    if (fs::is_directory(dir / "images")) {
        image_dir = dir / "images";
        label_dir = dir / "labels";
    }
    std::vector<DatasetRecord> records;
    for (const auto& entry : fs::directory_iterator(image_dir)) {
        if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
        DatasetRecord rec;
        rec.image_path = entry.path();
        fs::path label = label_dir / entry.path().filename().replace_extension(".txt");
        if (fs::is_regular_file(label)) {
            rec.label_path = label;
        } else {
            rec.background = true;
        }
        records.push_back(std::move(rec));
    }
    // directory_iterator order is unspecified; sort for reproducibility
    std::sort(records.begin(), records.end(),
              [](const DatasetRecord& a, const DatasetRecord& b) {
                  return a.image_path < b.image_path;
              });
    return records;
}

}  // namespace

std::vector<DatasetRecord> DatasetManifest::all_records() const {
    std::vector<DatasetRecord> out;
    for (const auto& [name, records] : splits) {
        out.insert(out.end(), records.begin(), records.end());
    }
    return out;
}

DatasetManifest parse_manifest(const fs::path& path) {
    if (!fs::is_regular_file(path)) {
        throw ParseError("manifest: file not found: " + path.string());
    }
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::Exception& e) {
        throw ParseError("manifest: " + path.string() + ": " + e.what());
    }
    if (!root["names"] || !root["names"].IsSequence()) {
        throw ParseError("manifest: missing `names` class list in " + path.string());
    }

    DatasetManifest manifest;
    std::set<std::string> seen;
    for (const auto& n : root["names"]) {
        auto name = n.as<std::string>();
        if (!seen.insert(name).second) {
            throw ParseError("manifest: duplicate class name '" + name + "'");
        }
        manifest.class_names.push_back(name);
    }

    fs::path base = path.parent_path();
    for (const char* split : {"train", "val", "test"}) {
        if (!root[split]) continue;
        fs::path dir = root[split].as<std::string>();
        if (dir.is_relative()) dir = base / dir;
        manifest.splits[split] = scan_split_dir(dir);
    }
    return manifest;
}

std::vector<size_t> resolve_split_counts(const SplitSpec& spec, size_t total) {
    if (!spec.counts.empty()) {
        size_t sum = std::accumulate(spec.counts.begin(), spec.counts.end(), size_t{0});
        if (sum != total) {
            throw std::invalid_argument("split counts sum to " + std::to_string(sum) +
                                        " but corpus has " + std::to_string(total));
        }
        return spec.counts;
    }
    double ratio_sum = std::accumulate(spec.ratios.begin(), spec.ratios.end(), 0.0);
    if (std::abs(ratio_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("split ratios must sum to 1");
    }
    // floor each share, then hand remainders to the largest fractional parts
    std::vector<size_t> counts(spec.ratios.size());
    std::vector<std::pair<double, size_t>> fractional;
    size_t assigned = 0;
    for (size_t i = 0; i < spec.ratios.size(); ++i) {
        double share = spec.ratios[i] * static_cast<double>(total);
        counts[i] = static_cast<size_t>(std::floor(share + 1e-9));
        assigned += counts[i];
        fractional.emplace_back(share - static_cast<double>(counts[i]), i);
    }
    std::sort(fractional.begin(), fractional.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (size_t k = 0; assigned < total; ++k, ++assigned) {
        counts[fractional[k % fractional.size()].second] += 1;
    }
    return counts;
}

std::map<std::string, std::vector<DatasetRecord>> split_dataset(
    const std::vector<DatasetRecord>& records, const SplitSpec& spec) {
    if (spec.names.empty() ||
        (spec.counts.empty() ? spec.ratios.size() : spec.counts.size()) != spec.names.size()) {
        throw std::invalid_argument("split config: names and counts/ratios mismatch");
    }
    auto counts = resolve_split_counts(spec, records.size());

    std::vector<size_t> order(records.size());
    std::iota(order.begin(), order.end(), size_t{0});
    SplitMix64 rng(spec.seed);
    for (size_t i = records.size(); i > 1; --i) {
        size_t j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }

    std::map<std::string, std::vector<DatasetRecord>> out;
    size_t cursor = 0;
    for (size_t s = 0; s < spec.names.size(); ++s) {
        auto& bucket = out[spec.names[s]];
        bucket.reserve(counts[s]);
        for (size_t k = 0; k < counts[s]; ++k) {
            bucket.push_back(records[order[cursor++]]);
        }
    }
    return out;
}

CorpusStats corpus_stats(const DatasetManifest& manifest) {
    CorpusStats stats;
    stats.per_class.assign(static_cast<size_t>(manifest.class_count()), 0);
    for (const auto& [split, records] : manifest.splits) {
        for (const auto& rec : records) {
            if (rec.background) {
                ++stats.background_images;
                continue;
            }
            ++stats.labeled_images;
            std::ifstream in(rec.label_path, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            std::vector<Annotation> anns;
            try {
                anns = parse_label_file(buf.str(), manifest.class_count());
            } catch (const ParseError& e) {
                throw ParseError(rec.label_path.string() + ": " + e.what());
            }
            for (const auto& a : anns) {
                ++stats.per_class[static_cast<size_t>(a.class_id)];
                ++stats.total;
            }
        }
    }
    for (size_t c = 0; c < stats.per_class.size(); ++c) {
        if (stats.min_class < 0 ||
            stats.per_class[c] < stats.per_class[static_cast<size_t>(stats.min_class)]) {
            stats.min_class = static_cast<int>(c);
        }
        if (stats.max_class < 0 ||
            stats.per_class[c] > stats.per_class[static_cast<size_t>(stats.max_class)]) {
            stats.max_class = static_cast<int>(c);
        }
    }
    return stats;
}

}  // namespace heb
