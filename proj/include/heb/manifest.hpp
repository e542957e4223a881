#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heb/types.hpp"

namespace heb {

// One image of the corpus. Images without a sibling label file are
// background records (zero annotations by definition).
struct DatasetRecord {
    std::filesystem::path image_path;
    std::filesystem::path label_path;  // empty for background records
    bool background = false;
};

struct DatasetManifest {
    std::vector<std::string> class_names;
    std::map<std::string, std::vector<DatasetRecord>> splits;

    int class_count() const { return static_cast<int>(class_names.size()); }
    std::vector<DatasetRecord> all_records() const;
};

// Reads a YAML manifest with keys `names` (ordered list) and split keys
// `train`/`val`/`test` (directory paths). Each split directory either holds
// images/ + labels/ subdirectories or a flat mix of images with sibling
// .txt label files. Throws ParseError on a missing class list, duplicate
// class names, or an unreadable directory.
DatasetManifest parse_manifest(const std::filesystem::path& path);

// Deterministic split configuration: either absolute counts or ratios.
struct SplitSpec {
    std::vector<std::string> names;  // e.g. {"train","val","test"}
    std::vector<size_t> counts;      // used when !counts.empty()
    std::vector<double> ratios;      // otherwise; must sum to 1 +- 1e-9
    uint64_t seed = 0;
};

// Fisher-Yates shuffle with a splitmix64 stream, then contiguous slices.
// Partitions are disjoint and exhaustive; counts must sum to the record
// count (ratio remainders go to the largest fractional parts).
std::map<std::string, std::vector<DatasetRecord>> split_dataset(
    const std::vector<DatasetRecord>& records, const SplitSpec& spec);

// Ratio -> exact counts for a given corpus size (largest-remainder rule).
std::vector<size_t> resolve_split_counts(const SplitSpec& spec, size_t total);

struct CorpusStats {
    std::vector<int64_t> per_class;  // annotation count per class id
    int64_t total = 0;
    int64_t labeled_images = 0;
    int64_t background_images = 0;
    int min_class = -1;  // class with fewest annotations (lowest id on ties)
    int max_class = -1;
};

// Per-class annotation counts over every split. Propagates label parse
// errors with the offending file path prepended.
CorpusStats corpus_stats(const DatasetManifest& manifest);

}  // namespace heb
