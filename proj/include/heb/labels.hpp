#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "heb/types.hpp"

namespace heb {

// Parses darknet/YOLO-convention label text: one object per line,
// "class cx cy w h" as whitespace-separated decimals. Empty input is a
// background image and yields an empty list. Throws ParseError naming the
// 1-based line number on malformed lines, out-of-range class ids, or
// coordinates outside [0,1] beyond the 1e-6 tolerance.
std::vector<Annotation> parse_label_file(std::string_view text, int class_count);

// Fixed format "%d %.6f %.6f %.6f %.6f\n"; round-trips with
// parse_label_file within 1e-6.
std::string write_label_file(const std::vector<Annotation>& annotations);

// Prediction lines carry a sixth field: "class cx cy w h conf".
std::vector<Prediction> parse_prediction_file(std::string_view text, int class_count);
std::string write_prediction_file(const std::vector<Prediction>& predictions);

}  // namespace heb
