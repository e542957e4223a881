#include "heb/labels.hpp"

#include <charconv>
#include <cstdio>

namespace heb {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

[[noreturn]] void fail(size_t line_no, const std::string& what) {
    throw ParseError("label parse error at line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view tok, size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail(line_no, "non-numeric token '" + std::string(tok) + "'");
    }
    return v;
}

int parse_class(std::string_view tok, int class_count, size_t line_no) {
    int id = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail(line_no, "non-numeric class id '" + std::string(tok) + "'");
    }
    if (id < 0 || id >= class_count) {
        fail(line_no, "class id " + std::to_string(id) + " outside [0," +
                          std::to_string(class_count - 1) + "]");
    }
    return id;
}

BBoxNorm parse_box(const std::vector<std::string_view>& tok, size_t line_no) {
    double vals[4];
    for (int i = 0; i < 4; ++i) {
        vals[i] = parse_double(tok[static_cast<size_t>(i) + 1], line_no);
        if (!in_unit_tolerant(vals[i])) {
            fail(line_no, "coordinate " + std::string(tok[static_cast<size_t>(i) + 1]) +
                              " outside [0,1]");
        }
    }
    BBoxNorm b{clamp_unit(vals[0]), clamp_unit(vals[1]),
               clamp_unit(vals[2]), clamp_unit(vals[3])};
    if (b.w <= 0.0 || b.h <= 0.0) fail(line_no, "degenerate box (w or h is zero)");
    return clamp_box(b);
}

template <typename T, typename Fn>
std::vector<T> parse_lines(std::string_view text, size_t expected_tokens, Fn make) {
    std::vector<T> out;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        auto tokens = split_ws(line);
        if (!tokens.empty()) {
            if (tokens.size() != expected_tokens) {
                fail(line_no, "expected " + std::to_string(expected_tokens) +
                                  " fields, got " + std::to_string(tokens.size()));
            }
            out.push_back(make(tokens, line_no));
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

}  // namespace

std::vector<Annotation> parse_label_file(std::string_view text, int class_count) {
    if (class_count < 1) throw std::invalid_argument("class_count must be >= 1");
    return parse_lines<Annotation>(
        text, 5, [class_count](const std::vector<std::string_view>& tok, size_t line_no) {
            return Annotation{parse_class(tok[0], class_count, line_no),
                              parse_box(tok, line_no)};
        });
}

std::string write_label_file(const std::vector<Annotation>& annotations) {
    std::string out;
    char buf[128];
    for (const auto& a : annotations) {
        std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f\n", a.class_id,
                      a.box.cx, a.box.cy, a.box.w, a.box.h);
        out += buf;
    }
    return out;
}

std::vector<Prediction> parse_prediction_file(std::string_view text, int class_count) {
    if (class_count < 1) throw std::invalid_argument("class_count must be >= 1");
    return parse_lines<Prediction>(
        text, 6, [class_count](const std::vector<std::string_view>& tok, size_t line_no) {
            Prediction p;
            p.class_id = parse_class(tok[0], class_count, line_no);
            p.box = parse_box(tok, line_no);
            p.confidence = parse_double(tok[5], line_no);
            if (p.confidence < 0.0 || p.confidence > 1.0) {
                fail(line_no, "confidence outside [0,1]");
            }
            return p;
        });
}

std::string write_prediction_file(const std::vector<Prediction>& predictions) {
    std::string out;
    char buf[160];
    for (const auto& p : predictions) {
        std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f %.6f\n", p.class_id,
                      p.box.cx, p.box.cy, p.box.w, p.box.h, p.confidence);
        out += buf;
    }
    return out;
}

}  // namespace heb
