#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "heb/labels.hpp"
#include "heb/manifest.hpp"
#include "heb/registry.hpp"
#include "heb/rng.hpp"
#include "tmpdir.hpp"

using namespace heb;

TEST_CASE("label parsing: basics") {
    auto anns = parse_label_file("3 0.5 0.5 0.25 0.125\n", 22);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].class_id == 3);
    CHECK(anns[0].box.cx == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(anns[0].box.h == doctest::Approx(0.125).epsilon(1e-12));

    CHECK(parse_label_file("", 22).empty());
    CHECK(parse_label_file("\n\n  \n", 22).empty());

    // multiple lines, extra whitespace tolerated
    auto two = parse_label_file("0 0.1 0.1 0.05 0.05\n21\t0.9 0.9 0.1 0.1\n", 22);
    CHECK(two.size() == 2);
    CHECK(two[1].class_id == 21);
}

TEST_CASE("label parsing: boundary tolerance and clamping") {
    // 1e-6 past the boundary is accepted and clamped back into [0,1]
    auto anns = parse_label_file("0 0.000001 1.000001 0.000002 0.5\n", 22);
    REQUIRE(anns.size() == 1);
    auto b = anns[0].box;
    CHECK(b.cy + b.h / 2 <= 1.0);
    CHECK(b.cx - b.w / 2 >= 0.0);
    // clearly out of range fails
    CHECK_THROWS_AS(parse_label_file("0 1.5 0.5 0.1 0.1\n", 22), ParseError);
    CHECK_THROWS_AS(parse_label_file("0 0.5 0.5 -0.1 0.1\n", 22), ParseError);
}

TEST_CASE("label parsing: errors name the 1-based line") {
    auto check_line = [](const char* text, const char* needle) {
        try {
            parse_label_file(text, 22);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    check_line("0 0.5 0.5 0.1 0.1\nbogus line\n", "line 2");
    check_line("99 0.5 0.5 0.1 0.1\n", "line 1");
    check_line("0 0.5 0.5 0.1\n", "line 1");             // missing field
    check_line("0 0.5 0.5 0.1 0.1 extra junk\n", "line 1");
    CHECK_THROWS_AS(parse_label_file("-1 0.5 0.5 0.1 0.1\n", 22), ParseError);
}

TEST_CASE("label writing: fixed format and round trip") {
    std::vector<Annotation> anns{{7, {0.5, 0.25, 0.125, 0.0625}}};
    CHECK(write_label_file(anns) == "7 0.500000 0.250000 0.125000 0.062500\n");

    SplitMix64 rng(42);
    std::vector<Annotation> batch;
    for (int i = 0; i < 100; ++i) {
        double w = rng.next_in(0.01, 0.5), h = rng.next_in(0.01, 0.5);
        batch.push_back({static_cast<int>(rng.next_below(22)),
                         {rng.next_in(w / 2, 1 - w / 2), rng.next_in(h / 2, 1 - h / 2), w, h}});
    }
    auto parsed = parse_label_file(write_label_file(batch), 22);
    REQUIRE(parsed.size() == batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        CHECK(parsed[i].class_id == batch[i].class_id);
        CHECK(std::abs(parsed[i].box.cx - batch[i].box.cx) <= 1e-6);
        CHECK(std::abs(parsed[i].box.cy - batch[i].box.cy) <= 1e-6);
        CHECK(std::abs(parsed[i].box.w - batch[i].box.w) <= 1e-6);
        CHECK(std::abs(parsed[i].box.h - batch[i].box.h) <= 1e-6);
    }
}

TEST_CASE("prediction files carry a sixth confidence field") {
    auto preds = parse_prediction_file("4 0.5 0.5 0.2 0.2 0.875\n", 22);
    REQUIRE(preds.size() == 1);
    CHECK(preds[0].confidence == doctest::Approx(0.875).epsilon(1e-12));
    CHECK_THROWS_AS(parse_prediction_file("4 0.5 0.5 0.2 0.2\n", 22), ParseError);
    CHECK_THROWS_AS(parse_prediction_file("4 0.5 0.5 0.2 0.2 1.5\n", 22), ParseError);
    CHECK(write_prediction_file(preds) == "4 0.500000 0.500000 0.200000 0.200000 0.875000\n");
}

TEST_CASE("letter registry: canonical table") {
    // Independent expected fixture: codepoint, final codepoint (0 = none), name.
    struct Row {
        char32_t glyph, fin;
        const char* name;
    };
    static const Row expected[22] = {
        {0x05D0, 0, "Alef"},      {0x05D1, 0, "Bet"},      {0x05D2, 0, "Gimel"},
        {0x05D3, 0, "Dalet"},     {0x05D4, 0, "He"},       {0x05D5, 0, "Vav"},
        {0x05D6, 0, "Zayin"},     {0x05D7, 0, "Chet"},     {0x05D8, 0, "Tet"},
        {0x05D9, 0, "Yod"},       {0x05DB, 0x05DA, "Kaf"}, {0x05DC, 0, "Lamed"},
        {0x05DE, 0x05DD, "Mem"},  {0x05E0, 0x05DF, "Nun"}, {0x05E1, 0, "Samech"},
        {0x05E2, 0, "Ayin"},      {0x05E4, 0x05E3, "Feh"}, {0x05E6, 0x05E5, "Tsadeh"},
        {0x05E7, 0, "Qof"},       {0x05E8, 0, "Resh"},     {0x05E9, 0, "Shin"},
        {0x05EA, 0, "Tav"},
    };
    const auto& reg = letter_registry();
    REQUIRE(reg.size() == 22);
    int finals = 0;
    for (int i = 0; i < 22; ++i) {
        CHECK(reg[i].index == i);
        CHECK(reg[i].glyph == expected[i].glyph);
        CHECK(reg[i].final_glyph == expected[i].fin);
        CHECK(std::string(reg[i].phonetic_name) == expected[i].name);
        if (reg[i].has_final()) ++finals;
    }
    CHECK(finals == kFinalFormCount);
    CHECK(finals == 5);
}

TEST_CASE("letter registry: lookup and names") {
    CHECK(letter_lookup(U'א').index == 0);
    CHECK(letter_lookup(U'ת').index == 21);
    // final forms resolve to the base class
    CHECK(letter_lookup(U'ך').index == letter_lookup(U'כ').index);
    CHECK(letter_lookup(U'ם').index == 12);
    CHECK(letter_lookup(U'ן').index == 13);
    CHECK(letter_lookup(U'ף').index == 16);
    CHECK(letter_lookup(U'ץ').index == 17);
    CHECK_THROWS_AS(letter_lookup(U'x'), std::out_of_range);

    CHECK(phonetic_name(0) == "Alef");
    CHECK(phonetic_name(11) == "Lamed");
    CHECK(phonetic_name(21) == "Tav");
    CHECK_THROWS_AS(phonetic_name(22), std::out_of_range);
    CHECK_THROWS_AS(phonetic_name(-1), std::out_of_range);

    std::set<std::string> names;
    for (const auto& lc : letter_registry()) names.insert(lc.phonetic_name);
    CHECK(names.size() == 22);  // all distinct

    CHECK(utf8_encode(U'א') == "\xD7\x90");
    CHECK(utf8_encode(U'A') == "A");
}

namespace {

std::vector<DatasetRecord> fake_records(size_t n) {
    std::vector<DatasetRecord> recs(n);
    for (size_t i = 0; i < n; ++i) {
        recs[i].image_path = "img_" + std::to_string(i) + ".png";
    }
    return recs;
}

}  // namespace

TEST_CASE("split: fixed counts 993/94/46 from 1133") {
    SplitSpec spec;
    spec.names = {"train", "val", "test"};
    spec.counts = {993, 94, 46};
    spec.seed = 1;
    auto parts = split_dataset(fake_records(1133), spec);
    CHECK(parts.at("train").size() == 993);
    CHECK(parts.at("val").size() == 94);
    CHECK(parts.at("test").size() == 46);

    // disjoint and exhaustive
    std::set<std::string> seen;
    for (const auto& [name, recs] : parts) {
        for (const auto& r : recs) seen.insert(r.image_path.string());
    }
    CHECK(seen.size() == 1133);

    spec.counts = {993, 94, 45};
    CHECK_THROWS_AS(split_dataset(fake_records(1133), spec), std::invalid_argument);
}

TEST_CASE("split: ratios 70/15/15 from 100") {
    SplitSpec spec;
    spec.names = {"train", "val", "test"};
    spec.ratios = {0.70, 0.15, 0.15};
    spec.seed = 9;
    auto counts = resolve_split_counts(spec, 100);
    REQUIRE(counts.size() == 3);
    CHECK(counts[0] == 70);
    CHECK(counts[1] == 15);
    CHECK(counts[2] == 15);

    auto parts = split_dataset(fake_records(100), spec);
    CHECK(parts.at("train").size() == 70);
    CHECK(parts.at("val").size() == 15);
    CHECK(parts.at("test").size() == 15);

    // largest-remainder: 7 records at 70/15/15 -> 5/1/1
    auto c7 = resolve_split_counts(spec, 7);
    CHECK(c7[0] + c7[1] + c7[2] == 7);
    CHECK(c7[0] == 5);

    spec.ratios = {0.5, 0.4};  // does not sum to 1
    CHECK_THROWS_AS(resolve_split_counts(spec, 100), std::invalid_argument);
}

TEST_CASE("split: seeded determinism") {
    SplitSpec spec;
    spec.names = {"a", "b"};
    spec.ratios = {0.5, 0.5};
    spec.seed = 123;
    auto recs = fake_records(60);
    auto p1 = split_dataset(recs, spec);
    auto p2 = split_dataset(recs, spec);
    for (const auto& name : spec.names) {
        REQUIRE(p1.at(name).size() == p2.at(name).size());
        for (size_t i = 0; i < p1.at(name).size(); ++i) {
            CHECK(p1.at(name)[i].image_path == p2.at(name)[i].image_path);
        }
    }
    spec.seed = 124;
    auto p3 = split_dataset(recs, spec);
    bool differs = false;
    for (size_t i = 0; i < p1.at("a").size(); ++i) {
        if (p1.at("a")[i].image_path != p3.at("a")[i].image_path) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("manifest: subdirectory layout and sibling rule") {
    TmpDir tmp("manifest");
    // images/ + labels/ layout
    tmp.file("data/train/images/a.png", "");
    tmp.file("data/train/images/b.jpg", "");
    tmp.file("data/train/labels/a.txt", "0 0.5 0.5 0.2 0.2\n");
    // flat layout with sibling .txt
    tmp.file("data/val/c.png", "");
    tmp.file("data/val/c.txt", "1 0.5 0.5 0.2 0.2\n2 0.3 0.3 0.1 0.1\n");
    tmp.file("data/val/d.png", "");
    std::string yaml = "names: [Alef, Bet, Gimel]\ntrain: data/train\nval: data/val\n";
    auto mpath = tmp.file("data.yaml", yaml);

    auto m = parse_manifest(mpath);
    CHECK(m.class_count() == 3);
    REQUIRE(m.splits.count("train") == 1);
    REQUIRE(m.splits.count("val") == 1);
    CHECK(m.splits["train"].size() == 2);
    CHECK(m.splits["val"].size() == 2);

    int backgrounds = 0;
    for (const auto& r : m.all_records()) {
        if (r.background) ++backgrounds;
    }
    CHECK(backgrounds == 2);  // b.jpg and d.png have no labels

    auto stats = corpus_stats(m);
    CHECK(stats.total == 3);
    CHECK(stats.labeled_images == 2);
    CHECK(stats.background_images == 2);
    CHECK(stats.per_class[0] == 1);
    CHECK(stats.per_class[1] == 1);
    CHECK(stats.per_class[2] == 1);
}

TEST_CASE("manifest: error cases") {
    TmpDir tmp("manifest-err");
    auto nolist = tmp.file("a.yaml", "train: .\n");
    CHECK_THROWS_AS(parse_manifest(nolist), ParseError);
    auto dup = tmp.file("b.yaml", "names: [Alef, Alef]\n");
    CHECK_THROWS_AS(parse_manifest(dup), ParseError);
    auto missing = tmp.file("c.yaml", "names: [Alef]\ntrain: no/such/dir\n");
    CHECK_THROWS_AS(parse_manifest(missing), ParseError);
}

TEST_CASE("corpus stats: random recount oracle") {
    TmpDir tmp("stats");
    SplitMix64 rng(7);
    std::vector<int64_t> expected(5, 0);
    int64_t total = 0, labeled = 0, background = 0;
    for (int i = 0; i < 50; ++i) {
        std::string stem = "img" + std::to_string(i);
        tmp.file("corpus/" + stem + ".png", "");
        int n = static_cast<int>(rng.next_below(4));  // 0..3 annotations
        if (n == 0) {
            ++background;
            continue;
        }
        ++labeled;
        std::string text;
        for (int j = 0; j < n; ++j) {
            int cls = static_cast<int>(rng.next_below(5));
            expected[cls] += 1;
            ++total;
            text += std::to_string(cls) + " 0.5 0.5 0.2 0.2\n";
        }
        tmp.file("corpus/" + stem + ".txt", text);
    }
    auto mpath =
        tmp.file("m.yaml", "names: [Alef, Bet, Gimel, Dalet, He]\ntrain: corpus\n");
    auto stats = corpus_stats(parse_manifest(mpath));
    CHECK(stats.total == total);
    CHECK(stats.labeled_images == labeled);
    CHECK(stats.background_images == background);
    for (int c = 0; c < 5; ++c) CHECK(stats.per_class[c] == expected[c]);
    auto mn = std::min_element(expected.begin(), expected.end()) - expected.begin();
    auto mx = std::max_element(expected.begin(), expected.end()) - expected.begin();
    CHECK(stats.min_class == static_cast<int>(mn));
    CHECK(stats.max_class == static_cast<int>(mx));
}

TEST_CASE("corpus stats: parse failure names the file") {
    TmpDir tmp("stats-err");
    tmp.file("corpus/bad.png", "");
    tmp.file("corpus/bad.txt", "not a label\n");
    auto mpath = tmp.file("m.yaml", "names: [Alef]\ntrain: corpus\n");
    auto m = parse_manifest(mpath);
    try {
        corpus_stats(m);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
    }
}
