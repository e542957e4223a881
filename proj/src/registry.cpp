#include "heb/registry.hpp"

#include <stdexcept>

namespace heb {

namespace {

// Class order is canonical: Alef=0 .. Tav=21.
constexpr std::array<LetterClass, kLetterClassCount> kRegistry = {{
    {0, U'א', 0, "Alef"},            // א
    {1, U'ב', 0, "Bet"},             // ב
    {2, U'ג', 0, "Gimel"},           // ג
    {3, U'ד', 0, "Dalet"},           // ד
    {4, U'ה', 0, "He"},              // ה
    {5, U'ו', 0, "Vav"},             // ו
    {6, U'ז', 0, "Zayin"},           // ז
    {7, U'ח', 0, "Chet"},            // ח
    {8, U'ט', 0, "Tet"},             // ט
    {9, U'י', 0, "Yod"},             // י
    {10, U'כ', U'ך', "Kaf"},    // כ, ך
    {11, U'ל', 0, "Lamed"},          // ל
    {12, U'מ', U'ם', "Mem"},    // מ, ם
    {13, U'נ', U'ן', "Nun"},    // נ, ן
    {14, U'ס', 0, "Samech"},         // ס
    {15, U'ע', 0, "Ayin"},           // ע
    {16, U'פ', U'ף', "Feh"},    // פ, ף
    {17, U'צ', U'ץ', "Tsadeh"}, // צ, ץ
    {18, U'ק', 0, "Qof"},            // ק
    {19, U'ר', 0, "Resh"},           // ר
    {20, U'ש', 0, "Shin"},           // ש
    {21, U'ת', 0, "Tav"},            // ת
}};

}  // namespace

const std::array<LetterClass, kLetterClassCount>& letter_registry() {
    return kRegistry;
}

const LetterClass& letter_lookup(char32_t glyph) {
    for (const auto& lc : kRegistry) {
        if (lc.glyph == glyph || (lc.has_final() && lc.final_glyph == glyph)) {
            return lc;
        }
    }
    throw std::out_of_range("letter_lookup: glyph U+" +
                            std::to_string(static_cast<uint32_t>(glyph)) +
                            " is not a Hebrew letter");
}

std::string phonetic_name(int class_id) {
    if (class_id < 0 || class_id >= kLetterClassCount) {
        throw std::out_of_range("phonetic_name: class id " +
                                std::to_string(class_id) + " outside [0,21]");
    }
    return kRegistry[static_cast<size_t>(class_id)].phonetic_name;
}

std::string utf8_encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

}  // namespace heb
