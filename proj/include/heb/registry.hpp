#pragma once

#include <array>
#include <optional>
#include <string>

namespace heb {

// One row of the 22-class Hebrew letter table. Five letters carry a distinct
// word-final glyph that shares the class of the base form.
struct LetterClass {
    int index;                  // 0..21, Alef=0 .. Tav=21
    char32_t glyph;             // standard form
    char32_t final_glyph;       // 0 when the letter has no final form
    const char* phonetic_name;  // Latin pronunciation label

    bool has_final() const { return final_glyph != 0; }
};

inline constexpr int kLetterClassCount = 22;
inline constexpr int kFinalFormCount = 5;

const std::array<LetterClass, kLetterClassCount>& letter_registry();

// Resolves a Hebrew codepoint (base or final form) to its class.
// Throws std::out_of_range for glyphs outside the 27-codepoint set.
const LetterClass& letter_lookup(char32_t glyph);

// Table name for a class id in [0,21]. Throws std::out_of_range otherwise.
std::string phonetic_name(int class_id);

// UTF-8 rendering of a codepoint, for messages and fixtures.
std::string utf8_encode(char32_t cp);

}  // namespace heb
