#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace museum {

// Decodes one codepoint starting at `pos`. Invalid sequences decode to
// U+FFFD and consume a single byte, so decoding never fails.
struct DecodedChar {
    char32_t cp;
    std::size_t length;
};
DecodedChar decode_utf8(std::string_view text, std::size_t pos);

void append_utf8(std::string& out, char32_t cp);

// Re-encodes arbitrary bytes as valid UTF-8, replacing broken sequences
// with U+FFFD.
std::string lossy_decode_utf8(std::string_view bytes);

bool is_unicode_space(char32_t cp);

// ASCII plus Latin-1 lowercasing. Other scripts pass through unchanged;
// token comparison stays deterministic either way.
char32_t fold_char(char32_t cp);

// True for characters that survive inside a token. Edge characters that
// fail this are stripped during normalization.
bool is_token_char(char32_t cp);

}  // namespace museum
