#include "museum/unicode.hpp"

namespace museum {

DecodedChar decode_utf8(std::string_view text, std::size_t pos) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    std::size_t n = text.size();
    unsigned char b0 = s[pos];

    if (b0 < 0x80) return {b0, 1};

    auto cont = [&](std::size_t i) {
        return pos + i < n && (s[pos + i] & 0xc0) == 0x80;
    };

    if ((b0 & 0xe0) == 0xc0 && cont(1)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x1f) << 6) | (s[pos + 1] & 0x3f);
        if (cp >= 0x80) return {cp, 2};
    } else if ((b0 & 0xf0) == 0xe0 && cont(1) && cont(2)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x0f) << 12) |
                      (static_cast<char32_t>(s[pos + 1] & 0x3f) << 6) |
                      (s[pos + 2] & 0x3f);
        if (cp >= 0x800 && !(cp >= 0xd800 && cp <= 0xdfff)) return {cp, 3};
    } else if ((b0 & 0xf8) == 0xf0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
                      (static_cast<char32_t>(s[pos + 1] & 0x3f) << 12) |
                      (static_cast<char32_t>(s[pos + 2] & 0x3f) << 6) |
                      (s[pos + 3] & 0x3f);
        if (cp >= 0x10000 && cp <= 0x10ffff) return {cp, 4};
    }
    return {0xfffd, 1};
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

std::string lossy_decode_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        DecodedChar dc = decode_utf8(bytes, pos);
        append_utf8(out, dc.cp);
        pos += dc.length;
    }
    return out;
}

bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d: case 0x20:
        case 0x85: case 0xa0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202f: case 0x205f: case 0x3000:
        case 0xfeff:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200a;
    }
}

char32_t fold_char(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    // Latin-1 uppercase block, skipping the multiplication sign.
    if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 0x20;
    return cp;
}

bool is_token_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
               (cp >= 'A' && cp <= 'Z');
    }
    if (is_unicode_space(cp)) return false;
    if (cp == 0xfffd) return false;
    // Common typographic punctuation; stripped at token edges.
    switch (cp) {
        case 0xa1: case 0xa7: case 0xab: case 0xb6: case 0xb7: case 0xbb: case 0xbf:
        case 0x3001: case 0x3002: case 0x300c: case 0x300d:
        case 0xff01: case 0xff08: case 0xff09: case 0xff0c: case 0xff0e:
        case 0xff1a: case 0xff1b: case 0xff1f:
            return false;
        default:
            break;
    }
    if (cp >= 0x2010 && cp <= 0x2043) return false;  // dashes, quotes, bullets, ellipsis
    return true;
}

}  // namespace museum
