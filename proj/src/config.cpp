#include "museum/config.hpp"

#include "museum/errors.hpp"
#include "museum/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace museum {

namespace {

struct Value {
    enum class Kind { String, Integer, Decimal, Boolean, Array };
    Kind kind;
    std::string str;
    long long integer = 0;
    Rational number;
    bool boolean = false;
    std::vector<std::string> array;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& why) {
    throw EngineError(ErrorKind::ParseError,
                      source + ":" + std::to_string(line) + ": " + why);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Strips a trailing comment, respecting quotes.
std::string_view strip_comment(std::string_view s) {
    bool in_basic = false, in_literal = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_basic) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_basic = false;
        } else if (in_literal) {
            if (c == '\'') in_literal = false;
        } else if (c == '"') {
            in_basic = true;
        } else if (c == '\'') {
            in_literal = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    }
    return key.front() != '.' && key.back() != '.' && key.find("..") == std::string_view::npos;
}

std::string parse_string(std::string_view raw, const std::string& source, int line) {
    if (raw.size() < 2) fail(source, line, "unterminated string");
    char quote = raw.front();
    if (raw.back() != quote) fail(source, line, "unterminated string");
    std::string_view body = raw.substr(1, raw.size() - 2);
    if (quote == '\'') return std::string(body);
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '\\') {
            out.push_back(c);
            continue;
        }
        if (++i >= body.size()) fail(source, line, "dangling escape in string");
        switch (body[i]) {
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            default: fail(source, line, std::string("unsupported escape \\") + body[i]);
        }
    }
    return out;
}

Value parse_value(std::string_view raw, const std::string& source, int line) {
    Value v;
    if (raw.empty()) fail(source, line, "missing value");
    if (raw.front() == '"' || raw.front() == '\'') {
        v.kind = Value::Kind::String;
        v.str = parse_string(raw, source, line);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::Boolean;
        v.boolean = raw == "true";
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') fail(source, line, "unterminated array");
        v.kind = Value::Kind::Array;
        std::string_view body = trim(raw.substr(1, raw.size() - 2));
        while (!body.empty()) {
            if (body.front() != '"' && body.front() != '\'')
                fail(source, line, "array elements must be strings");
            char quote = body.front();
            std::size_t end = 1;
            while (end < body.size()) {
                if (quote == '"' && body[end] == '\\')
                    end += 2;
                else if (body[end] == quote)
                    break;
                else
                    ++end;
            }
            if (end >= body.size()) fail(source, line, "unterminated string in array");
            v.array.push_back(parse_string(body.substr(0, end + 1), source, line));
            body = trim(body.substr(end + 1));
            if (!body.empty()) {
                if (body.front() != ',') fail(source, line, "expected ',' in array");
                body = trim(body.substr(1));
            }
        }
        return v;
    }
    // Number: integer or decimal.
    bool has_dot = raw.find('.') != std::string_view::npos;
    try {
        v.number = Rational::parse(raw);
    } catch (const EngineError&) {
        fail(source, line, "malformed value '" + std::string(raw) + "'");
    }
    if (has_dot) {
        v.kind = Value::Kind::Decimal;
    } else {
        v.kind = Value::Kind::Integer;
        v.integer = v.number.num();  // denominator is 1 for dot-free input
    }
    return v;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

EngineConfig EngineConfig::from_text(std::string_view text, const std::string& source_name) {
    EngineConfig cfg;
    bool weights_cleared = false;

    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(source_name, line_no, "unterminated section header");
            std::string_view name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(name)) fail(source_name, line_no, "malformed section name");
            section = std::string(name);
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(source_name, line_no, "expected 'key = value'");
        std::string_view key_part = trim(line.substr(0, eq));
        if (!valid_key(key_part)) fail(source_name, line_no, "malformed key");
        std::string key = section.empty() ? std::string(key_part)
                                          : section + "." + std::string(key_part);
        Value v = parse_value(trim(line.substr(eq + 1)), source_name, line_no);

        auto want = [&](Value::Kind kind, const char* what) {
            if (v.kind != kind)
                fail(source_name, line_no, "key '" + key + "' expects " + what);
        };

        if (key == "store.root") {
            want(Value::Kind::String, "a string");
            cfg.store_root = v.str;
        } else if (key == "segmenter.min_tokens") {
            want(Value::Kind::Integer, "an integer");
            if (v.integer < 0) fail(source_name, line_no, "segmenter.min_tokens must be >= 0");
            cfg.min_tokens = static_cast<std::size_t>(v.integer);
        } else if (key == "segmenter.block_elements") {
            want(Value::Kind::Array, "an array of tag names");
            cfg.block_elements.clear();
            for (const auto& tag : v.array) {
                if (tag.empty()) fail(source_name, line_no, "empty tag name");
                cfg.block_elements.insert(lower(tag));
            }
        } else if (key == "lexicon.path") {
            want(Value::Kind::String, "a string");
            cfg.lexicon_path = v.str;
        } else if (key == "stopwords.path") {
            want(Value::Kind::String, "a string");
            cfg.stopwords_path = v.str;
        } else if (key == "evolution.check_full_history") {
            want(Value::Kind::Boolean, "a boolean");
            cfg.check_full_history = v.boolean;
        } else if (key.starts_with("visual_weights.")) {
            std::string cls = key.substr(std::string("visual_weights.").size());
            if (cls.empty() || cls.find('.') != std::string::npos)
                fail(source_name, line_no, "malformed visual_weights class name");
            if (v.kind != Value::Kind::Integer && v.kind != Value::Kind::Decimal)
                fail(source_name, line_no, "key '" + key + "' expects a number");
            if (v.number.is_negative())
                fail(source_name, line_no, "visual weight for '" + cls + "' must be >= 0");
            if (!weights_cleared) {
                cfg.visual_weights.entries.clear();
                weights_cleared = true;
            }
            cfg.visual_weights.entries[lower(cls)] = v.number;
        } else {
            fail(source_name, line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

EngineConfig EngineConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw EngineError(ErrorKind::NotFound, "config file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw EngineError(ErrorKind::StoreIo, "cannot read config: " + path.string());

    EngineConfig cfg = from_text(buf.str(), path.string());
    const std::filesystem::path base = path.parent_path();
    auto resolve = [&](std::filesystem::path& p) {
        if (!base.empty() && p.is_relative()) p = base / p;
    };
    resolve(cfg.store_root);
    if (cfg.lexicon_path) resolve(*cfg.lexicon_path);
    if (cfg.stopwords_path) resolve(*cfg.stopwords_path);
    return cfg;
}

}  // namespace museum
