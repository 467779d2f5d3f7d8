#include "relspec/tokenizer.hpp"
#include "relspec/model.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cctype>

namespace relspec {

const char* to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Word: return "Word";
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::RequirementId: return "RequirementId";
    case TokenKind::DevelopmentId: return "DevelopmentId";
    case TokenKind::ReleaseId: return "ReleaseId";
    case TokenKind::Number: return "Number";
    case TokenKind::Tag: return "Tag";
    case TokenKind::Punct: return "Punct";
    }
    return "?";
}

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && detail::to_lower(a) == detail::to_lower(b);
}

bool looks_like_requirement_id(std::string_view w) {
    if (w.size() < 3 || w.size() > 64 || !is_upper(w.front()))
        return false;
    bool underscore = false;
    bool digit = false;
    for (char c : w) {
        if (c == '_')
            underscore = true;
        else if (is_digit(c))
            digit = true;
        else if (!is_upper(c))
            return false;
    }
    return underscore && digit;
}

bool looks_like_identifier(std::string_view w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (is_lower(w[i - 1]) && is_upper(w[i]))
            return true;
    auto us = w.find('_');
    return us != std::string_view::npos && us > 0 && us + 1 < w.size();
}

bool looks_like_number(std::string_view w) {
    if (w.empty() || !is_digit(w.front()) || !is_digit(w.back()))
        return false;
    return std::all_of(w.begin(), w.end(), [](char c) { return is_digit(c) || c == '.'; });
}

} // namespace

TokenKind classify_word(std::string_view word) {
    if (DevelopmentId::is_valid(word))
        return TokenKind::DevelopmentId;
    if (ReleaseId::parse(word))
        return TokenKind::ReleaseId;
    if (looks_like_requirement_id(word))
        return TokenKind::RequirementId;
    if (looks_like_identifier(word))
        return TokenKind::Identifier;
    if (looks_like_number(word))
        return TokenKind::Number;
    return TokenKind::Word;
}

std::optional<LenientTag> match_lenient_tag(std::string_view text, std::size_t pos) {
    if (pos >= text.size() || text[pos] != '[')
        return std::nullopt;
    auto close = text.find(']', pos);
    if (close == std::string_view::npos)
        return std::nullopt;
    auto inner = text.substr(pos + 1, close - pos - 1);
    if (inner.find_first_of("[\n") != std::string_view::npos)
        return std::nullopt;
    auto parts = detail::split_whitespace(inner);
    if (parts.empty() || parts.size() > 2)
        return std::nullopt;

    LenientTag tag;
    tag.length = close - pos + 1;
    std::string_view target = parts.back();
    if (parts.size() == 2) {
        if (iequals(parts[0], "before"))
            tag.keyword = "before";
        else if (iequals(parts[0], "end"))
            tag.keyword = "end";
        else
            return std::nullopt;
    }
    bool is_deployment = iequals(target, "sa") || iequals(target, "nsa");
    bool is_dev = target.size() == 2 + DevelopmentId::kSuffixLength && iequals(target.substr(0, 2), "cb") &&
                  std::all_of(target.begin(), target.end(), [](unsigned char c) { return std::isalnum(c); });
    if (!is_deployment && !is_dev)
        return std::nullopt;
    if (is_deployment && tag.keyword == "before")
        return std::nullopt;
    tag.target = std::string(target);

    std::string strict;
    if (tag.keyword == "before")
        strict = "Before ";
    else if (tag.keyword == "end")
        strict = "End ";
    if (is_deployment)
        strict += detail::to_lower(target) == "sa" ? "SA" : "NSA";
    else
        strict += target;
    tag.canonical = inner == strict && (is_deployment ? parse_deployment_type(target).has_value()
                                                      : DevelopmentId::is_valid(target));
    return tag;
}

TokenList tokenize(std::string_view text) {
    TokenList tokens;
    bool space = false;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (detail::is_space(text[i])) {
            space = true;
            ++i;
            continue;
        }
        Token token;
        token.space_before = space && !tokens.empty();
        space = false;
        if (c == '[') {
            if (auto tag = match_lenient_tag(text, i)) {
                token.text = detail::collapse_whitespace(text.substr(i, tag->length));
                token.kind = TokenKind::Tag;
                tokens.push_back(std::move(token));
                i += tag->length;
                continue;
            }
        }
        if (is_word_byte(c)) {
            std::size_t start = i;
            while (i < text.size()) {
                if (is_word_byte(static_cast<unsigned char>(text[i]))) {
                    ++i;
                } else if (text[i] == '.' && i > start && is_digit(text[i - 1]) && i + 1 < text.size() &&
                           is_digit(text[i + 1])) {
                    ++i;
                } else {
                    break;
                }
            }
            token.text = std::string(text.substr(start, i - start));
            token.kind = classify_word(token.text);
            tokens.push_back(std::move(token));
            continue;
        }
        token.text = std::string(1, text[i]);
        token.kind = TokenKind::Punct;
        tokens.push_back(std::move(token));
        ++i;
    }
    return tokens;
}

TokenList normalize(const TokenList& tokens, const StopWords& stop_words) {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Punct)
            continue;
        Token n = t;
        if (n.kind == TokenKind::Word) {
            n.text = detail::to_lower(n.text);
            if (stop_words.count(n.text))
                continue;
        }
        out.push_back(std::move(n));
    }
    return out;
}

std::string detokenize(const TokenList& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (t.space_before)
            out += ' ';
        out += t.text;
    }
    return out;
}

StopWords parse_stop_words(std::string_view source) {
    StopWords words;
    for (auto line : detail::split_lines(source)) {
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto word = detail::trim(line);
        if (!word.empty())
            words.insert(detail::to_lower(word));
    }
    return words;
}

} // namespace relspec
