#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace relspec {

enum class TokenKind { Word, Identifier, RequirementId, DevelopmentId, ReleaseId, Number, Tag, Punct };

const char* to_string(TokenKind kind);

struct Token {
    std::string text;
    TokenKind kind = TokenKind::Word;
    bool space_before = false; ///< whitespace preceded this token in the input

    /// Layout (space_before) does not participate.
    friend bool operator==(const Token& a, const Token& b) { return a.kind == b.kind && a.text == b.text; }
};

using TokenList = std::vector<Token>;
using StopWords = std::set<std::string>;

/// Splits technical text without destroying domain tokens: bracket tags, development,
/// release and requirement IDs, and camelCase/underscore identifiers stay whole; digits
/// are never removed. Each punctuation character is its own token.
TokenList tokenize(std::string_view text);

/// Lowercases Word tokens, keeps every other kind verbatim, drops Punct and stop words.
TokenList normalize(const TokenList& tokens, const StopWords& stop_words = {});

/// Inverse of tokenize up to whitespace normalization.
std::string detokenize(const TokenList& tokens);

/// Kind assigned to a single run of word characters.
TokenKind classify_word(std::string_view word);

/// Optional technical stop-word list: one token per line, `#` comments.
StopWords parse_stop_words(std::string_view source);

/// A bracket tag recognised case- and spacing-insensitively, e.g. "[before CB00XXXX]" or "[ SA ]".
struct LenientTag {
    std::size_t length = 0;  ///< bytes consumed from the '['
    std::string keyword;     ///< "", "before" or "end" (lowercased)
    std::string target;      ///< development id or SA/NSA as written
    bool canonical = false;  ///< exactly the strict tag grammar
};

std::optional<LenientTag> match_lenient_tag(std::string_view text, std::size_t pos);

} // namespace relspec
