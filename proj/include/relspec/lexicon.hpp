#pragma once

#include "relspec/tokenizer.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace relspec {

/// A procedure-name occurrence found in a token stream.
struct Mention {
    std::string canonical;
    std::string surface;
    std::size_t start = 0; ///< token span [start, end)
    std::size_t end = 0;
    bool canonical_form = false; ///< surface matches the canonical name itself

    friend bool operator==(const Mention&, const Mention&) = default;
};

/// Internal dictionary of procedure names and their variants. Matching is token based:
/// Word tokens compare case-insensitively, every other token kind exactly.
class Lexicon {
public:
    /// JSON object `{"canonical": ["alias", ...]}`. Empty input gives an empty lexicon.
    /// Throws Error(InvalidLexicon) or Error(ConflictingAlias).
    static Lexicon load(std::string_view source);

    void add(const std::string& canonical, const std::vector<std::string>& aliases);

    const std::map<std::string, std::set<std::string>>& entries() const { return entries_; }
    std::size_t reverse_size() const { return reverse_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Canonical name for a phrase that is a canonical name or one of its aliases.
    std::optional<std::string> canonical_of(std::string_view phrase) const;

    /// Non-overlapping mentions: among overlapping candidates the longest wins, then the leftmost.
    std::vector<Mention> find_mentions(const TokenList& tokens) const;

    std::string to_json() const;

private:
    struct Pattern {
        std::vector<std::string> keys;
        std::string canonical;
        bool is_canonical;
    };

    std::map<std::string, std::set<std::string>> entries_;
    std::map<std::string, std::string> reverse_; // joined match keys -> canonical
    std::map<std::string, std::vector<Pattern>> by_first_key_;
};

inline Lexicon load_lexicon(std::string_view source) { return Lexicon::load(source); }

/// Match key of one token: lowercase for words, verbatim otherwise.
std::string match_key(const Token& token);

} // namespace relspec
