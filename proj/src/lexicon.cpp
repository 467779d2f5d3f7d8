#include "relspec/lexicon.hpp"
#include "relspec/error.hpp"

#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>

namespace relspec {

std::string match_key(const Token& token) {
    return token.kind == TokenKind::Word ? detail::to_lower(token.text) : token.text;
}

namespace {

std::vector<std::string> keys_of(std::string_view phrase) {
    std::vector<std::string> keys;
    for (const auto& t : tokenize(phrase))
        keys.push_back(match_key(t));
    return keys;
}

std::string join_keys(const std::vector<std::string>& keys) {
    std::string out;
    for (const auto& k : keys) {
        if (!out.empty())
            out += '\x1f';
        out += k;
    }
    return out;
}

} // namespace

Lexicon Lexicon::load(std::string_view source) {
    Lexicon lex;
    if (detail::trim(source).empty())
        return lex;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidLexicon, std::string("lexicon is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw Error(ErrorCode::InvalidLexicon, "lexicon must be a JSON object of canonical -> [aliases]");
    for (const auto& [canonical, aliases] : doc.items()) {
        if (!aliases.is_array())
            throw Error(ErrorCode::InvalidLexicon, "aliases of '" + canonical + "' must be an array");
        std::vector<std::string> list;
        for (const auto& a : aliases) {
            if (!a.is_string())
                throw Error(ErrorCode::InvalidLexicon, "aliases of '" + canonical + "' must be strings");
            list.push_back(a.get<std::string>());
        }
        lex.add(canonical, list);
    }
    return lex;
}

void Lexicon::add(const std::string& canonical, const std::vector<std::string>& aliases) {
    auto canonical_keys = keys_of(canonical);
    if (canonical_keys.empty())
        throw Error(ErrorCode::InvalidLexicon, "empty canonical name");
    std::vector<std::string> all{canonical};
    all.insert(all.end(), aliases.begin(), aliases.end());
    for (const auto& alias : all) {
        auto keys = keys_of(alias);
        if (keys.empty())
            throw Error(ErrorCode::InvalidLexicon, "empty alias under '" + canonical + "'");
        auto joined = join_keys(keys);
        auto [it, inserted] = reverse_.emplace(joined, canonical);
        if (!inserted) {
            if (it->second != canonical)
                throw Error(ErrorCode::ConflictingAlias,
                            "alias '" + alias + "' maps to both '" + it->second + "' and '" + canonical + "'");
            entries_[canonical].insert(alias);
            continue;
        }
        entries_[canonical].insert(alias);
        auto& bucket = by_first_key_[keys.front()];
        bucket.push_back(Pattern{keys, canonical, keys == canonical_keys});
        std::stable_sort(bucket.begin(), bucket.end(),
                         [](const Pattern& a, const Pattern& b) { return a.keys.size() > b.keys.size(); });
    }
}

std::optional<std::string> Lexicon::canonical_of(std::string_view phrase) const {
    auto it = reverse_.find(join_keys(keys_of(phrase)));
    if (it == reverse_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Mention> Lexicon::find_mentions(const TokenList& tokens) const {
    std::vector<std::string> keys;
    keys.reserve(tokens.size());
    for (const auto& t : tokens)
        keys.push_back(match_key(t));

    // longest candidate at each start position
    std::vector<Mention> candidates;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto bucket = by_first_key_.find(keys[i]);
        if (bucket == by_first_key_.end())
            continue;
        for (const auto& p : bucket->second) {
            if (i + p.keys.size() > keys.size())
                continue;
            if (!std::equal(p.keys.begin(), p.keys.end(), keys.begin() + static_cast<std::ptrdiff_t>(i)))
                continue;
            Mention m;
            m.canonical = p.canonical;
            m.start = i;
            m.end = i + p.keys.size();
            m.canonical_form = p.is_canonical;
            candidates.push_back(std::move(m));
            break;
        }
    }

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto la = candidates[a].end - candidates[a].start;
        const auto lb = candidates[b].end - candidates[b].start;
        return la != lb ? la > lb : candidates[a].start < candidates[b].start;
    });
    std::vector<bool> taken(tokens.size(), false);
    std::vector<Mention> out;
    for (auto k : order) {
        auto& m = candidates[k];
        if (std::any_of(taken.begin() + static_cast<std::ptrdiff_t>(m.start),
                        taken.begin() + static_cast<std::ptrdiff_t>(m.end), [](bool b) { return b; }))
            continue;
        std::fill(taken.begin() + static_cast<std::ptrdiff_t>(m.start),
                  taken.begin() + static_cast<std::ptrdiff_t>(m.end), true);
        TokenList span(tokens.begin() + static_cast<std::ptrdiff_t>(m.start),
                       tokens.begin() + static_cast<std::ptrdiff_t>(m.end));
        span.front().space_before = false;
        m.surface = detokenize(span);
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end(), [](const Mention& a, const Mention& b) { return a.start < b.start; });
    return out;
}

std::string Lexicon::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [canonical, aliases] : entries_) {
        auto arr = nlohmann::json::array();
        for (const auto& a : aliases)
            if (a != canonical)
                arr.push_back(a);
        j[canonical] = arr;
    }
    return j.dump(2);
}

} // namespace relspec
