#include "relspec/diff.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace relspec {

const char* to_string(DiffKind kind) {
    switch (kind) {
    case DiffKind::Added: return "Added";
    case DiffKind::Removed: return "Removed";
    case DiffKind::Unchanged: return "Unchanged";
    }
    return "?";
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto push = [&](std::size_t end) {
        auto s = detail::collapse_whitespace(text.substr(start, end - start));
        if (!s.empty())
            out.push_back(std::move(s));
        start = end;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((text[i] == '.' || text[i] == ';') && (i + 1 == text.size() || detail::is_space(text[i + 1])))
            push(i + 1);
    }
    push(text.size());
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> common_subsequence(const std::vector<std::string>& a,
                                                                    const std::vector<std::string>& b) {
    // rank elements by content so ties are broken the same way for (a, b) and (b, a)
    std::map<std::string_view, std::size_t> ranks;
    for (const auto& s : a)
        ranks.emplace(s, 0);
    for (const auto& s : b)
        ranks.emplace(s, 0);
    std::size_t next = 0;
    for (auto& [s, r] : ranks)
        r = next++;
    std::vector<std::size_t> ra(a.size()), rb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        ra[i] = ranks[a[i]];
    for (std::size_t j = 0; j < b.size(); ++j)
        rb[j] = ranks[b[j]];

    const std::size_t n = a.size(), m = b.size();
    // suffix LCS lengths
    std::vector<std::uint32_t> len((n + 1) * (m + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return len[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            at(i, j) = ra[i] == rb[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t i = 0, j = 0;
    std::uint32_t remaining = at(0, 0);
    std::map<std::size_t, std::size_t> first_a, first_b;
    while (remaining > 0) {
        first_a.clear();
        first_b.clear();
        for (std::size_t k = i; k < n; ++k)
            first_a.emplace(ra[k], k);
        for (std::size_t k = j; k < m; ++k)
            first_b.emplace(rb[k], k);
        for (const auto& [rank, pa] : first_a) {
            auto it = first_b.find(rank);
            if (it == first_b.end())
                continue;
            std::size_t pb = it->second;
            if (at(pa + 1, pb + 1) + 1 == remaining) {
                pairs.emplace_back(pa, pb);
                i = pa + 1;
                j = pb + 1;
                --remaining;
                break;
            }
        }
    }
    return pairs;
}

namespace {

void push_merged(std::vector<DiffSegment>& out, DiffKind kind, const std::string& text) {
    if (!out.empty() && out.back().kind == kind) {
        out.back().text += ' ';
        out.back().text += text;
    } else {
        out.push_back(DiffSegment{kind, text});
    }
}

std::vector<DiffSegment> diff_words(const std::vector<std::string>& removed, const std::vector<std::string>& added) {
    auto words_of = [](const std::vector<std::string>& sentences) {
        std::vector<std::string> words;
        for (const auto& s : sentences)
            for (auto w : detail::split_whitespace(s))
                words.emplace_back(w);
        return words;
    };
    auto a = words_of(removed);
    auto b = words_of(added);
    auto pairs = common_subsequence(a, b);
    std::vector<DiffSegment> out;
    // Word-level output only for edits of similar text: at least half the words in common.
    if (2 * pairs.size() < std::max(a.size(), b.size())) {
        for (const auto& s : removed)
            out.push_back(DiffSegment{DiffKind::Removed, s});
        for (const auto& s : added)
            out.push_back(DiffSegment{DiffKind::Added, s});
        return out;
    }
    std::size_t i = 0, j = 0;
    for (auto [pa, pb] : pairs) {
        for (; i < pa; ++i)
            push_merged(out, DiffKind::Removed, a[i]);
        for (; j < pb; ++j)
            push_merged(out, DiffKind::Added, b[j]);
        push_merged(out, DiffKind::Unchanged, a[pa]);
        i = pa + 1;
        j = pb + 1;
    }
    for (; i < a.size(); ++i)
        push_merged(out, DiffKind::Removed, a[i]);
    for (; j < b.size(); ++j)
        push_merged(out, DiffKind::Added, b[j]);
    return out;
}

} // namespace

std::vector<DiffSegment> diff_texts(std::string_view from, std::string_view to) {
    auto a = split_sentences(from);
    auto b = split_sentences(to);
    auto pairs = common_subsequence(a, b);
    pairs.emplace_back(a.size(), b.size()); // sentinel

    std::vector<DiffSegment> out;
    std::size_t i = 0, j = 0;
    for (auto [pa, pb] : pairs) {
        std::vector<std::string> removed(a.begin() + i, a.begin() + pa);
        std::vector<std::string> added(b.begin() + j, b.begin() + pb);
        if (!removed.empty() && !added.empty()) {
            for (auto& seg : diff_words(removed, added))
                out.push_back(std::move(seg));
        } else {
            for (auto& s : removed)
                out.push_back(DiffSegment{DiffKind::Removed, std::move(s)});
            for (auto& s : added)
                out.push_back(DiffSegment{DiffKind::Added, std::move(s)});
        }
        if (pa < a.size())
            out.push_back(DiffSegment{DiffKind::Unchanged, a[pa]});
        i = pa + 1;
        j = pb + 1;
    }
    return out;
}

} // namespace relspec
