#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relspec {

enum class DiffKind { Added, Removed, Unchanged };

const char* to_string(DiffKind kind);

struct DiffSegment {
    DiffKind kind;
    std::string text;
    friend bool operator==(const DiffSegment&, const DiffSegment&) = default;
};

/// Splits on '.' or ';' followed by whitespace or end of text, so "3.5" and "a.b" stay intact.
/// Each sentence keeps its terminator.
std::vector<std::string> split_sentences(std::string_view text);

/// Index pairs of a longest common subsequence. Among all LCSs the one whose element
/// sequence is lexicographically smallest is chosen, embedded leftmost in both inputs;
/// the choice is therefore independent of argument order.
std::vector<std::pair<std::size_t, std::size_t>> common_subsequence(const std::vector<std::string>& a,
                                                                    const std::vector<std::string>& b);

/// Sentence-aligned diff; replaced sentence runs are refined to word level.
std::vector<DiffSegment> diff_texts(std::string_view from, std::string_view to);

} // namespace relspec
