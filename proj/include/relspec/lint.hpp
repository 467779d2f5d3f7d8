#pragma once

#include "relspec/lexicon.hpp"
#include "relspec/model.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace relspec {

enum class LintRule { L1_Duplication, L2_Length, L3_Standardization, L4_Grammar, L5_Dispersion };
enum class Severity { Low, Medium, High };

const char* to_string(LintRule rule);
const char* to_string(Severity severity);
std::optional<Severity> parse_severity(std::string_view text);

/// Fixed severity per rule: duplication, length and standardization are High,
/// grammar Medium, dispersion Low.
Severity severity_of(LintRule rule);

struct Location {
    std::string document;
    std::string requirement;
    std::string version; ///< "01R1..open"
    std::string section; ///< section titles joined by " / "

    friend bool operator==(const Location&, const Location&) = default;
};

struct LintFinding {
    LintRule rule;
    Severity severity;
    std::string check; ///< sub-check, e.g. "near-duplicate" or "mixed-deployment"
    Location location;
    std::optional<Location> related;
    std::vector<Location> locations; ///< every location, for findings spanning many places
    std::string message;
    std::optional<double> score;
};

struct LintConfig {
    std::size_t shingle_k = 5;
    double dup_threshold = 0.7;
    std::size_t max_tokens = 250;
    std::size_t max_procedures = 3;
    std::size_t max_sections = 2;
    std::array<bool, 5> enabled{true, true, true, true, true};

    bool is_enabled(LintRule rule) const { return enabled[static_cast<std::size_t>(rule)]; }

    /// Throws Error(InvalidConfig) when a threshold is out of range.
    void validate() const;

    /// Keys: shingle_k, dup_threshold, max_tokens, max_procedures, max_sections and
    /// "rules": {"L1": bool, ...}. Missing keys keep their defaults.
    static LintConfig from_json(std::string_view source);
};

/// All rules, ordered by (document, requirement, rule).
std::vector<LintFinding> lint_corpus(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg,
                                     const Lexicon& lex, const LintConfig& config);

// individual rules

std::vector<LintFinding> detect_duplication(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg,
                                            const LintConfig& config);
std::vector<LintFinding> check_length(const SpecDocument& doc, const Requirement& req, const DevelopmentRegistry& reg,
                                      const ReleaseUniverse& universe, const LintConfig& config, const Lexicon& lex);
std::vector<LintFinding> check_standardization(const std::vector<SpecDocument>& docs, const Lexicon& lex);
std::vector<LintFinding> check_grammar(const SpecDocument& doc, const Requirement& req,
                                       const DevelopmentRegistry& reg, const ReleaseUniverse& universe);
std::vector<LintFinding> check_dispersion(const std::vector<SpecDocument>& docs, const Lexicon& lex,
                                          const LintConfig& config);

/// Text a version contributes at its latest release in the universe, both deployments.
std::string latest_text(const Requirement& req, const RequirementVersion& version, const DevelopmentRegistry& reg,
                        const ReleaseUniverse& universe);

/// Sorted, de-duplicated hashes of every k-token window (a single window when shorter than k).
std::vector<std::uint64_t> shingle_hashes(const TokenList& normalized, std::size_t k);
double jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

nlohmann::json to_json(const LintFinding& finding);
std::string format_finding(const LintFinding& finding);

} // namespace relspec
