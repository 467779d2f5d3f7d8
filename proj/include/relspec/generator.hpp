#pragma once

#include "relspec/lexicon.hpp"
#include "relspec/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace relspec {

/// Reproducible pseudo-random source: std::mt19937_64 (bit-exact by the standard) with
/// plain modulo reduction, so fixtures are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    /// Inclusive range.
    int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[index(items.size())];
    }

private:
    std::mt19937_64 engine_;
};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t size = 200;         ///< total requirements, injected ones included
    std::size_t documents = 4;
    std::size_t near_dups = 10;     ///< injected near-copies (one changed token each)
    std::size_t over_length = 8;    ///< requirements of exactly over_length_tokens tokens
    std::size_t over_length_tokens = 400;
    std::size_t alias_usages = 12;  ///< requirements naming their procedure by an alias
    std::size_t dispersed = 3;      ///< procedures spread over four sections
};

/// A synthetic corpus and the facts that hold for it by construction.
struct GeneratedCorpus {
    std::vector<SpecDocument> docs;
    DevelopmentRegistry registry;
    std::string lexicon_json;
    /// requirements: [{id, document, section, procedures, texts: {release: {Both, SA, NSA}},
    ///                 devs: {release: [dev]}}],
    /// defects: {near_duplicates, over_length, aliases, dispersed}
    nlohmann::json ground_truth;
};

GeneratedCorpus generate_corpus(const GeneratorConfig& config);

/// Fixed procedure dictionary used by the generator.
std::string generator_lexicon_json();

/// Registry over releases 01R1..01R4 with developments spread over all four releases.
DevelopmentRegistry random_registry(Rng& rng, std::size_t developments = 12);

/// Requirement whose open version holds 1..max_dev_blocks development blocks, possibly
/// wrapped in or containing deployment spans, plus an optional earlier closed version.
Requirement random_requirement(Rng& rng, const DevelopmentRegistry& reg, const std::string& id,
                               int max_dev_blocks = 3);

/// Canonical-form document with nested sections, multi-line text and varied tag usage.
SpecDocument random_document(Rng& rng, const DevelopmentRegistry& reg, const std::string& name,
                             std::size_t& next_id);

/// Random filler sentence free of lexicon phrases and tags.
std::string random_sentence(Rng& rng, int min_words = 6, int max_words = 12);

} // namespace relspec
