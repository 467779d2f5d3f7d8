#pragma once

#include "relspec/model.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace relspec {

struct DatasetConfig {
    std::size_t min_tokens = 5; ///< records shorter than this are treated as headers
};

struct DatasetRecord {
    std::string id;
    ReleaseId release;
    std::string text;
    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct DatasetStats {
    std::size_t total = 0;
    std::size_t dropped_headers = 0;
    std::size_t dropped_duplicates = 0;
};

/// Raw dataset of a single release: resolved text only, headers and exact duplicates removed.
struct ReleaseDataset {
    ReleaseId release;
    std::vector<DatasetRecord> records;
    DatasetStats stats;

    /// One `{id, release, text}` object per line.
    std::string to_jsonl() const;
};

/// Throws Error(UnknownRelease) when `r` is not in the corpus release universe.
ReleaseDataset extract_release_dataset(const std::vector<SpecDocument>& docs, const ReleaseId& r,
                                       const DevelopmentRegistry& reg, const DatasetConfig& config = {});

/// One dataset per release in the universe.
std::vector<ReleaseDataset> extract_all(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg,
                                        const DatasetConfig& config = {});

/// Every version of every requirement with its tagged content, in the same record layout;
/// the baseline the per-release datasets are measured against.
std::string naive_dump(const std::vector<SpecDocument>& docs);

/// {release: {total, dropped_headers, dropped_duplicates, records}}
nlohmann::json stats_json(const std::vector<ReleaseDataset>& datasets);

} // namespace relspec
