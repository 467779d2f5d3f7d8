#include "relspec/dataset.hpp"
#include "relspec/error.hpp"
#include "relspec/parser.hpp"
#include "relspec/resolver.hpp"
#include "relspec/tokenizer.hpp"

#include <set>

namespace relspec {

namespace {

std::string record_line(const std::string& id, const ReleaseId& r, const std::string& text) {
    nlohmann::json j{{"id", id}, {"release", r.to_string()}, {"text", text}};
    return j.dump() + '\n';
}

} // namespace

std::string ReleaseDataset::to_jsonl() const {
    std::string out;
    for (const auto& rec : records)
        out += record_line(rec.id, rec.release, rec.text);
    return out;
}

ReleaseDataset extract_release_dataset(const std::vector<SpecDocument>& docs, const ReleaseId& r,
                                       const DevelopmentRegistry& reg, const DatasetConfig& config) {
    if (!in_universe(release_universe(docs, reg), r))
        throw Error(ErrorCode::UnknownRelease, "release " + r.to_string() + " is not in the release universe");
    ReleaseDataset ds;
    ds.release = r;
    std::set<std::string> seen;
    for (const auto& doc : docs) {
        for (const auto* req : all_requirements(doc)) {
            auto resolved = materialize(*req, r, DeploymentFilter::Both, reg);
            if (!resolved)
                continue;
            ++ds.stats.total;
            if (normalize(tokenize(resolved->text)).size() < config.min_tokens) {
                ++ds.stats.dropped_headers;
                continue;
            }
            if (!seen.insert(resolved->text).second) {
                ++ds.stats.dropped_duplicates;
                continue;
            }
            ds.records.push_back(DatasetRecord{req->id, r, std::move(resolved->text)});
        }
    }
    return ds;
}

std::vector<ReleaseDataset> extract_all(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg,
                                        const DatasetConfig& config) {
    std::vector<ReleaseDataset> out;
    for (const auto& r : release_universe(docs, reg))
        out.push_back(extract_release_dataset(docs, r, reg, config));
    return out;
}

std::string naive_dump(const std::vector<SpecDocument>& docs) {
    std::string out;
    for (const auto& doc : docs)
        for (const auto* req : all_requirements(doc))
            for (const auto& v : req->versions)
                out += record_line(req->id, v.first_release, serialize_content(v.content));
    return out;
}

nlohmann::json stats_json(const std::vector<ReleaseDataset>& datasets) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& ds : datasets)
        j[ds.release.to_string()] = {{"total", ds.stats.total},
                                     {"dropped_headers", ds.stats.dropped_headers},
                                     {"dropped_duplicates", ds.stats.dropped_duplicates},
                                     {"records", ds.records.size()}};
    return j;
}

} // namespace relspec
