#pragma once

#include "relspec/lexicon.hpp"
#include "relspec/model.hpp"
#include "relspec/resolver.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace relspec {

struct IndexEntry {
    std::string id;
    std::string text;
    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// Resolved state of one requirement at one release, both deployments.
struct ResolvedState {
    std::string text;
    std::set<DevelopmentId> present_devs;
    std::set<DevelopmentId> contributing_devs;
};

/// The five procedure-centred query mappings over a resolved corpus. A procedure is a
/// lexicon canonical name; requirements mentioning none are filed under kUnmapped.
struct SpecIndex {
    static constexpr const char* kUnmapped = "(unmapped)";
    static constexpr int kFormatVersion = 1;

    ReleaseUniverse release_universe;
    DevelopmentRegistry registry;
    Lexicon lexicon;
    std::vector<std::string> requirement_order;
    std::map<std::string, std::map<ReleaseId, ResolvedState>> resolved;

    std::map<std::pair<std::string, ReleaseId>, std::vector<IndexEntry>> proc_release;
    std::map<std::pair<std::string, DevelopmentId>, std::vector<BehaviorDiff>> proc_dev;
    std::map<std::string, std::set<std::string>> proc_req;
    std::map<std::tuple<std::string, DeploymentType, ReleaseId>, std::vector<IndexEntry>> proc_dep;

    std::string to_json() const;
    /// Throws Error(InvalidIndex).
    static SpecIndex from_json(std::string_view source);
};

/// Throws Error(UnknownDevelopment) for unregistered developments.
SpecIndex build_index(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg, const Lexicon& lex);

/// Canonical name for `procedure` (alias accepted); unknown names are returned unchanged.
std::string canonical_procedure(const SpecIndex& ix, std::string_view procedure);

// Queries throw Error(UnknownRelease) / Error(UnknownDevelopment) on entities outside the index.

/// How does procedure X behave in release Y?
std::vector<IndexEntry> query_behavior(const SpecIndex& ix, std::string_view procedure, const ReleaseId& r);
/// What changed in procedure X between releases Y and Z? All-unchanged diffs are omitted.
std::vector<BehaviorDiff> query_release_diff(const SpecIndex& ix, std::string_view procedure, const ReleaseId& a,
                                             const ReleaseId& b);
/// How was procedure X modified by development Y?
std::vector<BehaviorDiff> query_dev_changes(const SpecIndex& ix, std::string_view procedure, const DevelopmentId& d);
/// Which requirements describe procedure X?
std::set<std::string> query_requirements(const SpecIndex& ix, std::string_view procedure);
/// How does procedure X behave in SA/NSA? Defaults to the latest release.
std::vector<IndexEntry> query_deployment(const SpecIndex& ix, std::string_view procedure, DeploymentType dep,
                                         std::optional<ReleaseId> r = std::nullopt);

} // namespace relspec
