#pragma once

#include "relspec/diff.hpp"
#include "relspec/model.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace relspec {

/// Tag-free effective text of a requirement at one release and deployment.
struct ResolvedRequirement {
    std::string id;
    ReleaseId release;
    DeploymentFilter deployment = DeploymentFilter::Both;
    std::string text;
    std::set<DevelopmentId> contributing_devs; ///< devs whose after-part was taken
    std::set<DevelopmentId> present_devs;      ///< every dev block walked, active or not
};

struct BehaviorDiff {
    std::string id;
    ReleaseId release_a;
    ReleaseId release_b;
    DeploymentFilter deployment = DeploymentFilter::Both;
    std::vector<DiffSegment> segments;
    std::set<DevelopmentId> causes;

    bool has_changes() const;
};

/// A development is active at r once its introducing release has been reached.
bool is_active(const DevelopmentRegistry& reg, const DevelopmentId& dev, const ReleaseId& r);

/// Returns nullopt when no version of `req` is valid at `r`.
/// Throws Error(UnknownDevelopment) if the selected version uses an unregistered development.
std::optional<ResolvedRequirement> materialize(const Requirement& req, const ReleaseId& r, DeploymentFilter dep,
                                               const DevelopmentRegistry& reg);

/// Deletes the tags of `dev` from the open version: the version is closed at the release
/// preceding the development's release and a new open version carries the new behaviour
/// inline. When the open version starts at or after that release, its content is rewritten
/// in place. Throws Error(UnknownDevelopment) or Error(DevelopmentNotPresent).
Requirement baseline(const Requirement& req, const DevelopmentId& dev, const DevelopmentRegistry& reg,
                     const ReleaseUniverse& universe);

/// `content` with every DevBlock for `dev` replaced by its after-part.
SegmentList inline_development(const SegmentList& content, const DevelopmentId& dev);

BehaviorDiff diff_behavior(const Requirement& req, const ReleaseId& a, const ReleaseId& b, DeploymentFilter dep,
                           const DevelopmentRegistry& reg);

/// Diff of two already-materialized states (either may be absent).
BehaviorDiff diff_resolved(const std::string& id, const ReleaseId& a, const ReleaseId& b, DeploymentFilter dep,
                           const ResolvedRequirement* at_a, const ResolvedRequirement* at_b,
                           const DevelopmentRegistry& reg);

/// {id, release, deployment, text, contributing_devs}
nlohmann::json to_json(const ResolvedRequirement& resolved);
/// {id, release_a, release_b, deployment, segments: [{kind, text}], causes}
nlohmann::json to_json(const BehaviorDiff& diff);
BehaviorDiff behavior_diff_from_json(const nlohmann::json& j);

} // namespace relspec
