#include "relspec/resolver.hpp"
#include "relspec/error.hpp"

#include "text_util.hpp"

#include <algorithm>

namespace relspec {

bool BehaviorDiff::has_changes() const {
    return std::any_of(segments.begin(), segments.end(),
                       [](const DiffSegment& s) { return s.kind != DiffKind::Unchanged; });
}

bool is_active(const DevelopmentRegistry& reg, const DevelopmentId& dev, const ReleaseId& r) {
    auto release = reg.find(dev);
    if (!release)
        throw Error(ErrorCode::UnknownDevelopment, "development " + dev.str() + " is not registered");
    return *release <= r;
}

namespace {

struct Walker {
    const DevelopmentRegistry& reg;
    const ReleaseId& release;
    DeploymentFilter filter;
    std::vector<std::string_view> pieces;
    std::set<DevelopmentId> contributing;
    std::set<DevelopmentId> present;

    void walk(const SegmentList& segments) {
        for (const auto& seg : segments) {
            if (const auto* plain = std::get_if<PlainText>(&seg.node)) {
                pieces.push_back(plain->text);
            } else if (const auto* block = std::get_if<DevBlock>(&seg.node)) {
                present.insert(block->dev);
                if (is_active(reg, block->dev, release)) {
                    contributing.insert(block->dev);
                    walk(block->after);
                } else {
                    walk(block->before);
                }
            } else if (const auto* span = std::get_if<DeploymentSpan>(&seg.node)) {
                if (filter == DeploymentFilter::Both || filter == to_filter(span->deployment))
                    walk(span->body);
            }
        }
    }
};

void append_merged(SegmentList& out, Segment seg) {
    if (auto* plain = std::get_if<PlainText>(&seg.node); plain && !out.empty()) {
        if (auto* prev = std::get_if<PlainText>(&out.back().node)) {
            prev->text += ' ';
            prev->text += plain->text;
            return;
        }
    }
    out.push_back(std::move(seg));
}

bool contains_dev(const SegmentList& content, const DevelopmentId& dev) {
    bool found = false;
    for_each_dev_block(content, [&](const DevBlock& b) { found = found || b.dev == dev; });
    return found;
}

} // namespace

std::optional<ResolvedRequirement> materialize(const Requirement& req, const ReleaseId& r, DeploymentFilter dep,
                                               const DevelopmentRegistry& reg) {
    const auto* version = version_at(req, r);
    if (!version)
        return std::nullopt;
    for_each_dev_block(version->content, [&](const DevBlock& b) {
        if (!reg.contains(b.dev))
            throw Error(ErrorCode::UnknownDevelopment,
                        "requirement " + req.id + " uses unregistered development " + b.dev.str());
    });

    Walker walker{reg, r, dep, {}, {}, {}};
    walker.walk(version->content);

    std::string joined;
    for (auto piece : walker.pieces) {
        if (!joined.empty())
            joined += ' ';
        joined += piece;
    }
    ResolvedRequirement out;
    out.id = req.id;
    out.release = r;
    out.deployment = dep;
    out.text = detail::collapse_whitespace(joined);
    out.contributing_devs = std::move(walker.contributing);
    out.present_devs = std::move(walker.present);
    return out;
}

SegmentList inline_development(const SegmentList& content, const DevelopmentId& dev) {
    SegmentList out;
    for (const auto& seg : content) {
        if (const auto* block = std::get_if<DevBlock>(&seg.node)) {
            if (block->dev == dev) {
                for (auto& s : inline_development(block->after, dev))
                    append_merged(out, std::move(s));
            } else {
                out.emplace_back(DevBlock{block->dev, inline_development(block->before, dev),
                                          inline_development(block->after, dev)});
            }
        } else if (const auto* span = std::get_if<DeploymentSpan>(&seg.node)) {
            out.emplace_back(DeploymentSpan{span->deployment, inline_development(span->body, dev)});
        } else {
            append_merged(out, seg);
        }
    }
    return out;
}

Requirement baseline(const Requirement& req, const DevelopmentId& dev, const DevelopmentRegistry& reg,
                     const ReleaseUniverse& universe) {
    auto release = reg.find(dev);
    if (!release)
        throw Error(ErrorCode::UnknownDevelopment, "development " + dev.str() + " is not registered");
    auto open = std::find_if(req.versions.begin(), req.versions.end(),
                             [](const RequirementVersion& v) { return v.is_open(); });
    if (open == req.versions.end() || !contains_dev(open->content, dev))
        throw Error(ErrorCode::DevelopmentNotPresent,
                    "open version of " + req.id + " has no block for " + dev.str());

    Requirement out = req;
    auto index = static_cast<std::size_t>(open - req.versions.begin());
    auto& current = out.versions[index];
    auto inlined = inline_development(current.content, dev);

    if (current.first_release >= *release) {
        current.content = std::move(inlined);
        return out;
    }
    ReleaseUniverse known = universe;
    if (!in_universe(known, current.first_release)) {
        known.insert(std::lower_bound(known.begin(), known.end(), current.first_release), current.first_release);
    }
    // first_release < release and first_release is known, so a predecessor exists
    auto prev = previous_release(known, *release);
    current.last_release = *prev;
    out.versions.insert(out.versions.begin() + static_cast<std::ptrdiff_t>(index) + 1,
                        RequirementVersion{*release, std::nullopt, std::move(inlined)});
    return out;
}

BehaviorDiff diff_resolved(const std::string& id, const ReleaseId& a, const ReleaseId& b, DeploymentFilter dep,
                           const ResolvedRequirement* at_a, const ResolvedRequirement* at_b,
                           const DevelopmentRegistry& reg) {
    BehaviorDiff diff;
    diff.id = id;
    diff.release_a = a;
    diff.release_b = b;
    diff.deployment = dep;
    diff.segments = diff_texts(at_a ? at_a->text : std::string(), at_b ? at_b->text : std::string());
    if (!diff.has_changes())
        return diff;
    std::set<DevelopmentId> present;
    if (at_a)
        present.insert(at_a->present_devs.begin(), at_a->present_devs.end());
    if (at_b)
        present.insert(at_b->present_devs.begin(), at_b->present_devs.end());
    for (const auto& d : present)
        if (is_active(reg, d, a) != is_active(reg, d, b))
            diff.causes.insert(d);
    return diff;
}

BehaviorDiff diff_behavior(const Requirement& req, const ReleaseId& a, const ReleaseId& b, DeploymentFilter dep,
                           const DevelopmentRegistry& reg) {
    auto at_a = materialize(req, a, dep, reg);
    auto at_b = materialize(req, b, dep, reg);
    return diff_resolved(req.id, a, b, dep, at_a ? &*at_a : nullptr, at_b ? &*at_b : nullptr, reg);
}

namespace {

nlohmann::json dev_array(const std::set<DevelopmentId>& devs) {
    auto arr = nlohmann::json::array();
    for (const auto& d : devs)
        arr.push_back(d.str());
    return arr;
}

} // namespace

nlohmann::json to_json(const ResolvedRequirement& resolved) {
    return {{"id", resolved.id},
            {"release", resolved.release.to_string()},
            {"deployment", to_string(resolved.deployment)},
            {"text", resolved.text},
            {"contributing_devs", dev_array(resolved.contributing_devs)}};
}

nlohmann::json to_json(const BehaviorDiff& diff) {
    auto segments = nlohmann::json::array();
    for (const auto& s : diff.segments)
        segments.push_back({{"kind", to_string(s.kind)}, {"text", s.text}});
    return {{"id", diff.id},
            {"release_a", diff.release_a.to_string()},
            {"release_b", diff.release_b.to_string()},
            {"deployment", to_string(diff.deployment)},
            {"segments", segments},
            {"causes", dev_array(diff.causes)}};
}

BehaviorDiff behavior_diff_from_json(const nlohmann::json& j) {
    auto release = [](const nlohmann::json& v) {
        auto r = ReleaseId::parse(v.get<std::string>());
        if (!r)
            throw Error(ErrorCode::InvalidIndex, "bad release id in diff");
        return *r;
    };
    BehaviorDiff diff;
    diff.id = j.at("id").get<std::string>();
    diff.release_a = release(j.at("release_a"));
    diff.release_b = release(j.at("release_b"));
    auto dep = parse_deployment_filter(j.at("deployment").get<std::string>());
    if (!dep)
        throw Error(ErrorCode::InvalidIndex, "bad deployment in diff");
    diff.deployment = *dep;
    for (const auto& s : j.at("segments")) {
        auto kind = s.at("kind").get<std::string>();
        DiffKind k = kind == "Added" ? DiffKind::Added : kind == "Removed" ? DiffKind::Removed : DiffKind::Unchanged;
        if (kind != "Added" && kind != "Removed" && kind != "Unchanged")
            throw Error(ErrorCode::InvalidIndex, "bad diff segment kind '" + kind + "'");
        diff.segments.push_back(DiffSegment{k, s.at("text").get<std::string>()});
    }
    for (const auto& c : j.at("causes")) {
        auto d = DevelopmentId::parse(c.get<std::string>());
        if (!d)
            throw Error(ErrorCode::InvalidIndex, "bad development id in diff");
        diff.causes.insert(*d);
    }
    return diff;
}

} // namespace relspec
