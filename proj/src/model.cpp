#include "relspec/model.hpp"
#include "relspec/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace relspec {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownDevelopment: return "UnknownDevelopment";
    case ErrorCode::DevelopmentNotPresent: return "DevelopmentNotPresent";
    case ErrorCode::UnknownRelease: return "UnknownRelease";
    case ErrorCode::ConflictingAlias: return "ConflictingAlias";
    case ErrorCode::InvalidLexicon: return "InvalidLexicon";
    case ErrorCode::InvalidRegistry: return "InvalidRegistry";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    }
    return "?";
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

std::optional<ReleaseId> ReleaseId::parse(std::string_view text) {
    if (text.size() < 4 || text[2] != 'R')
        return std::nullopt;
    auto major = text.substr(0, 2);
    auto rev = text.substr(3);
    if (!all_digits(major) || !all_digits(rev) || rev.size() > 9)
        return std::nullopt;
    ReleaseId id;
    std::from_chars(major.data(), major.data() + major.size(), id.major);
    std::from_chars(rev.data(), rev.data() + rev.size(), id.revision);
    if (id.revision < 1)
        return std::nullopt;
    return id;
}

std::string ReleaseId::to_string() const {
    std::string out;
    if (major < 10)
        out += '0';
    out += std::to_string(major);
    out += 'R';
    out += std::to_string(revision);
    return out;
}

std::strong_ordering compare_releases(const ReleaseId& a, const ReleaseId& b) { return a <=> b; }

bool DevelopmentId::is_valid(std::string_view text) {
    if (text.size() != 2 + kSuffixLength || text.substr(0, 2) != "CB")
        return false;
    return std::all_of(text.begin() + 2, text.end(), [](unsigned char c) { return std::isalnum(c); });
}

std::optional<DevelopmentId> DevelopmentId::parse(std::string_view text) {
    if (!is_valid(text))
        return std::nullopt;
    return DevelopmentId(std::string(text));
}

const char* to_string(DeploymentType t) { return t == DeploymentType::SA ? "SA" : "NSA"; }

const char* to_string(DeploymentFilter f) {
    switch (f) {
    case DeploymentFilter::SA: return "SA";
    case DeploymentFilter::NSA: return "NSA";
    case DeploymentFilter::Both: return "Both";
    }
    return "?";
}

std::optional<DeploymentType> parse_deployment_type(std::string_view text) {
    if (text == "SA")
        return DeploymentType::SA;
    if (text == "NSA")
        return DeploymentType::NSA;
    return std::nullopt;
}

std::optional<DeploymentFilter> parse_deployment_filter(std::string_view text) {
    if (text == "Both" || text == "both")
        return DeploymentFilter::Both;
    if (text == "SA" || text == "sa")
        return DeploymentFilter::SA;
    if (text == "NSA" || text == "nsa")
        return DeploymentFilter::NSA;
    return std::nullopt;
}

bool operator==(const DevBlock& a, const DevBlock& b) {
    return a.dev == b.dev && a.before == b.before && a.after == b.after;
}

bool operator==(const DeploymentSpan& a, const DeploymentSpan& b) {
    return a.deployment == b.deployment && a.body == b.body;
}

void for_each_dev_block(const SegmentList& segments, const std::function<void(const DevBlock&)>& fn) {
    for (const auto& seg : segments) {
        if (const auto* block = std::get_if<DevBlock>(&seg.node)) {
            fn(*block);
            for_each_dev_block(block->before, fn);
            for_each_dev_block(block->after, fn);
        } else if (const auto* span = std::get_if<DeploymentSpan>(&seg.node)) {
            for_each_dev_block(span->body, fn);
        }
    }
}

namespace {

void collect_deployments(const SegmentList& segments, std::vector<DeploymentType>& out) {
    for (const auto& seg : segments) {
        if (const auto* block = std::get_if<DevBlock>(&seg.node)) {
            collect_deployments(block->before, out);
            collect_deployments(block->after, out);
        } else if (const auto* span = std::get_if<DeploymentSpan>(&seg.node)) {
            out.push_back(span->deployment);
            collect_deployments(span->body, out);
        }
    }
}

void collect_plain(const SegmentList& segments, std::string& out) {
    for (const auto& seg : segments) {
        if (const auto* plain = std::get_if<PlainText>(&seg.node)) {
            if (!out.empty())
                out += ' ';
            out += plain->text;
        } else if (const auto* block = std::get_if<DevBlock>(&seg.node)) {
            collect_plain(block->before, out);
            collect_plain(block->after, out);
        } else if (const auto* span = std::get_if<DeploymentSpan>(&seg.node)) {
            collect_plain(span->body, out);
        }
    }
}

} // namespace

std::vector<DeploymentType> deployment_sequence(const SegmentList& segments) {
    std::vector<DeploymentType> out;
    collect_deployments(segments, out);
    return out;
}

std::string flatten_plain_text(const SegmentList& segments) {
    std::string out;
    collect_plain(segments, out);
    return out;
}

bool RequirementVersion::contains(const ReleaseId& r) const {
    if (r < first_release)
        return false;
    return !last_release || r <= *last_release;
}

std::string RequirementVersion::range_string() const {
    return first_release.to_string() + ".." + (last_release ? last_release->to_string() : std::string("open"));
}

bool is_valid_requirement_id(std::string_view id) {
    if (id.size() < 3 || id.size() > 64)
        return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isdigit(c) || std::isupper(c) || c == '_';
    });
}

const RequirementVersion* version_at(const Requirement& req, const ReleaseId& r) {
    for (const auto& v : req.versions)
        if (v.contains(r))
            return &v;
    return nullptr;
}

const RequirementVersion* open_version(const Requirement& req) {
    for (const auto& v : req.versions)
        if (v.is_open())
            return &v;
    return nullptr;
}

namespace {

template <typename SectionT, typename Out>
void collect_section(SectionT& section, Out& out) {
    for (auto& req : section.requirements)
        out.push_back(&req);
    for (auto& sub : section.subsections)
        collect_section(sub, out);
}

} // namespace

std::vector<const Requirement*> all_requirements(const SpecDocument& doc) {
    std::vector<const Requirement*> out;
    for (const auto& req : doc.requirements)
        out.push_back(&req);
    for (const auto& section : doc.sections)
        collect_section(section, out);
    return out;
}

std::vector<Requirement*> all_requirements(SpecDocument& doc) {
    std::vector<Requirement*> out;
    for (auto& req : doc.requirements)
        out.push_back(&req);
    for (auto& section : doc.sections)
        collect_section(section, out);
    return out;
}

bool DevelopmentRegistry::add(const DevelopmentId& dev, const ReleaseId& release) {
    auto [it, inserted] = devs_.emplace(dev, release);
    return inserted || it->second == release;
}

std::optional<ReleaseId> DevelopmentRegistry::find(const DevelopmentId& dev) const {
    auto it = devs_.find(dev);
    if (it == devs_.end())
        return std::nullopt;
    return it->second;
}

ReleaseUniverse release_universe(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg) {
    std::set<ReleaseId> all = reg.declared_releases();
    for (const auto& [dev, release] : reg.developments())
        all.insert(release);
    for (const auto& doc : docs) {
        for (const auto* req : all_requirements(doc)) {
            for (const auto& v : req->versions) {
                all.insert(v.first_release);
                if (v.last_release)
                    all.insert(*v.last_release);
            }
        }
    }
    return {all.begin(), all.end()};
}

std::optional<ReleaseId> previous_release(const ReleaseUniverse& universe, const ReleaseId& r) {
    auto it = std::lower_bound(universe.begin(), universe.end(), r);
    if (it == universe.begin())
        return std::nullopt;
    return *std::prev(it);
}

bool in_universe(const ReleaseUniverse& universe, const ReleaseId& r) {
    return std::binary_search(universe.begin(), universe.end(), r);
}

std::optional<ReleaseId> latest_release_in(const ReleaseUniverse& universe, const RequirementVersion& v) {
    for (auto it = universe.rbegin(); it != universe.rend(); ++it)
        if (v.contains(*it))
            return *it;
    return std::nullopt;
}

} // namespace relspec
