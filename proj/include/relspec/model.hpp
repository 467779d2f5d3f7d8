#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace relspec {

/// Software release code rendered as "NNRk", e.g. "01R1".
struct ReleaseId {
    int major = 0;
    int revision = 1;

    static std::optional<ReleaseId> parse(std::string_view text);
    std::string to_string() const;

    friend auto operator<=>(const ReleaseId&, const ReleaseId&) = default;
};

std::strong_ordering compare_releases(const ReleaseId& a, const ReleaseId& b);

/// Development (feature change) identifier: "CB" followed by six alphanumerics, e.g. "CB00XXXX".
class DevelopmentId {
public:
    static constexpr std::size_t kSuffixLength = 6;

    static std::optional<DevelopmentId> parse(std::string_view text);
    static bool is_valid(std::string_view text);

    const std::string& str() const { return value_; }

    friend auto operator<=>(const DevelopmentId&, const DevelopmentId&) = default;

private:
    explicit DevelopmentId(std::string value) : value_(std::move(value)) {}
    std::string value_;
};

enum class DeploymentType { SA, NSA };

/// Deployment selector for resolution: one deployment type, or both.
enum class DeploymentFilter { SA, NSA, Both };

const char* to_string(DeploymentType t);
const char* to_string(DeploymentFilter f);
std::optional<DeploymentType> parse_deployment_type(std::string_view text);
std::optional<DeploymentFilter> parse_deployment_filter(std::string_view text);
inline DeploymentFilter to_filter(DeploymentType t) {
    return t == DeploymentType::SA ? DeploymentFilter::SA : DeploymentFilter::NSA;
}

// Content parse tree --------------------------------------------------------

struct Segment;
using SegmentList = std::vector<Segment>;

struct PlainText {
    std::string text;
    friend bool operator==(const PlainText&, const PlainText&) = default;
};

/// [Before D] before [D] after [End D]
struct DevBlock {
    DevelopmentId dev;
    SegmentList before;
    SegmentList after;
    friend bool operator==(const DevBlock&, const DevBlock&);
};

/// [SA] body [End SA]
struct DeploymentSpan {
    DeploymentType deployment = DeploymentType::SA;
    SegmentList body;
    friend bool operator==(const DeploymentSpan&, const DeploymentSpan&);
};

struct Segment {
    std::variant<PlainText, DevBlock, DeploymentSpan> node;

    Segment(PlainText p) : node(std::move(p)) {}
    Segment(DevBlock b) : node(std::move(b)) {}
    Segment(DeploymentSpan s) : node(std::move(s)) {}

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Visit every DevBlock in a segment list, including those inside spans and other blocks.
void for_each_dev_block(const SegmentList& segments, const std::function<void(const DevBlock&)>& fn);
/// Deployment types of all spans in document order.
std::vector<DeploymentType> deployment_sequence(const SegmentList& segments);
/// All plain text, both sides of every DevBlock, joined by single spaces.
std::string flatten_plain_text(const SegmentList& segments);

// Requirements and documents -------------------------------------------------

struct RequirementVersion {
    ReleaseId first_release;
    std::optional<ReleaseId> last_release; ///< nullopt: still valid
    SegmentList content;

    bool is_open() const { return !last_release.has_value(); }
    bool contains(const ReleaseId& r) const;
    std::string range_string() const;

    friend bool operator==(const RequirementVersion&, const RequirementVersion&) = default;
};

struct Requirement {
    std::string id;
    std::vector<RequirementVersion> versions;
    std::vector<std::string> section_path;
    int source_line = 0; ///< header line in the source; not part of equality

    friend bool operator==(const Requirement& a, const Requirement& b) {
        return a.id == b.id && a.versions == b.versions && a.section_path == b.section_path;
    }
};

/// Uppercase alphanumerics and underscores, 3 to 64 characters.
bool is_valid_requirement_id(std::string_view id);

const RequirementVersion* version_at(const Requirement& req, const ReleaseId& r);
const RequirementVersion* open_version(const Requirement& req);

struct Section {
    std::string title;
    std::vector<Requirement> requirements;
    std::vector<Section> subsections;
    friend bool operator==(const Section&, const Section&) = default;
};

struct SpecDocument {
    std::string name;
    std::vector<Requirement> requirements; ///< requirements before the first heading
    std::vector<Section> sections;
    friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Requirements of a document in document order.
std::vector<const Requirement*> all_requirements(const SpecDocument& doc);
std::vector<Requirement*> all_requirements(SpecDocument& doc);

// Releases --------------------------------------------------------------------

class DevelopmentRegistry {
public:
    /// Returns false if the development is already registered with another release.
    bool add(const DevelopmentId& dev, const ReleaseId& release);
    void declare_release(const ReleaseId& release) { declared_.insert(release); }

    std::optional<ReleaseId> find(const DevelopmentId& dev) const;
    bool contains(const DevelopmentId& dev) const { return devs_.count(dev) != 0; }

    const std::map<DevelopmentId, ReleaseId>& developments() const { return devs_; }
    const std::set<ReleaseId>& declared_releases() const { return declared_; }

private:
    std::map<DevelopmentId, ReleaseId> devs_;
    std::set<ReleaseId> declared_;
};

/// Ordered set of releases known to a corpus.
using ReleaseUniverse = std::vector<ReleaseId>;

/// Declared releases, registry releases, and every release bound seen in a version.
ReleaseUniverse release_universe(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg);
std::optional<ReleaseId> previous_release(const ReleaseUniverse& universe, const ReleaseId& r);
bool in_universe(const ReleaseUniverse& universe, const ReleaseId& r);
/// Latest universe release inside the version's validity range.
std::optional<ReleaseId> latest_release_in(const ReleaseUniverse& universe, const RequirementVersion& v);

} // namespace relspec
