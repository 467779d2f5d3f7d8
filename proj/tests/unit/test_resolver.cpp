#include "relspec/diff.hpp"
#include "relspec/error.hpp"
#include "relspec/generator.hpp"
#include "relspec/parser.hpp"
#include "relspec/resolver.hpp"

#include "../oracles.hpp"

#include <doctest.h>

using namespace relspec;

namespace {

ReleaseId R(const char* s) { return *ReleaseId::parse(s); }
DevelopmentId dev(const char* s) { return *DevelopmentId::parse(s); }

Requirement make_req(const std::string& id, std::vector<std::tuple<std::string, std::optional<std::string>, std::string>> versions) {
    Requirement req;
    req.id = id;
    for (const auto& [first, last, content] : versions) {
        RequirementVersion v;
        v.first_release = R(first.c_str());
        if (last) v.last_release = R(last->c_str());
        auto parsed = parse_content(content);
        REQUIRE(parsed.ok());
        v.content = parsed.segments;
        req.versions.push_back(v);
    }
    return req;
}

// One open version carrying CB00XXXX, released in 01R2.
Requirement fig1() {
    return make_req("REQ_1", {{"01R1", std::nullopt, "u [Before CB00XXXX] old [CB00XXXX] new [End CB00XXXX] v"}});
}

DevelopmentRegistry fig_registry() {
    DevelopmentRegistry reg;
    reg.declare_release(R("01R1"));
    reg.add(dev("CB00XXXX"), R("01R2"));
    return reg;
}

std::map<std::string, std::string> registry_map(const DevelopmentRegistry& reg) {
    std::map<std::string, std::string> out;
    for (const auto& [d, r] : reg.developments()) out[d.str()] = r.to_string();
    return out;
}

std::vector<std::pair<DiffKind, std::string>> pairs(const std::vector<DiffSegment>& segs) {
    std::vector<std::pair<DiffKind, std::string>> out;
    for (const auto& s : segs) out.emplace_back(s.kind, s.text);
    return out;
}

std::vector<std::string> texts_of(const std::vector<DiffSegment>& segs, DiffKind kind) {
    std::vector<std::string> out;
    for (const auto& s : segs) {
        if (s.kind == kind) out.push_back(s.text);
    }
    return out;
}

} // namespace

TEST_SUITE("diff") {

TEST_CASE("sentence split") {
    CHECK(split_sentences("One. Two; three.  Four") == std::vector<std::string>{"One.", "Two;", "three.", "Four"});
    CHECK(split_sentences("Version 1.2 applies.") == std::vector<std::string>{"Version 1.2 applies."});
    CHECK(split_sentences("").empty());
}

TEST_CASE("word-level refinement of an edited sentence") {
    auto d = diff_texts("u old v", "u new v");
    using K = DiffKind;
    CHECK(pairs(d) == std::vector<std::pair<K, std::string>>{
                          {K::Unchanged, "u"}, {K::Removed, "old"}, {K::Added, "new"}, {K::Unchanged, "v"}});
}

TEST_CASE("unrelated replacement stays at sentence level") {
    auto d = diff_texts("Keep this. Alpha beta gamma delta.", "Keep this. Epsilon zeta eta theta.");
    using K = DiffKind;
    CHECK(pairs(d) == std::vector<std::pair<K, std::string>>{
                          {K::Unchanged, "Keep this."}, {K::Removed, "Alpha beta gamma delta."},
                          {K::Added, "Epsilon zeta eta theta."}});
}

TEST_CASE("identity and whole-text cases") {
    for (const auto& seg : diff_texts("A b. C d.", "A b. C d.")) CHECK(seg.kind == DiffKind::Unchanged);
    auto added = diff_texts("", "New text.");
    REQUIRE(added.size() == 1);
    CHECK(added[0].kind == DiffKind::Added);
    CHECK(diff_texts("", "").empty());
}

TEST_CASE("reversed diff swaps added and removed") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        std::string a, b;
        for (int k = rng.between(0, 5); k > 0; --k) a += random_sentence(rng, 2, 4) + " ";
        b = a;
        for (int k = rng.between(0, 3); k > 0; --k) b = random_sentence(rng, 2, 4) + " " + b;
        if (rng.chance(0.5)) std::swap(a, b);
        auto fwd = diff_texts(a, b), back = diff_texts(b, a);
        REQUIRE(texts_of(fwd, DiffKind::Added) == texts_of(back, DiffKind::Removed));
        REQUIRE(texts_of(fwd, DiffKind::Removed) == texts_of(back, DiffKind::Added));
    }
}

}

TEST_SUITE("resolver") {

TEST_CASE("materialize at each side of the development release") {
    auto req = fig1();
    auto reg = fig_registry();
    auto before = materialize(req, R("01R1"), DeploymentFilter::Both, reg);
    REQUIRE(before);
    CHECK(before->text == "u old v");
    CHECK(before->contributing_devs.empty());
    CHECK(before->present_devs == std::set<DevelopmentId>{dev("CB00XXXX")});
    auto after = materialize(req, R("01R2"), DeploymentFilter::Both, reg);
    CHECK(after->text == "u new v");
    CHECK(after->contributing_devs == std::set<DevelopmentId>{dev("CB00XXXX")});
}

TEST_CASE("tag-free content is unchanged and absent outside validity") {
    auto req = make_req("REQ_2", {{"01R2", std::string("01R3"), "Plain   words\nacross lines."}});
    DevelopmentRegistry reg;
    CHECK(materialize(req, R("01R2"), DeploymentFilter::SA, reg)->text == "Plain words across lines.");
    CHECK_FALSE(materialize(req, R("01R1"), DeploymentFilter::Both, reg));
    CHECK_FALSE(materialize(req, R("01R4"), DeploymentFilter::Both, reg));
}

TEST_CASE("deployment filtering") {
    auto req = make_req("REQ_3", {{"01R1", std::nullopt, "common [SA] sa only [End SA] [NSA] nsa only [End NSA] tail"}});
    DevelopmentRegistry reg;
    CHECK(materialize(req, R("01R1"), DeploymentFilter::SA, reg)->text == "common sa only tail");
    CHECK(materialize(req, R("01R1"), DeploymentFilter::NSA, reg)->text == "common nsa only tail");
    CHECK(materialize(req, R("01R1"), DeploymentFilter::Both, reg)->text == "common sa only nsa only tail");
}

TEST_CASE("unregistered development throws") {
    auto req = fig1();
    DevelopmentRegistry empty;
    CHECK_THROWS_AS(materialize(req, R("01R1"), DeploymentFilter::Both, empty), Error);
}

TEST_CASE("baseline splits the open version") {
    auto req = fig1();
    auto reg = fig_registry();
    auto universe = release_universe({}, reg);
    auto out = baseline(req, dev("CB00XXXX"), reg, universe);
    REQUIRE(out.versions.size() == 2);
    CHECK(out.versions[0].range_string() == "01R1..01R1");
    CHECK(out.versions[0].content == req.versions[0].content);
    CHECK(out.versions[1].range_string() == "01R2..open");
    CHECK(out.versions[1].content == SegmentList{PlainText{"u new v"}});
    CHECK(serialize_content(out.versions[1].content).find("CB00XXXX") == std::string::npos);
    for (const char* r : {"01R1", "01R2", "01R3"}) {
        CHECK(materialize(out, R(r), DeploymentFilter::Both, reg)->text ==
              materialize(req, R(r), DeploymentFilter::Both, reg)->text);
    }
}

TEST_CASE("baseline preconditions") {
    auto reg = fig_registry();
    reg.add(dev("CB00YYYY"), R("01R3"));
    auto universe = release_universe({}, reg);
    CHECK_THROWS_AS(baseline(fig1(), dev("CB00YYYY"), reg, universe), Error);
    CHECK_THROWS_AS(baseline(fig1(), dev("CB00ZZZZ"), reg, universe), Error);
}

TEST_CASE("baseline rewrites in place when the version starts after the release") {
    auto req = make_req("REQ_4", {{"01R3", std::nullopt, "[Before CB00XXXX] a [CB00XXXX] b [End CB00XXXX]"}});
    auto reg = fig_registry();
    reg.declare_release(R("01R3"));
    auto out = baseline(req, dev("CB00XXXX"), reg, release_universe({}, reg));
    REQUIRE(out.versions.size() == 1);
    CHECK(out.versions[0].range_string() == "01R3..open");
    CHECK(out.versions[0].content == SegmentList{PlainText{"b"}});
}

TEST_CASE("baseline equivalence and string-level oracle over random requirements") {
    Rng rng(21);
    auto reg = random_registry(rng, 8);
    auto universe = release_universe({}, reg);
    auto map = registry_map(reg);
    for (int i = 0; i < 200; ++i) {
        auto req = random_requirement(rng, reg, "REQ_" + std::to_string(i));
        std::set<DevelopmentId> devs;
        for_each_dev_block(open_version(req)->content, [&](const DevBlock& b) { devs.insert(b.dev); });
        for (const auto& r : universe) {
            for (auto dep : {DeploymentFilter::SA, DeploymentFilter::NSA, DeploymentFilter::Both}) {
                auto got = materialize(req, r, dep, reg);
                const auto* v = version_at(req, r);
                REQUIRE((got.has_value()) == (v != nullptr));
                if (!v) continue;
                oracle::TagResolver resolver(map, r.to_string(), to_string(dep));
                REQUIRE(got->text == resolver.resolve(serialize_content(v->content)));
                REQUIRE_FALSE(oracle::has_strict_tag(got->text));
            }
        }
        for (const auto& d : devs) {
            auto based = baseline(req, d, reg, universe);
            bool leftover = false;
            for_each_dev_block(open_version(based)->content, [&](const DevBlock& b) { leftover = leftover || b.dev == d; });
            REQUIRE_FALSE(leftover);
            for (const auto& r : universe) {
                for (auto dep : {DeploymentFilter::SA, DeploymentFilter::NSA, DeploymentFilter::Both}) {
                    auto x = materialize(req, r, dep, reg), y = materialize(based, r, dep, reg);
                    REQUIRE(x.has_value() == y.has_value());
                    if (x) REQUIRE(x->text == y->text);
                }
            }
        }
    }
}

TEST_CASE("monotonic activation") {
    auto req = fig1();
    auto reg = fig_registry();
    for (int a = 2; a <= 6; ++a) {
        for (int b = a; b <= 6; ++b) {
            CHECK(materialize(req, ReleaseId{1, a}, DeploymentFilter::Both, reg)->text ==
                  materialize(req, ReleaseId{1, b}, DeploymentFilter::Both, reg)->text);
        }
    }
}

TEST_CASE("behaviour diffs") {
    auto req = fig1();
    auto reg = fig_registry();
    auto same = diff_behavior(req, R("01R1"), R("01R1"), DeploymentFilter::Both, reg);
    CHECK_FALSE(same.has_changes());
    CHECK(same.causes.empty());
    for (const auto& s : same.segments) CHECK(s.kind == DiffKind::Unchanged);

    auto d = diff_behavior(req, R("01R1"), R("01R2"), DeploymentFilter::Both, reg);
    CHECK(d.has_changes());
    CHECK(d.causes == std::set<DevelopmentId>{dev("CB00XXXX")});
    using K = DiffKind;
    CHECK(pairs(d.segments) == std::vector<std::pair<K, std::string>>{
                                   {K::Unchanged, "u"}, {K::Removed, "old"}, {K::Added, "new"}, {K::Unchanged, "v"}});

    auto late = make_req("REQ_5", {{"01R2", std::nullopt, "Fresh text."}});
    auto whole = diff_behavior(late, R("01R1"), R("01R2"), DeploymentFilter::Both, reg);
    REQUIRE(whole.segments.size() == 1);
    CHECK(whole.segments[0].kind == DiffKind::Added);
    CHECK(whole.segments[0].text == "Fresh text.");
    CHECK(whole.causes.empty());
}

TEST_CASE("diff JSON round trip") {
    auto d = diff_behavior(fig1(), R("01R1"), R("01R2"), DeploymentFilter::Both, fig_registry());
    auto j = to_json(d);
    auto back = behavior_diff_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(j["causes"] == nlohmann::json::array({"CB00XXXX"}));
    auto m = to_json(*materialize(fig1(), R("01R2"), DeploymentFilter::SA, fig_registry()));
    CHECK(m.dump() == R"({"contributing_devs":["CB00XXXX"],"deployment":"SA","id":"REQ_1","release":"01R2","text":"u new v"})");
}

}
