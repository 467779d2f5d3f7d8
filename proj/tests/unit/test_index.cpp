#include "relspec/error.hpp"
#include "relspec/index.hpp"
#include "relspec/parser.hpp"

#include <doctest.h>

using namespace relspec;

namespace {

ReleaseId R(const char* s) { return *ReleaseId::parse(s); }
DevelopmentId dev(const char* s) { return *DevelopmentId::parse(s); }

const char* kLexicon = R"({"A2 measurement": ["A2 measurement for Handover"], "Paging procedure": ["paging"]})";

struct Fixture {
    std::vector<SpecDocument> docs;
    DevelopmentRegistry reg;
    Lexicon lex = load_lexicon(kLexicon);
    SpecIndex ix;

    Fixture() {
        reg.declare_release(R("01R1"));
        reg.add(dev("CB00XXXX"), R("01R2"));
        reg.add(dev("CB00YYYY"), R("01R3"));
        auto parsed = parse_document(R"(# 1 Measurement
=== REQ REQ_A ===
--- VERSION first=01R1 last=open ---
The A2 measurement uses [Before CB00XXXX] old [CB00XXXX] new [End CB00XXXX] thresholds.
=== END ===
=== REQ REQ_B ===
--- VERSION first=01R1 last=open ---
The A2 measurement for Handover applies. [SA] Standalone only. [End SA] [NSA] Non-standalone only. [End NSA]
=== END ===
# 2 Paging
=== REQ REQ_C ===
--- VERSION first=01R2 last=open ---
paging is repeated.
=== END ===
=== REQ REQ_D ===
--- VERSION first=01R1 last=open ---
Nothing known here.
=== END ===
)",
                                     "d");
        REQUIRE(parsed.ok());
        docs.push_back(parsed.document);
        ix = build_index(docs, reg, lex);
    }
};

std::vector<std::string> ids(const std::vector<IndexEntry>& entries) {
    std::vector<std::string> out;
    for (const auto& e : entries) out.push_back(e.id);
    return out;
}

} // namespace

TEST_SUITE("index") {

TEST_CASE("universe and requirement mapping") {
    Fixture f;
    CHECK(f.ix.release_universe == ReleaseUniverse{R("01R1"), R("01R2"), R("01R3")});
    CHECK(query_requirements(f.ix, "A2 measurement") == std::set<std::string>{"REQ_A", "REQ_B"});
    CHECK(query_requirements(f.ix, "A2 measurement for Handover") == std::set<std::string>{"REQ_A", "REQ_B"});
    CHECK(query_requirements(f.ix, "PAGING") == std::set<std::string>{"REQ_C"});
    CHECK(query_requirements(f.ix, SpecIndex::kUnmapped) == std::set<std::string>{"REQ_D"});
    CHECK(query_requirements(f.ix, "nothing").empty());
}

TEST_CASE("behaviour per release") {
    Fixture f;
    auto r1 = query_behavior(f.ix, "A2 measurement", R("01R1"));
    CHECK(ids(r1) == std::vector<std::string>{"REQ_A", "REQ_B"});
    CHECK(r1[0].text == "The A2 measurement uses old thresholds.");
    CHECK(query_behavior(f.ix, "A2 measurement for Handover", R("01R1")) == r1);
    CHECK(query_behavior(f.ix, "A2 measurement", R("01R3"))[0].text == "The A2 measurement uses new thresholds.");
    CHECK(query_behavior(f.ix, "Paging procedure", R("01R1")).empty());
    CHECK(ids(query_behavior(f.ix, "Paging procedure", R("01R2"))) == std::vector<std::string>{"REQ_C"});
    CHECK(query_behavior(f.ix, "unknown", R("01R1")).empty());
    CHECK_THROWS_AS(query_behavior(f.ix, "A2 measurement", R("07R1")), Error);
}

TEST_CASE("behaviour agrees with materialize") {
    Fixture f;
    for (const auto& r : f.ix.release_universe) {
        for (const auto& p : {"A2 measurement", "Paging procedure"}) {
            for (const auto& e : query_behavior(f.ix, p, r)) {
                for (const Requirement* req : all_requirements(f.docs[0])) {
                    if (req->id == e.id) CHECK(materialize(*req, r, DeploymentFilter::Both, f.reg)->text == e.text);
                }
            }
        }
    }
}

TEST_CASE("release diffs") {
    Fixture f;
    CHECK(query_release_diff(f.ix, "A2 measurement", R("01R1"), R("01R1")).empty());
    auto d = query_release_diff(f.ix, "A2 measurement", R("01R1"), R("01R2"));
    REQUIRE(d.size() == 1);
    CHECK(d[0].id == "REQ_A");
    CHECK(d[0].causes == std::set<DevelopmentId>{dev("CB00XXXX")});
    CHECK(query_release_diff(f.ix, "A2 measurement", R("01R2"), R("01R3")).empty());
    auto added = query_release_diff(f.ix, "paging", R("01R1"), R("01R2"));
    REQUIRE(added.size() == 1);
    CHECK(added[0].segments.size() == 1);
    CHECK(added[0].segments[0].kind == DiffKind::Added);
}

TEST_CASE("development changes") {
    Fixture f;
    auto d = query_dev_changes(f.ix, "A2 measurement", dev("CB00XXXX"));
    REQUIRE(d.size() == 1);
    CHECK(d[0].id == "REQ_A");
    CHECK(d[0].release_a == R("01R1"));
    CHECK(d[0].release_b == R("01R2"));
    CHECK(query_dev_changes(f.ix, "A2 measurement", dev("CB00YYYY")).empty());
    CHECK_THROWS_AS(query_dev_changes(f.ix, "A2 measurement", dev("CB00ZZZZ")), Error);
}

TEST_CASE("deployment views") {
    Fixture f;
    auto sa = query_deployment(f.ix, "A2 measurement", DeploymentType::SA);
    auto nsa = query_deployment(f.ix, "A2 measurement", DeploymentType::NSA);
    REQUIRE(sa.size() == 2);
    REQUIRE(nsa.size() == 2);
    CHECK(sa[0].text == nsa[0].text);
    CHECK(sa[1].text == "The A2 measurement for Handover applies. Standalone only.");
    CHECK(nsa[1].text == "The A2 measurement for Handover applies. Non-standalone only.");
    CHECK(query_deployment(f.ix, "A2 measurement", DeploymentType::SA, R("01R1"))[0].text.find("old") != std::string::npos);
}

TEST_CASE("empty corpus keeps the declared universe") {
    DevelopmentRegistry reg;
    reg.declare_release(R("01R1"));
    reg.declare_release(R("01R2"));
    auto ix = build_index({}, reg, Lexicon{});
    CHECK(ix.release_universe.size() == 2);
    CHECK(ix.proc_release.empty());
    CHECK(ix.proc_req.empty());
}

TEST_CASE("single requirement appears at every release") {
    DevelopmentRegistry reg;
    reg.declare_release(R("01R1"));
    reg.declare_release(R("01R2"));
    auto doc = parse_document("=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\nThe A2 measurement runs.\n=== END ===\n").document;
    auto ix = build_index({doc}, reg, load_lexicon(kLexicon));
    CHECK(ix.proc_release.count({"A2 measurement", R("01R1")}) == 1);
    CHECK(ix.proc_release.count({"A2 measurement", R("01R2")}) == 1);
}

TEST_CASE("JSON persistence round trip") {
    Fixture f;
    auto text = f.ix.to_json();
    auto back = SpecIndex::from_json(text);
    CHECK(back.to_json() == text);
    CHECK(query_behavior(back, "A2 measurement", R("01R2")) == query_behavior(f.ix, "A2 measurement", R("01R2")));
    CHECK_THROWS_AS(SpecIndex::from_json("{}"), Error);
    CHECK_THROWS_AS(SpecIndex::from_json(R"({"format_version": 99})"), Error);
}

}
