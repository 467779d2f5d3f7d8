#include "relspec/dataset.hpp"
#include "relspec/error.hpp"
#include "relspec/generator.hpp"
#include "relspec/parser.hpp"
#include "relspec/resolver.hpp"

#include "../oracles.hpp"

#include <doctest.h>

using namespace relspec;

namespace {

ReleaseId R(const char* s) { return *ReleaseId::parse(s); }

SpecDocument doc_of(const std::string& body) {
    auto r = parse_document(body, "d");
    REQUIRE(r.ok());
    return r.document;
}

DevelopmentRegistry registry() {
    DevelopmentRegistry reg;
    reg.declare_release(R("01R1"));
    reg.add(*DevelopmentId::parse("CB00XXXX"), R("01R2"));
    return reg;
}

const char* kFig = "=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\n"
                   "The unit shall use [Before CB00XXXX] old [CB00XXXX] new [End CB00XXXX] limits always.\n=== END ===\n";

} // namespace

TEST_SUITE("dataset") {

TEST_CASE("single requirement gives one record") {
    auto doc = doc_of("=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\nOne two three four five six.\n=== END ===\n");
    auto ds = extract_release_dataset({doc}, R("01R1"), registry());
    REQUIRE(ds.records.size() == 1);
    CHECK(ds.to_jsonl() == "{\"id\":\"REQ_1\",\"release\":\"01R1\",\"text\":\"One two three four five six.\"}\n");
}

TEST_CASE("headers and duplicates are dropped") {
    auto doc = doc_of("=== REQ REQ_H ===\n--- VERSION first=01R1 last=open ---\nGeneral Overview\n=== END ===\n"
                      "=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\nOne two three four five six.\n=== END ===\n"
                      "=== REQ REQ_2 ===\n--- VERSION first=01R1 last=open ---\nOne two three four five six.\n=== END ===\n");
    auto ds = extract_release_dataset({doc}, R("01R1"), registry());
    CHECK(ds.stats.dropped_headers == 1);
    CHECK(ds.stats.dropped_duplicates == 1);
    REQUIRE(ds.records.size() == 1);
    CHECK(ds.records[0].id == "REQ_1");
}

TEST_CASE("baselined corpus extracts identically") {
    auto doc = doc_of(kFig);
    auto reg = registry();
    auto based = doc;
    auto universe = release_universe({doc}, reg);
    auto* req = all_requirements(based)[0];
    *req = baseline(*req, *DevelopmentId::parse("CB00XXXX"), reg, universe);
    for (const char* r : {"01R1", "01R2"})
        CHECK(extract_release_dataset({based}, R(r), reg).to_jsonl() == extract_release_dataset({doc}, R(r), reg).to_jsonl());
}

TEST_CASE("one dataset per release, differing only where behaviour changed") {
    auto doc = doc_of(std::string(kFig) +
                      "=== REQ REQ_2 ===\n--- VERSION first=01R1 last=open ---\nStable text with several words.\n=== END ===\n");
    auto sets = extract_all({doc}, registry());
    REQUIRE(sets.size() == 2);
    REQUIRE(sets[0].records.size() == 2);
    REQUIRE(sets[1].records.size() == 2);
    CHECK(sets[0].records[0].text != sets[1].records[0].text);
    CHECK(sets[0].records[1].text == sets[1].records[1].text);
    CHECK_THROWS_AS(extract_release_dataset({doc}, R("05R1"), registry()), Error);

    DevelopmentRegistry bare;
    bare.declare_release(R("01R1"));
    bare.declare_release(R("01R2"));
    auto empty = extract_all({}, bare);
    REQUIRE(empty.size() == 2);
    CHECK(empty[0].records.empty());
}

TEST_CASE("datasets are tag free, idempotent and smaller than the naive dump") {
    auto corpus = generate_corpus(GeneratorConfig{});
    auto a = extract_all(corpus.docs, corpus.registry);
    auto b = extract_all(corpus.docs, corpus.registry);
    auto naive = naive_dump(corpus.docs);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto text = a[i].to_jsonl();
        CHECK(text == b[i].to_jsonl());
        CHECK(text.size() <= naive.size());
        CHECK_FALSE(oracle::has_strict_tag(text));
    }
    CHECK(oracle::has_strict_tag(naive));
    CHECK(stats_json(a) == stats_json(b));
}

}
