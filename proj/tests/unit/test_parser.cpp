#include "relspec/error.hpp"
#include "relspec/generator.hpp"
#include "relspec/parser.hpp"

#include <doctest.h>

using namespace relspec;

namespace {

DevelopmentId dev(const char* s) { return *DevelopmentId::parse(s); }
ReleaseId R(const char* s) { return *ReleaseId::parse(s); }

const char* kTwoVersions = R"(@spec-format 1
@document mobility

# 5 Measurements

Free prose between requirements is ignored.

=== REQ REQ_A2_001 ===
--- VERSION first=01R1 last=01R1 ---
The node shall configure [Before CB00XXXX] old [CB00XXXX] new [End CB00XXXX] thresholds.
--- VERSION first=01R2 last=open ---
The node shall configure new thresholds.
=== END ===
)";

bool has_kind(const std::vector<ParseError>& errors, ParseErrorKind kind) {
    for (const auto& e : errors) {
        if (e.kind == kind) return true;
    }
    return false;
}

} // namespace

TEST_SUITE("parser") {

TEST_CASE("document with one requirement and two versions") {
    auto result = parse_document(kTwoVersions, "fallback");
    REQUIRE(result.ok());
    const auto& doc = result.document;
    CHECK(doc.name == "mobility");
    REQUIRE(doc.sections.size() == 1);
    CHECK(doc.sections[0].title == "5 Measurements");
    REQUIRE(doc.sections[0].requirements.size() == 1);
    const auto& req = doc.sections[0].requirements[0];
    CHECK(req.id == "REQ_A2_001");
    CHECK(req.section_path == std::vector<std::string>{"5 Measurements"});
    REQUIRE(req.versions.size() == 2);
    CHECK(req.versions[0].range_string() == "01R1..01R1");
    CHECK(req.versions[1].range_string() == "01R2..open");
    CHECK(req.source_line == 8);
}

TEST_CASE("empty source gives an empty document") {
    auto result = parse_document("", "x");
    CHECK(result.ok());
    CHECK(result.document.sections.empty());
    CHECK(result.document.requirements.empty());
}

TEST_CASE("content without End tag is unbalanced at its line") {
    std::string src = "=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\n"
                      "[Before CB00XXXX] a [CB00XXXX] b\n=== END ===\n";
    auto result = parse_document(src, "d");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].kind == ParseErrorKind::UnbalancedTag);
    CHECK(result.errors[0].line == 3);
    CHECK(format_error(result.errors[0]).rfind("d:3: UnbalancedTag", 0) == 0);
}

TEST_CASE("content parse examples") {
    auto r = parse_content("x [Before CB00XXXX] old [CB00XXXX] new [End CB00XXXX] y");
    REQUIRE(r.ok());
    SegmentList expected{PlainText{"x"}, DevBlock{dev("CB00XXXX"), {PlainText{"old"}}, {PlainText{"new"}}},
                         PlainText{"y"}};
    CHECK(r.segments == expected);

    auto plain = parse_content("plain text only");
    CHECK(plain.segments == SegmentList{PlainText{"plain text only"}});

    auto span = parse_content("[SA] only for standalone [End SA]");
    CHECK(span.segments == SegmentList{DeploymentSpan{DeploymentType::SA, {PlainText{"only for standalone"}}}});
}

TEST_CASE("bare deployment tag closes at the end of its container") {
    auto r = parse_content("a [NSA] b c");
    REQUIRE(r.ok());
    CHECK(r.segments == SegmentList{PlainText{"a"}, DeploymentSpan{DeploymentType::NSA, {PlainText{"b c"}}}});

    auto inner = parse_content("[Before CB00XXXX] x [CB00XXXX] [SA] y [End CB00XXXX] z");
    REQUIRE(inner.ok());
    SegmentList expected{DevBlock{dev("CB00XXXX"), {PlainText{"x"}}, {DeploymentSpan{DeploymentType::SA, {PlainText{"y"}}}}},
                         PlainText{"z"}};
    CHECK(inner.segments == expected);
}

TEST_CASE("pure addition block has an empty before-part") {
    auto r = parse_content("a [CB00XXXX] added [End CB00XXXX]");
    REQUIRE(r.ok());
    REQUIRE(r.segments.size() == 2);
    const auto& block = std::get<DevBlock>(r.segments[1].node);
    CHECK(block.before.empty());
    CHECK(block.after == SegmentList{PlainText{"added"}});
}

TEST_CASE("tag errors") {
    CHECK(has_kind(parse_content("[Before CB00XXXX] a [CB00XXXX] [Before CB00YYYY] b [CB00YYYY] c [End CB00YYYY] "
                                 "[End CB00XXXX]")
                       .errors,
                   ParseErrorKind::NestedDevBlock));
    CHECK(has_kind(parse_content("a [End CB00XXXX]").errors, ParseErrorKind::DanglingEnd));
    CHECK(has_kind(parse_content("[Before CB00XXXX] a [End CB00XXXX]").errors, ParseErrorKind::UnbalancedTag));
    CHECK(has_kind(parse_content("[SA] a [SA] b [End SA]").errors, ParseErrorKind::UnbalancedTag));
    CHECK(has_kind(parse_content("[Before CB00XXXX] a [CB00YYYY] b [End CB00XXXX]").errors, ParseErrorKind::UnbalancedTag));
}

TEST_CASE("lenient tag spellings stay plain text for the strict parser") {
    auto r = parse_content("a [before CB00XXXX] b [cb00xxxx] c");
    REQUIRE(r.ok());
    CHECK(r.segments == SegmentList{PlainText{"a [before CB00XXXX] b [cb00xxxx] c"}});
}

TEST_CASE("tables keep their line breaks") {
    auto r = parse_content("| a | b |   \n| 1 | 2 |\n");
    REQUIRE(r.ok());
    CHECK(r.segments == SegmentList{PlainText{"| a | b |\n| 1 | 2 |"}});
}

TEST_CASE("header and version errors") {
    auto bad_release = parse_document("=== REQ REQ_1 ===\n--- VERSION first=1R1 last=open ---\nx\n=== END ===\n");
    CHECK(has_kind(bad_release.errors, ParseErrorKind::BadReleaseId));
    auto overlap = parse_document("=== REQ REQ_1 ===\n--- VERSION first=01R1 last=01R3 ---\nx\n"
                                  "--- VERSION first=01R2 last=open ---\ny\n=== END ===\n");
    CHECK(has_kind(overlap.errors, ParseErrorKind::BadReleaseId));
    auto inverted = parse_document("=== REQ REQ_1 ===\n--- VERSION first=01R3 last=01R2 ---\nx\n=== END ===\n");
    CHECK(has_kind(inverted.errors, ParseErrorKind::BadReleaseId));
    auto no_id = parse_document("=== REQ ===\n--- VERSION first=01R1 last=open ---\nx\n=== END ===\n");
    CHECK(has_kind(no_id.errors, ParseErrorKind::BadRequirementHeader));
    auto dup = parse_document("=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\nx\n=== END ===\n"
                              "=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\ny\n=== END ===\n");
    CHECK(has_kind(dup.errors, ParseErrorKind::DuplicateId));
}

TEST_CASE("a malformed block never suppresses later blocks") {
    std::string src = "# S\n"
                      "=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\nok one\n=== END ===\n"
                      "=== REQ REQ_2 ===\n--- VERSION first=01R1 last=open ---\n[Before CB00XXXX] broken\n=== END ===\n"
                      "=== REQ REQ_3 ===\n--- VERSION first=zz last=open ---\nbad release\n=== END ===\n"
                      "=== REQ REQ_4 ===\n--- VERSION first=01R1 last=open ---\nok four\n=== END ===\n";
    auto result = parse_document(src, "d");
    CHECK(result.errors.size() == 2);
    auto reqs = all_requirements(result.document);
    REQUIRE(reqs.size() == 2);
    CHECK(reqs[0]->id == "REQ_1");
    CHECK(reqs[1]->id == "REQ_4");
}

TEST_CASE("ids outside the ID grammar still parse") {
    auto result = parse_document("=== REQ req-1 ===\n--- VERSION first=01R1 last=open ---\nx.\n=== END ===\n");
    REQUIRE(result.ok());
    CHECK(all_requirements(result.document)[0]->id == "req-1");
}

TEST_CASE("serialize writes the format header and tag triples") {
    SpecDocument empty;
    CHECK(serialize(empty) == "@spec-format 1\n");

    auto parsed = parse_document(kTwoVersions, "x");
    std::string text = serialize(parsed.document);
    auto b = text.find("[Before CB00XXXX]");
    auto m = text.find("[CB00XXXX]");
    auto e = text.find("[End CB00XXXX]");
    CHECK(b != std::string::npos);
    CHECK(b < m);
    CHECK(m < e);
    auto again = parse_document(text, "other");
    REQUIRE(again.ok());
    CHECK(again.document == parsed.document);
}

TEST_CASE("round trip over generated canonical documents") {
    Rng rng(5);
    auto reg = random_registry(rng, 10);
    std::size_t next = 1;
    for (int i = 0; i < 100; ++i) {
        auto doc = random_document(rng, reg, "doc" + std::to_string(i), next);
        auto text = serialize(doc);
        auto back = parse_document(text, "ignored");
        INFO(text);
        REQUIRE(back.ok());
        REQUIRE(back.document == doc);
        // every block has exactly one before and one after part by construction of the type;
        // a second serialization is byte-identical
        REQUIRE(serialize(back.document) == text);
    }
}

TEST_CASE("corpus validation") {
    auto a = parse_document("=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\nx\n=== END ===\n", "a").document;
    auto b = parse_document("=== REQ REQ_1 ===\n--- VERSION first=01R1 last=open ---\n"
                            "[Before CB00ZZZZ] p [CB00ZZZZ] q [End CB00ZZZZ]\n=== END ===\n",
                            "b")
                 .document;
    DevelopmentRegistry reg;
    auto errors = validate_corpus({a, b}, reg);
    CHECK(has_kind(errors, ParseErrorKind::DuplicateId));
    bool names_dev = false;
    for (const auto& e : errors) {
        if (e.kind == ParseErrorKind::UnknownDevelopment && e.message.find("CB00ZZZZ") != std::string::npos)
            names_dev = true;
    }
    CHECK(names_dev);

    b.sections.clear();
    b.requirements[0].id = "REQ_2";
    reg.add(dev("CB00ZZZZ"), R("01R2"));
    CHECK(validate_corpus({a, b}, reg).empty());

    // development released before the version that still carries its tags
    DevelopmentRegistry stale;
    stale.add(dev("CB00ZZZZ"), R("01R1"));
    auto late = parse_document("=== REQ REQ_9 ===\n--- VERSION first=01R2 last=open ---\n"
                               "[Before CB00ZZZZ] p [CB00ZZZZ] q [End CB00ZZZZ]\n=== END ===\n",
                               "c")
                    .document;
    auto warnings = validate_corpus({late}, stale);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].kind == ParseErrorKind::StaleDevelopment);
    CHECK(warnings[0].is_warning());
}

TEST_CASE("registry files") {
    auto reg = parse_registry("# developments\nrelease 01R1 01R2\nCB00XXXX 01R2\n\nCB00YYYY   01R3  # late\n");
    CHECK(reg.find(dev("CB00XXXX"))->to_string() == "01R2");
    CHECK(reg.find(dev("CB00YYYY"))->to_string() == "01R3");
    CHECK(reg.declared_releases().size() == 2);
    auto again = parse_registry(serialize_registry(reg));
    CHECK(again.developments() == reg.developments());
    CHECK(again.declared_releases() == reg.declared_releases());

    for (const char* bad : {"CB00XXXX", "CB00XXXX 1R1", "XX00XXXX 01R1", "CB00XXXX 01R1\nCB00XXXX 01R2", "release x"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_registry(bad), Error);
    }
}

}
