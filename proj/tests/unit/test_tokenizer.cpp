#include "relspec/generator.hpp"
#include "relspec/tokenizer.hpp"

#include "../oracles.hpp"

#include <doctest.h>

using namespace relspec;

namespace {

std::multiset<char> token_digits(const TokenList& tokens) {
    std::multiset<char> out;
    for (const auto& t : tokens) {
        auto d = oracle::digits(t.text);
        out.insert(d.begin(), d.end());
    }
    return out;
}

std::string fuzz_text(Rng& rng, std::size_t length) {
    static const std::vector<std::string> pieces = {
        "activateMeasurementSA", "CB00XXXX", "01R1", "12R3", "[Before CB00XXXX]", "[End SA]", "[ nsa ]", "REQ_0001",
        "3.5", "-110", "dBm", "x_y", "a.b", "(", ")", ";", ",", "...", "\n", "\t", "  ", "é", "42", "7x", "R2D2",
        "v1.2.3", "[", "]", "[SA", "CB12", "qRxLevMin", "A2", "the", "1e3", "0.5%", "_", "__init__"};
    std::string out;
    while (out.size() < length) {
        out += rng.pick(pieces);
        if (rng.chance(0.6)) out += ' ';
    }
    return out;
}

} // namespace

TEST_SUITE("tokenizer") {

TEST_CASE("domain tokens stay whole") {
    struct Case {
        const char* text;
        TokenKind kind;
    };
    for (auto c : {Case{"activateMeasurementSA", TokenKind::Identifier}, Case{"CB00XXXX", TokenKind::DevelopmentId},
                   Case{"01R1", TokenKind::ReleaseId}, Case{"[Before CB00XXXX]", TokenKind::Tag},
                   Case{"[End SA]", TokenKind::Tag}, Case{"REQ_A2_001", TokenKind::RequirementId},
                   Case{"max_retx", TokenKind::Identifier}, Case{"3.5", TokenKind::Number},
                   Case{"handover", TokenKind::Word}}) {
        CAPTURE(c.text);
        auto tokens = tokenize(c.text);
        REQUIRE(tokens.size() == 1);
        CHECK(tokens[0].text == c.text);
        CHECK(tokens[0].kind == c.kind);
    }
    CHECK(tokenize("").empty());
}

TEST_CASE("punctuation is split off") {
    auto tokens = tokenize("Set qRxLevMin (dB), then stop.");
    std::vector<std::string> texts;
    for (const auto& t : tokens) texts.push_back(t.text);
    CHECK(texts == std::vector<std::string>{"Set", "qRxLevMin", "(", "dB", ")", ",", "then", "stop", "."});
    CHECK(tokens[1].kind == TokenKind::Identifier);
    CHECK(tokens[2].kind == TokenKind::Punct);
    CHECK(tokens[2].space_before);
    CHECK_FALSE(tokens[3].space_before);
}

TEST_CASE("lenient tags are single tokens with collapsed spacing") {
    auto tokens = tokenize("a [ before   CB00XXXX ] b");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[1].kind == TokenKind::Tag);
    auto tag = match_lenient_tag("[end  sa]", 0);
    REQUIRE(tag);
    CHECK(tag->keyword == "end");
    CHECK(tag->target == "sa");
    CHECK_FALSE(tag->canonical);
    CHECK(match_lenient_tag("[End SA]", 0)->canonical);
    CHECK_FALSE(match_lenient_tag("[note 3]", 0));
}

TEST_CASE("normalize examples") {
    TokenList in{{"The", TokenKind::Word}, {"activateMeasurement", TokenKind::Identifier}};
    TokenList expected{{"the", TokenKind::Word}, {"activateMeasurement", TokenKind::Identifier}};
    CHECK(normalize(in) == expected);
    CHECK(normalize({}).empty());
    TokenList tag{{"[SA]", TokenKind::Tag}};
    CHECK(normalize(tag) == tag);
    auto stop = parse_stop_words("# technical stop words\nthe\nshall\n");
    CHECK(normalize(tokenize("The UE shall stop."), stop) == TokenList{{"ue", TokenKind::Word}, {"stop", TokenKind::Word}});
}

TEST_CASE("detokenize reconstructs up to whitespace") {
    const char* text = "If  qRxLevMin < -110 dBm,\nthe UE shall (re)select [SA] CB00XXXX.";
    CHECK(detokenize(tokenize(text)) == oracle::collapse(text));
}

TEST_CASE("determinism, digit preservation and stability on fuzz input") {
    Rng rng(8);
    std::size_t total = 0;
    for (int round = 0; round < 20; ++round) {
        std::string a = fuzz_text(rng, 500);
        total += a.size();
        auto tokens = tokenize(a);
        REQUIRE(tokenize(a) == tokens);
        REQUIRE(token_digits(tokens) == oracle::digits(a));
        REQUIRE(detokenize(tokens) == oracle::collapse(detokenize(tokens)));
    }
    CHECK(total >= 10000);

    // Stability across a whitespace boundary.
    for (int round = 0; round < 200; ++round) {
        std::string a = fuzz_text(rng, 40), b = fuzz_text(rng, 40);
        auto joined = tokenize(a + " " + b);
        auto ta = tokenize(a), tb = tokenize(b);
        // Only texts whose boundary is clean: no bracket left open across the join.
        if (a.find('[') != std::string::npos || b.find(']') != std::string::npos) continue;
        ta.insert(ta.end(), tb.begin(), tb.end());
        REQUIRE(joined == ta);
    }
}

}
