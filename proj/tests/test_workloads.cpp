#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "edgefaas/faas/workloads.hpp"
#include "edgefaas/overlay/latency.hpp"

using namespace edgefaas;
using namespace edgefaas::faas;

TEST_CASE("empty text scores neutral") {
    SentimentResult r = run_sentiment("");
    CHECK(r.polarity == 0.0);
    CHECK(r.subjectivity == 0.0);
}

TEST_CASE("single lexicon hit") {
    SentimentResult r = run_sentiment("a great day");
    CHECK(r.polarity == doctest::Approx(0.8));
    CHECK(r.subjectivity == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("negation flips the sign and covers both tokens") {
    SentimentResult r = run_sentiment("not good");
    CHECK(r.polarity == doctest::Approx(-0.7));
    CHECK(r.subjectivity == doctest::Approx(1.0));
}

TEST_CASE("mixed sentence averages matched scores") {
    // good (0.7) and terrible (-1.0) -> mean -0.15; 2 covered of 5 tokens.
    SentimentResult r = run_sentiment("good food but terrible service");
    CHECK(r.polarity == doctest::Approx((0.7 - 1.0) / 2.0));
    CHECK(r.subjectivity == doctest::Approx(2.0 / 5.0));
}

TEST_CASE("no lexicon match means neutral but not empty") {
    SentimentResult r = run_sentiment("the quick brown fox");
    CHECK(r.polarity == 0.0);
    CHECK(r.subjectivity == 0.0);
}

TEST_CASE("tokenization is case and punctuation insensitive") {
    SentimentResult a = run_sentiment("GREAT!");
    SentimentResult b = run_sentiment("great");
    CHECK(a.polarity == b.polarity);
    CHECK(a.subjectivity == b.subjectivity);
}

TEST_CASE("sentiment is pure and bounded under fuzzing") {
    overlay::Rng rng(555);
    const std::string alphabet = "abcdefg not good bad HAPPY,.!  ";
    for (int i = 0; i < 2'000; ++i) {
        std::string text;
        std::size_t len = rng.next_below(60);
        for (std::size_t j = 0; j < len; ++j) text += alphabet[rng.next_below(alphabet.size())];
        SentimentResult r1 = run_sentiment(text);
        SentimentResult r2 = run_sentiment(text);
        REQUIRE(r1.polarity == r2.polarity);
        REQUIRE(r1.subjectivity == r2.subjectivity);
        REQUIRE(r1.polarity >= -1.0);
        REQUIRE(r1.polarity <= 1.0);
        REQUIRE(r1.subjectivity >= 0.0);
        REQUIRE(r1.subjectivity <= 1.0);
    }
}

TEST_CASE("lexicon table is non-empty and within polarity bounds") {
    const auto& lex = sentiment_lexicon();
    CHECK(lex.size() >= 10);
    for (const auto& [word, score] : lex) {
        CHECK(score >= -1.0);
        CHECK(score <= 1.0);
        CHECK_FALSE(word.empty());
    }
}

// Checksums below were produced by a standalone reference implementation of the
// mix loop before this module was written, and are frozen here.
TEST_CASE("classifier checksums match the frozen reference values") {
    CHECK(run_heavy_classify(0, {"x"}).checksum == 14159968675018334155ULL);
    CHECK(run_heavy_classify(1, {"x"}).checksum == 2483698536222470503ULL);
    CHECK(run_heavy_classify(42, {"x"}).checksum == 4293700236864460681ULL);
}

TEST_CASE("single label is always chosen") {
    ClassifyResult r = run_heavy_classify(0, {"cat"});
    CHECK(r.label == "cat");
}

TEST_CASE("classification is deterministic") {
    std::vector<std::string> labels = {"a", "b", "c"};
    ClassifyResult r1 = run_heavy_classify(42, labels);
    ClassifyResult r2 = run_heavy_classify(42, labels);
    CHECK(r1.label == r2.label);
    CHECK(r1.checksum == r2.checksum);
    CHECK(r1.label == labels[r1.checksum % labels.size()]);
}

TEST_CASE("empty label list is rejected") {
    CHECK_THROWS_AS(run_heavy_classify(1, {}), EmptyLabels);
}

TEST_CASE("different seeds give different checksums") {
    CHECK(run_heavy_classify(1, {"x"}).checksum != run_heavy_classify(2, {"x"}).checksum);
}
