#include <sstream>

#include "doctest.h"
#include "pcm/corpus.hpp"
#include "pcm/error.hpp"

using namespace pcm;

namespace {

Corpus parse(const std::string &text) {
    std::istringstream in(text);
    return parse_corpus(in);
}

ErrorKind kind_of(const std::string &text) {
    try {
        parse(text);
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

std::string article(const std::string &id, std::size_t paragraphs) {
    std::string p;
    for (std::size_t i = 0; i < paragraphs; ++i) {
        p += (i ? "," : "") + std::string("\"Paragraph text ") + std::to_string(i) + ".\"";
    }
    return R"({"kind":"article","id":")" + id + R"(","paragraphs":[)" + p + "]}\n";
}

std::string comment(const std::string &id, const std::string &article_id) {
    return R"({"kind":"comment","id":")" + id + R"(","article_id":")" + article_id + R"(","text":"hello"})" + "\n";
}

}  // namespace

TEST_CASE("load_corpus counts and preserves order") {
    const auto empty = parse("");
    CHECK(empty.articles().empty());
    CHECK(empty.comments().empty());

    const auto c = parse(article("b", 2) + comment("x", "b"));
    CHECK(c.articles().size() == 1);
    CHECK(c.paragraph_count() == 2);
    CHECK(c.comments().size() == 1);
    CHECK(c.articles()[0].paragraphs[1].index == 1);
}

TEST_CASE("load_corpus rejects bad records") {
    CHECK(kind_of(article("a", 1) + comment("x", "nope")) == ErrorKind::DanglingReference);
    CHECK(kind_of(article("a", 1) + article("a", 2)) == ErrorKind::Duplicate);
    CHECK(kind_of(article("a", 0)) == ErrorKind::InvalidArgument);
    CHECK(kind_of(article("a", 1) + comment("x", "a") +
                  R"({"kind":"annotation","comment_id":"x","paragraph_index":3,"annotator_id":"u","label":2})") ==
          ErrorKind::DanglingReference);
    CHECK(kind_of(R"({"kind":"mystery"})") == ErrorKind::Parse);

    try {
        parse(article("a", 1) + "\n{not json\n");
        FAIL("expected parse error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).starts_with("line 3:"));
    }
    try {
        parse(article("a", 1) + comment("x", "ghost"));
    } catch (const Error &e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
}

TEST_CASE("write_corpus round-trips") {
    const auto c = load_corpus(PCM_FIXTURES "/mini.jsonl");
    std::ostringstream out;
    write_corpus(out, c);
    const auto again = parse(out.str());
    CHECK(again.articles().size() == c.articles().size());
    CHECK(again.articles()[0].topic == c.articles()[0].topic);
    CHECK(again.comments()[3].timestamp == 103);
    CHECK(again.annotations().size() == c.annotations().size());
}

TEST_CASE("cohen kappa hand examples") {
    const std::vector<int> five{1, 2, 3, 4, 5};
    CHECK(cohen_kappa(five, five) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<int> a{1, 1, 2, 2}, b{1, 2, 1, 2};
    CHECK(std::abs(cohen_kappa(a, b)) < 1e-12);

    // p_o = 0, p_e = 0: kappa = 0
    const std::vector<int> ones{1, 1}, twos{2, 2};
    CHECK(cohen_kappa(ones, twos) <= 0.0);
    CHECK(std::abs(cohen_kappa(ones, twos)) < 1e-12);

    // p_o = 3/4, marginals a: {1:2, 2:2}, b: {1:1, 2:3}; p_e = (2*1 + 2*3)/16 = 1/2
    const std::vector<int> c{1, 1, 2, 2}, d{1, 2, 2, 2};
    CHECK(std::abs(cohen_kappa(c, d) - 0.5) < 1e-12);
    CHECK(cohen_kappa(c, d) == cohen_kappa(d, c));

    CHECK_THROWS_AS(cohen_kappa(c, ones), Error);
    CHECK_THROWS_AS(cohen_kappa(std::vector<int>{}, std::vector<int>{}), Error);
}

TEST_CASE("consolidate keeps only agreed pairs") {
    const std::vector<Annotation> a{{"c1", 0, "a", 4}, {"c1", 1, "a", 3}, {"c2", 0, "a", 2}};
    const std::vector<Annotation> b{{"c1", 0, "b", 4}, {"c1", 1, "b", 4}, {"c3", 0, "b", 1}};
    const auto out = consolidate(a, b);
    REQUIRE(out.gold.size() == 1);
    CHECK(out.gold[0].comment_id == "c1");
    CHECK(out.gold[0].paragraph_index == 0);
    CHECK(out.gold[0].label == 4);
    CHECK(out.dropped == 3);  // one disagreement, two unmatched
}

TEST_CASE("gold pairs and stats on the mini fixture") {
    const auto c = load_corpus(PCM_FIXTURES "/mini.jsonl");
    const auto gold = gold_pairs(c);
    CHECK(gold.gold.size() == 8);
    CHECK(gold.dropped == 2);
    CHECK(gold.gold[0].article_id == "a1");

    const auto stats = corpus_stats(c, gold.gold);
    CHECK(stats.articles == 2);
    CHECK(stats.paragraphs == 5);
    CHECK(stats.comments_by_paragraph_bucket[0].second == doctest::Approx(100.0));
    // agreement 8/10, chance (3*2 + 3*4 + 1 + 2 + 2) / 100
    REQUIRE(stats.annotator_kappa);
    CHECK(*stats.annotator_kappa == doctest::Approx((0.8 - 0.23) / 0.77).epsilon(1e-12));
    REQUIRE(stats.article_wide_percent);
    CHECK(*stats.article_wide_percent == doctest::Approx(50.0));
    const auto no_gold = corpus_stats(c, {});
    CHECK_FALSE(no_gold.mean_relevance_by_decile.has_value());
    CHECK(no_gold.comments_by_sentence_bucket.size() == 5);
}

TEST_CASE("paragraph histogram split") {
    std::string text = article("A", 5) + article("B", 25) + comment("a1", "A");
    for (int i = 0; i < 3; ++i) {
        text += comment("b" + std::to_string(i), "B");
    }
    const auto stats = corpus_stats(parse(text), {});
    double total = 0;
    for (const auto &[label, pct] : stats.comments_by_paragraph_bucket) {
        total += pct;
        if (label == "1-5") {
            CHECK(pct == doctest::Approx(25.0));
        } else if (label == ">20") {
            CHECK(pct == doctest::Approx(75.0));
        } else {
            CHECK(pct == 0.0);
        }
    }
    CHECK(std::abs(total - 100.0) < 1e-9);
}

TEST_CASE("classify_scope examples") {
    const auto scope = [](std::vector<int> v) { return classify_scope(v); };
    CHECK(is_article_wide(scope({5, 4, 4, 1})));
    CHECK(is_article_wide(scope({2, 1, 2, 2})));
    CHECK(std::get<Targeted>(scope({5, 1, 1, 1})).paragraphs == std::vector<std::size_t>{0});
    CHECK(std::get<Targeted>(scope({3, 3, 1})).paragraphs == std::vector<std::size_t>{0});
    CHECK(std::get<Targeted>(scope({1, 4, 3, 5})).paragraphs == std::vector<std::size_t>{1, 3});
    CHECK_THROWS_AS(classify_scope(std::vector<int>{}), Error);
    for (int s = 1; s <= 5; ++s) {
        // one paragraph: only the all-low branch can make it article-wide
        CHECK(is_article_wide(scope({s})) == (s <= 2));
    }
}

TEST_CASE("scope json") {
    const Scope t = Targeted{{0, 2}};
    CHECK(scope_to_json(t).dump() == R"({"kind":"targeted","paragraphs":[0,2]})");
    CHECK(scope_from_json(scope_to_json(t)) == t);
    CHECK(is_article_wide(scope_from_json(scope_to_json(ArticleWide{}))));
    CHECK_THROWS_AS(scope_from_json(nlohmann::json::parse(R"({"kind":"targeted","paragraphs":[]})")), Error);
}
