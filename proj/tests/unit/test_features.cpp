#include <set>

#include "doctest.h"
#include "pcm/error.hpp"
#include "pcm/features.hpp"
#include "pcm/rng.hpp"

using namespace pcm;

namespace {

Vector dense(const SparseVector &s, std::size_t n) {
    Vector v(n, 0.0);
    for (const auto &[i, x] : s) {
        v[i] = x;
    }
    return v;
}

}  // namespace

TEST_CASE("ngram vocabulary") {
    const std::vector<TokenSeq> texts{{"a", "b", "a"}};
    const auto uni = build_ngram_vocab(texts, 1, 1, 0);
    CHECK(uni.terms() == std::vector<std::string>{"a", "b"});
    const auto bi = build_ngram_vocab(texts, 2, 1, 0);
    CHECK(std::set<std::string>(bi.terms().begin(), bi.terms().end()) == std::set<std::string>{"a b", "b a"});
    CHECK(build_ngram_vocab(texts, 1, 3, 0).size() == 0);
    CHECK(build_ngram_vocab(texts, 1, 2, 0).terms() == std::vector<std::string>{"a"});
    CHECK(build_ngram_vocab(texts, 3, 1, 0).terms() == std::vector<std::string>{"a b a"});

    // ties between equal counts go to the lexicographically smaller term
    const std::vector<TokenSeq> tie{{"z", "y", "x", "x"}};
    CHECK(build_ngram_vocab(tie, 1, 1, 2).terms() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("ngram features count only known n-grams") {
    const std::vector<TokenSeq> texts{{"a", "b", "a"}};
    const auto uni = build_ngram_vocab(texts, 1, 1, 0);
    CHECK(dense(ngram_features({"a", "b", "a"}, uni), 2) == Vector{2, 1});
    CHECK(ngram_features({}, uni).empty());
    CHECK(ngram_features({"q", "r"}, uni).empty());
    const auto bi = build_ngram_vocab(texts, 2, 1, 0);
    CHECK(ngram_features({"a"}, bi).empty());
}

TEST_CASE("pos tagging") {
    CHECK(pos_tag({"the"}) == std::vector<PosTag>{PosTag::DET});
    CHECK(pos_tag({"running"}) == std::vector<PosTag>{PosTag::VERB});
    CHECK(pos_tag({"zzzz"}) == std::vector<PosTag>{PosTag::NOUN});
    CHECK(pos_tag({"42"}) == std::vector<PosTag>{PosTag::NUM});
    CHECK(pos_tag({}).empty());
    CHECK(tag_name(PosTag::CCONJ) == "CCONJ");
}

TEST_CASE("syntactic features") {
    const auto empty = PreparedText::from("");
    const auto zero = syntactic_features(empty, empty);
    for (double x : zero) {
        CHECK(x == 0.0);
    }

    const auto same = PreparedText::from("The striker scored twice. Was it luck?");
    const auto f = syntactic_features(same, same);
    for (std::size_t i = 0; i < kPosTagCount; ++i) {
        CHECK(f[i] == f[kPosTagCount + i]);
    }

    const auto para = PreparedText::from("the dog");
    const auto comm = PreparedText::from("dog?!");
    const auto g = syntactic_features(para, comm);
    const auto det = static_cast<std::size_t>(PosTag::DET);
    const auto noun = static_cast<std::size_t>(PosTag::NOUN);
    CHECK(g[det] == 0.5);
    CHECK(g[noun] == 0.5);
    CHECK(g[kPosTagCount + noun] == 1.0);
    CHECK(g[34] == 2);    // paragraph tokens
    CHECK(g[35] == 1);    // comment tokens
    CHECK(g[36] == 1);    // paragraph sentences
    CHECK(g[38] == 3);  // mean word length
    CHECK(g[39] == 3);
    CHECK(g[40] == 1.0);  // type-token ratio
    CHECK(g[42] == 1);    // shared types
    CHECK(g[43] == 1);
    CHECK(g[44] == 1);

    const auto &names = syntactic_feature_names();
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == kSyntacticWidth);
}

TEST_CASE("lexicon features") {
    const auto lex = Lexicon::parse("# test\nposemo: happy, happ*\nnegemo: sad\n");
    REQUIRE(lex.size() == 2);
    CHECK(lexicon_features({"happy", "happy"}, lex) == Vector{1.0, 0.0});
    CHECK(lexicon_features({"happiness", "sad", "x", "y"}, lex) == Vector{0.25, 0.25});
    CHECK(lexicon_features({"q"}, lex) == Vector{0, 0});
    CHECK(lexicon_features({}, lex) == Vector{0, 0});
    CHECK(Lexicon::bundled().size() == 63);
    CHECK_THROWS_AS(Lexicon::parse("no separator here\n"), Error);
}

TEST_CASE("feature spec parsing") {
    const auto spec = FeatureSpec::parse("f1,f4");
    CHECK(spec.unigram);
    CHECK(spec.syntactic);
    CHECK_FALSE(spec.bigram);
    CHECK(spec.to_string() == "f1,f4");
    CHECK_THROWS_AS(FeatureSpec::parse("f6"), Error);
    CHECK_THROWS_AS(FeatureSpec::parse(""), Error);
    CHECK(feature_spec_from_json(to_json(spec)).to_string() == "f1,f4");
}

TEST_CASE("assembled matrix widths") {
    const auto p1 = PreparedText::from("rain storm cloud");
    const auto c1 = PreparedText::from("rain again");
    const auto p2 = PreparedText::from("goal striker");
    const auto c2 = PreparedText::from("what a goal");
    const std::vector<TextPair> pairs{{&p1, &c1}, {&p2, &c2}};

    FeatureSpec f1;
    f1.unigram = true;
    auto vocabs = fit_vocabs(pairs, f1, {1, 3});
    auto m = assemble_matrix(pairs, f1, vocabs, Lexicon::bundled());
    CHECK(m.cols() == 6);
    CHECK(m.rows() == 2);

    FeatureSpec f4;
    f4.syntactic = true;
    CHECK(assemble_matrix(pairs, f4, {}, Lexicon::bundled()).cols() == 45);

    FeatureSpec f5;
    f5.lexicon = true;
    CHECK(assemble_matrix(pairs, f5, {}, Lexicon::bundled()).cols() == 126);
    f5.lexicon_sides = LexiconSides::Comment;
    CHECK(assemble_matrix(pairs, f5, {}, Lexicon::bundled()).cols() == 63);

    CHECK_THROWS_AS(assemble_matrix(pairs, FeatureSpec{}, {}, Lexicon::bundled()), Error);
    // n-gram block requested without a fitted vocabulary
    CHECK_THROWS_AS(assemble_matrix(pairs, f1, {}, Lexicon::bundled()), Error);
}

TEST_CASE("column count is the sum of block widths and labels are unique") {
    Rng rng(5);
    const std::vector<std::string> words{"rain", "the", "goal", "happy", "sad", "running", "bank", "i", "we", "?"};
    std::vector<PreparedText> texts;
    for (int i = 0; i < 40; ++i) {
        std::string s;
        for (std::size_t j = 0, n = rng.below(15); j < n; ++j) {
            s += words[rng.below(words.size())] + (rng.below(4) == 0 ? ". " : " ");
        }
        texts.push_back(PreparedText::from(s));
    }
    std::vector<TextPair> pairs;
    for (std::size_t i = 0; i + 1 < texts.size(); i += 2) {
        pairs.push_back({&texts[i], &texts[i + 1]});
    }
    for (unsigned mask = 1; mask < 32; ++mask) {
        FeatureSpec spec;
        spec.unigram = mask & 1;
        spec.bigram = mask & 2;
        spec.trigram = mask & 4;
        spec.syntactic = mask & 8;
        spec.lexicon = mask & 16;
        const auto vocabs = fit_vocabs(pairs, spec, {1, 0});
        const auto m = assemble_matrix(pairs, spec, vocabs, Lexicon::bundled());
        std::size_t width = 0;
        for (int n = 0; n < 3; ++n) {
            if (vocabs.paragraph[n]) {
                width += vocabs.paragraph[n]->size() + vocabs.comment[n]->size();
            }
        }
        width += spec.syntactic ? 45 : 0;
        width += spec.lexicon ? 126 : 0;
        CHECK(m.cols() == width);
        CHECK(m.col_labels.size() == width);
        CHECK(std::set<std::string>(m.col_labels.begin(), m.col_labels.end()).size() == width);
        for (const auto &t : texts) {
            CHECK(syntactic_features(t, t).size() == kSyntacticWidth);
        }
    }
}
