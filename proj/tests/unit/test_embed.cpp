#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pcm/embed.hpp"
#include "pcm/error.hpp"
#include "pcm/rng.hpp"

using namespace pcm;

namespace {

EmbeddingTable table_of(const std::string &text, std::size_t dim = 0) {
    std::istringstream in(text);
    return parse_embeddings(in, dim);
}

ErrorKind error_of(const std::string &text, std::size_t dim = 0) {
    try {
        table_of(text, dim);
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("Hello, world!") == TokenSeq{"hello", "world"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("don't stop") == TokenSeq{"don't", "stop"});
    CHECK(tokenize("It’s well-known -- 'quoted' ends-") == TokenSeq{"it's", "well-known", "quoted", "ends"});
    CHECK(tokenize("CafÉ naïve") == TokenSeq{"café", "naïve"});
    CHECK(tokenize("3.5 kg, 10%") == TokenSeq{"3", "5", "kg", "10"});
}

TEST_CASE("sentence_count") {
    CHECK(sentence_count("A. B! C?") == 3);
    CHECK(sentence_count("") == 0);
    CHECK(sentence_count("e.g. one sentence") == 2);
    CHECK(sentence_count("No terminator at all") == 1);
    CHECK(sentence_count("Wait... what?!") == 2);
    CHECK(sentence_count("... !!") == 0);
    CHECK(sentence_count("Pi is 3.14 roughly.") == 1);
}

TEST_CASE("parse_embeddings") {
    const auto t = table_of("2 3\na 1 0 0\nb 0 1 0\n");
    CHECK(t.size() == 2);
    CHECK(t.dim() == 3);
    CHECK(t.find("b")[1] == 1.0);
    CHECK(t.find("c") == nullptr);

    CHECK(error_of("2 3\na 1 0 0\nb 0 1\n") == ErrorKind::Dimension);
    try {
        table_of("2 3\na 1 0 0\nb 0 1\n");
    } catch (const Error &e) {
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
    CHECK(error_of("2 3\na 1 0 0\na 0 1 0\n") == ErrorKind::Duplicate);
    CHECK(error_of("1 3\na 1 x 0\n") == ErrorKind::Parse);
    CHECK(error_of("1 3\na 1 0 0\n", 4) == ErrorKind::Dimension);
    CHECK(error_of("") == ErrorKind::Parse);
    CHECK(error_of("3 1\na 1\n") == ErrorKind::Parse);
    CHECK_THROWS_AS(load_embeddings("/nonexistent/vectors.txt"), Error);

    // a case variant does not replace the lowercase entry
    const auto v = table_of("2 1\nrain 1\nRain 2\n");
    CHECK(v.size() == 1);
    CHECK(v.find("rain")[0] == 1.0);
}

TEST_CASE("embed_average and embed_sequence") {
    const auto t = table_of("2 3\na 1 0 0\nb 0 1 0\n");
    CHECK(embed_average({"a", "b"}, t) == Vector{0.5, 0.5, 0.0});
    CHECK(embed_average({"zzz", "qqq"}, t) == Vector{0, 0, 0});
    CHECK(embed_average({}, t) == Vector{0, 0, 0});
    // OOV counts in the denominator unless skipped
    CHECK(embed_average({"a", "zzz"}, t) == Vector{0.5, 0, 0});
    CHECK(embed_average({"a", "zzz"}, t, {true}) == Vector{1, 0, 0});

    CHECK(embed_sequence({"a"}, t) == std::vector<Vector>{{1, 0, 0}});
    CHECK(embed_sequence({"a", "zzz"}, t) == std::vector<Vector>{{1, 0, 0}, {0, 0, 0}});
    CHECK(embed_sequence({}, t).empty());
}

TEST_CASE("average is the mean of the sequence and stays inside its bounds") {
    EmbeddingTable t(4);
    Rng rng(3);
    std::vector<std::string> words;
    for (int i = 0; i < 20; ++i) {
        Vector v(4);
        for (auto &x : v) {
            x = rng.uniform(-2, 2);
        }
        words.push_back("w" + std::to_string(i));
        t.insert(words.back(), v);
    }
    for (int trial = 0; trial < 50; ++trial) {
        TokenSeq tokens;
        const std::size_t n = 1 + rng.below(12);
        for (std::size_t i = 0; i < n; ++i) {
            tokens.push_back(rng.below(5) == 0 ? "oov" : words[rng.below(words.size())]);
        }
        const auto avg = embed_average(tokens, t);
        const auto seq = embed_sequence(tokens, t);
        double bound = 0;
        for (const auto &v : seq) {
            for (const double x : v) {
                bound = std::max(bound, std::abs(x));
            }
        }
        for (std::size_t d = 0; d < 4; ++d) {
            double mean = 0;
            for (const auto &v : seq) {
                mean += v[d];
            }
            mean /= static_cast<double>(seq.size());
            CHECK(avg[d] == doctest::Approx(mean).epsilon(1e-12));
            CHECK(std::abs(avg[d]) <= bound + 1e-15);
        }
    }
}
