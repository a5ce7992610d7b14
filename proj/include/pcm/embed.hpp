#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcm/matrix.hpp"

namespace pcm {

using TokenSeq = std::vector<std::string>;

// Lowercased word tokens. Apostrophes (ASCII or U+2019, normalized to ASCII)
// and hyphens survive only between two word characters.
TokenSeq tokenize(std::string_view text);

// A sentence ends at a run of '.', '!' or '?' followed by whitespace or the
// end of the text; segments without a word character are not counted.
std::size_t sentence_count(std::string_view text);

class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }

    // Returns false (and leaves the table unchanged) when the word exists.
    bool insert(const std::string &word, std::span<const double> vec);

    const double *find(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word) != nullptr; }

    const std::vector<std::string> &words() const noexcept { return words_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Text format: header "N D", then N rows "word c1 ... cD". expected_dim 0
// accepts the header's dimension.
EmbeddingTable load_embeddings(const std::string &path, std::size_t expected_dim = 0);
EmbeddingTable parse_embeddings(std::istream &in, std::size_t expected_dim = 0);

struct AverageOptions {
    // Exclude out-of-vocabulary tokens from the denominator.
    bool skip_oov = false;
};

Vector embed_average(const TokenSeq &tokens, const EmbeddingTable &table, AverageOptions options = {});
std::vector<Vector> embed_sequence(const TokenSeq &tokens, const EmbeddingTable &table);

// A text with its derived token and sentence views, computed once.
struct PreparedText {
    std::string raw;
    TokenSeq tokens;
    std::size_t sentences = 0;

    static PreparedText from(std::string text);
};

}  // namespace pcm
