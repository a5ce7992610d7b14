#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pcm/embed.hpp"
#include "pcm/matrix.hpp"

namespace pcm {

// ---- n-grams ---------------------------------------------------------------

class NGramVocab {
public:
    NGramVocab() = default;
    NGramVocab(int n, std::vector<std::string> terms, std::size_t min_count, std::size_t max_size);

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return terms_.size(); }
    std::size_t min_count() const noexcept { return min_count_; }
    std::size_t max_size() const noexcept { return max_size_; }
    const std::vector<std::string> &terms() const noexcept { return terms_; }

    std::optional<std::size_t> index_of(const std::string &term) const;
    bool contains(const std::string &term) const { return index_of(term).has_value(); }

private:
    int n_ = 1;
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t min_count_ = 1;
    std::size_t max_size_ = 0;
};

// n-grams are the space-joined windows of n consecutive tokens.
std::vector<std::string> ngrams(const TokenSeq &tokens, int n);

// Keeps every n-gram with count >= min_count, then the max_size most frequent
// (ties by lexicographic order). Column order follows that ranking.
NGramVocab build_ngram_vocab(std::span<const TokenSeq> texts, int n, std::size_t min_count, std::size_t max_size);

using SparseVector = std::vector<std::pair<std::size_t, double>>;

// Raw counts, sorted by column index; unknown n-grams are ignored.
SparseVector ngram_features(const TokenSeq &tokens, const NGramVocab &vocab);

// ---- part of speech --------------------------------------------------------

enum class PosTag { ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X };
inline constexpr std::size_t kPosTagCount = 17;

std::string_view tag_name(PosTag tag);

// Closed-class lexicon first, then suffix rules, then NOUN.
std::vector<PosTag> pos_tag(const TokenSeq &tokens);

inline constexpr std::size_t kSyntacticWidth = 45;

// [17 paragraph tag frequencies][17 comment tag frequencies]
// [tokens p,c][sentences p,c][mean word length p,c][type-token ratio p,c]
// [shared types][comment '?'][comment '!']
std::array<double, kSyntacticWidth> syntactic_features(const PreparedText &para, const PreparedText &comm);
const std::array<std::string, kSyntacticWidth> &syntactic_feature_names();

// ---- lexicon ---------------------------------------------------------------

class Lexicon {
public:
    struct Category {
        std::string name;
        std::vector<std::string> patterns;  // trailing '*' is a prefix match
    };

    Lexicon() = default;
    explicit Lexicon(std::vector<Category> categories);

    const std::vector<Category> &categories() const noexcept { return categories_; }
    std::size_t size() const noexcept { return categories_.size(); }

    bool matches(std::size_t category, std::string_view token) const;

    // "name: pattern1, pattern2*, ..." per line; '#' starts a comment line.
    static Lexicon parse(std::string_view text);
    static Lexicon load(const std::string &path);
    // The 63-category open lexicon shipped with the library.
    static const Lexicon &bundled();

private:
    std::vector<Category> categories_;
    std::vector<std::unordered_map<std::string, bool>> exact_;
    std::vector<std::vector<std::string>> prefixes_;
};

std::string_view bundled_lexicon_text();

// Fraction of tokens matching each category; all zero for empty input.
Vector lexicon_features(const TokenSeq &tokens, const Lexicon &lexicon);

// ---- feature matrix --------------------------------------------------------

enum class LexiconSides { Comment, Both };

struct FeatureSpec {
    bool unigram = false;    // f1
    bool bigram = false;     // f2
    bool trigram = false;    // f3
    bool syntactic = false;  // f4
    bool lexicon = false;    // f5
    LexiconSides lexicon_sides = LexiconSides::Both;

    bool any() const noexcept { return unigram || bigram || trigram || syntactic || lexicon; }

    // "f1,f4" style list.
    static FeatureSpec parse(std::string_view list);
    std::string to_string() const;
};

nlohmann::json to_json(const FeatureSpec &spec);
FeatureSpec feature_spec_from_json(const nlohmann::json &j);

struct VocabConfig {
    std::size_t min_count = 2;
    std::size_t max_size = 5000;
};

// One vocabulary per enabled (n, side).
struct FeatureVocabs {
    std::array<std::optional<NGramVocab>, 3> paragraph;
    std::array<std::optional<NGramVocab>, 3> comment;
};

struct TextPair {
    const PreparedText *paragraph = nullptr;
    const PreparedText *comment = nullptr;
};

FeatureVocabs fit_vocabs(std::span<const TextPair> train, const FeatureSpec &spec, const VocabConfig &config = {});

struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> col_labels;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }
};

// Columns: f1 (paragraph, comment), f2 (..), f3 (..), f4, f5 (paragraph when
// Both, then comment).
FeatureMatrix assemble_matrix(std::span<const TextPair> pairs, const FeatureSpec &spec, const FeatureVocabs &vocabs,
                              const Lexicon &lexicon);

}  // namespace pcm
