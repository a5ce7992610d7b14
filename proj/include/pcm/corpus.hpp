#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "json.hpp"

namespace pcm {

struct Paragraph {
    std::size_t index = 0;
    std::string text;
};

struct Article {
    std::string id;
    std::string source;
    std::string title;
    std::vector<Paragraph> paragraphs;
    std::optional<std::string> topic;
};

struct Comment {
    std::string id;
    std::string article_id;
    std::string author;
    std::int64_t timestamp = 0;
    std::string text;
};

struct Annotation {
    std::string comment_id;
    std::size_t paragraph_index = 0;
    std::string annotator_id;
    int label = 0;
};

struct GoldPair {
    std::string article_id;
    std::size_t paragraph_index = 0;
    std::string comment_id;
    int label = 0;

    bool operator==(const GoldPair &) const = default;
};

// A comment either addresses the whole article or a non-empty set of
// paragraphs (sorted ascending).
struct ArticleWide {
    bool operator==(const ArticleWide &) const = default;
};
struct Targeted {
    std::vector<std::size_t> paragraphs;
    bool operator==(const Targeted &) const = default;
};
using Scope = std::variant<ArticleWide, Targeted>;

bool is_article_wide(const Scope &scope) noexcept;
bool targets(const Scope &scope, std::size_t paragraph) noexcept;
nlohmann::json scope_to_json(const Scope &scope);
Scope scope_from_json(const nlohmann::json &j);

class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<Article> articles, std::vector<Comment> comments, std::vector<Annotation> annotations);

    const std::vector<Article> &articles() const noexcept { return articles_; }
    const std::vector<Comment> &comments() const noexcept { return comments_; }
    const std::vector<Annotation> &annotations() const noexcept { return annotations_; }

    const Article *find_article(const std::string &id) const;
    const Comment *find_comment(const std::string &id) const;

    std::size_t paragraph_count() const;

    // Annotator ids in order of first appearance.
    std::vector<std::string> annotators() const;
    std::vector<Annotation> annotations_by(const std::string &annotator) const;

private:
    void validate_and_index();

    std::vector<Article> articles_;
    std::vector<Comment> comments_;
    std::vector<Annotation> annotations_;
    std::unordered_map<std::string, std::size_t> article_index_;
    std::unordered_map<std::string, std::size_t> comment_index_;
};

Corpus parse_corpus(std::istream &in);
Corpus load_corpus(const std::string &path);
void write_corpus(std::ostream &out, const Corpus &corpus);

double cohen_kappa(std::span<const int> labels_a, std::span<const int> labels_b);

struct Consolidation {
    std::vector<GoldPair> gold;
    std::size_t dropped = 0;
};

// Keeps the (comment, paragraph) pairs on which both annotators gave the same
// label. When a corpus is supplied the gold pairs carry their article id.
Consolidation consolidate(std::span<const Annotation> annots_a, std::span<const Annotation> annots_b,
                          const Corpus *corpus = nullptr);

// Consolidates the corpus's two annotators. Throws unless exactly two exist.
Consolidation gold_pairs(const Corpus &corpus);

Scope classify_scope(std::span<const int> scores);

struct StatsConfig {
    std::vector<std::size_t> paragraph_edges{5, 10, 15, 20};
    std::vector<std::size_t> sentence_edges{20, 40, 60, 80};
};

struct CorpusStats {
    std::size_t articles = 0;
    std::size_t paragraphs = 0;
    std::size_t comments = 0;
    std::vector<std::pair<std::string, double>> comments_by_paragraph_bucket;
    std::vector<std::pair<std::string, double>> comments_by_sentence_bucket;
    // One entry per relative-position decile; nullopt where no gold pair falls.
    std::optional<std::vector<std::optional<double>>> mean_relevance_by_decile;
    std::optional<std::map<int, double>> label_percentages;
    std::optional<double> article_wide_percent;
    std::optional<double> targeted_percent;
    std::optional<double> annotator_kappa;
};

CorpusStats corpus_stats(const Corpus &corpus, std::span<const GoldPair> gold, const StatsConfig &config = {});
nlohmann::json stats_to_json(const CorpusStats &stats);

std::size_t relative_decile(std::size_t paragraph_index, std::size_t paragraph_count);

}  // namespace pcm
