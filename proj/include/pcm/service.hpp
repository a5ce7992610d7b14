#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pcm/corpus.hpp"
#include "pcm/neural.hpp"

namespace pcm {

// Probability-weighted label, sum over c of c * p(c).
double expected_relevance(const Probabilities &p);

struct ParagraphScore {
    std::size_t paragraph_index = 0;
    Probabilities probs{};
    int label = 1;
    double expected_relevance = 1.0;
};

struct CommentPlacement {
    std::string comment_id;
    std::vector<ParagraphScore> per_paragraph;  // one per paragraph, in order
    Scope scope;
    std::string model_id;
};

nlohmann::json to_json(const CommentPlacement &p);
CommentPlacement placement_from_json(const nlohmann::json &j);

// Immutable model + embeddings used to place comments; safe to share
// between threads.
class Scorer {
public:
    Scorer(TwinEncoderModel model, EmbeddingTable embeddings, std::string model_id, AverageOptions average = {});

    CommentPlacement score(const Article &article, const std::string &comment_id, const std::string &text) const;

    const std::string &model_id() const noexcept { return model_id_; }
    const TwinEncoderModel &model() const noexcept { return model_; }

private:
    TwinEncoderModel model_;
    EmbeddingTable embeddings_;
    std::string model_id_;
    AverageOptions average_;
};

CommentPlacement score_comment(const Scorer &scorer, const Corpus &corpus, const std::string &article_id,
                               const std::string &comment_id, const std::string &text);

struct StoredComment {
    Comment comment;
    CommentPlacement placement;
};

struct RankedComment {
    std::string comment_id;
    std::string author;
    std::string text;
    std::int64_t timestamp = 0;
    double expected_relevance = 0.0;  // for the queried paragraph; mean over paragraphs in the article feed
    Scope scope;
};

nlohmann::json to_json(const RankedComment &c);

// Comments and placements live in an append-only JSONL log, one record per
// line. The in-memory index is rebuilt from the log on open. Writers are
// serialized; readers see a placement either fully applied or not at all.
class Store {
public:
    using Clock = std::function<std::int64_t()>;

    // Throws Error(Parse) naming the byte offset of the first bad record.
    Store(Corpus corpus, std::string log_path, Clock clock = {});

    const Corpus &corpus() const noexcept { return corpus_; }
    const std::string &log_path() const noexcept { return log_path_; }

    // Scores, persists, then indexes the comment.
    StoredComment post(const Scorer &scorer, const std::string &article_id, const std::string &author,
                       const std::string &text);

    // Scores and persists corpus comments not yet in the log; returns how many.
    std::size_t import_corpus_comments(const Scorer &scorer);

    // Highest expected relevance first; ties newer first, then by comment id.
    std::vector<RankedComment> top_k(const std::string &article_id, std::size_t paragraph, std::size_t k) const;
    std::vector<RankedComment> article_wide(const std::string &article_id) const;

    std::size_t size() const;

private:
    void replay();
    void append(const StoredComment &c);
    void index(StoredComment c);
    const Article &article_or_throw(const std::string &id) const;

    Corpus corpus_;
    std::string log_path_;
    Clock clock_;
    std::mutex writer_;
    mutable std::shared_mutex mu_;
    std::vector<StoredComment> comments_;
    std::unordered_set<std::string> ids_;
    // article id -> per paragraph comment positions, and the article-wide feed
    std::unordered_map<std::string, std::vector<std::vector<std::size_t>>> panes_;
    std::unordered_map<std::string, std::vector<std::size_t>> feeds_;
    std::size_t next_id_ = 1;
};

}  // namespace pcm
