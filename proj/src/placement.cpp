#include "pcm/error.hpp"
#include "pcm/service.hpp"

namespace pcm {

double expected_relevance(const Probabilities &p) {
    double e = 0.0;
    for (std::size_t c = 0; c < kClasses; ++c) {
        e += static_cast<double>(c + 1) * p[c];
    }
    return e;
}

nlohmann::json to_json(const CommentPlacement &p) {
    nlohmann::json paragraphs = nlohmann::json::array();
    for (const auto &s : p.per_paragraph) {
        paragraphs.push_back({{"paragraph_index", s.paragraph_index},
                              {"label", s.label},
                              {"expected_relevance", s.expected_relevance},
                              {"probabilities", s.probs}});
    }
    return {{"comment_id", p.comment_id},
            {"model_id", p.model_id},
            {"scope", scope_to_json(p.scope)},
            {"paragraphs", paragraphs}};
}

CommentPlacement placement_from_json(const nlohmann::json &j) {
    CommentPlacement p;
    p.comment_id = j.at("comment_id").get<std::string>();
    p.model_id = j.at("model_id").get<std::string>();
    p.scope = scope_from_json(j.at("scope"));
    for (const auto &s : j.at("paragraphs")) {
        ParagraphScore ps;
        ps.paragraph_index = s.at("paragraph_index").get<std::size_t>();
        ps.label = s.at("label").get<int>();
        ps.expected_relevance = s.at("expected_relevance").get<double>();
        ps.probs = s.at("probabilities").get<Probabilities>();
        p.per_paragraph.push_back(ps);
    }
    return p;
}

Scorer::Scorer(TwinEncoderModel model, EmbeddingTable embeddings, std::string model_id, AverageOptions average)
    : model_(std::move(model)), embeddings_(std::move(embeddings)), model_id_(std::move(model_id)), average_(average) {
    if (embeddings_.dim() != model_.shape.input_dim) {
        fail(ErrorKind::Dimension, "model expects " + std::to_string(model_.shape.input_dim) +
                                       "-d inputs but the embedding table has dimension " +
                                       std::to_string(embeddings_.dim()));
    }
}

CommentPlacement Scorer::score(const Article &article, const std::string &comment_id, const std::string &text) const {
    CommentPlacement out;
    out.comment_id = comment_id;
    out.model_id = model_id_;
    const auto &shape = model_.shape;
    const EncoderInput comm =
        prepare_input(tokenize(text), embeddings_, shape.input_mode, shape.max_comment_tokens, average_);
    std::vector<int> labels;
    for (std::size_t i = 0; i < article.paragraphs.size(); ++i) {
        const EncoderInput para = prepare_input(tokenize(article.paragraphs[i].text), embeddings_, shape.input_mode,
                                                shape.max_paragraph_tokens, average_);
        const Prediction pred = predict(model_, para, comm);
        out.per_paragraph.push_back({i, pred.probs, pred.label, expected_relevance(pred.probs)});
        labels.push_back(pred.label);
    }
    out.scope = classify_scope(labels);
    return out;
}

CommentPlacement score_comment(const Scorer &scorer, const Corpus &corpus, const std::string &article_id,
                               const std::string &comment_id, const std::string &text) {
    const Article *article = corpus.find_article(article_id);
    if (article == nullptr) {
        fail(ErrorKind::NotFound, "unknown article '" + article_id + "'");
    }
    return scorer.score(*article, comment_id, text);
}

}  // namespace pcm
