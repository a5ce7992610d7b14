#include "pcm/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "pcm/embed.hpp"
#include "pcm/error.hpp"

namespace pcm {

using nlohmann::json;

bool is_article_wide(const Scope &scope) noexcept { return std::holds_alternative<ArticleWide>(scope); }

bool targets(const Scope &scope, std::size_t paragraph) noexcept {
    const auto *t = std::get_if<Targeted>(&scope);
    return t != nullptr && std::binary_search(t->paragraphs.begin(), t->paragraphs.end(), paragraph);
}

json scope_to_json(const Scope &scope) {
    if (is_article_wide(scope)) {
        return json{{"kind", "article_wide"}};
    }
    return json{{"kind", "targeted"}, {"paragraphs", std::get<Targeted>(scope).paragraphs}};
}

Scope scope_from_json(const json &j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "article_wide") {
        return ArticleWide{};
    }
    if (kind == "targeted") {
        auto paragraphs = j.at("paragraphs").get<std::vector<std::size_t>>();
        if (paragraphs.empty()) {
            fail(ErrorKind::Parse, "targeted scope with no paragraphs");
        }
        std::sort(paragraphs.begin(), paragraphs.end());
        return Targeted{std::move(paragraphs)};
    }
    fail(ErrorKind::Parse, "unknown scope kind '" + kind + "'");
}

namespace {

bool blank(const std::string &s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string key_of(const std::string &comment_id, std::size_t paragraph) {
    return comment_id + '\x1f' + std::to_string(paragraph);
}

}  // namespace

Corpus::Corpus(std::vector<Article> articles, std::vector<Comment> comments, std::vector<Annotation> annotations)
    : articles_(std::move(articles)), comments_(std::move(comments)), annotations_(std::move(annotations)) {
    validate_and_index();
}

void Corpus::validate_and_index() {
    for (std::size_t i = 0; i < articles_.size(); ++i) {
        auto &a = articles_[i];
        if (a.paragraphs.empty()) {
            fail(ErrorKind::InvalidArgument, "article '" + a.id + "' has no paragraphs");
        }
        for (std::size_t p = 0; p < a.paragraphs.size(); ++p) {
            a.paragraphs[p].index = p;
            if (blank(a.paragraphs[p].text)) {
                fail(ErrorKind::InvalidArgument,
                     "article '" + a.id + "' paragraph " + std::to_string(p) + " is empty");
            }
        }
        if (!article_index_.emplace(a.id, i).second) {
            fail(ErrorKind::Duplicate, "duplicate article id '" + a.id + "'");
        }
    }
    for (std::size_t i = 0; i < comments_.size(); ++i) {
        const auto &c = comments_[i];
        if (!article_index_.contains(c.article_id)) {
            fail(ErrorKind::DanglingReference,
                 "comment '" + c.id + "' references unknown article '" + c.article_id + "'");
        }
        if (blank(c.text)) {
            fail(ErrorKind::InvalidArgument, "comment '" + c.id + "' has empty text");
        }
        if (!comment_index_.emplace(c.id, i).second) {
            fail(ErrorKind::Duplicate, "duplicate comment id '" + c.id + "'");
        }
    }
    std::set<std::string> seen;
    for (const auto &an : annotations_) {
        const auto *c = find_comment(an.comment_id);
        if (c == nullptr) {
            fail(ErrorKind::DanglingReference, "annotation references unknown comment '" + an.comment_id + "'");
        }
        const auto *a = find_article(c->article_id);
        if (an.paragraph_index >= a->paragraphs.size()) {
            fail(ErrorKind::DanglingReference, "annotation of comment '" + an.comment_id + "' names paragraph " +
                                                   std::to_string(an.paragraph_index) + " of a " +
                                                   std::to_string(a->paragraphs.size()) + "-paragraph article");
        }
        if (an.label < 1 || an.label > 5) {
            fail(ErrorKind::InvalidArgument, "annotation label " + std::to_string(an.label) + " outside 1..5");
        }
        if (!seen.insert(key_of(an.comment_id, an.paragraph_index) + '\x1f' + an.annotator_id).second) {
            fail(ErrorKind::Duplicate, "annotator '" + an.annotator_id + "' labelled comment '" + an.comment_id +
                                           "' paragraph " + std::to_string(an.paragraph_index) + " twice");
        }
    }
}

const Article *Corpus::find_article(const std::string &id) const {
    const auto it = article_index_.find(id);
    return it == article_index_.end() ? nullptr : &articles_[it->second];
}

const Comment *Corpus::find_comment(const std::string &id) const {
    const auto it = comment_index_.find(id);
    return it == comment_index_.end() ? nullptr : &comments_[it->second];
}

std::size_t Corpus::paragraph_count() const {
    return std::accumulate(articles_.begin(), articles_.end(), std::size_t{0},
                           [](std::size_t acc, const Article &a) { return acc + a.paragraphs.size(); });
}

std::vector<std::string> Corpus::annotators() const {
    std::vector<std::string> out;
    for (const auto &an : annotations_) {
        if (std::find(out.begin(), out.end(), an.annotator_id) == out.end()) {
            out.push_back(an.annotator_id);
        }
    }
    return out;
}

std::vector<Annotation> Corpus::annotations_by(const std::string &annotator) const {
    std::vector<Annotation> out;
    std::copy_if(annotations_.begin(), annotations_.end(), std::back_inserter(out),
                 [&](const Annotation &a) { return a.annotator_id == annotator; });
    return out;
}

Corpus parse_corpus(std::istream &in) {
    std::vector<Article> articles;
    std::vector<Comment> comments;
    std::vector<Annotation> annotations;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        const auto where = "line " + std::to_string(line_no) + ": ";
        try {
            const auto j = json::parse(line);
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "article") {
                Article a;
                a.id = j.at("id").get<std::string>();
                a.source = j.value("source", std::string{});
                a.title = j.value("title", std::string{});
                const auto texts = j.at("paragraphs").get<std::vector<std::string>>();
                for (std::size_t p = 0; p < texts.size(); ++p) {
                    a.paragraphs.push_back({p, texts[p]});
                }
                if (j.contains("topic") && !j.at("topic").is_null()) {
                    a.topic = j.at("topic").get<std::string>();
                }
                articles.push_back(std::move(a));
            } else if (kind == "comment") {
                comments.push_back({j.at("id").get<std::string>(), j.at("article_id").get<std::string>(),
                                    j.value("author", std::string{}), j.value("timestamp", std::int64_t{0}),
                                    j.at("text").get<std::string>()});
            } else if (kind == "annotation") {
                annotations.push_back({j.at("comment_id").get<std::string>(),
                                       j.at("paragraph_index").get<std::size_t>(),
                                       j.at("annotator_id").get<std::string>(), j.at("label").get<int>()});
            } else {
                fail(ErrorKind::Parse, where + "unknown record kind '" + kind + "'");
            }
        } catch (const json::exception &e) {
            fail(ErrorKind::Parse, where + e.what());
        }
    }
    return Corpus(std::move(articles), std::move(comments), std::move(annotations));
}

Corpus load_corpus(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open corpus file '" + path + "'");
    }
    return parse_corpus(in);
}

void write_corpus(std::ostream &out, const Corpus &corpus) {
    for (const auto &a : corpus.articles()) {
        json j{{"kind", "article"}, {"id", a.id}, {"source", a.source}, {"title", a.title}};
        std::vector<std::string> texts;
        for (const auto &p : a.paragraphs) {
            texts.push_back(p.text);
        }
        j["paragraphs"] = texts;
        if (a.topic) {
            j["topic"] = *a.topic;
        }
        out << j.dump() << '\n';
    }
    for (const auto &c : corpus.comments()) {
        out << json{{"kind", "comment"}, {"id", c.id},          {"article_id", c.article_id},
                    {"author", c.author}, {"timestamp", c.timestamp}, {"text", c.text}}
                   .dump()
            << '\n';
    }
    for (const auto &an : corpus.annotations()) {
        out << json{{"kind", "annotation"},
                    {"comment_id", an.comment_id},
                    {"paragraph_index", an.paragraph_index},
                    {"annotator_id", an.annotator_id},
                    {"label", an.label}}
                   .dump()
            << '\n';
    }
}

double cohen_kappa(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.size() != labels_b.size()) {
        fail(ErrorKind::Dimension, "cohen_kappa: length mismatch (" + std::to_string(labels_a.size()) + " vs " +
                                       std::to_string(labels_b.size()) + ")");
    }
    if (labels_a.empty()) {
        fail(ErrorKind::InvalidArgument, "cohen_kappa: empty input");
    }
    std::array<double, 5> freq_a{}, freq_b{};
    double agree = 0.0;
    for (std::size_t i = 0; i < labels_a.size(); ++i) {
        const int a = labels_a[i];
        const int b = labels_b[i];
        if (a < 1 || a > 5 || b < 1 || b > 5) {
            fail(ErrorKind::InvalidArgument, "cohen_kappa: label outside 1..5");
        }
        freq_a[a - 1] += 1.0;
        freq_b[b - 1] += 1.0;
        agree += (a == b) ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(labels_a.size());
    const double p_o = agree / n;
    double p_e = 0.0;
    for (std::size_t c = 0; c < 5; ++c) {
        p_e += (freq_a[c] / n) * (freq_b[c] / n);
    }
    if (p_e >= 1.0) {
        // both annotators used one and the same label throughout
        return 1.0;
    }
    return (p_o - p_e) / (1.0 - p_e);
}

Consolidation consolidate(std::span<const Annotation> annots_a, std::span<const Annotation> annots_b,
                          const Corpus *corpus) {
    std::unordered_map<std::string, int> labels_b;
    for (const auto &an : annots_b) {
        labels_b.emplace(key_of(an.comment_id, an.paragraph_index), an.label);
    }
    Consolidation out;
    std::set<std::string> keys_a;
    for (const auto &an : annots_a) {
        const auto key = key_of(an.comment_id, an.paragraph_index);
        keys_a.insert(key);
        const auto it = labels_b.find(key);
        if (it == labels_b.end() || it->second != an.label) {
            ++out.dropped;
            continue;
        }
        GoldPair g{"", an.paragraph_index, an.comment_id, an.label};
        if (corpus != nullptr) {
            if (const auto *c = corpus->find_comment(an.comment_id)) {
                g.article_id = c->article_id;
            }
        }
        out.gold.push_back(std::move(g));
    }
    for (const auto &[key, label] : labels_b) {
        if (!keys_a.contains(key)) {
            ++out.dropped;
        }
    }
    return out;
}

Consolidation gold_pairs(const Corpus &corpus) {
    const auto ids = corpus.annotators();
    if (ids.size() != 2) {
        fail(ErrorKind::InvalidArgument,
             "gold consolidation needs exactly two annotators, corpus has " + std::to_string(ids.size()));
    }
    const auto a = corpus.annotations_by(ids[0]);
    const auto b = corpus.annotations_by(ids[1]);
    return consolidate(a, b, &corpus);
}

Scope classify_scope(std::span<const int> scores) {
    if (scores.empty()) {
        fail(ErrorKind::InvalidArgument, "classify_scope: empty score list");
    }
    std::vector<std::size_t> high;
    bool all_low = true;
    std::size_t best = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= 4) {
            high.push_back(i);
        }
        all_low = all_low && scores[i] <= 2;
        if (scores[i] > scores[best]) {
            best = i;
        }
    }
    if (high.size() >= 3 || all_low) {
        return ArticleWide{};
    }
    if (high.empty()) {
        return Targeted{{best}};
    }
    return Targeted{std::move(high)};
}

std::size_t relative_decile(std::size_t paragraph_index, std::size_t paragraph_count) {
    if (paragraph_count == 0) {
        return 0;
    }
    return std::min<std::size_t>(9, (10 * paragraph_index) / paragraph_count);
}

namespace {

std::vector<std::string> bucket_labels(const std::vector<std::size_t> &edges, std::size_t first) {
    std::vector<std::string> labels;
    std::size_t lo = first;
    for (const auto e : edges) {
        labels.push_back(std::to_string(lo) + "-" + std::to_string(e));
        lo = e + 1;
    }
    labels.push_back(">" + std::to_string(edges.empty() ? first : edges.back()));
    return labels;
}

std::size_t bucket_of(const std::vector<std::size_t> &edges, std::size_t value) {
    for (std::size_t b = 0; b < edges.size(); ++b) {
        if (value <= edges[b]) {
            return b;
        }
    }
    return edges.size();
}

std::vector<std::pair<std::string, double>> histogram(const std::vector<std::size_t> &edges, std::size_t first,
                                                      const std::vector<std::size_t> &values) {
    const auto labels = bucket_labels(edges, first);
    std::vector<double> counts(labels.size(), 0.0);
    for (const auto v : values) {
        counts[bucket_of(edges, v)] += 1.0;
    }
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t b = 0; b < labels.size(); ++b) {
        out.emplace_back(labels[b], values.empty() ? 0.0 : 100.0 * counts[b] / static_cast<double>(values.size()));
    }
    return out;
}

}  // namespace

CorpusStats corpus_stats(const Corpus &corpus, std::span<const GoldPair> gold, const StatsConfig &config) {
    for (const auto *edges : {&config.paragraph_edges, &config.sentence_edges}) {
        if (!std::is_sorted(edges->begin(), edges->end()) ||
            std::adjacent_find(edges->begin(), edges->end()) != edges->end()) {
            fail(ErrorKind::InvalidArgument, "histogram bucket edges must be strictly increasing");
        }
    }
    CorpusStats stats;
    stats.articles = corpus.articles().size();
    stats.paragraphs = corpus.paragraph_count();
    stats.comments = corpus.comments().size();

    std::unordered_map<std::string, std::size_t> sentences;
    for (const auto &a : corpus.articles()) {
        std::size_t n = 0;
        for (const auto &p : a.paragraphs) {
            n += sentence_count(p.text);
        }
        sentences.emplace(a.id, n);
    }
    std::vector<std::size_t> by_paragraphs;
    std::vector<std::size_t> by_sentences;
    for (const auto &c : corpus.comments()) {
        by_paragraphs.push_back(corpus.find_article(c.article_id)->paragraphs.size());
        by_sentences.push_back(sentences.at(c.article_id));
    }
    stats.comments_by_paragraph_bucket = histogram(config.paragraph_edges, 1, by_paragraphs);
    stats.comments_by_sentence_bucket = histogram(config.sentence_edges, 1, by_sentences);

    const auto ids = corpus.annotators();
    if (ids.size() == 2) {
        std::unordered_map<std::string, int> labels_b;
        for (const auto &an : corpus.annotations_by(ids[1])) {
            labels_b.emplace(key_of(an.comment_id, an.paragraph_index), an.label);
        }
        std::vector<int> la, lb;
        for (const auto &an : corpus.annotations_by(ids[0])) {
            const auto it = labels_b.find(key_of(an.comment_id, an.paragraph_index));
            if (it != labels_b.end()) {
                la.push_back(an.label);
                lb.push_back(it->second);
            }
        }
        if (!la.empty()) {
            stats.annotator_kappa = cohen_kappa(la, lb);
        }
    }

    if (gold.empty()) {
        return stats;
    }

    std::array<double, 10> sum{}, count{};
    std::map<int, double> labels;
    // per comment: paragraph -> gold label, paragraphs kept sorted
    std::map<std::string, std::map<std::size_t, int>> per_comment;
    std::vector<std::string> comment_order;
    for (const auto &g : gold) {
        const auto *c = corpus.find_comment(g.comment_id);
        const Article *a = c != nullptr ? corpus.find_article(c->article_id) : corpus.find_article(g.article_id);
        if (a == nullptr) {
            fail(ErrorKind::DanglingReference, "gold pair references unknown comment '" + g.comment_id + "'");
        }
        const auto d = relative_decile(g.paragraph_index, a->paragraphs.size());
        sum[d] += g.label;
        count[d] += 1.0;
        labels[g.label] += 1.0;
        auto [it, inserted] = per_comment.try_emplace(g.comment_id);
        if (inserted) {
            comment_order.push_back(g.comment_id);
        }
        it->second[g.paragraph_index] = g.label;
    }
    std::vector<std::optional<double>> deciles(10);
    for (std::size_t d = 0; d < 10; ++d) {
        if (count[d] > 0) {
            deciles[d] = sum[d] / count[d];
        }
    }
    stats.mean_relevance_by_decile = std::move(deciles);
    for (auto &[label, n] : labels) {
        n = 100.0 * n / static_cast<double>(gold.size());
    }
    stats.label_percentages = std::move(labels);

    std::size_t wide = 0;
    for (const auto &id : comment_order) {
        std::vector<int> scores;
        for (const auto &[p, label] : per_comment.at(id)) {
            scores.push_back(label);
        }
        wide += is_article_wide(classify_scope(scores)) ? 1 : 0;
    }
    const double n_comments = static_cast<double>(comment_order.size());
    stats.article_wide_percent = 100.0 * static_cast<double>(wide) / n_comments;
    stats.targeted_percent = 100.0 - *stats.article_wide_percent;
    return stats;
}

json stats_to_json(const CorpusStats &stats) {
    json j;
    j["articles"] = stats.articles;
    j["paragraphs"] = stats.paragraphs;
    j["comments"] = stats.comments;
    auto hist = [](const std::vector<std::pair<std::string, double>> &h) {
        json arr = json::array();
        for (const auto &[bucket, pct] : h) {
            arr.push_back({{"bucket", bucket}, {"percent", pct}});
        }
        return arr;
    };
    j["comments_by_paragraph_bucket"] = hist(stats.comments_by_paragraph_bucket);
    j["comments_by_sentence_bucket"] = hist(stats.comments_by_sentence_bucket);
    if (stats.mean_relevance_by_decile) {
        json arr = json::array();
        for (const auto &v : *stats.mean_relevance_by_decile) {
            arr.push_back(v ? json(*v) : json(nullptr));
        }
        j["mean_relevance_by_decile"] = arr;
    }
    if (stats.label_percentages) {
        json obj = json::object();
        for (const auto &[label, pct] : *stats.label_percentages) {
            obj[std::to_string(label)] = pct;
        }
        j["label_percentages"] = obj;
    }
    if (stats.article_wide_percent) {
        j["scope_percentages"] = {{"article_wide", *stats.article_wide_percent},
                                  {"targeted", *stats.targeted_percent}};
    }
    if (stats.annotator_kappa) {
        j["annotator_kappa"] = *stats.annotator_kappa;
    }
    return j;
}

}  // namespace pcm
