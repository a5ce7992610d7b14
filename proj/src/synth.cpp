#include "pcm/synth.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <fmt/core.h>

#include "pcm/error.hpp"
#include "pcm/rng.hpp"

namespace pcm::synth {

const std::vector<std::string> &topic_names() {
    static const std::vector<std::string> names{"sport", "weather", "finance", "music", "food"};
    return names;
}

const std::vector<std::string> &topic_words(std::size_t topic) {
    static const std::vector<std::vector<std::string>> words{
        {"goal", "striker", "referee", "stadium", "league", "keeper", "penalty", "match", "coach", "tackle"},
        {"rain", "storm", "cloud", "thunder", "forecast", "drizzle", "humid", "breeze", "snow", "frost"},
        {"bank", "market", "bond", "inflation", "shares", "investor", "budget", "profit", "tax", "currency"},
        {"guitar", "melody", "album", "concert", "drummer", "lyrics", "chorus", "violin", "singer", "tempo"},
        {"bread", "cheese", "recipe", "oven", "spice", "noodle", "butter", "garlic", "soup", "pastry"},
    };
    if (topic >= words.size()) {
        fail(ErrorKind::InvalidArgument, "synth: topic " + std::to_string(topic) + " out of range");
    }
    return words[topic];
}

EmbeddingTable embeddings(std::uint64_t seed) {
    EmbeddingTable table(kDim);
    Rng rng(seed);
    Vector v(kDim);
    for (std::size_t t = 0; t < kTopics; ++t) {
        for (const auto &w : topic_words(t)) {
            std::fill(v.begin(), v.end(), 0.0);
            v[t] = 1.0;
            for (std::size_t d = kTopics; d < kDim; ++d) {
                v[d] = 0.1 * rng.normal();
            }
            table.insert(w, v);
        }
    }
    return table;
}

void write_embeddings(std::ostream &out, const EmbeddingTable &table) {
    out << table.size() << ' ' << table.dim() << '\n';
    for (const auto &w : table.words()) {
        out << w;
        const double *v = table.find(w);
        for (std::size_t d = 0; d < table.dim(); ++d) {
            out << ' ' << fmt::format("{:.17g}", v[d]);
        }
        out << '\n';
    }
}

int overlap_band(std::size_t shared, std::size_t total) {
    if (total == 0 || shared > total) {
        fail(ErrorKind::InvalidArgument, "overlap_band: need 0 <= shared <= total and total > 0");
    }
    return static_cast<int>(std::min<std::size_t>(5, 1 + 5 * shared / total));
}

std::size_t overlap(const TokenSeq &paragraph, const TokenSeq &comment) {
    const std::set<std::string> types(paragraph.begin(), paragraph.end());
    return static_cast<std::size_t>(
        std::count_if(comment.begin(), comment.end(), [&](const std::string &t) { return types.count(t) > 0; }));
}

namespace {

std::size_t between(Rng &rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

std::string as_sentences(const TokenSeq &tokens, std::size_t per_sentence) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string w = tokens[i];
        if (i % per_sentence == 0) {
            w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            if (i > 0) {
                out += ' ';
            }
        } else {
            out += ' ';
        }
        out += w;
        if (i + 1 == tokens.size() || (i + 1) % per_sentence == 0) {
            out += '.';
        }
    }
    return out;
}

}  // namespace

Corpus corpus(const Config &c) {
    if (c.paragraphs < 1 || c.paragraphs > kTopics || c.articles < 1 || c.comments < 1 ||
        c.paragraph_min_tokens < 1 || c.paragraph_min_tokens > c.paragraph_max_tokens || c.comment_min_tokens < 1 ||
        c.comment_min_tokens > c.comment_max_tokens) {
        fail(ErrorKind::InvalidArgument, "synth: inconsistent corpus configuration");
    }
    Rng rng(c.seed);
    std::vector<Article> articles;
    std::vector<Comment> comments;
    std::vector<Annotation> annotations;
    std::int64_t clock = 1'700'000'000;
    for (std::size_t a = 0; a < c.articles; ++a) {
        Article article;
        article.id = fmt::format("syn-{:03}", a + 1);
        article.source = "synthetic";
        article.title = fmt::format("Synthetic article {}", a + 1);
        std::vector<std::size_t> topics(kTopics);
        for (std::size_t t = 0; t < kTopics; ++t) {
            topics[t] = t;
        }
        rng.shuffle(topics);
        topics.resize(c.paragraphs);
        std::vector<TokenSeq> para_tokens;
        for (std::size_t p = 0; p < c.paragraphs; ++p) {
            const auto &words = topic_words(topics[p]);
            TokenSeq tokens(between(rng, c.paragraph_min_tokens, c.paragraph_max_tokens));
            for (auto &t : tokens) {
                t = words[rng.below(words.size())];
            }
            article.paragraphs.push_back({p, as_sentences(tokens, 6)});
            para_tokens.push_back(std::move(tokens));
        }
        for (std::size_t k = 0; k < c.comments; ++k) {
            const std::size_t target = rng.below(c.paragraphs);
            // labels cycle so every class has the same support
            const int wanted = 1 + static_cast<int>((a * c.comments + k) % 5);
            const std::size_t n = between(rng, c.comment_min_tokens, c.comment_max_tokens);
            // middle of the wanted band, rounded
            const std::size_t shared = (n * static_cast<std::size_t>(2 * wanted - 1) + 5) / 10;
            const std::set<std::string> own(para_tokens[target].begin(), para_tokens[target].end());
            const std::vector<std::string> own_types(own.begin(), own.end());
            std::vector<std::string> foreign;
            for (std::size_t t = 0; t < kTopics; ++t) {
                if (t != topics[target]) {
                    const auto &w = topic_words(t);
                    foreign.insert(foreign.end(), w.begin(), w.end());
                }
            }
            TokenSeq tokens;
            for (std::size_t i = 0; i < n; ++i) {
                tokens.push_back(i < shared ? own_types[rng.below(own_types.size())]
                                            : foreign[rng.below(foreign.size())]);
            }
            rng.shuffle(tokens);
            Comment comment;
            comment.id = fmt::format("{}-c{}", article.id, k + 1);
            comment.article_id = article.id;
            comment.author = fmt::format("reader{}", rng.below(50) + 1);
            comment.timestamp = clock++;
            comment.text = as_sentences(tokens, tokens.size());
            const int label = overlap_band(overlap(para_tokens[target], tokens), tokens.size());
            for (const char *annotator : {"ann1", "ann2"}) {
                annotations.push_back({comment.id, target, annotator, label});
            }
            comments.push_back(std::move(comment));
        }
        articles.push_back(std::move(article));
    }
    return Corpus(std::move(articles), std::move(comments), std::move(annotations));
}

}  // namespace pcm::synth
