#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcm/error.hpp"
#include "pcm/service.hpp"

namespace pcm {

namespace {

constexpr std::string_view kLivePrefix = "live-";

nlohmann::json comment_json(const Comment &c) {
    return {{"id", c.id}, {"article_id", c.article_id}, {"author", c.author}, {"timestamp", c.timestamp},
            {"text", c.text}};
}

bool ranks_before(const RankedComment &a, const RankedComment &b) {
    if (a.expected_relevance != b.expected_relevance) {
        return a.expected_relevance > b.expected_relevance;
    }
    if (a.timestamp != b.timestamp) {
        return a.timestamp > b.timestamp;
    }
    return a.comment_id < b.comment_id;
}

std::int64_t wall_clock() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

nlohmann::json to_json(const RankedComment &c) {
    return {{"comment_id", c.comment_id},       {"author", c.author},
            {"text", c.text},                   {"timestamp", c.timestamp},
            {"expected_relevance", c.expected_relevance}, {"scope", scope_to_json(c.scope)}};
}

Store::Store(Corpus corpus, std::string log_path, Clock clock)
    : corpus_(std::move(corpus)), log_path_(std::move(log_path)), clock_(clock ? std::move(clock) : wall_clock) {
    for (const auto &a : corpus_.articles()) {
        panes_[a.id].resize(a.paragraphs.size());
        feeds_[a.id];
    }
    replay();
}

void Store::replay() {
    std::ifstream in(log_path_, std::ios::binary);
    if (!in) {
        if (std::filesystem::exists(log_path_)) {
            fail(ErrorKind::Io, "cannot read comment log '" + log_path_ + "'");
        }
        return;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    std::size_t offset = 0;
    std::size_t line = 0;
    while (offset < bytes.size()) {
        ++line;
        const std::size_t end = bytes.find('\n', offset);
        const auto corrupt = [&](const std::string &why) {
            fail(ErrorKind::Parse, "comment log '" + log_path_ + "' is corrupt at byte offset " +
                                       std::to_string(offset) + " (line " + std::to_string(line) + "): " + why);
        };
        if (end == std::string::npos) {
            corrupt("record is not newline-terminated");
        }
        const std::string_view text(bytes.data() + offset, end - offset);
        StoredComment c;
        try {
            const auto j = nlohmann::json::parse(text);
            const auto &cj = j.at("comment");
            c.comment = {cj.at("id").get<std::string>(), cj.at("article_id").get<std::string>(),
                         cj.at("author").get<std::string>(), cj.at("timestamp").get<std::int64_t>(),
                         cj.at("text").get<std::string>()};
            c.placement = placement_from_json(j.at("placement"));
        } catch (const nlohmann::json::exception &e) {
            corrupt(e.what());
        } catch (const Error &e) {
            corrupt(e.what());
        }
        const Article *article = corpus_.find_article(c.comment.article_id);
        if (article == nullptr) {
            corrupt("unknown article '" + c.comment.article_id + "'");
        }
        if (c.placement.per_paragraph.size() != article->paragraphs.size()) {
            corrupt("placement does not cover the article's paragraphs");
        }
        if (ids_.count(c.comment.id) > 0) {
            corrupt("duplicate comment id '" + c.comment.id + "'");
        }
        index(std::move(c));
        offset = end + 1;
    }
}

void Store::index(StoredComment c) {
    const std::string &id = c.comment.id;
    if (id.starts_with(kLivePrefix)) {
        try {
            next_id_ = std::max(next_id_, std::stoul(id.substr(kLivePrefix.size())) + 1);
        } catch (const std::exception &) {
        }
    }
    ids_.insert(id);
    const std::size_t pos = comments_.size();
    if (is_article_wide(c.placement.scope)) {
        feeds_[c.comment.article_id].push_back(pos);
    } else {
        auto &panes = panes_[c.comment.article_id];
        for (const auto p : std::get<Targeted>(c.placement.scope).paragraphs) {
            if (p < panes.size()) {
                panes[p].push_back(pos);
            }
        }
    }
    comments_.push_back(std::move(c));
}

void Store::append(const StoredComment &c) {
    const std::string line =
        nlohmann::json{{"comment", comment_json(c.comment)}, {"placement", to_json(c.placement)}}.dump() + "\n";
    std::ofstream out(log_path_, std::ios::binary | std::ios::app);
    if (!out) {
        fail(ErrorKind::Io, "cannot open comment log '" + log_path_ + "' for appending");
    }
    out << line;
    out.flush();
    if (!out) {
        fail(ErrorKind::Io, "failed writing comment log '" + log_path_ + "'");
    }
}

const Article &Store::article_or_throw(const std::string &id) const {
    const Article *a = corpus_.find_article(id);
    if (a == nullptr) {
        fail(ErrorKind::NotFound, "unknown article '" + id + "'");
    }
    return *a;
}

StoredComment Store::post(const Scorer &scorer, const std::string &article_id, const std::string &author,
                          const std::string &text) {
    const Article &article = article_or_throw(article_id);
    if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); })) {
        fail(ErrorKind::InvalidArgument, "comment text is empty");
    }
    std::lock_guard writer(writer_);
    std::string id;
    {
        std::shared_lock read(mu_);
        do {
            id = std::string(kLivePrefix) + std::to_string(next_id_++);
        } while (ids_.count(id) > 0);
    }
    StoredComment c{{id, article_id, author, clock_(), text}, scorer.score(article, id, text)};
    append(c);
    std::unique_lock write(mu_);
    index(c);
    return c;
}

std::size_t Store::import_corpus_comments(const Scorer &scorer) {
    std::lock_guard writer(writer_);
    std::size_t added = 0;
    for (const auto &comment : corpus_.comments()) {
        {
            std::shared_lock read(mu_);
            if (ids_.count(comment.id) > 0) {
                continue;
            }
        }
        StoredComment c{comment, scorer.score(article_or_throw(comment.article_id), comment.id, comment.text)};
        append(c);
        std::unique_lock write(mu_);
        index(std::move(c));
        ++added;
    }
    return added;
}

std::vector<RankedComment> Store::top_k(const std::string &article_id, std::size_t paragraph, std::size_t k) const {
    const Article &article = article_or_throw(article_id);
    if (paragraph >= article.paragraphs.size()) {
        fail(ErrorKind::NotFound, "article '" + article_id + "' has no paragraph " + std::to_string(paragraph));
    }
    if (k < 1) {
        fail(ErrorKind::InvalidArgument, "k must be at least 1");
    }
    std::vector<RankedComment> out;
    {
        std::shared_lock read(mu_);
        for (const auto pos : panes_.at(article_id)[paragraph]) {
            const auto &c = comments_[pos];
            out.push_back({c.comment.id, c.comment.author, c.comment.text, c.comment.timestamp,
                           c.placement.per_paragraph[paragraph].expected_relevance, c.placement.scope});
        }
    }
    std::sort(out.begin(), out.end(), ranks_before);
    if (out.size() > k) {
        out.resize(k);
    }
    return out;
}

std::vector<RankedComment> Store::article_wide(const std::string &article_id) const {
    article_or_throw(article_id);
    std::vector<RankedComment> out;
    {
        std::shared_lock read(mu_);
        for (const auto pos : feeds_.at(article_id)) {
            const auto &c = comments_[pos];
            double mean = 0.0;
            for (const auto &s : c.placement.per_paragraph) {
                mean += s.expected_relevance;
            }
            mean /= static_cast<double>(std::max<std::size_t>(c.placement.per_paragraph.size(), 1));
            out.push_back({c.comment.id, c.comment.author, c.comment.text, c.comment.timestamp, mean,
                           c.placement.scope});
        }
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

std::size_t Store::size() const {
    std::shared_lock read(mu_);
    return comments_.size();
}

}  // namespace pcm
