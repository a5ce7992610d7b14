#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "pcm/error.hpp"
#include "pcm/http_service.hpp"
#include "pcm/service.hpp"
#include "pcm/synth.hpp"

using namespace pcm;
namespace fs = std::filesystem;

namespace {

struct TempLog {
    fs::path path;
    explicit TempLog(const std::string &name) : path(fs::temp_directory_path() / ("pcm_test_" + name + ".jsonl")) {
        fs::remove(path);
    }
    ~TempLog() { fs::remove(path); }
    std::string str() const { return path.string(); }
};

Store::Clock counter(std::int64_t start = 1000) {
    auto t = std::make_shared<std::int64_t>(start);
    return [t] { return (*t)++; };
}

Corpus small_corpus() {
    synth::Config c;
    c.articles = 3;
    return synth::corpus(c);
}

// Random small model over the synthetic embeddings, so scores vary by text.
Scorer random_scorer(std::uint64_t seed = 3) {
    ModelShape shape;
    shape.input_dim = synth::kDim;
    shape.hidden_dim = 6;
    TrainConfig config;
    config.seed = seed;
    config.init_scale = 1.0;
    return Scorer(TwinEncoderModel::initialized(shape, config), synth::embeddings(11), "random");
}

// Zero weights with one dominant head bias: every pair gets `label`.
Scorer constant_scorer(int label) {
    ModelShape shape;
    shape.input_dim = synth::kDim;
    shape.hidden_dim = 2;
    auto model = TwinEncoderModel::zeros(shape);
    model.head.b[static_cast<std::size_t>(label - 1)] = 10.0;
    return Scorer(model, synth::embeddings(11), "constant");
}

std::string words(std::size_t topic, std::size_t from, std::size_t n) {
    std::string s;
    const auto &w = synth::topic_words(topic);
    for (std::size_t i = 0; i < n; ++i) {
        s += w[(from + i) % w.size()] + " ";
    }
    return s;
}

std::string dump(const std::vector<RankedComment> &list) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &c : list) {
        j.push_back(to_json(c));
    }
    return j.dump();
}

}  // namespace

TEST_CASE("expected relevance") {
    CHECK(expected_relevance({0.2, 0.2, 0.2, 0.2, 0.2}) == doctest::Approx(3.0));
    CHECK(expected_relevance({0, 0, 0, 0, 1}) == 5.0);
    CHECK(expected_relevance({0.5, 0, 0, 0, 0.5}) == 3.0);
}

TEST_CASE("scoring a comment") {
    const auto corpus = small_corpus();
    const auto scorer = random_scorer();
    const auto &article = corpus.articles()[0];
    const auto a = scorer.score(article, "x", words(0, 0, 8));
    const auto b = scorer.score(article, "x", words(0, 0, 8));
    CHECK(to_json(a) == to_json(b));
    REQUIRE(a.per_paragraph.size() == article.paragraphs.size());
    std::vector<int> labels;
    for (std::size_t i = 0; i < a.per_paragraph.size(); ++i) {
        const auto &p = a.per_paragraph[i];
        CHECK(p.paragraph_index == i);
        CHECK(p.expected_relevance == doctest::Approx(expected_relevance(p.probs)).epsilon(1e-15));
        CHECK(p.expected_relevance >= 1.0);
        CHECK(p.expected_relevance <= 5.0);
        labels.push_back(p.label);
    }
    CHECK(a.scope == classify_scope(labels));
    CHECK(a.model_id == "random");
    CHECK(to_json(placement_from_json(to_json(a))) == to_json(a));

    CHECK_THROWS_AS(score_comment(scorer, corpus, "missing", "x", "text"), Error);

    ModelShape wrong;
    wrong.input_dim = 3;
    wrong.hidden_dim = 2;
    CHECK_THROWS_AS(Scorer(TwinEncoderModel::zeros(wrong), synth::embeddings(11), "bad"), Error);
}

TEST_CASE("single-paragraph article scope follows the predicted label") {
    const Article one{"solo", "test", "Solo", {{0, "rain storm cloud"}}, std::nullopt};
    for (int label = 1; label <= 5; ++label) {
        const auto placement = constant_scorer(label).score(one, "c", "anything");
        CHECK(placement.per_paragraph[0].label == label);
        if (label <= 2) {
            CHECK(is_article_wide(placement.scope));
        } else {
            CHECK(placement.scope == Scope{Targeted{{0}}});
        }
    }
}

TEST_CASE("top-k ordering and ties") {
    TempLog log("ties");
    Store store(small_corpus(), log.str(), counter());
    const auto scorer = constant_scorer(3);  // every comment: Targeted({0}), equal scores
    const auto id = store.corpus().articles()[0].id;
    CHECK(store.top_k(id, 0, 3).empty());
    for (int i = 0; i < 4; ++i) {
        store.post(scorer, id, "u", "comment " + std::to_string(i));
    }
    const auto top = store.top_k(id, 0, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].timestamp > top[1].timestamp);
    CHECK(top[1].timestamp > top[2].timestamp);
    CHECK(store.top_k(id, 1, 3).empty());
    CHECK(store.top_k(id, 0, 10).size() == 4);
    CHECK_THROWS_AS(store.top_k(id, 0, 0), Error);
    CHECK_THROWS_AS(store.top_k(id, 99, 3), Error);
    CHECK_THROWS_AS(store.top_k("nope", 0, 3), Error);
    CHECK_THROWS_AS(store.post(scorer, id, "u", ""), Error);
    CHECK_THROWS_AS(store.post(scorer, "nope", "u", "text"), Error);
}

TEST_CASE("panes are ranked, targeted, and rebuilt identically from the log") {
    TempLog log("rebuild");
    const auto scorer = random_scorer();
    std::vector<std::string> before;
    {
        Store store(small_corpus(), log.str(), counter());
        CHECK(store.import_corpus_comments(scorer) == store.corpus().comments().size());
        CHECK(store.import_corpus_comments(scorer) == 0);
        for (std::size_t t = 0; t < 5; ++t) {
            store.post(scorer, store.corpus().articles()[1].id, "reader", words(t, t, 9));
        }
        for (const auto &a : store.corpus().articles()) {
            for (std::size_t p = 0; p < a.paragraphs.size(); ++p) {
                const auto pane = store.top_k(a.id, p, 100);
                for (std::size_t i = 0; i < pane.size(); ++i) {
                    CHECK(targets(pane[i].scope, p));
                    if (i > 0) {
                        CHECK(pane[i].expected_relevance <= pane[i - 1].expected_relevance);
                    }
                }
                before.push_back(dump(store.top_k(a.id, p, 3)));
            }
            for (const auto &c : store.article_wide(a.id)) {
                CHECK(is_article_wide(c.scope));
            }
            before.push_back(dump(store.article_wide(a.id)));
        }
    }
    Store reopened(small_corpus(), log.str());
    CHECK(reopened.size() == small_corpus().comments().size() + 5);
    std::vector<std::string> after;
    for (const auto &a : reopened.corpus().articles()) {
        for (std::size_t p = 0; p < a.paragraphs.size(); ++p) {
            after.push_back(dump(reopened.top_k(a.id, p, 3)));
        }
        after.push_back(dump(reopened.article_wide(a.id)));
    }
    CHECK(after == before);
    // ids keep counting after a restart
    const auto next = reopened.post(scorer, reopened.corpus().articles()[0].id, "r", "more rain");
    CHECK(next.comment.id == "live-6");
}

TEST_CASE("a corrupt log refuses to open and names the offset") {
    TempLog log("corrupt");
    std::size_t first_line = 0;
    {
        Store store(small_corpus(), log.str(), counter());
        store.post(constant_scorer(4), store.corpus().articles()[0].id, "u", "hello");
        first_line = fs::file_size(log.path);
    }
    {
        std::ofstream out(log.path, std::ios::app);
        out << "{not json\n";
    }
    try {
        Store broken(small_corpus(), log.str());
        FAIL("expected the store to reject the log");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("byte offset " + std::to_string(first_line)) != std::string::npos);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    TempLog partial("partial");
    {
        std::ofstream out(partial.path);
        out << R"({"comment":{"id":"live-1"})";
    }
    CHECK_THROWS_AS(Store(small_corpus(), partial.str()), Error);
}

TEST_CASE("HTTP API") {
    TempLog log("http");
    Store store(small_corpus(), log.str(), counter());
    const auto scorer = random_scorer();
    HttpService service(store, scorer, {"127.0.0.1", 0, "*", 3});
    const int port = service.bind();
    std::thread runner([&] { service.run(); });
    service.wait_until_ready();
    httplib::Client client("127.0.0.1", port);
    const auto id = store.corpus().articles()[0].id;

    auto health = client.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(nlohmann::json::parse(health->body) == nlohmann::json{{"ok", true}});
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

    auto list = client.Get("/articles");
    REQUIRE(list);
    CHECK(nlohmann::json::parse(list->body).size() == 3);

    auto article = client.Get("/articles/" + id);
    REQUIRE(article);
    CHECK(nlohmann::json::parse(article->body)["paragraphs"].size() == 5);

    auto missing = client.Get("/articles/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(nlohmann::json::parse(missing->body).contains("error"));
    auto missing_pane = client.Get("/articles/nope/paragraphs/0/comments");
    REQUIRE(missing_pane);
    CHECK(missing_pane->status == 404);
    auto bad_pane = client.Get("/articles/" + id + "/paragraphs/77/comments");
    REQUIRE(bad_pane);
    CHECK(bad_pane->status == 404);
    auto bad_k = client.Get("/articles/" + id + "/paragraphs/0/comments?k=0");
    REQUIRE(bad_k);
    CHECK(bad_k->status == 400);

    auto malformed = client.Post("/articles/" + id + "/comments", "{oops", "application/json");
    REQUIRE(malformed);
    CHECK(malformed->status == 400);
    auto no_text = client.Post("/articles/" + id + "/comments", R"({"author":"x"})", "application/json");
    REQUIRE(no_text);
    CHECK(no_text->status == 400);
    auto unknown = client.Post("/articles/nope/comments", R"({"text":"hi"})", "application/json");
    REQUIRE(unknown);
    CHECK(unknown->status == 404);
    CHECK(store.size() == 0);

    nlohmann::json posted_body{{"author", "kim"}, {"text", words(0, 0, 10)}};
    auto posted = client.Post("/articles/" + id + "/comments", posted_body.dump(), "application/json");
    REQUIRE(posted);
    CHECK(posted->status == 201);
    const auto placement = nlohmann::json::parse(posted->body);
    CHECK(placement["paragraphs"].size() == 5);
    const auto cid = placement["comment"]["id"].get<std::string>();
    const auto scope = scope_from_json(placement["scope"]);

    bool seen = false;
    if (is_article_wide(scope)) {
        auto feed = client.Get("/articles/" + id + "/comments/articlewide");
        REQUIRE(feed);
        const auto body = nlohmann::json::parse(feed->body);
        for (const auto &c : body["comments"]) {
            seen = seen || c["comment_id"].get<std::string>() == cid;
        }
    } else {
        for (const auto p : std::get<Targeted>(scope).paragraphs) {
            auto pane = client.Get("/articles/" + id + "/paragraphs/" + std::to_string(p) + "/comments?k=3");
            REQUIRE(pane);
            CHECK(pane->status == 200);
            const auto body = nlohmann::json::parse(pane->body);
            for (const auto &c : body["comments"]) {
                if (c["comment_id"].get<std::string>() == cid) {
                    seen = true;
                    CHECK(c["expected_relevance"].get<double>() ==
                          doctest::Approx(placement["paragraphs"][p]["expected_relevance"].get<double>()));
                }
            }
        }
    }
    CHECK(seen);

    auto options = client.Options("/articles/" + id + "/comments");
    REQUIRE(options);
    CHECK(options->status == 204);

    service.stop();
    runner.join();
}
