#include "pcm/http_service.hpp"

#include <charconv>

#include "httplib.h"
#include "pcm/error.hpp"

namespace pcm {

namespace {

void send_json(httplib::Response &res, int status, const nlohmann::json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response &res, int status, const std::string &message) {
    send_json(res, status, {{"error", message}});
}

int status_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotFound:
    case ErrorKind::DanglingReference: return 404;
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Duplicate:
    case ErrorKind::Dimension: return 400;
    default: return 500;
    }
}

std::optional<std::size_t> parse_index(const std::string &s) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request &req, httplib::Response &res) {
        try {
            f(req, res);
        } catch (const Error &e) {
            send_error(res, status_for(e.kind()), e.what());
        } catch (const std::exception &e) {
            send_error(res, 500, e.what());
        }
    };
}

}  // namespace

HttpService::HttpService(Store &store, const Scorer &scorer, ServiceConfig config)
    : store_(store), scorer_(scorer), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
    routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::routes() {
    auto &s = *server_;
    s.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
    s.Options(R"(/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

    s.Get("/healthz", guarded([](const httplib::Request &, httplib::Response &res) {
              send_json(res, 200, {{"ok", true}});
          }));

    s.Get("/articles", guarded([this](const httplib::Request &, httplib::Response &res) {
              nlohmann::json list = nlohmann::json::array();
              for (const auto &a : store_.corpus().articles()) {
                  list.push_back({{"id", a.id}, {"title", a.title}, {"source", a.source}});
              }
              send_json(res, 200, list);
          }));

    s.Get(R"(/articles/([^/]+))", guarded([this](const httplib::Request &req, httplib::Response &res) {
              const Article *a = store_.corpus().find_article(req.matches[1]);
              if (a == nullptr) {
                  send_error(res, 404, "unknown article '" + std::string(req.matches[1]) + "'");
                  return;
              }
              nlohmann::json paragraphs = nlohmann::json::array();
              for (const auto &p : a->paragraphs) {
                  paragraphs.push_back({{"index", p.index}, {"text", p.text}});
              }
              nlohmann::json body{{"id", a->id}, {"title", a->title}, {"source", a->source},
                                  {"paragraphs", paragraphs}};
              body["topic"] = a->topic ? nlohmann::json(*a->topic) : nlohmann::json(nullptr);
              send_json(res, 200, body);
          }));

    s.Get(R"(/articles/([^/]+)/paragraphs/([^/]+)/comments)",
          guarded([this](const httplib::Request &req, httplib::Response &res) {
              const auto paragraph = parse_index(req.matches[2]);
              if (!paragraph) {
                  send_error(res, 400, "paragraph index must be a non-negative integer");
                  return;
              }
              std::size_t k = config_.default_k;
              if (req.has_param("k")) {
                  const auto parsed = parse_index(req.get_param_value("k"));
                  if (!parsed || *parsed < 1) {
                      send_error(res, 400, "k must be a positive integer");
                      return;
                  }
                  k = *parsed;
              }
              nlohmann::json list = nlohmann::json::array();
              for (const auto &c : store_.top_k(req.matches[1], *paragraph, k)) {
                  list.push_back(to_json(c));
              }
              send_json(res, 200,
                        {{"article_id", std::string(req.matches[1])}, {"paragraph_index", *paragraph},
                         {"k", k}, {"comments", list}});
          }));

    s.Get(R"(/articles/([^/]+)/comments/articlewide)",
          guarded([this](const httplib::Request &req, httplib::Response &res) {
              nlohmann::json list = nlohmann::json::array();
              for (const auto &c : store_.article_wide(req.matches[1])) {
                  list.push_back(to_json(c));
              }
              send_json(res, 200, {{"article_id", std::string(req.matches[1])}, {"comments", list}});
          }));

    s.Post(R"(/articles/([^/]+)/comments)", guarded([this](const httplib::Request &req, httplib::Response &res) {
               const std::string article_id = req.matches[1];
               if (store_.corpus().find_article(article_id) == nullptr) {
                   send_error(res, 404, "unknown article '" + article_id + "'");
                   return;
               }
               nlohmann::json body;
               try {
                   body = nlohmann::json::parse(req.body);
               } catch (const nlohmann::json::exception &) {
                   send_error(res, 400, "request body is not valid JSON");
                   return;
               }
               if (!body.is_object() || !body.contains("text") || !body["text"].is_string() ||
                   (body.contains("author") && !body["author"].is_string())) {
                   send_error(res, 400, "expected {\"author\": string, \"text\": string}");
                   return;
               }
               const auto stored = store_.post(scorer_, article_id, body.value("author", std::string("anonymous")),
                                               body["text"].get<std::string>());
               nlohmann::json out = to_json(stored.placement);
               out["comment"] = {{"id", stored.comment.id},
                                 {"article_id", stored.comment.article_id},
                                 {"author", stored.comment.author},
                                 {"timestamp", stored.comment.timestamp},
                                 {"text", stored.comment.text}};
               send_json(res, 201, out);
           }));
}

int HttpService::bind() {
    int port = config_.port;
    if (port == 0) {
        port = server_->bind_to_any_port(config_.host);
        if (port < 0) {
            fail(ErrorKind::Io, "cannot bind " + config_.host + " on a free port");
        }
    } else if (!server_->bind_to_port(config_.host, port)) {
        fail(ErrorKind::Io, "cannot bind " + config_.host + ":" + std::to_string(port));
    }
    return port;
}

void HttpService::run() {
    if (!server_->listen_after_bind() && !stopped_) {
        fail(ErrorKind::Io, "HTTP server stopped unexpectedly");
    }
}

void HttpService::stop() {
    stopped_ = true;
    if (server_->is_running()) {
        server_->stop();
    }
}

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace pcm
