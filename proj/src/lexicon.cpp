#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pcm/error.hpp"
#include "pcm/features.hpp"

namespace pcm {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lowercase(std::string s) {
    for (auto &c : s) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c + 32);
        }
    }
    return s;
}

}  // namespace

Lexicon::Lexicon(std::vector<Category> categories) : categories_(std::move(categories)) {
    std::unordered_set<std::string> names;
    for (const auto &c : categories_) {
        if (c.name.empty()) {
            fail(ErrorKind::Parse, "lexicon category without a name");
        }
        if (!names.insert(c.name).second) {
            fail(ErrorKind::Duplicate, "duplicate lexicon category '" + c.name + "'");
        }
        auto &exact = exact_.emplace_back();
        auto &prefixes = prefixes_.emplace_back();
        for (const auto &p : c.patterns) {
            if (!p.empty() && p.back() == '*') {
                prefixes.push_back(p.substr(0, p.size() - 1));
            } else {
                exact.emplace(p, true);
            }
        }
    }
}

bool Lexicon::matches(std::size_t category, std::string_view token) const {
    if (exact_[category].contains(std::string(token))) {
        return true;
    }
    for (const auto &prefix : prefixes_[category]) {
        if (token.substr(0, prefix.size()) == prefix) {
            return true;
        }
    }
    return false;
}

Lexicon Lexicon::parse(std::string_view text) {
    std::vector<Category> categories;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto colon = body.find(':');
        if (colon == std::string::npos) {
            fail(ErrorKind::Parse, "lexicon line " + std::to_string(line_no) + ": expected 'name: patterns'");
        }
        Category c{trim(body.substr(0, colon)), {}};
        std::istringstream patterns(body.substr(colon + 1));
        std::string p;
        while (std::getline(patterns, p, ',')) {
            auto pattern = lowercase(trim(p));
            if (pattern.empty() || pattern == "*") {
                continue;
            }
            c.patterns.push_back(std::move(pattern));
        }
        categories.push_back(std::move(c));
    }
    return Lexicon(std::move(categories));
}

Lexicon Lexicon::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open lexicon file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

const Lexicon &Lexicon::bundled() {
    static const Lexicon lexicon = parse(bundled_lexicon_text());
    return lexicon;
}

Vector lexicon_features(const TokenSeq &tokens, const Lexicon &lexicon) {
    Vector out(lexicon.size(), 0.0);
    if (tokens.empty()) {
        return out;
    }
    for (std::size_t c = 0; c < lexicon.size(); ++c) {
        double hits = 0;
        for (const auto &t : tokens) {
            hits += lexicon.matches(c, t) ? 1.0 : 0.0;
        }
        out[c] = hits / static_cast<double>(tokens.size());
    }
    return out;
}

}  // namespace pcm
