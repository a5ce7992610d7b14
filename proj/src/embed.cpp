#include "pcm/embed.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pcm/error.hpp"

namespace pcm {

namespace {

struct CodePoint {
    char32_t value;
    std::size_t length;
};

// Malformed sequences decode as U+FFFD over one byte.
CodePoint decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        return {b0, 1};
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (i + len > s.size()) {
        return {0xFFFD, 1};
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            return {0xFFFD, 1};
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len};
}

void encode(char32_t cp, std::string &out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || cp == '_';
    }
    if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7 || cp == 0xFFFD) {
        return false;  // Latin-1 punctuation and symbols
    }
    if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
        (cp >= 0xFF00 && cp <= 0xFF0F)) {
        return false;  // general punctuation, symbols, CJK punctuation
    }
    return true;
}

bool is_joiner(char32_t cp) { return cp == '\'' || cp == 0x2019 || cp == '-'; }

char32_t lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 32;
    }
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
        return cp + 32;
    }
    return cp;
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
    std::vector<CodePoint> cps;
    for (std::size_t i = 0; i < text.size();) {
        const auto cp = decode(text, i);
        cps.push_back(cp);
        i += cp.length;
    }
    TokenSeq tokens;
    std::string current;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i].value;
        if (is_word_char(cp)) {
            encode(lower(cp), current);
        } else if (is_joiner(cp) && !current.empty() && i + 1 < cps.size() && is_word_char(cps[i + 1].value)) {
            current.push_back(cp == '-' ? '-' : '\'');
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::size_t sentence_count(std::string_view text) {
    std::size_t count = 0;
    bool has_word = false;
    for (std::size_t i = 0; i < text.size();) {
        const auto cp = decode(text, i);
        i += cp.length;
        if (is_word_char(cp.value)) {
            has_word = true;
            continue;
        }
        const bool terminator = cp.value == '.' || cp.value == '!' || cp.value == '?';
        if (!terminator) {
            continue;
        }
        // extend over the rest of a terminator run such as "?!" or "..."
        while (i < text.size() && (text[i] == '.' || text[i] == '!' || text[i] == '?')) {
            ++i;
        }
        const bool boundary = i >= text.size() || std::isspace(static_cast<unsigned char>(text[i])) != 0;
        if (boundary && has_word) {
            ++count;
            has_word = false;
        }
    }
    return count + (has_word ? 1 : 0);
}

bool EmbeddingTable::insert(const std::string &word, std::span<const double> vec) {
    if (vec.size() != dim_) {
        fail(ErrorKind::Dimension, "embedding for '" + word + "' has " + std::to_string(vec.size()) +
                                       " components, expected " + std::to_string(dim_));
    }
    if (!index_.emplace(word, words_.size()).second) {
        return false;
    }
    words_.push_back(word);
    values_.insert(values_.end(), vec.begin(), vec.end());
    return true;
}

const double *EmbeddingTable::find(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    return it == index_.end() ? nullptr : values_.data() + it->second * dim_;
}

EmbeddingTable parse_embeddings(std::istream &in, std::size_t expected_dim) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorKind::Parse, "embedding file: missing 'N D' header");
    }
    std::istringstream header(line);
    std::size_t n = 0, dim = 0;
    if (!(header >> n >> dim) || dim == 0) {
        fail(ErrorKind::Parse, "embedding file: malformed header '" + line + "'");
    }
    if (expected_dim != 0 && dim != expected_dim) {
        fail(ErrorKind::Dimension, "embedding file declares dimension " + std::to_string(dim) + ", expected " +
                                       std::to_string(expected_dim));
    }
    EmbeddingTable table(dim);
    std::unordered_map<std::string, bool> exact;
    std::vector<double> vec;
    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto space = line.find(' ');
        const std::string word = line.substr(0, space);
        vec.clear();
        std::size_t pos = space == std::string::npos ? line.size() : space + 1;
        while (pos < line.size()) {
            auto next = line.find(' ', pos);
            if (next == std::string::npos) {
                next = line.size();
            }
            double v = 0.0;
            const auto *first = line.data() + pos;
            const auto *last = line.data() + next;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last) {
                fail(ErrorKind::Parse, "embedding file line " + std::to_string(line_no) + ": non-numeric component '" +
                                           std::string(first, last) + "' for word '" + word + "'");
            }
            vec.push_back(v);
            pos = next + 1;
        }
        if (vec.size() != dim) {
            fail(ErrorKind::Dimension, "embedding file line " + std::to_string(line_no) + ": word '" + word + "' has " +
                                           std::to_string(vec.size()) + " components, expected " + std::to_string(dim));
        }
        if (!exact.emplace(word, true).second) {
            fail(ErrorKind::Duplicate, "embedding file line " + std::to_string(line_no) + ": duplicate word '" + word + "'");
        }
        ++rows;
        const auto folded = tokenize(word);
        // case variants collapse onto the first lowercase spelling seen
        const std::string key = folded.size() == 1 ? folded.front() : word;
        table.insert(key, vec);
    }
    if (rows != n) {
        fail(ErrorKind::Parse, "embedding file header promises " + std::to_string(n) + " rows, found " +
                                   std::to_string(rows));
    }
    return table;
}

EmbeddingTable load_embeddings(const std::string &path, std::size_t expected_dim) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open embedding file '" + path + "'");
    }
    return parse_embeddings(in, expected_dim);
}

Vector embed_average(const TokenSeq &tokens, const EmbeddingTable &table, AverageOptions options) {
    Vector mean(table.dim(), 0.0);
    std::size_t used = 0;
    for (const auto &t : tokens) {
        const double *v = table.find(t);
        if (v == nullptr) {
            used += options.skip_oov ? 0 : 1;
            continue;
        }
        ++used;
        for (std::size_t d = 0; d < mean.size(); ++d) {
            mean[d] += v[d];
        }
    }
    if (used > 0) {
        for (auto &x : mean) {
            x /= static_cast<double>(used);
        }
    }
    return mean;
}

std::vector<Vector> embed_sequence(const TokenSeq &tokens, const EmbeddingTable &table) {
    std::vector<Vector> out;
    out.reserve(tokens.size());
    for (const auto &t : tokens) {
        const double *v = table.find(t);
        out.emplace_back(table.dim(), 0.0);
        if (v != nullptr) {
            std::copy(v, v + table.dim(), out.back().begin());
        }
    }
    return out;
}

PreparedText PreparedText::from(std::string text) {
    PreparedText p;
    p.tokens = tokenize(text);
    p.sentences = sentence_count(text);
    p.raw = std::move(text);
    return p;
}

}  // namespace pcm
