#include <algorithm>
#include <map>

#include "pcm/error.hpp"
#include "pcm/features.hpp"

namespace pcm {

NGramVocab::NGramVocab(int n, std::vector<std::string> terms, std::size_t min_count, std::size_t max_size)
    : n_(n), terms_(std::move(terms)), min_count_(min_count), max_size_(max_size) {
    if (n < 1 || n > 3) {
        fail(ErrorKind::InvalidArgument, "n-gram order must be 1, 2 or 3, got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!index_.emplace(terms_[i], i).second) {
            fail(ErrorKind::Duplicate, "duplicate n-gram '" + terms_[i] + "' in vocabulary");
        }
    }
}

std::optional<std::size_t> NGramVocab::index_of(const std::string &term) const {
    const auto it = index_.find(term);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> ngrams(const TokenSeq &tokens, int n) {
    std::vector<std::string> out;
    const auto width = static_cast<std::size_t>(n);
    if (n < 1 || tokens.size() < width) {
        return out;
    }
    out.reserve(tokens.size() - width + 1);
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (std::size_t k = 1; k < width; ++k) {
            g += ' ';
            g += tokens[i + k];
        }
        out.push_back(std::move(g));
    }
    return out;
}

NGramVocab build_ngram_vocab(std::span<const TokenSeq> texts, int n, std::size_t min_count, std::size_t max_size) {
    if (n < 1 || n > 3) {
        fail(ErrorKind::InvalidArgument, "n-gram order must be 1, 2 or 3, got " + std::to_string(n));
    }
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto &t : texts) {
        for (auto &g : ngrams(t, n)) {
            ++counts[std::move(g)];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto &[g, c] : counts) {
        if (c >= min_count) {
            kept.emplace_back(g, c);
        }
    }
    std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (max_size > 0 && kept.size() > max_size) {
        kept.resize(max_size);
    }
    std::vector<std::string> terms;
    terms.reserve(kept.size());
    for (auto &[g, c] : kept) {
        terms.push_back(std::move(g));
    }
    return NGramVocab(n, std::move(terms), min_count, max_size);
}

SparseVector ngram_features(const TokenSeq &tokens, const NGramVocab &vocab) {
    std::map<std::size_t, double> counts;
    for (const auto &g : ngrams(tokens, vocab.n())) {
        if (const auto idx = vocab.index_of(g)) {
            counts[*idx] += 1.0;
        }
    }
    return {counts.begin(), counts.end()};
}

}  // namespace pcm
