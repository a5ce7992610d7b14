#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcm/corpus.hpp"
#include "pcm/embed.hpp"

// Seeded fixture data: a 50-word, 8-dimensional embedding table over five
// topics and a corpus whose relevance labels are fixed by vocabulary overlap.
namespace pcm::synth {

inline constexpr std::size_t kTopics = 5;
inline constexpr std::size_t kWordsPerTopic = 10;
inline constexpr std::size_t kDim = 8;

const std::vector<std::string> &topic_names();
const std::vector<std::string> &topic_words(std::size_t topic);

// Topic t words are e_t in the first five dimensions plus small seeded noise
// in the last three.
EmbeddingTable embeddings(std::uint64_t seed);
void write_embeddings(std::ostream &out, const EmbeddingTable &table);

// Band of the fraction shared/total: [0, .2) -> 1, [.2, .4) -> 2, ..., [.8, 1] -> 5.
int overlap_band(std::size_t shared, std::size_t total);

// Number of comment tokens (out of total) found in the paragraph's token set.
std::size_t overlap(const TokenSeq &paragraph, const TokenSeq &comment);

struct Config {
    std::size_t articles = 100;
    std::size_t paragraphs = 5;  // per article, at most kTopics
    std::size_t comments = 5;    // per article, one gold pair each
    std::size_t paragraph_min_tokens = 12;
    std::size_t paragraph_max_tokens = 20;
    std::size_t comment_min_tokens = 8;
    std::size_t comment_max_tokens = 12;
    std::uint64_t seed = 7;
};

// Each comment targets one paragraph and draws a band-centred share of its
// tokens from that paragraph, the rest from topics the paragraph does not
// use. Both annotators record overlap_band of the realised overlap.
Corpus corpus(const Config &config);

}  // namespace pcm::synth
