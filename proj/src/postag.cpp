#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "pcm/features.hpp"

namespace pcm {

namespace {

const std::unordered_map<std::string_view, PosTag> &closed_class() {
    static const auto table = [] {
        std::unordered_map<std::string_view, PosTag> t;
        auto add = [&](PosTag tag, std::initializer_list<std::string_view> words) {
            for (auto w : words) {
                t.emplace(w, tag);
            }
        };
        add(PosTag::DET, {"the", "a", "an", "this", "that", "these", "those", "each", "every", "either", "neither",
                          "some", "any", "no", "another", "such", "what", "which", "whose", "all", "both", "half"});
        add(PosTag::PRON, {"i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "yourselves", "he",
                           "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself", "we",
                           "us", "our", "ours", "ourselves", "they", "them", "their", "theirs", "themselves", "who",
                           "whom", "someone", "somebody", "something", "anyone", "anybody", "anything", "everyone",
                           "everybody", "everything", "nobody", "nothing", "one", "i'm", "you're", "he's", "she's",
                           "it's", "we're", "they're", "i've", "we've", "they've", "i'll", "you'll", "we'll",
                           "they'll", "i'd", "you'd", "he'd", "she'd", "we'd", "they'd"});
        add(PosTag::ADP, {"of", "in", "on", "at", "by", "for", "with", "about", "against", "between", "into",
                          "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
                          "over", "under", "around", "among", "across", "behind", "beyond", "despite", "near",
                          "off", "onto", "out", "per", "toward", "towards", "upon", "via", "within", "without",
                          "along", "amid", "beside", "besides", "inside", "outside", "like", "than", "since"});
        add(PosTag::AUX, {"is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having",
                          "do", "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might",
                          "must", "isn't", "aren't", "wasn't", "weren't", "don't", "doesn't", "didn't", "won't",
                          "wouldn't", "can't", "cannot", "couldn't", "shouldn't", "haven't", "hasn't", "hadn't"});
        add(PosTag::CCONJ, {"and", "or", "but", "nor", "yet", "so", "plus"});
        add(PosTag::SCONJ, {"if", "because", "although", "though", "while", "whereas", "unless", "until", "whether",
                            "once", "when", "where", "why", "how"});
        add(PosTag::PART, {"not", "n't", "'s", "never"});
        add(PosTag::INTJ, {"oh", "wow", "hey", "hello", "hi", "yes", "yeah", "ok", "okay", "alas", "ah", "uh", "um",
                           "hmm", "lol", "please", "thanks", "oops", "ugh"});
        add(PosTag::ADV, {"very", "too", "also", "just", "only", "even", "still", "already", "now", "then", "here",
                          "there", "again", "always", "often", "sometimes", "soon", "quite", "rather", "almost",
                          "perhaps", "maybe", "indeed", "however", "therefore", "thus", "instead", "ever", "yet",
                          "much", "more", "most", "less", "least", "well", "far", "away", "back", "together"});
        add(PosTag::NUM, {"zero", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                          "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
                          "million", "billion", "trillion", "dozen"});
        add(PosTag::ADJ, {"good", "bad", "new", "old", "big", "small", "great", "little", "high", "low", "long",
                          "short", "large", "young", "other", "same", "different", "right", "wrong", "true",
                          "false", "real", "best", "worst", "better", "worse", "many", "few", "own", "sure", "last",
                          "first", "next", "early", "late", "hard", "easy", "clear", "full", "free", "whole"});
        add(PosTag::VERB, {"say", "said", "says", "go", "went", "gone", "get", "got", "make", "made", "know", "knew",
                           "think", "thought", "take", "took", "see", "saw", "seen", "come", "came", "want", "look",
                           "use", "find", "found", "give", "gave", "tell", "told", "work", "call", "try", "ask",
                           "need", "feel", "felt", "become", "became", "leave", "left", "put", "mean", "meant",
                           "keep", "kept", "let", "begin", "began", "seem", "help", "show", "hear", "heard", "play",
                           "run", "ran", "move", "live", "believe", "bring", "brought", "happen", "write", "wrote",
                           "sit", "stand", "lose", "lost", "pay", "paid", "meet", "met", "agree", "read"});
        // -ing and -ed words that are not verbs
        add(PosTag::NOUN, {"thing", "king", "ring", "spring", "string", "wing", "morning", "evening", "ceiling",
                           "building", "meeting", "feeling", "bed", "shed", "red", "need", "seed", "speed", "weed",
                           "hundred", "sled", "ting"});
        add(PosTag::ADP, {"during", "including", "regarding", "concerning", "following"});
        return t;
    }();
    return table;
}

struct SuffixRule {
    std::string_view suffix;
    std::size_t min_length;
    PosTag tag;
};

// Checked in order; the first matching rule wins.
constexpr SuffixRule kSuffixRules[] = {
    {"ing", 5, PosTag::VERB},  {"ed", 4, PosTag::VERB},    {"ly", 4, PosTag::ADV},    {"ize", 5, PosTag::VERB},
    {"ise", 6, PosTag::VERB},  {"ify", 5, PosTag::VERB},   {"ate", 6, PosTag::VERB},  {"tion", 5, PosTag::NOUN},
    {"sion", 5, PosTag::NOUN}, {"ment", 6, PosTag::NOUN},  {"ness", 6, PosTag::NOUN}, {"ity", 5, PosTag::NOUN},
    {"ship", 6, PosTag::NOUN}, {"ism", 5, PosTag::NOUN},   {"ist", 5, PosTag::NOUN},  {"er", 4, PosTag::NOUN},
    {"ous", 5, PosTag::ADJ},   {"ful", 5, PosTag::ADJ},    {"ive", 5, PosTag::ADJ},   {"able", 6, PosTag::ADJ},
    {"ible", 6, PosTag::ADJ},  {"less", 6, PosTag::ADJ},   {"ish", 5, PosTag::ADJ},   {"ic", 4, PosTag::ADJ},
    {"al", 5, PosTag::ADJ},    {"est", 6, PosTag::ADJ},
};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

PosTag tag_one(const std::string &token) {
    const auto &table = closed_class();
    if (const auto it = table.find(token); it != table.end()) {
        return it->second;
    }
    const bool has_digit = std::any_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); });
    const bool all_numeric = std::all_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isdigit(c) || c == '-' || c == '\'';
    });
    if (has_digit && all_numeric) {
        return PosTag::NUM;
    }
    const bool has_alnum = std::any_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isalnum(c) || c >= 0x80;
    });
    if (!has_alnum) {
        return PosTag::SYM;
    }
    for (const auto &rule : kSuffixRules) {
        if (token.size() >= rule.min_length && ends_with(token, rule.suffix)) {
            return rule.tag;
        }
    }
    return PosTag::NOUN;
}

}  // namespace

std::string_view tag_name(PosTag tag) {
    static constexpr std::string_view names[] = {"ADJ",  "ADP",  "ADV",  "AUX",   "CCONJ", "DET",
                                                 "INTJ", "NOUN", "NUM",  "PART",  "PRON",  "PROPN",
                                                 "PUNCT", "SCONJ", "SYM", "VERB", "X"};
    return names[static_cast<std::size_t>(tag)];
}

std::vector<PosTag> pos_tag(const TokenSeq &tokens) {
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (const auto &t : tokens) {
        tags.push_back(tag_one(t));
    }
    return tags;
}

namespace {

struct SideStats {
    std::array<double, kPosTagCount> tag_freq{};
    double tokens = 0;
    double sentences = 0;
    double mean_word_length = 0;
    double type_token_ratio = 0;
};

std::size_t code_points(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

SideStats side_stats(const PreparedText &text) {
    SideStats s;
    const auto &tokens = text.tokens;
    s.tokens = static_cast<double>(tokens.size());
    s.sentences = static_cast<double>(text.sentences);
    if (tokens.empty()) {
        return s;
    }
    for (const auto tag : pos_tag(tokens)) {
        s.tag_freq[static_cast<std::size_t>(tag)] += 1.0;
    }
    for (auto &f : s.tag_freq) {
        f /= s.tokens;
    }
    double chars = 0;
    for (const auto &t : tokens) {
        chars += static_cast<double>(code_points(t));
    }
    s.mean_word_length = chars / s.tokens;
    const std::unordered_set<std::string> types(tokens.begin(), tokens.end());
    s.type_token_ratio = static_cast<double>(types.size()) / s.tokens;
    return s;
}

}  // namespace

std::array<double, kSyntacticWidth> syntactic_features(const PreparedText &para, const PreparedText &comm) {
    const auto p = side_stats(para);
    const auto c = side_stats(comm);
    std::array<double, kSyntacticWidth> out{};
    std::copy(p.tag_freq.begin(), p.tag_freq.end(), out.begin());
    std::copy(c.tag_freq.begin(), c.tag_freq.end(), out.begin() + kPosTagCount);
    std::size_t i = 2 * kPosTagCount;
    out[i++] = p.tokens;
    out[i++] = c.tokens;
    out[i++] = p.sentences;
    out[i++] = c.sentences;
    out[i++] = p.mean_word_length;
    out[i++] = c.mean_word_length;
    out[i++] = p.type_token_ratio;
    out[i++] = c.type_token_ratio;
    const std::unordered_set<std::string> para_types(para.tokens.begin(), para.tokens.end());
    const std::unordered_set<std::string> comm_types(comm.tokens.begin(), comm.tokens.end());
    double shared = 0;
    for (const auto &t : comm_types) {
        shared += para_types.contains(t) ? 1.0 : 0.0;
    }
    out[i++] = shared;
    out[i++] = static_cast<double>(std::count(comm.raw.begin(), comm.raw.end(), '?'));
    out[i++] = static_cast<double>(std::count(comm.raw.begin(), comm.raw.end(), '!'));
    return out;
}

const std::array<std::string, kSyntacticWidth> &syntactic_feature_names() {
    static const auto names = [] {
        std::array<std::string, kSyntacticWidth> n;
        for (std::size_t t = 0; t < kPosTagCount; ++t) {
            n[t] = "pos_p:" + std::string(tag_name(static_cast<PosTag>(t)));
            n[kPosTagCount + t] = "pos_c:" + std::string(tag_name(static_cast<PosTag>(t)));
        }
        std::size_t i = 2 * kPosTagCount;
        for (const char *name : {"tokens_p", "tokens_c", "sentences_p", "sentences_c", "word_len_p", "word_len_c",
                                 "ttr_p", "ttr_c", "shared_types", "question_marks_c", "exclamations_c"}) {
            n[i++] = name;
        }
        return n;
    }();
    return names;
}

}  // namespace pcm
