#include <cmath>
#include <sstream>

#include "pcm/error.hpp"
#include "pcm/features.hpp"

namespace pcm {

FeatureSpec FeatureSpec::parse(std::string_view list) {
    FeatureSpec spec;
    std::istringstream in{std::string(list)};
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "f1") {
            spec.unigram = true;
        } else if (item == "f2") {
            spec.bigram = true;
        } else if (item == "f3") {
            spec.trigram = true;
        } else if (item == "f4") {
            spec.syntactic = true;
        } else if (item == "f5") {
            spec.lexicon = true;
        } else if (!item.empty()) {
            fail(ErrorKind::InvalidArgument, "unknown feature block '" + item + "' (expected f1..f5)");
        }
    }
    if (!spec.any()) {
        fail(ErrorKind::InvalidArgument, "feature spec enables no block");
    }
    return spec;
}

std::string FeatureSpec::to_string() const {
    std::string out;
    const bool flags[] = {unigram, bigram, trigram, syntactic, lexicon};
    for (int i = 0; i < 5; ++i) {
        if (flags[i]) {
            out += (out.empty() ? "f" : ",f") + std::to_string(i + 1);
        }
    }
    return out;
}

nlohmann::json to_json(const FeatureSpec &spec) {
    return {{"blocks", spec.to_string()},
            {"lexicon_sides", spec.lexicon_sides == LexiconSides::Both ? "both" : "comment"}};
}

FeatureSpec feature_spec_from_json(const nlohmann::json &j) {
    auto spec = FeatureSpec::parse(j.at("blocks").get<std::string>());
    spec.lexicon_sides = j.value("lexicon_sides", std::string("both")) == "comment" ? LexiconSides::Comment
                                                                                     : LexiconSides::Both;
    return spec;
}

FeatureVocabs fit_vocabs(std::span<const TextPair> train, const FeatureSpec &spec, const VocabConfig &config) {
    FeatureVocabs vocabs;
    const bool enabled[] = {spec.unigram, spec.bigram, spec.trigram};
    std::vector<TokenSeq> para_texts, comm_texts;
    for (const auto &pair : train) {
        para_texts.push_back(pair.paragraph->tokens);
        comm_texts.push_back(pair.comment->tokens);
    }
    for (int n = 1; n <= 3; ++n) {
        if (!enabled[n - 1]) {
            continue;
        }
        vocabs.paragraph[n - 1] = build_ngram_vocab(para_texts, n, config.min_count, config.max_size);
        vocabs.comment[n - 1] = build_ngram_vocab(comm_texts, n, config.min_count, config.max_size);
    }
    return vocabs;
}

FeatureMatrix assemble_matrix(std::span<const TextPair> pairs, const FeatureSpec &spec, const FeatureVocabs &vocabs,
                              const Lexicon &lexicon) {
    if (!spec.any()) {
        fail(ErrorKind::InvalidArgument, "feature spec enables no block");
    }
    const bool enabled[] = {spec.unigram, spec.bigram, spec.trigram};
    FeatureMatrix out;
    auto &labels = out.col_labels;
    for (int n = 1; n <= 3; ++n) {
        if (!enabled[n - 1]) {
            continue;
        }
        if (!vocabs.paragraph[n - 1] || !vocabs.comment[n - 1]) {
            fail(ErrorKind::InvalidArgument, "no fitted vocabulary for block f" + std::to_string(n));
        }
        for (const auto *side : {&vocabs.paragraph[n - 1], &vocabs.comment[n - 1]}) {
            const char *tag = side == &vocabs.paragraph[n - 1] ? ":p:" : ":c:";
            for (const auto &term : (*side)->terms()) {
                labels.push_back("f" + std::to_string(n) + tag + term);
            }
        }
    }
    if (spec.syntactic) {
        for (const auto &name : syntactic_feature_names()) {
            labels.push_back("f4:" + name);
        }
    }
    if (spec.lexicon) {
        if (spec.lexicon_sides == LexiconSides::Both) {
            for (const auto &c : lexicon.categories()) {
                labels.push_back("f5:p:" + c.name);
            }
        }
        for (const auto &c : lexicon.categories()) {
            labels.push_back("f5:c:" + c.name);
        }
    }

    out.values = Matrix(pairs.size(), labels.size());
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto &para = *pairs[r].paragraph;
        const auto &comm = *pairs[r].comment;
        auto row = out.values.row(r);
        std::size_t offset = 0;
        for (int n = 1; n <= 3; ++n) {
            if (!enabled[n - 1]) {
                continue;
            }
            for (const auto &[vocab, text] : {std::pair{&*vocabs.paragraph[n - 1], &para},
                                              std::pair{&*vocabs.comment[n - 1], &comm}}) {
                for (const auto &[col, count] : ngram_features(text->tokens, *vocab)) {
                    row[offset + col] = count;
                }
                offset += vocab->size();
            }
        }
        if (spec.syntactic) {
            const auto f = syntactic_features(para, comm);
            std::copy(f.begin(), f.end(), row.begin() + static_cast<std::ptrdiff_t>(offset));
            offset += f.size();
        }
        if (spec.lexicon) {
            if (spec.lexicon_sides == LexiconSides::Both) {
                const auto f = lexicon_features(para.tokens, lexicon);
                std::copy(f.begin(), f.end(), row.begin() + static_cast<std::ptrdiff_t>(offset));
                offset += f.size();
            }
            const auto f = lexicon_features(comm.tokens, lexicon);
            std::copy(f.begin(), f.end(), row.begin() + static_cast<std::ptrdiff_t>(offset));
            offset += f.size();
        }
        for (const double v : row) {
            if (!std::isfinite(v)) {
                fail(ErrorKind::Numeric, "non-finite feature value in row " + std::to_string(r));
            }
        }
    }
    return out;
}

}  // namespace pcm
