#include "edgefaas/faas/workloads.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>

namespace edgefaas::faas {

const std::vector<std::pair<std::string, double>>& sentiment_lexicon() {
    static const std::vector<std::pair<std::string, double>> table = {
        {"good", 0.7},     {"great", 0.8},    {"happy", 0.8},    {"bad", -0.7},
        {"terrible", -1.0}, {"sad", -0.5},    {"excellent", 0.9}, {"awesome", 0.9},
        {"nice", 0.6},     {"love", 0.9},     {"amazing", 0.9},  {"best", 1.0},
        {"fast", 0.4},     {"poor", -0.6},    {"awful", -0.9},   {"horrible", -0.9},
        {"hate", -0.8},    {"slow", -0.4},    {"worst", -1.0},   {"broken", -0.6},
    };
    return table;
}

namespace {

std::vector<std::string> word_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(char(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace

SentimentResult run_sentiment(const std::string& text) {
    static const std::map<std::string, double> lexicon(sentiment_lexicon().begin(),
                                                       sentiment_lexicon().end());
    std::vector<std::string> tokens = word_tokens(text);
    if (tokens.empty()) return {};

    double score_sum = 0.0;
    std::size_t matches = 0;
    std::size_t covered_tokens = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto entry = lexicon.find(tokens[i]);
        if (entry == lexicon.end()) continue;
        double score = entry->second;
        std::size_t span = 1;
        if (i > 0 && tokens[i - 1] == "not") {
            score = -score;
            span = 2;
        }
        score_sum += score;
        matches += 1;
        covered_tokens += span;
        }
    SentimentResult r;
    if (matches > 0) r.polarity = std::clamp(score_sum / double(matches), -1.0, 1.0);
    r.subjectivity = std::min(1.0, double(covered_tokens) / double(tokens.size()));
    return r;
}

ClassifyResult run_heavy_classify(std::uint64_t seed, const std::vector<std::string>& labels) {
    if (labels.empty()) throw EmptyLabels();
    std::uint64_t h = seed + 0x6A09E667F3BCC909ULL;
    for (int i = 0; i < kClassifyMixRounds; ++i) {
        h ^= h >> 33;
        h *= 0x9E3779B97F4A7C15ULL;
        h = std::rotl(h, 29);
        h ^= h >> 31;
        h *= 0xBF58476D1CE4E5B9ULL;
    }
    return ClassifyResult{labels[h % labels.size()], h};
}

}  // namespace edgefaas::faas
