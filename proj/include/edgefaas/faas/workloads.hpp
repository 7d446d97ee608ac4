#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgefaas/common.hpp"

namespace edgefaas::faas {

struct SentimentResult {
    double polarity = 0.0;     // [-1, 1]
    double subjectivity = 0.0;  // [0, 1]
};

/// Lexicon-based polarity/subjectivity. Tokens are lowercased and split on
/// non-alphanumerics; "not" before a lexicon word flips its sign and the pair
/// counts as a single two-token match.
SentimentResult run_sentiment(const std::string& text);

/// The embedded word -> polarity table.
const std::vector<std::pair<std::string, double>>& sentiment_lexicon();

struct EmptyLabels : std::runtime_error {
    EmptyLabels() : std::runtime_error("label list must be non-empty") {}
};

struct ClassifyResult {
    std::string label;
    std::uint64_t checksum = 0;
};

/// Deterministic stand-in for model inference: 10 000 rounds of a 64-bit
/// multiply-xor-rotate mix from the seed; label = labels[checksum % n].
ClassifyResult run_heavy_classify(std::uint64_t seed, const std::vector<std::string>& labels);

inline constexpr int kClassifyMixRounds = 10'000;

}  // namespace edgefaas::faas
