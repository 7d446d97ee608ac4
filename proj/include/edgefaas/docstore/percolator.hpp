#pragma once

#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "edgefaas/common.hpp"
#include "edgefaas/overlay/latency.hpp"

namespace edgefaas::docstore {

enum class QueryOp { And, Or };

struct StoredQuery {
    std::string id;
    std::vector<std::string> terms;  // tokenizer-normal
    QueryOp op = QueryOp::And;
};

struct Document {
    std::string id;
    std::map<std::string, std::string> fields;
};

struct Match {
    std::string query_id;
    std::optional<double> score;
};

struct DuplicateQueryId : std::runtime_error {
    explicit DuplicateQueryId(const std::string& id)
        : std::runtime_error("query id already registered: " + id) {}
};
struct QueryDoesNotMatch : std::runtime_error {
    QueryDoesNotMatch() : std::runtime_error("score requested for a non-matching query") {}
};

/// Lowercase, split on every non-alphanumeric codepoint, drop empties.
std::vector<std::string> tokenize(const std::string& text);

/// Term frequencies over the concatenation of all document fields.
std::map<std::string, int> document_term_counts(const Document& doc);

/// Mean term frequency of the query's terms in the document.
double score(const StoredQuery& q, const Document& doc);

/// Reverse-query store: documents are matched against registered queries via a
/// term -> query inverted index.
class PercolatorStore {
public:
    void register_query(const StoredQuery& q);
    std::size_t query_count() const;

    /// Matches sorted by score descending then id; scores absent when
    /// scoring == false (identical match set either way).
    std::vector<Match> percolate(const Document& doc, bool scoring) const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, StoredQuery> queries_;
    std::map<std::string, std::set<std::string>> term_to_queries_;
};

/// Seeded synthetic corpus standing in for a real query-log dataset: terms are
/// drawn from a Zipf-distributed vocabulary.
struct SyntheticCorpus {
    std::vector<StoredQuery> queries;
    std::vector<Document> documents;
};
SyntheticCorpus make_synthetic_corpus(std::size_t n_queries, std::size_t n_docs,
                                      std::uint64_t seed);

}  // namespace edgefaas::docstore
