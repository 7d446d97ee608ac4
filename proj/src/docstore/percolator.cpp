#include "edgefaas/docstore/percolator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>

namespace edgefaas::docstore {

std::vector<std::string> tokenize(const std::string& text) {
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

std::map<std::string, int> document_term_counts(const Document& doc) {
    std::map<std::string, int> counts;
    for (const auto& [field, text] : doc.fields)
        for (const auto& token : tokenize(text)) counts[token] += 1;
    return counts;
}

namespace {

bool matches(const StoredQuery& q, const std::map<std::string, int>& counts) {
    if (q.terms.empty()) return false;
    if (q.op == QueryOp::And) {
        return std::all_of(q.terms.begin(), q.terms.end(),
                           [&](const std::string& t) { return counts.contains(t); });
    }
    return std::any_of(q.terms.begin(), q.terms.end(),
                       [&](const std::string& t) { return counts.contains(t); });
}

double score_from_counts(const StoredQuery& q, const std::map<std::string, int>& counts) {
    double tf_sum = 0.0;
    for (const auto& t : q.terms) {
        auto it = counts.find(t);
        if (it != counts.end()) tf_sum += it->second;
    }
    return tf_sum / double(q.terms.size());
}

}  // namespace

double score(const StoredQuery& q, const Document& doc) {
    auto counts = document_term_counts(doc);
    if (!matches(q, counts)) throw QueryDoesNotMatch();
    return score_from_counts(q, counts);
}

void PercolatorStore::register_query(const StoredQuery& q) {
    if (q.terms.empty()) throw std::invalid_argument("query needs at least one term");
    for (const auto& t : q.terms)
        if (tokenize(t) != std::vector<std::string>{t})
            throw std::invalid_argument("query term not tokenizer-normal: " + t);
    std::unique_lock lock(mutex_);
    if (queries_.contains(q.id)) throw DuplicateQueryId(q.id);
    queries_[q.id] = q;
    for (const auto& t : q.terms) term_to_queries_[t].insert(q.id);
}

std::size_t PercolatorStore::query_count() const {
    std::shared_lock lock(mutex_);
    return queries_.size();
}

std::vector<Match> PercolatorStore::percolate(const Document& doc, bool scoring) const {
    std::shared_lock lock(mutex_);
    auto counts = document_term_counts(doc);

    // Candidate queries via the inverted index, then verify AND semantics.
    std::set<std::string> candidates;
    for (const auto& [term, count] : counts) {
        auto it = term_to_queries_.find(term);
        if (it == term_to_queries_.end()) continue;
        candidates.insert(it->second.begin(), it->second.end());
    }

    std::vector<Match> result;
    for (const auto& id : candidates) {
        const StoredQuery& q = queries_.at(id);
        if (!matches(q, counts)) continue;
        Match m;
        m.query_id = id;
        if (scoring) m.score = score_from_counts(q, counts);
        result.push_back(std::move(m));
    }
    std::stable_sort(result.begin(), result.end(), [](const Match& a, const Match& b) {
        double sa = a.score.value_or(0.0), sb = b.score.value_or(0.0);
        if (sa != sb) return sa > sb;
        return a.query_id < b.query_id;
    });
    return result;
}

SyntheticCorpus make_synthetic_corpus(std::size_t n_queries, std::size_t n_docs,
                                      std::uint64_t seed) {
    overlay::Rng rng(seed);
    // Vocabulary "w0".."w499" with Zipf(1.1) weights.
    constexpr std::size_t kVocab = 500;
    std::vector<double> cumulative(kVocab);
    double total = 0.0;
    for (std::size_t i = 0; i < kVocab; ++i) {
        total += 1.0 / std::pow(double(i + 1), 1.1);
        cumulative[i] = total;
    }
    auto draw_term = [&] {
        double u = rng.next_double() * total;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        return "w" + std::to_string(it - cumulative.begin());
    };

    SyntheticCorpus corpus;
    for (std::size_t i = 0; i < n_queries; ++i) {
        StoredQuery q;
        q.id = "q" + std::to_string(i);
        q.op = rng.next_below(2) == 0 ? QueryOp::And : QueryOp::Or;
        std::size_t n_terms = 1 + rng.next_below(3);
        std::set<std::string> terms;
        while (terms.size() < n_terms) terms.insert(draw_term());
        q.terms.assign(terms.begin(), terms.end());
        corpus.queries.push_back(std::move(q));
    }
    for (std::size_t i = 0; i < n_docs; ++i) {
        Document d;
        d.id = "d" + std::to_string(i);
        std::string body;
        std::size_t n_terms = 5 + rng.next_below(20);
        for (std::size_t t = 0; t < n_terms; ++t) {
            if (t) body.push_back(' ');
            body += draw_term();
        }
        d.fields["body"] = std::move(body);
        corpus.documents.push_back(std::move(d));
    }
    return corpus;
}

}  // namespace edgefaas::docstore
