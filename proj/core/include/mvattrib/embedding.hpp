#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvattrib/session.hpp"
#include "mvattrib/shopworld.hpp"

namespace mvattrib {

struct EmbedTrainConfig {
    int dim = 48;
    int window = 5;    // context half-width in tokens
    int negatives = 5; // negative samples per positive
    int epochs = 25;
    double learning_rate = 0.025; // decays linearly to lr_floor
    double lr_floor = 0.0001;
    int min_count = 5;
    uint64_t seed = 1;
};

struct QueryEmbedConfig {
    int top_n = 20; // engine results averaged into the query vector
};

// The shared vector space: one dense vector per token. Product-interaction
// vectors are trained; query vectors are derived deep-set means and carry a
// zero corpus count.
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;
    EmbeddingSpace(int dim, int min_count) : dim_(dim), min_count_(min_count) {}

    int dim() const { return dim_; }
    size_t size() const { return tokens_.size(); }
    int min_count() const { return min_count_; }

    bool contains(const Token& token) const { return index_.count(token) > 0; }
    int index_of(const Token& token) const; // -1 when absent
    const Token& token_at(size_t i) const { return tokens_[i]; }
    long long count_at(size_t i) const { return counts_[i]; }

    std::span<const double> vector(const Token& token) const; // throws when absent
    std::span<const double> vector_at(size_t i) const;
    std::span<double> mutable_vector_at(size_t i);

    // Appends a token with the given vector; count 0 marks derived vectors.
    size_t add_token(const Token& token, std::span<const double> vec, long long count);

    const std::vector<Token>& tokens() const { return tokens_; }

private:
    int dim_ = 0;
    int min_count_ = 0;
    std::vector<Token> tokens_;
    std::vector<long long> counts_;
    std::vector<double> data_; // row-major, size() * dim_
    std::unordered_map<Token, size_t, TokenHash> index_;
};

struct EmbedTrainResult {
    EmbeddingSpace space;
    std::vector<double> epoch_losses; // mean negative-sampling loss per epoch
};

// CBOW with negative sampling over tokenized sessions: the window mean of
// context vectors predicts the center token, negatives drawn from the unigram
// distribution raised to 3/4. Single-threaded and bit-deterministic for a
// fixed seed. Throws if min_count filtering empties the vocabulary.
EmbedTrainResult train_prod2vec(const std::vector<std::vector<Token>>& sequences,
                                const EmbedTrainConfig& config);

// Deep-set query embedding: arithmetic mean of the Detail vectors of the
// result list. Out-of-vocabulary results are skipped; throws when none remain.
std::vector<double> embed_query(const std::vector<ProductId>& results, const EmbeddingSpace& space,
                                const QueryEmbedConfig& config);
std::vector<double> embed_query(const std::string& query_id, const MockSearchEngine& engine,
                                const EmbeddingSpace& space, const QueryEmbedConfig& config);

// 1 - cos(u, v), in [0, 2]. Throws on dimension mismatch or zero vectors.
double cosine_distance(std::span<const double> u, std::span<const double> v);

// k nearest tokens by cosine distance, ascending, probe excluded. Ties break
// by vocabulary index.
std::vector<std::pair<Token, double>> nearest_neighbors(const EmbeddingSpace& space,
                                                        const Token& token, size_t k);

// Embedding file: "dim vocab_size" header line, then one "<token> <v0> ..."
// line per token. ASCII floats are written with round-trip precision.
void write_embeddings(const std::string& path, const EmbeddingSpace& space);
EmbeddingSpace read_embeddings(const std::string& path);

} // namespace mvattrib
