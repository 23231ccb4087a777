#pragma once
// Cosine machinery: pseudo-pair mining by the mutual-threshold rule,
// guidance candidate lists, and cross-KG top-K retention. All cross
// products are computed tile by tile so the full n x m matrix is never
// materialized beyond a configurable budget.

#include <functional>
#include <span>
#include <vector>

#include "ued/embedding.hpp"

namespace ued {

struct PseudoPair {
    int src = 0;
    int tgt = 0;
    double sim = 0.0;
    auto operator<=>(const PseudoPair&) const = default;
};

struct PseudoPairSet {
    std::vector<PseudoPair> pairs;  // sorted by (src, tgt); one-to-one
    double epsilon = 0.0;
};

struct Candidate {
    int tgt = 0;
    double sim = 0.0;
};

struct CandidateSet {
    // per_source[i] holds up to k targets, sorted by descending sim
    // (ties toward the smaller target index).
    std::vector<std::vector<Candidate>> per_source;
    int k = 0;
};

enum class Metric { manhattan, cosine };

struct SparseEntry {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

struct SparsePairs {
    int n = 0;
    int m = 0;
    std::vector<SparseEntry> entries;  // sorted by (i, j), unique
};

struct SimilarityOptions {
    // Maximum number of cross products held in one tile.
    std::size_t tile_budget = std::size_t(1) << 22;
};

// Cosine similarity; either vector all-zero yields 0.
double cosine(std::span<const double> u, std::span<const double> v);

double manhattan(std::span<const double> u, std::span<const double> v);

// Mutual-uniqueness mining: (i,j) kept iff s_ij > eps and j is i's only
// above-eps partner and i is j's only above-eps partner.
PseudoPairSet mine_pseudo_pairs(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                                double epsilon, const SimilarityOptions& opt = {});

// Same rule applied to an explicit row-major n x m similarity matrix.
PseudoPairSet mine_pseudo_pairs_from_matrix(int n, int m, std::span<const double> sims,
                                            double epsilon);

// Per-source top-k targets by cosine, carrying the similarity as weight.
CandidateSet build_candidate_set(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, int k,
                                 const SimilarityOptions& opt = {});

// Union of row-direction and column-direction top-K under the given metric
// ("top" means smallest distance for manhattan, largest similarity for
// cosine). Every entity on both sides retains at least min(K, other side)
// candidates.
SparsePairs topk_cross_neighbors(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, int K,
                                 Metric metric, const SimilarityOptions& opt = {});

}  // namespace ued
