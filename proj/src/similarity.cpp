#include "ued/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "ued/error.hpp"

namespace ued {

double cosine(std::span<const double> u, std::span<const double> v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
        dot += u[c] * v[c];
        nu += u[c] * u[c];
        nv += v[c] * v[c];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double manhattan(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) s += std::abs(u[c] - v[c]);
    return s;
}

namespace {

// Streams the cross product in row tiles; fn(i, j, value) is called for every
// (i, j) in deterministic row-major order.
template <typename F>
void for_each_cross(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, Metric metric,
                    const SimilarityOptions& opt, F&& fn) {
    const int n = src.rows(), m = tgt.rows();
    if (n == 0 || m == 0) return;

    std::vector<double> src_norm, tgt_norm;
    if (metric == Metric::cosine) {
        src_norm.resize(n);
        tgt_norm.resize(m);
        for (int i = 0; i < n; ++i) src_norm[i] = l2_norm(src.row(i));
        for (int j = 0; j < m; ++j) tgt_norm[j] = l2_norm(tgt.row(j));
    }

    const std::size_t rows_per_tile =
        std::max<std::size_t>(1, opt.tile_budget / static_cast<std::size_t>(m));
    for (int i0 = 0; i0 < n; i0 += static_cast<int>(rows_per_tile)) {
        const int i1 = std::min<int>(n, i0 + static_cast<int>(rows_per_tile));
        for (int i = i0; i < i1; ++i) {
            const auto u = src.row(i);
            for (int j = 0; j < m; ++j) {
                const auto v = tgt.row(j);
                double value;
                if (metric == Metric::manhattan) {
                    value = manhattan(u, v);
                } else {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < u.size(); ++c) dot += u[c] * v[c];
                    const double denom = src_norm[i] * tgt_norm[j];
                    value = denom == 0.0 ? 0.0 : dot / denom;
                }
                fn(i, j, value);
            }
        }
    }
}

struct MutualScan {
    std::vector<int> row_count, col_count;
    std::vector<int> row_witness, col_witness;
    std::vector<double> row_sim;

    MutualScan(int n, int m)
        : row_count(n, 0), col_count(m, 0), row_witness(n, -1), col_witness(m, -1), row_sim(n, 0.0) {}

    void feed(int i, int j, double s, double eps) {
        if (s > eps) {
            ++row_count[i];
            row_witness[i] = j;
            row_sim[i] = s;
            ++col_count[j];
            col_witness[j] = i;
        }
    }

    PseudoPairSet finish(double eps) const {
        PseudoPairSet out;
        out.epsilon = eps;
        for (int i = 0; i < static_cast<int>(row_count.size()); ++i) {
            if (row_count[i] != 1) continue;
            const int j = row_witness[i];
            if (col_count[j] == 1 && col_witness[j] == i) {
                out.pairs.push_back({i, j, row_sim[i]});
            }
        }
        return out;  // row-major feed order keeps pairs sorted by (src, tgt)
    }
};

}  // namespace

PseudoPairSet mine_pseudo_pairs(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                                double epsilon, const SimilarityOptions& opt) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw ValidationError("epsilon must be in (0,1)");
    if (!src.empty() && !tgt.empty() && src.dim() != tgt.dim()) {
        throw ValidationError("embedding dimension mismatch between KGs");
    }
    MutualScan scan(src.rows(), tgt.rows());
    for_each_cross(src, tgt, Metric::cosine, opt,
                   [&](int i, int j, double s) { scan.feed(i, j, s, epsilon); });
    return scan.finish(epsilon);
}

PseudoPairSet mine_pseudo_pairs_from_matrix(int n, int m, std::span<const double> sims,
                                            double epsilon) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw ValidationError("epsilon must be in (0,1)");
    if (sims.size() != static_cast<std::size_t>(n) * m) {
        throw ValidationError("similarity matrix size does not match n*m");
    }
    MutualScan scan(n, m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) scan.feed(i, j, sims[static_cast<std::size_t>(i) * m + j], epsilon);
    }
    return scan.finish(epsilon);
}

namespace {

// Bounded best-K list with deterministic boundary ties: an incoming item
// replaces the current worst only if strictly better under (key, index).
struct TopList {
    // keep items with the K smallest (key, idx)
    std::vector<std::pair<double, int>> heap;  // max-heap on (key, idx)
    int cap;

    explicit TopList(int k) : cap(k) { heap.reserve(k); }

    void offer(double key, int idx) {
        if (static_cast<int>(heap.size()) < cap) {
            heap.emplace_back(key, idx);
            std::push_heap(heap.begin(), heap.end());
            return;
        }
        if (std::pair(key, idx) < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = {key, idx};
            std::push_heap(heap.begin(), heap.end());
        }
    }
};

}  // namespace

CandidateSet build_candidate_set(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, int k,
                                 const SimilarityOptions& opt) {
    if (k < 1) throw ValidationError("candidate breadth k must be >= 1");
    const int n = src.rows(), m = tgt.rows();
    const int keep = std::min(k, m);

    CandidateSet out;
    out.k = k;
    out.per_source.assign(n, {});
    std::vector<TopList> lists(n, TopList(keep));
    // Descending similarity with index tie-break maps to ascending (-sim, j).
    for_each_cross(src, tgt, Metric::cosine, opt,
                   [&](int i, int j, double s) { lists[i].offer(-s, j); });
    for (int i = 0; i < n; ++i) {
        auto& items = lists[i].heap;
        std::sort(items.begin(), items.end());
        auto& row = out.per_source[i];
        row.reserve(items.size());
        for (const auto& [neg_sim, j] : items) row.push_back({j, -neg_sim});
    }
    return out;
}

SparsePairs topk_cross_neighbors(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, int K,
                                 Metric metric, const SimilarityOptions& opt) {
    if (K < 1) throw ValidationError("retention K must be >= 1");
    const int n = src.rows(), m = tgt.rows();

    std::vector<TopList> rows(n, TopList(std::min(K, m)));
    std::vector<TopList> cols(m, TopList(std::min(K, n)));
    // Under manhattan "top" is the smallest value; under cosine the largest.
    const double sign = metric == Metric::manhattan ? 1.0 : -1.0;
    for_each_cross(src, tgt, metric, opt, [&](int i, int j, double v) {
        rows[i].offer(sign * v, j);
        cols[j].offer(sign * v, i);
    });

    SparsePairs out;
    out.n = n;
    out.m = m;
    out.entries.reserve(static_cast<std::size_t>(n + m) * std::min(K, std::max(n, m)));
    for (int i = 0; i < n; ++i) {
        for (const auto& [key, j] : rows[i].heap) out.entries.push_back({i, j, sign * key});
    }
    for (int j = 0; j < m; ++j) {
        for (const auto& [key, i] : cols[j].heap) out.entries.push_back({i, j, sign * key});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    out.entries.erase(std::unique(out.entries.begin(), out.entries.end(),
                                  [](const SparseEntry& a, const SparseEntry& b) {
                                      return a.i == b.i && a.j == b.j;
                                  }),
                      out.entries.end());
    return out;
}

}  // namespace ued
