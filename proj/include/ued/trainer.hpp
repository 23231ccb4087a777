#pragma once
// Embedding refinement. Free per-entity parameter vectors are optimized by
// plain subgradient descent on a hinge align loss over mined pairs plus a
// weighted, linearly decayed guidance loss over each entity's initially
// most similar targets. The forward view is a one-hop mixing aggregator;
// richer graph models can be slotted in behind the same signature.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ued/embedding.hpp"
#include "ued/kg.hpp"
#include "ued/rng.hpp"
#include "ued/similarity.hpp"

namespace ued {

struct TrainConfig {
    double lambda_margin = 1.0;
    double w0 = 0.3;
    double decay_end_fraction = 0.25;
    int total_steps = 400;
    double learning_rate = 0.05;
    int neg_per_pair = 5;
    double gamma_mix = 0.3;
    int k_guidance = 3;
    int batch_size = 512;
    std::uint64_t seed = 0;
    bool decay_enabled = true;     // false holds w(t) = w0 for every step
    bool graph_negatives = false;  // sample negatives from graph adjacency
    int negative_pool = 10;        // same-KG nearest-neighbor pool size
    std::vector<std::pair<int, int>> supervised_pairs;  // unioned into the align positives

    void validate() const;
};

struct LossTracePoint {
    int step = 0;
    double loss_a = 0.0;  // batch-mean align loss
    double loss_g = 0.0;  // batch-mean guided loss
    double w = 0.0;
};

struct TrainResult {
    EmbeddingMatrix params_src;   // trained free parameters
    EmbeddingMatrix params_tgt;
    EmbeddingMatrix refined_src;  // aggregator forward view, used downstream
    EmbeddingMatrix refined_tgt;
    std::vector<LossTracePoint> trace;
    bool skipped_no_pairs = false;
};

// X_i = (1-gamma)*p_i + gamma * mean of p over graph neighbors of i;
// entities with no neighbors keep X_i = p_i.
EmbeddingMatrix aggregate(const EmbeddingMatrix& params, const KnowledgeGraph& kg, double gamma_mix);

// w(t) = w0 * max(0, 1 - t / (decay_end_fraction * total_steps)).
double weight_schedule(int t, double w0, double decay_end_fraction, int total_steps);

// A positive pair with its fixed negative pairs; weight scales the whole
// inner hinge sum (1 for align terms, clamped similarity for guided terms).
struct HingeTerm {
    int pos_src = 0;
    int pos_tgt = 0;
    double weight = 1.0;
    std::vector<std::pair<int, int>> negatives;
};

double hinge_loss(const EmbeddingMatrix& xs, const EmbeddingMatrix& xt,
                  std::span<const HingeTerm> terms, double lambda);

// Adds scale * d(loss)/dX into grad_s / grad_t and returns the (unscaled)
// loss. Subgradient 0 is used for inactive hinges and zero coordinate gaps.
double hinge_loss_grad(const EmbeddingMatrix& xs, const EmbeddingMatrix& xt,
                       std::span<const HingeTerm> terms, double lambda, double scale,
                       EmbeddingMatrix& grad_s, EmbeddingMatrix& grad_t);

// Pulls a gradient w.r.t. the aggregator output back onto the parameters.
void aggregate_adjoint(const EmbeddingMatrix& grad_x, const KnowledgeGraph& kg, double gamma_mix,
                       EmbeddingMatrix& grad_params);

// Negative pairs replace exactly one side of a positive with a neighbor of
// the replaced entity: nearest same-KG entities in embedding space by
// default, graph adjacency when graph_mode is set (falling back to the
// embedding pool for isolated entities).
class NegativeSampler {
public:
    NegativeSampler(const KnowledgeGraph& src_kg, const KnowledgeGraph& tgt_kg,
                    const EmbeddingMatrix& src_emb, const EmbeddingMatrix& tgt_emb,
                    bool graph_mode, int pool_size, const SimilarityOptions& opt = {});

    std::vector<std::pair<int, int>> sample(std::pair<int, int> positive, int count, Rng& rng) const;

    const std::vector<int>& src_pool(int i) const { return src_pools_[i]; }
    const std::vector<int>& tgt_pool(int j) const { return tgt_pools_[j]; }

private:
    std::vector<std::vector<int>> src_pools_;
    std::vector<std::vector<int>> tgt_pools_;
};

TrainResult train(const EmbeddingMatrix& init_src, const EmbeddingMatrix& init_tgt,
                  const KnowledgeGraph& src_kg, const KnowledgeGraph& tgt_kg,
                  const PseudoPairSet& pseudo_pairs, const CandidateSet& guidance,
                  const TrainConfig& cfg, std::string* warning = nullptr);

// --- gradient verification ----------------------------------------------

enum class LossKind { align, guided, combined };

struct GradCheckConfig {
    double fd_step = 1e-5;
    double kink_delta = 1e-3;  // required margin from hinge and coordinate kinks
    int max_retries = 20;
    double combined_weight = 0.3;
    std::uint64_t seed = 0;
};

struct GradCheckReport {
    bool conclusive = false;
    double max_rel_error = 0.0;
    int resamples = 0;
};

// Central finite differences of an arbitrary scalar function.
std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x, double h);

// Compares the analytic subgradient of the selected loss against central
// finite differences over the flattened (src params, tgt params) vector.
// Points too close to a kink are resampled up to the retry budget; an
// exhausted budget yields an inconclusive report.
GradCheckReport gradient_check(LossKind kind, const KnowledgeGraph& src_kg,
                               const KnowledgeGraph& tgt_kg, std::span<const HingeTerm> align_terms,
                               std::span<const HingeTerm> guided_terms, double gamma_mix,
                               double lambda, const EmbeddingMatrix& point_src,
                               const EmbeddingMatrix& point_tgt, const GradCheckConfig& cfg);

}  // namespace ued
