#pragma once
// Knowledge-graph data model, TSV ingestion, and the synthetic paired-KG
// generator used throughout the test suites.
//
// File formats:
//   entities file    one entity id per line, UTF-8, no duplicates
//   triples file     head_id<TAB>relation_id<TAB>tail_id
//   embeddings file  entity_id<TAB>f1 f2 ... fd   (space-separated floats)
//   pairs file       src_id<TAB>tgt_id[<TAB>score]
//   dangling file    one entity id per line

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ued/embedding.hpp"

namespace ued {

struct Triple {
    int head = 0;
    int rel = 0;
    int tail = 0;
    auto operator<=>(const Triple&) const = default;
};

class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Validates indices, drops duplicate triples, builds the undirected
    // relation-agnostic adjacency.
    static KnowledgeGraph build(std::vector<std::string> entity_ids,
                                std::vector<std::string> relation_ids,
                                std::vector<Triple> triples);

    int num_entities() const { return static_cast<int>(entity_ids_.size()); }
    int num_relations() const { return static_cast<int>(relation_ids_.size()); }

    const std::vector<std::string>& entity_ids() const { return entity_ids_; }
    const std::vector<std::string>& relation_ids() const { return relation_ids_; }
    const std::vector<Triple>& triples() const { return triples_; }
    const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
    const std::vector<int>& neighbors(int entity) const { return adjacency_[entity]; }

    // -1 when the id is unknown.
    int entity_index(const std::string& id) const;
    const std::string& entity_id(int index) const { return entity_ids_[index]; }

    bool same_structure(const KnowledgeGraph& other) const {
        return entity_ids_ == other.entity_ids_ && relation_ids_ == other.relation_ids_ &&
               triples_ == other.triples_ && adjacency_ == other.adjacency_;
    }

private:
    std::vector<std::string> entity_ids_;
    std::vector<std::string> relation_ids_;
    std::vector<Triple> triples_;
    std::vector<std::vector<int>> adjacency_;
    std::unordered_map<std::string, int> entity_index_;
};

struct GoldLabels {
    std::vector<std::pair<int, int>> pairs;  // (src_index, tgt_index), one-to-one
    std::vector<int> dangling_src;           // sorted ascending
    std::vector<int> dangling_tgt;           // sorted ascending

    // Throws ValidationError when an index appears both in pairs and in a
    // dangling set, or when pairs are not one-to-one.
    void validate(int n_src, int n_tgt) const;
};

struct SynthConfig {
    int n_matchable = 100;
    int n_dangling_src = 0;
    int n_dangling_tgt = 0;
    int dim = 16;
    double noise_sigma = 0.0;
    double edge_prob = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthOutput {
    KnowledgeGraph src_kg;
    KnowledgeGraph tgt_kg;
    EmbeddingMatrix src_emb;
    EmbeddingMatrix tgt_emb;
    GoldLabels gold;
};

// --- ingestion ---------------------------------------------------------

KnowledgeGraph load_kg(const std::filesystem::path& triples_path,
                       const std::filesystem::path& entities_path);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const KnowledgeGraph& kg);

std::vector<std::pair<int, int>> load_pairs(const std::filesystem::path& path,
                                            const KnowledgeGraph& src_kg,
                                            const KnowledgeGraph& tgt_kg);

std::vector<int> load_dangling(const std::filesystem::path& path, const KnowledgeGraph& kg);

// --- serialization (formats mirror the loaders) ------------------------

void save_kg(const KnowledgeGraph& kg, const std::filesystem::path& triples_path,
             const std::filesystem::path& entities_path);

void save_embeddings(const EmbeddingMatrix& emb, const KnowledgeGraph& kg,
                     const std::filesystem::path& path);

void save_pairs(const std::vector<std::pair<int, int>>& pairs, const KnowledgeGraph& src_kg,
                const KnowledgeGraph& tgt_kg, const std::filesystem::path& path);

void save_dangling(const std::vector<int>& dangling, const KnowledgeGraph& kg,
                   const std::filesystem::path& path);

// --- synthetic paired KGs ----------------------------------------------

// Matchable entities share a latent vector plus independent per-side noise;
// dangling entities get fresh latents. Triples over the matchable core are
// sampled with the same coin flips on both sides so structure correlates.
SynthOutput synth_kg_pair(const SynthConfig& cfg);

}  // namespace ued
