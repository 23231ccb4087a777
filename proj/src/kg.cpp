#include "ued/kg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ued/error.hpp"
#include "ued/rng.hpp"

namespace ued {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

double parse_double(const std::string& token, const std::filesystem::path& path, int line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad float token '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": non-finite component '" + token + "'");
    }
    return value;
}

void format_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace

void normalize_rows(EmbeddingMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        const double norm = l2_norm(r);
        if (norm == 0.0) continue;
        for (double& x : r) x /= norm;
    }
}

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

KnowledgeGraph KnowledgeGraph::build(std::vector<std::string> entity_ids,
                                     std::vector<std::string> relation_ids,
                                     std::vector<Triple> triples) {
    KnowledgeGraph kg;
    kg.entity_ids_ = std::move(entity_ids);
    kg.relation_ids_ = std::move(relation_ids);

    const int n = kg.num_entities();
    const int r = kg.num_relations();
    kg.entity_index_.reserve(kg.entity_ids_.size());
    for (int i = 0; i < n; ++i) {
        auto [it, inserted] = kg.entity_index_.emplace(kg.entity_ids_[i], i);
        if (!inserted) throw ValidationError("duplicate entity id '" + kg.entity_ids_[i] + "'");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& rel : kg.relation_ids_) {
            if (!seen.insert(rel).second) throw ValidationError("duplicate relation id '" + rel + "'");
        }
    }

    std::set<Triple> seen_triples;
    for (const Triple& t : triples) {
        if (t.head < 0 || t.head >= n || t.tail < 0 || t.tail >= n || t.rel < 0 || t.rel >= r) {
            throw ValidationError("triple index out of range");
        }
        if (seen_triples.insert(t).second) kg.triples_.push_back(t);
    }

    kg.adjacency_.assign(n, {});
    for (const Triple& t : kg.triples_) {
        kg.adjacency_[t.head].push_back(t.tail);
        kg.adjacency_[t.tail].push_back(t.head);
    }
    for (auto& nbrs : kg.adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return kg;
}

int KnowledgeGraph::entity_index(const std::string& id) const {
    auto it = entity_index_.find(id);
    return it == entity_index_.end() ? -1 : it->second;
}

void GoldLabels::validate(int n_src, int n_tgt) const {
    std::unordered_set<int> src_seen, tgt_seen;
    for (const auto& [s, t] : pairs) {
        if (s < 0 || s >= n_src || t < 0 || t >= n_tgt) {
            throw ValidationError("gold pair index out of range");
        }
        if (!src_seen.insert(s).second || !tgt_seen.insert(t).second) {
            throw ValidationError("gold pairs are not one-to-one");
        }
    }
    for (int d : dangling_src) {
        if (d < 0 || d >= n_src) throw ValidationError("dangling src index out of range");
        if (src_seen.count(d)) throw ValidationError("src entity both matched and dangling");
    }
    for (int d : dangling_tgt) {
        if (d < 0 || d >= n_tgt) throw ValidationError("dangling tgt index out of range");
        if (tgt_seen.count(d)) throw ValidationError("tgt entity both matched and dangling");
    }
}

void SynthConfig::validate() const {
    if (n_matchable < 0 || n_dangling_src < 0 || n_dangling_tgt < 0 || dim <= 0) {
        throw ValidationError("synth counts must be >= 0 and dim > 0");
    }
    if (edge_prob < 0.0 || edge_prob > 1.0) throw ValidationError("edge_prob must be in [0,1]");
    if (noise_sigma < 0.0) throw ValidationError("noise_sigma must be >= 0");
}

KnowledgeGraph load_kg(const std::filesystem::path& triples_path,
                       const std::filesystem::path& entities_path) {
    std::vector<std::string> entity_ids;
    {
        std::ifstream in = open_or_throw(entities_path);
        std::string line;
        int line_no = 0;
        std::unordered_set<std::string> seen;
        while (std::getline(in, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty()) continue;
            if (line.find('\t') != std::string::npos) {
                throw ParseError(entities_path.string() + ":" + std::to_string(line_no) +
                                 ": entity id contains a tab");
            }
            if (!seen.insert(line).second) {
                throw ValidationError(entities_path.string() + ":" + std::to_string(line_no) +
                                      ": duplicate entity id '" + line + "'");
            }
            entity_ids.push_back(line);
        }
    }

    std::unordered_map<std::string, int> entity_of;
    for (int i = 0; i < static_cast<int>(entity_ids.size()); ++i) entity_of.emplace(entity_ids[i], i);

    std::vector<std::string> relation_ids;
    std::unordered_map<std::string, int> relation_of;
    std::vector<Triple> triples;
    {
        std::ifstream in = open_or_throw(triples_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty()) continue;
            const auto fields = split_tabs(line);
            if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
                throw ParseError(triples_path.string() + ":" + std::to_string(line_no) +
                                 ": expected head<TAB>relation<TAB>tail");
            }
            auto head_it = entity_of.find(fields[0]);
            if (head_it == entity_of.end()) {
                throw ValidationError(triples_path.string() + ":" + std::to_string(line_no) +
                                      ": unknown entity id '" + fields[0] + "'");
            }
            auto tail_it = entity_of.find(fields[2]);
            if (tail_it == entity_of.end()) {
                throw ValidationError(triples_path.string() + ":" + std::to_string(line_no) +
                                      ": unknown entity id '" + fields[2] + "'");
            }
            auto [rel_it, inserted] = relation_of.emplace(fields[1], static_cast<int>(relation_ids.size()));
            if (inserted) relation_ids.push_back(fields[1]);
            triples.push_back({head_it->second, rel_it->second, tail_it->second});
        }
    }
    return KnowledgeGraph::build(std::move(entity_ids), std::move(relation_ids), std::move(triples));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const KnowledgeGraph& kg) {
    const int n = kg.num_entities();
    int dim = -1;
    std::vector<double> data;
    std::vector<char> covered(n, 0);

    std::ifstream in = open_or_throw(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected id<TAB>components");
        }
        const std::string id = line.substr(0, tab);
        const int idx = kg.entity_index(id);
        if (idx < 0) continue;  // embedding files may cover a superset of the KG
        if (covered[idx]) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": entity '" + id + "' appears more than once");
        }
        covered[idx] = 1;

        std::vector<double> row;
        std::istringstream comps(line.substr(tab + 1));
        std::string token;
        while (comps >> token) row.push_back(parse_double(token, path, line_no));
        if (row.empty()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty vector");
        }
        if (dim < 0) {
            dim = static_cast<int>(row.size());
            data.assign(static_cast<std::size_t>(n) * dim, 0.0);
        } else if (static_cast<int>(row.size()) != dim) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": dimension mismatch, expected " +
                                  std::to_string(dim) + " got " + std::to_string(row.size()));
        }
        std::copy(row.begin(), row.end(), data.begin() + static_cast<std::size_t>(idx) * dim);
    }

    std::string missing;
    int missing_count = 0;
    for (int i = 0; i < n; ++i) {
        if (covered[i]) continue;
        ++missing_count;
        if (missing_count <= 10) {
            if (!missing.empty()) missing += ", ";
            missing += kg.entity_id(i);
        }
    }
    if (missing_count > 0) {
        if (missing_count > 10) missing += ", ...";
        throw ValidationError(path.string() + ": missing embeddings for " + std::to_string(missing_count) +
                              " entities: " + missing);
    }
    return {n, dim, std::move(data)};
}

std::vector<std::pair<int, int>> load_pairs(const std::filesystem::path& path,
                                            const KnowledgeGraph& src_kg,
                                            const KnowledgeGraph& tgt_kg) {
    std::vector<std::pair<int, int>> pairs;
    std::ifstream in = open_or_throw(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2 && fields.size() != 3) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected src_id<TAB>tgt_id[<TAB>score]");
        }
        const int s = src_kg.entity_index(fields[0]);
        if (s < 0) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": unknown src entity '" + fields[0] + "'");
        }
        const int t = tgt_kg.entity_index(fields[1]);
        if (t < 0) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": unknown tgt entity '" + fields[1] + "'");
        }
        pairs.emplace_back(s, t);
    }
    return pairs;
}

std::vector<int> load_dangling(const std::filesystem::path& path, const KnowledgeGraph& kg) {
    std::vector<int> out;
    std::ifstream in = open_or_throw(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const int idx = kg.entity_index(line);
        if (idx < 0) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": unknown entity '" + line + "'");
        }
        out.push_back(idx);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void save_kg(const KnowledgeGraph& kg, const std::filesystem::path& triples_path,
             const std::filesystem::path& entities_path) {
    {
        std::ofstream out(entities_path);
        if (!out) throw ConfigError("cannot write " + entities_path.string());
        for (const auto& id : kg.entity_ids()) out << id << '\n';
    }
    std::ofstream out(triples_path);
    if (!out) throw ConfigError("cannot write " + triples_path.string());
    for (const Triple& t : kg.triples()) {
        out << kg.entity_id(t.head) << '\t' << kg.relation_ids()[t.rel] << '\t' << kg.entity_id(t.tail) << '\n';
    }
}

void save_embeddings(const EmbeddingMatrix& emb, const KnowledgeGraph& kg,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    std::string line;
    for (int i = 0; i < emb.rows(); ++i) {
        line.clear();
        line += kg.entity_id(i);
        line += '\t';
        const auto row = emb.row(i);
        for (int c = 0; c < emb.dim(); ++c) {
            if (c > 0) line += ' ';
            format_double(line, row[c]);
        }
        line += '\n';
        out << line;
    }
}

void save_pairs(const std::vector<std::pair<int, int>>& pairs, const KnowledgeGraph& src_kg,
                const KnowledgeGraph& tgt_kg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& [s, t] : pairs) out << src_kg.entity_id(s) << '\t' << tgt_kg.entity_id(t) << '\n';
}

void save_dangling(const std::vector<int>& dangling, const KnowledgeGraph& kg,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (int d : dangling) out << kg.entity_id(d) << '\n';
}

namespace {

std::string synth_id(const char* side, const char* kind, int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%s%05d", side, kind, i);
    return buf;
}

}  // namespace

SynthOutput synth_kg_pair(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const int n_src = cfg.n_matchable + cfg.n_dangling_src;
    const int n_tgt = cfg.n_matchable + cfg.n_dangling_tgt;
    const int dim = cfg.dim;

    // Latents: one shared vector per matchable pair, fresh ones for dangling.
    std::vector<double> shared(static_cast<std::size_t>(cfg.n_matchable) * dim);
    for (double& x : shared) x = rng.gaussian();
    std::vector<double> dangling_src_lat(static_cast<std::size_t>(cfg.n_dangling_src) * dim);
    for (double& x : dangling_src_lat) x = rng.gaussian();
    std::vector<double> dangling_tgt_lat(static_cast<std::size_t>(cfg.n_dangling_tgt) * dim);
    for (double& x : dangling_tgt_lat) x = rng.gaussian();

    // Source order: matchable block then dangling block. Target order is a
    // seeded permutation so gold pairs are not the identity mapping.
    std::vector<int> tgt_slot(n_tgt);  // tgt_slot[k] = entity occupying position k
    for (int i = 0; i < n_tgt; ++i) tgt_slot[i] = i;  // 0..n_matchable-1 matchable, rest dangling
    rng.shuffle(tgt_slot);
    std::vector<int> tgt_pos(n_tgt);  // position of logical entity k
    for (int p = 0; p < n_tgt; ++p) tgt_pos[tgt_slot[p]] = p;

    std::vector<std::string> src_ids(n_src), tgt_ids(n_tgt);
    EmbeddingMatrix src_emb(n_src, dim), tgt_emb(n_tgt, dim);

    for (int i = 0; i < cfg.n_matchable; ++i) {
        src_ids[i] = synth_id("src", "m", i);
        auto row = src_emb.row(i);
        for (int c = 0; c < dim; ++c) {
            row[c] = shared[static_cast<std::size_t>(i) * dim + c] +
                     (cfg.noise_sigma > 0.0 ? cfg.noise_sigma * rng.gaussian() : 0.0);
        }
    }
    for (int d = 0; d < cfg.n_dangling_src; ++d) {
        const int i = cfg.n_matchable + d;
        src_ids[i] = synth_id("src", "d", d);
        auto row = src_emb.row(i);
        for (int c = 0; c < dim; ++c) row[c] = dangling_src_lat[static_cast<std::size_t>(d) * dim + c];
    }
    for (int k = 0; k < n_tgt; ++k) {
        const int p = tgt_pos[k];
        auto row = tgt_emb.row(p);
        if (k < cfg.n_matchable) {
            tgt_ids[p] = synth_id("tgt", "m", k);
            for (int c = 0; c < dim; ++c) {
                row[c] = shared[static_cast<std::size_t>(k) * dim + c] +
                         (cfg.noise_sigma > 0.0 ? cfg.noise_sigma * rng.gaussian() : 0.0);
            }
        } else {
            const int d = k - cfg.n_matchable;
            tgt_ids[p] = synth_id("tgt", "d", d);
            for (int c = 0; c < dim; ++c) row[c] = dangling_tgt_lat[static_cast<std::size_t>(d) * dim + c];
        }
    }

    // Triples. Core edges use one coin per matchable pair of entities, applied
    // to both sides, so matched neighborhoods agree up to the permutation.
    std::vector<Triple> src_triples, tgt_triples;
    for (int i = 0; i < cfg.n_matchable; ++i) {
        for (int j = i + 1; j < cfg.n_matchable; ++j) {
            if (!rng.bernoulli(cfg.edge_prob)) continue;
            const int rel = rng.bernoulli(0.5) ? 0 : 1;
            src_triples.push_back({i, rel, j});
            tgt_triples.push_back({tgt_pos[i], rel, tgt_pos[j]});
        }
    }
    // Dangling entities attach to random partners within their own KG.
    for (int d = 0; d < cfg.n_dangling_src; ++d) {
        const int i = cfg.n_matchable + d;
        for (int j = 0; j < n_src; ++j) {
            if (j == i) continue;
            if (rng.bernoulli(cfg.edge_prob)) src_triples.push_back({i, rng.bernoulli(0.5) ? 0 : 1, j});
        }
    }
    for (int d = 0; d < cfg.n_dangling_tgt; ++d) {
        const int p = tgt_pos[cfg.n_matchable + d];
        for (int q = 0; q < n_tgt; ++q) {
            if (q == p) continue;
            if (rng.bernoulli(cfg.edge_prob)) tgt_triples.push_back({p, rng.bernoulli(0.5) ? 0 : 1, q});
        }
    }
    std::sort(tgt_triples.begin(), tgt_triples.end());

    SynthOutput out;
    std::vector<std::string> relations = {"r0", "r1"};
    out.src_kg = KnowledgeGraph::build(std::move(src_ids), relations, std::move(src_triples));
    out.tgt_kg = KnowledgeGraph::build(std::move(tgt_ids), relations, std::move(tgt_triples));
    out.src_emb = std::move(src_emb);
    out.tgt_emb = std::move(tgt_emb);

    for (int i = 0; i < cfg.n_matchable; ++i) out.gold.pairs.emplace_back(i, tgt_pos[i]);
    for (int d = 0; d < cfg.n_dangling_src; ++d) out.gold.dangling_src.push_back(cfg.n_matchable + d);
    for (int d = 0; d < cfg.n_dangling_tgt; ++d) out.gold.dangling_tgt.push_back(tgt_pos[cfg.n_matchable + d]);
    std::sort(out.gold.dangling_tgt.begin(), out.gold.dangling_tgt.end());
    out.gold.validate(n_src, n_tgt);
    return out;
}

}  // namespace ued
