#pragma once
// Dense per-entity embedding storage, row-major. Rows follow the entity
// order of the knowledge graph they belong to.

#include <span>
#include <vector>

namespace ued {

class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(int rows, int dim) : dim_(dim), data_(static_cast<std::size_t>(rows) * dim, 0.0) {}
    EmbeddingMatrix(int rows, int dim, std::vector<double> data)
        : dim_(dim), data_(std::move(data)) {
        (void)rows;
    }

    int rows() const { return dim_ == 0 ? 0 : static_cast<int>(data_.size() / dim_); }
    int dim() const { return dim_; }
    bool empty() const { return data_.empty(); }

    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<double> row(int i) {
        return {data_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const EmbeddingMatrix& other) const = default;

private:
    int dim_ = 0;
    std::vector<double> data_;
};

// L2-normalizes every row in place; all-zero rows are left untouched.
void normalize_rows(EmbeddingMatrix& m);

double l2_norm(std::span<const double> v);

}  // namespace ued
