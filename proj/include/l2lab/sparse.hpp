#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <utility>
#include <vector>

namespace l2lab {

/// Exact sparse integer matrix in compressed-column form. Columns hold
/// (row, value) pairs sorted by row with no explicit zeros.
class SparseIntMatrix {
public:
    using Entry = std::pair<int, std::int64_t>;

    SparseIntMatrix() = default;
    SparseIntMatrix(int rows, int cols);

    /// Builds from unordered triplets; duplicates are summed.
    static SparseIntMatrix from_triplets(int rows, int cols,
                                         const std::vector<std::tuple<int, int, std::int64_t>>& triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<Entry>& column(int c) const { return columns_[static_cast<std::size_t>(c)]; }
    std::int64_t at(int r, int c) const;
    std::size_t nonzeros() const;
    bool is_zero() const { return nonzeros() == 0; }

    SparseIntMatrix transpose() const;
    /// Exact product this * other.
    SparseIntMatrix operator*(const SparseIntMatrix& other) const;
    SparseIntMatrix operator+(const SparseIntMatrix& other) const;
    friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;

    /// Maximum absolute column sum.
    std::int64_t norm1() const;

    Eigen::SparseMatrix<double> to_sparse_double() const;
    Eigen::MatrixXd to_dense_double() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::vector<Entry>> columns_;
};

/// Exact rank over the rationals.
///
/// Eliminates modulo two 31-bit primes; when the two ranks agree that value
/// is returned, otherwise fraction-free Bareiss elimination decides.
int exact_rank(const SparseIntMatrix& m);

/// Rank modulo a prime p < 2^31.
int rank_mod_p(const SparseIntMatrix& m, std::uint32_t p);

/// Rank by fraction-free (Bareiss) elimination over arbitrary-precision
/// integers.
int rank_bareiss(const SparseIntMatrix& m);

}  // namespace l2lab
