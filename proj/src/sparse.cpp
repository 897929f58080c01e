#include "l2lab/sparse.hpp"

#include "l2lab/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <tuple>

namespace l2lab {

SparseIntMatrix::SparseIntMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), columns_(static_cast<std::size_t>(cols)) {
    if (rows < 0 || cols < 0) throw DomainError("negative matrix shape");
}

SparseIntMatrix SparseIntMatrix::from_triplets(int rows, int cols,
                                               const std::vector<std::tuple<int, int, std::int64_t>>& triplets) {
    SparseIntMatrix m(rows, cols);
    std::vector<std::map<int, std::int64_t>> acc(static_cast<std::size_t>(cols));
    for (const auto& [r, c, v] : triplets) {
        if (r < 0 || r >= rows || c < 0 || c >= cols) throw DomainError("triplet index out of range");
        acc[static_cast<std::size_t>(c)][r] += v;
    }
    for (int c = 0; c < cols; ++c)
        for (const auto& [r, v] : acc[static_cast<std::size_t>(c)])
            if (v != 0) m.columns_[static_cast<std::size_t>(c)].emplace_back(r, v);
    return m;
}

std::int64_t SparseIntMatrix::at(int r, int c) const {
    const auto& col = column(c);
    auto it = std::lower_bound(col.begin(), col.end(), Entry{r, INT64_MIN});
    return (it != col.end() && it->first == r) ? it->second : 0;
}

std::size_t SparseIntMatrix::nonzeros() const {
    std::size_t n = 0;
    for (const auto& col : columns_) n += col.size();
    return n;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
    SparseIntMatrix t(cols_, rows_);
    for (int c = 0; c < cols_; ++c)
        for (const auto& [r, v] : column(c)) t.columns_[static_cast<std::size_t>(r)].emplace_back(c, v);
    return t;  // rows visited in increasing column order, so already sorted
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& other) const {
    if (cols_ != other.rows_) throw DomainError("matrix product shape mismatch");
    SparseIntMatrix p(rows_, other.cols_);
    std::vector<std::int64_t> work(static_cast<std::size_t>(rows_), 0);
    std::vector<int> touched;
    for (int c = 0; c < other.cols_; ++c) {
        touched.clear();
        for (const auto& [k, b] : other.column(c)) {
            for (const auto& [r, a] : column(k)) {
                auto& w = work[static_cast<std::size_t>(r)];
                if (w == 0) touched.push_back(r);
                w += a * b;
            }
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (int r : touched) {
            auto& w = work[static_cast<std::size_t>(r)];
            if (w != 0) p.columns_[static_cast<std::size_t>(c)].emplace_back(r, w);
            w = 0;
        }
    }
    return p;
}

SparseIntMatrix SparseIntMatrix::operator+(const SparseIntMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DomainError("matrix sum shape mismatch");
    std::vector<std::tuple<int, int, std::int64_t>> trip;
    for (int c = 0; c < cols_; ++c) {
        for (const auto& [r, v] : column(c)) trip.emplace_back(r, c, v);
        for (const auto& [r, v] : other.column(c)) trip.emplace_back(r, c, v);
    }
    return from_triplets(rows_, cols_, trip);
}

std::int64_t SparseIntMatrix::norm1() const {
    std::int64_t best = 0;
    for (const auto& col : columns_) {
        std::int64_t s = 0;
        for (const auto& [r, v] : col) s += v < 0 ? -v : v;
        best = std::max(best, s);
    }
    return best;
}

Eigen::SparseMatrix<double> SparseIntMatrix::to_sparse_double() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nonzeros());
    for (int c = 0; c < cols_; ++c)
        for (const auto& [r, v] : column(c)) trip.emplace_back(r, c, static_cast<double>(v));
    Eigen::SparseMatrix<double> m(rows_, cols_);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::MatrixXd SparseIntMatrix::to_dense_double() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int c = 0; c < cols_; ++c)
        for (const auto& [r, v] : column(c)) m(r, c) = static_cast<double>(v);
    return m;
}

namespace {

constexpr std::uint32_t kPrimeA = 2147483629U;
constexpr std::uint32_t kPrimeB = 2147483587U;

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t r = 1;
    base %= p;
    while (exp) {
        if (exp & 1) r = r * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return r;
}

}  // namespace

int rank_mod_p(const SparseIntMatrix& m, std::uint32_t p) {
    // Rows of the elimination are the columns of m when m is wide, so the
    // dense work array has the shorter dimension as its row count.
    const bool by_columns = m.cols() <= m.rows();
    const int nvec = by_columns ? m.cols() : m.rows();
    const int len = by_columns ? m.rows() : m.cols();
    if (nvec == 0 || len == 0) return 0;

    std::vector<std::vector<std::uint32_t>> vecs(static_cast<std::size_t>(nvec),
                                                 std::vector<std::uint32_t>(static_cast<std::size_t>(len), 0));
    auto reduce = [p](std::int64_t v) {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        return static_cast<std::uint32_t>(r < 0 ? r + p : r);
    };
    for (int c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c)) {
            if (by_columns)
                vecs[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = reduce(v);
            else
                vecs[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = reduce(v);
        }

    int rank = 0;
    std::vector<bool> used(static_cast<std::size_t>(nvec), false);
    for (int k = 0; k < len && rank < nvec; ++k) {
        int pivot = -1;
        for (int i = 0; i < nvec; ++i)
            if (!used[static_cast<std::size_t>(i)] && vecs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        used[static_cast<std::size_t>(pivot)] = true;
        ++rank;
        auto& pv = vecs[static_cast<std::size_t>(pivot)];
        const std::uint64_t inv = pow_mod(pv[static_cast<std::size_t>(k)], p - 2, p);
        for (int i = 0; i < nvec; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            auto& row = vecs[static_cast<std::size_t>(i)];
            const std::uint64_t a = row[static_cast<std::size_t>(k)];
            if (a == 0) continue;
            const std::uint64_t f = a * inv % p;
            for (int x = k; x < len; ++x) {
                const std::uint64_t b = pv[static_cast<std::size_t>(x)];
                if (b == 0) continue;
                std::uint64_t cur = row[static_cast<std::size_t>(x)];
                row[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>((cur + p - f * b % p) % p);
            }
        }
    }
    return rank;
}

int rank_bareiss(const SparseIntMatrix& m) {
    using boost::multiprecision::cpp_int;
    const int rows = m.rows();
    const int cols = m.cols();
    std::vector<std::vector<cpp_int>> a(static_cast<std::size_t>(rows), std::vector<cpp_int>(static_cast<std::size_t>(cols)));
    for (int c = 0; c < cols; ++c)
        for (const auto& [r, v] : m.column(c)) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;

    cpp_int prev = 1;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(rank)]);
        const auto& pr = a[static_cast<std::size_t>(rank)];
        for (int r = rank + 1; r < rows; ++r) {
            auto& row = a[static_cast<std::size_t>(r)];
            for (int x = c + 1; x < cols; ++x)
                row[static_cast<std::size_t>(x)] =
                    (pr[static_cast<std::size_t>(c)] * row[static_cast<std::size_t>(x)] -
                     row[static_cast<std::size_t>(c)] * pr[static_cast<std::size_t>(x)]) / prev;
            row[static_cast<std::size_t>(c)] = 0;
        }
        prev = pr[static_cast<std::size_t>(c)];
        ++rank;
    }
    return rank;
}

int exact_rank(const SparseIntMatrix& m) {
    const int ra = rank_mod_p(m, kPrimeA);
    const int rb = rank_mod_p(m, kPrimeB);
    if (ra == rb) return ra;
    return rank_bareiss(m);
}

}  // namespace l2lab
