#include "l2lab/vn_oracle.hpp"

#include "l2lab/errors.hpp"
#include "l2lab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace l2lab {

std::pair<std::vector<double>, std::vector<double>> QuadratureGrid::axis() const {
    const int m = points_per_axis;
    if (m < 8) throw DomainError("quadrature needs at least 8 points per axis");
    std::vector<double> nodes(static_cast<std::size_t>(m)), weights(static_cast<std::size_t>(m));
    if (rule == QuadratureRule::Trapezoid) {
        for (int k = 0; k < m; ++k) {
            nodes[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / m;
            weights[static_cast<std::size_t>(k)] = 1.0 / m;
        }
        return {nodes, weights};
    }
    // Golub-Welsch on the Legendre Jacobi matrix
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        double beta = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = beta;
        J(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
    for (int k = 0; k < m; ++k) {
        double x = solver.eigenvalues()[k];
        double v0 = solver.eigenvectors()(0, k);
        nodes[static_cast<std::size_t>(k)] = std::numbers::pi * (x + 1.0);
        weights[static_cast<std::size_t>(k)] = v0 * v0;  // 2 v0^2 on [-1,1], halved for the mean
    }
    return {nodes, weights};
}

TorusSymbol::TorusSymbol(const EquivariantChainComplex& X, int degree) : degree_(degree) {
    if (!X.spec.abelian())
        throw UnsupportedOracleError("the Fourier oracle needs a free abelian deck group, got " + X.spec.name());
    if (degree < 0 || degree > X.dim()) throw DomainError("symbol degree out of range");
    dim_ = X.spec.rank;
    counts_ = X.orbit_counts;
    size_ = X.orbit_counts[static_cast<std::size_t>(degree)];
    terms_.resize(static_cast<std::size_t>(X.dim() + 2));
    for (int k = 1; k <= X.dim(); ++k) {
        const auto& d = X.boundary(k);
        for (int r = 0; r < d.rows(); ++r)
            for (int c = 0; c < d.cols(); ++c)
                for (const auto& [g, n] : d.at(r, c).terms())
                    terms_[static_cast<std::size_t>(k)].push_back(Term{r, c, g.coords, n});
    }
}

Eigen::MatrixXcd TorusSymbol::boundary(int k, const std::vector<double>& theta) const {
    const int rows = (k >= 1 && k <= static_cast<int>(counts_.size())) ? counts_[static_cast<std::size_t>(k - 1)] : 0;
    const int cols = (k >= 0 && k < static_cast<int>(counts_.size())) ? counts_[static_cast<std::size_t>(k)] : 0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    if (k < 1 || k >= static_cast<int>(terms_.size())) return m;
    for (const auto& t : terms_[static_cast<std::size_t>(k)]) {
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) phase += theta[static_cast<std::size_t>(i)] * static_cast<double>(t.exponent[static_cast<std::size_t>(i)]);
        m(t.row, t.col) += static_cast<double>(t.coeff) * std::polar(1.0, -phase);
    }
    return m;
}

Eigen::MatrixXcd TorusSymbol::evaluate(const std::vector<double>& theta) const {
    if (static_cast<int>(theta.size()) != dim_) throw DomainError("torus point has the wrong dimension");
    Eigen::MatrixXcd down = boundary(degree_, theta);
    Eigen::MatrixXcd up = boundary(degree_ + 1, theta);
    Eigen::MatrixXcd lap = Eigen::MatrixXcd::Zero(size_, size_);
    if (down.size()) lap += down.adjoint() * down;
    if (up.size()) lap += up * up.adjoint();
    return lap;
}

TorusSymbol symbol(const EquivariantChainComplex& X, int degree) { return TorusSymbol(X, degree); }

SymbolSpectrumTable::SymbolSpectrumTable(const EquivariantChainComplex& X, int degree, const QuadratureGrid& grid) {
    TorusSymbol sym(X, degree);
    size_ = sym.size();
    torus_dim_ = sym.torus_dim();
    auto [nodes, w] = grid.axis();
    const std::size_t m = nodes.size();
    std::size_t total = 1;
    for (int i = 0; i < torus_dim_; ++i) total *= m;
    weights_.resize(total);
    eigs_.resize(total * static_cast<std::size_t>(size_));
    ktol_.resize(total);

    std::vector<std::size_t> idx(static_cast<std::size_t>(torus_dim_), 0);
    std::vector<double> theta(static_cast<std::size_t>(torus_dim_));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    for (std::size_t p = 0; p < total; ++p) {
        double weight = 1.0;
        for (int i = 0; i < torus_dim_; ++i) {
            theta[static_cast<std::size_t>(i)] = nodes[idx[static_cast<std::size_t>(i)]];
            weight *= w[idx[static_cast<std::size_t>(i)]];
        }
        weights_[p] = weight;
        if (size_ > 0) {
            Eigen::MatrixXcd lap = sym.evaluate(theta);
            solver.compute(lap, Eigen::EigenvaluesOnly);
            for (int k = 0; k < size_; ++k) eigs_[p * static_cast<std::size_t>(size_) + static_cast<std::size_t>(k)] = solver.eigenvalues()[k];
            ktol_[p] = 1e-8 * (1.0 + lap.cwiseAbs().colwise().sum().maxCoeff());
        }
        for (int i = torus_dim_ - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < m) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
}

double SymbolSpectrumTable::heat_trace(double t) const {
    if (!(t > 0)) throw DomainError("heat trace needs t > 0");
    double sum = 0.0;
    for (std::size_t p = 0; p < points(); ++p) {
        double local = 0.0;
        for (int k = 0; k < size_; ++k) local += std::exp(-t * std::max(eigenvalues(p)[k], 0.0));
        sum += weights_[p] * local;
    }
    return sum;
}

double SymbolSpectrumTable::spectral_function(double lambda) const {
    if (lambda < 0) throw DomainError("spectral function needs lambda >= 0");
    // N(0) is the von Neumann dimension of the kernel; isolated kernel points carry no measure
    if (lambda == 0) return static_cast<double>(size_ - max_rank());
    double sum = 0.0;
    for (std::size_t p = 0; p < points(); ++p) {
        int count = 0;
        for (int k = 0; k < size_; ++k)
            if (eigenvalues(p)[k] <= lambda + ktol_[p]) ++count;
        sum += weights_[p] * count;
    }
    return sum;
}

std::complex<double> SymbolSpectrumTable::zeta(std::complex<double> s, double lambda) const {
    if (!(lambda > 0)) throw DomainError("zeta needs lambda > 0");
    if (!(s.real() > torus_dim_ / 2.0))
        throw DomainError("zeta is evaluated only for Re s > d/2 = " + std::to_string(torus_dim_ / 2.0));
    // Only the kernel present at almost every point is removed; isolated
    // kernel points (theta = 0) carry no measure and keep their lambda^{-s}.
    const int generic_kernel = size_ - max_rank();
    std::complex<double> sum = 0.0;
    for (std::size_t p = 0; p < points(); ++p) {
        std::complex<double> local = 0.0;
        for (int k = generic_kernel; k < size_; ++k)
            local += std::exp(-s * std::log(std::max(eigenvalues(p)[k], 0.0) + lambda));
        sum += weights_[p] * local;
    }
    return sum;
}

int SymbolSpectrumTable::min_rank() const {
    int best = size_;
    for (std::size_t p = 0; p < points(); ++p) {
        int r = 0;
        for (int k = 0; k < size_; ++k)
            if (eigenvalues(p)[k] > ktol_[p]) ++r;
        best = std::min(best, r);
    }
    return best;
}

int SymbolSpectrumTable::max_rank() const {
    int best = 0;
    for (std::size_t p = 0; p < points(); ++p) {
        int r = 0;
        for (int k = 0; k < size_; ++k)
            if (eigenvalues(p)[k] > ktol_[p]) ++r;
        best = std::max(best, r);
    }
    return best;
}

double SymbolSpectrumTable::kernel_measure() const {
    double sum = 0.0;
    for (std::size_t p = 0; p < points(); ++p) {
        int nullity = 0;
        for (int k = 0; k < size_; ++k)
            if (eigenvalues(p)[k] <= ktol_[p]) ++nullity;
        sum += weights_[p] * nullity;
    }
    return sum;
}

std::vector<std::pair<double, double>> SymbolSpectrumTable::bands() const {
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(size_),
                                               {std::numeric_limits<double>::infinity(),
                                                -std::numeric_limits<double>::infinity()});
    for (std::size_t p = 0; p < points(); ++p)
        for (int k = 0; k < size_; ++k) {
            auto& band = out[static_cast<std::size_t>(k)];
            band.first = std::min(band.first, eigenvalues(p)[k]);
            band.second = std::max(band.second, eigenvalues(p)[k]);
        }
    return out;
}

double vn_heat_trace(const EquivariantChainComplex& X, int j, double t, const QuadratureGrid& grid) {
    return SymbolSpectrumTable(X, j, grid).heat_trace(t);
}

double vn_spectral_function(const EquivariantChainComplex& X, int j, double lambda, const QuadratureGrid& grid) {
    return SymbolSpectrumTable(X, j, grid).spectral_function(lambda);
}

L2BettiEstimate l2_betti(const EquivariantChainComplex& X, int j, const QuadratureGrid& grid) {
    SymbolSpectrumTable table(X, j, grid);
    L2BettiEstimate out;
    out.generic_rank = table.max_rank();
    out.min_rank = table.min_rank();
    out.value = static_cast<double>(table.size() - out.generic_rank);
    out.sampled_kernel_measure = table.kernel_measure();
    return out;
}

std::optional<std::vector<double>> l2_betti_from_euler(const EquivariantChainComplex& X) {
    const int n = X.dim();
    std::vector<std::optional<double>> b(static_cast<std::size_t>(n + 1));
    b[0] = 0.0;  // every built-in deck group is infinite
    if (X.closed_manifold) b[static_cast<std::size_t>(n)] = 0.0;
    int unknown = -1;
    double known = 0.0;
    for (int j = 0; j <= n; ++j) {
        if (b[static_cast<std::size_t>(j)]) {
            known += (j % 2 == 0 ? 1.0 : -1.0) * *b[static_cast<std::size_t>(j)];
        } else if (unknown >= 0) {
            return std::nullopt;
        } else {
            unknown = j;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n + 1), 0.0);
    for (int j = 0; j <= n; ++j)
        if (b[static_cast<std::size_t>(j)]) out[static_cast<std::size_t>(j)] = *b[static_cast<std::size_t>(j)];
    if (unknown >= 0) {
        const double sign = unknown % 2 == 0 ? 1.0 : -1.0;
        out[static_cast<std::size_t>(unknown)] = sign * (X.euler_characteristic - known);
    } else if (std::abs(known - X.euler_characteristic) > 0) {
        return std::nullopt;  // inconsistent metadata
    }
    return out;
}

std::complex<double> vn_zeta(const EquivariantChainComplex& X, int j, std::complex<double> s, double lambda,
                             const QuadratureGrid& grid) {
    return SymbolSpectrumTable(X, j, grid).zeta(s, lambda);
}

double lattice_heat_kernel(int d, double t, const std::vector<std::int64_t>& offset) {
    if (!(t > 0)) throw DomainError("lattice heat kernel needs t > 0");
    if (static_cast<int>(offset.size()) != d) throw DomainError("offset dimension mismatch");
    const double x = 2.0 * t;
    double prod = 1.0;
    for (auto o : offset) {
        const auto k = static_cast<double>(o < 0 ? -o : o);
        if (x < 600.0) {
            prod *= std::exp(-x) * std::cyl_bessel_i(k, x);
        } else {
            prod *= scaled_bessel_i_sequence(x, static_cast<int>(k))[static_cast<std::size_t>(k)];
        }
    }
    return prod;
}

}  // namespace l2lab
