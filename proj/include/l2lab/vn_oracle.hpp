#pragma once

#include "l2lab/complex.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace l2lab {

enum class QuadratureRule { Trapezoid, GaussLegendre };

/// Tensor-product rule on the torus [0, 2pi)^d with weights summing to 1
/// (the normalized Haar measure).
struct QuadratureGrid {
    int points_per_axis = 256;
    QuadratureRule rule = QuadratureRule::Trapezoid;

    /// One-dimensional nodes in [0, 2pi) and weights summing to 1.
    std::pair<std::vector<double>, std::vector<double>> axis() const;
};

/// Fourier symbol of Delta_j for a free abelian deck group: each generator
/// translate g is replaced by exp(-i theta . g).
class TorusSymbol {
public:
    TorusSymbol(const EquivariantChainComplex& complex, int degree);

    int degree() const { return degree_; }
    int torus_dim() const { return dim_; }
    int size() const { return size_; }

    Eigen::MatrixXcd evaluate(const std::vector<double>& theta) const;
    /// Boundary symbol d_k(theta), n_{k-1} x n_k.
    Eigen::MatrixXcd boundary(int k, const std::vector<double>& theta) const;

private:
    struct Term {
        int row, col;
        std::vector<std::int64_t> exponent;
        std::int64_t coeff;
    };
    std::vector<std::vector<Term>> terms_;  // per boundary degree
    std::vector<int> counts_;
    int degree_;
    int dim_;
    int size_;
};

TorusSymbol symbol(const EquivariantChainComplex& complex, int degree);

/// Symbol eigenvalues at every quadrature point, reused across many
/// (t, lambda, s) evaluations.
class SymbolSpectrumTable {
public:
    SymbolSpectrumTable(const EquivariantChainComplex& complex, int degree, const QuadratureGrid& grid);

    int size() const { return size_; }
    std::size_t points() const { return weights_.size(); }
    double weight(std::size_t p) const { return weights_[p]; }
    /// Sorted eigenvalues at point p.
    const double* eigenvalues(std::size_t p) const { return &eigs_[p * static_cast<std::size_t>(size_)]; }
    /// Kernel threshold 1e-8 * (1 + ||Delta(theta)||_1) at point p.
    double kernel_tolerance(std::size_t p) const { return ktol_[p]; }

    double heat_trace(double t) const;
    double spectral_function(double lambda) const;
    std::complex<double> zeta(std::complex<double> s, double lambda) const;
    int min_rank() const;
    int max_rank() const;
    double kernel_measure() const;
    /// Sorted band edges [min_theta mu_k, max_theta mu_k] for k = 0..size-1.
    std::vector<std::pair<double, double>> bands() const;

private:
    int size_;
    int torus_dim_;
    std::vector<double> weights_;
    std::vector<double> eigs_;
    std::vector<double> ktol_;
};

double vn_heat_trace(const EquivariantChainComplex& complex, int j, double t, const QuadratureGrid& grid = {});
double vn_spectral_function(const EquivariantChainComplex& complex, int j, double lambda,
                            const QuadratureGrid& grid = {});

struct L2BettiEstimate {
    /// n_j minus the generic (maximal) rank of the symbol.
    double value = 0.0;
    /// Quadrature of dim ker Delta_j(theta) over the sampled points.
    double sampled_kernel_measure = 0.0;
    int generic_rank = 0;
    int min_rank = 0;
};

L2BettiEstimate l2_betti(const EquivariantChainComplex& complex, int j, const QuadratureGrid& grid = {});

/// L2 Betti numbers from the Euler characteristic: b^0 = 0 for an infinite
/// deck group, b^n = 0 for closed manifolds (Poincare duality), the single
/// remaining degree from chi. Empty when more than one degree is unknown.
std::optional<std::vector<double>> l2_betti_from_euler(const EquivariantChainComplex& complex);

/// Symbol-side L2 zeta function; requires Re s > d/2 and lambda > 0.
std::complex<double> vn_zeta(const EquivariantChainComplex& complex, int j, std::complex<double> s, double lambda,
                             const QuadratureGrid& grid = {});

/// Exact heat kernel of the Z^d lattice Laplacian: prod_i e^{-2t} I_{|o_i|}(2t).
double lattice_heat_kernel(int d, double t, const std::vector<std::int64_t>& offset);

}  // namespace l2lab
