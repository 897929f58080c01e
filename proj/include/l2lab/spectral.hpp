#pragma once

#include "l2lab/section.hpp"
#include "l2lab/sparse.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace l2lab {

struct SpectralOptions {
    /// Largest degree-j cell count handled by the dense eigensolver.
    std::size_t dense_cap = 4000;
    /// Hutchinson probe count for the iterative heat-trace path.
    int trace_probes = 64;
    std::uint64_t seed = 1;
};

/// Delta_j = d_j^T d_j + d_{j+1} d_{j+1}^T with the identity inner product on cells.
SparseIntMatrix laplacian(const SectionComplex& section, int j);

/// Exact Betti number dim C_j - rank d_j - rank d_{j+1}.
int betti(const SectionComplex& section, int j);

struct BettiVector {
    std::vector<int> values;
    BoundaryCondition condition = BoundaryCondition::Relative;
};

BettiVector betti_numbers(const SectionComplex& section);

/// Sorted spectrum of one Laplacian.
struct SpectralData {
    int degree = 0;
    std::vector<double> eigenvalues;
    /// Backward-error bound of the eigensolver (n * eps * ||Delta||).
    double tolerance = 0.0;
    /// Clustering tolerance 1e-8 * (1 + ||Delta||_1).
    double cluster_tolerance = 0.0;
};

/// Eigenpairs of one Laplacian from the dense symmetric solver.
struct DenseSpectrum {
    SpectralData data;
    Eigen::MatrixXd eigenvectors;  // columns match data.eigenvalues
};

DenseSpectrum dense_spectrum(const SectionComplex& section, int j, const SpectralOptions& opts = {});
SpectralData eigenvalues(const SectionComplex& section, int j, const SpectralOptions& opts = {});

/// Number of eigenvalues within the clustering tolerance of zero.
int zero_multiplicity(const SpectralData& spectrum);

struct HeatTrace {
    double value = 0.0;
    double standard_error = 0.0;
    std::string method;  // "dense" or "chebyshev-hutchinson"
};

/// Tr exp(-t Delta_j); dense when the degree fits under the cap, otherwise a
/// stochastic Chebyshev estimate with its standard error.
HeatTrace heat_trace(const SectionComplex& section, int j, double t, const SpectralOptions& opts = {});
double heat_trace(const SpectralData& spectrum, double t);

/// Hutchinson (Rademacher) estimate of Tr p(Delta) where p is the Chebyshev
/// interpolant of exp(-t x) on the Gershgorin interval.
HeatTrace heat_trace_stochastic(const SparseIntMatrix& laplacian, double t, int probes, std::uint64_t seed);

/// Matrix element of exp(-t Delta_j) between cells x and y (indices into cells(j)).
double heat_kernel_entry(const SectionComplex& section, int j, double t, int x, int y,
                         const SpectralOptions& opts = {});
double heat_kernel_entry(const DenseSpectrum& spectrum, double t, int x, int y);

/// #{eigenvalues <= lambda}, ties resolved with the clustering tolerance.
int spectral_count(const SectionComplex& section, int j, double lambda, const SpectralOptions& opts = {});
int spectral_count(const SpectralData& spectrum, double lambda);

/// One positive eigenvalue cluster with its multiplicity in every degree.
struct EigenCluster {
    double center = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<int> multiplicity;  // per degree
    /// Set when single-linkage chaining made the cluster wider than the
    /// tolerance, i.e. two distinct eigenvalues may have been merged.
    bool ambiguous = false;
};

std::vector<DenseSpectrum> all_spectra(const SectionComplex& section, const SpectralOptions& opts = {});
std::vector<EigenCluster> positive_clusters(const std::vector<DenseSpectrum>& spectra);

/// Alternating eigenspace dimension sum_{j<=N} (-1)^{N-j} dim E^j_lambda.
/// Throws DomainError for an ambiguous cluster.
int dsum(const EigenCluster& cluster, int N);
/// Locates the cluster containing lambda.
int dsum(const SectionComplex& section, double lambda, int N, const SpectralOptions& opts = {});

struct SupersymmetryPair {
    double lambda = 0.0;
    int degree = 0;       // p
    int coexact = 0;      // rank of d on the lambda-eigenspace in degree p
    int exact_next = 0;   // dim of the lambda-eigenspace in degree p+1 killed by d
};

struct SupersymmetryReport {
    bool ok = true;
    bool vacuous = false;
    int ambiguous_clusters = 0;
    std::vector<SupersymmetryPair> pairs;
    std::string message;
};

/// Checks that d maps the coexact part of each positive eigenspace in degree p
/// onto the exact part in degree p+1 (dimension equality).
SupersymmetryReport supersymmetry_check(const SectionComplex& section, const SpectralOptions& opts = {});
SupersymmetryReport supersymmetry_check(const SectionComplex& section, const std::vector<DenseSpectrum>& spectra);

/// (1/normalization) sum over positive eigenvalues mu of (mu + lambda)^(-s).
std::complex<double> zeta_finite(const SectionComplex& section, int j, std::complex<double> s, double lambda,
                                 double normalization, const SpectralOptions& opts = {});
std::complex<double> zeta_finite(const SpectralData& spectrum, std::complex<double> s, double lambda,
                                 double normalization);

/// e^{-x} I_k(x) for k = 0..kmax by Miller's backward recurrence, normalized
/// with e^{x} = I_0 + 2 sum I_k.
std::vector<double> scaled_bessel_i_sequence(double x, int kmax);

}  // namespace l2lab
