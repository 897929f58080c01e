#include "l2lab/spectral.hpp"

#include "l2lab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace l2lab {

namespace {

void check_degree(const SectionComplex& S, int j) {
    if (j < 0 || j > S.dim())
        throw DomainError("degree " + std::to_string(j) + " outside 0.." + std::to_string(S.dim()));
}

void check_cap(const SectionComplex& S, int j, const SpectralOptions& opts) {
    if (S.cell_count(j) > opts.dense_cap)
        throw CapExceededError("degree " + std::to_string(j) + " has " + std::to_string(S.cell_count(j)) +
                               " cells, above the dense cap of " + std::to_string(opts.dense_cap) +
                               "; use heat_trace, which switches to the stochastic estimator");
}

}  // namespace

SparseIntMatrix laplacian(const SectionComplex& S, int j) {
    check_degree(S, j);
    const auto& down = S.boundary(j);
    const auto& up = S.boundary(j + 1);
    return down.transpose() * down + up * up.transpose();
}

int betti(const SectionComplex& S, int j) {
    check_degree(S, j);
    return static_cast<int>(S.cell_count(j)) - exact_rank(S.boundary(j)) - exact_rank(S.boundary(j + 1));
}

BettiVector betti_numbers(const SectionComplex& S) {
    BettiVector b;
    b.condition = S.condition();
    std::vector<int> ranks(static_cast<std::size_t>(S.dim() + 2), 0);
    for (int j = 1; j <= S.dim(); ++j) ranks[static_cast<std::size_t>(j)] = exact_rank(S.boundary(j));
    for (int j = 0; j <= S.dim(); ++j)
        b.values.push_back(static_cast<int>(S.cell_count(j)) - ranks[static_cast<std::size_t>(j)] -
                           ranks[static_cast<std::size_t>(j + 1)]);
    return b;
}

DenseSpectrum dense_spectrum(const SectionComplex& S, int j, const SpectralOptions& opts) {
    check_degree(S, j);
    check_cap(S, j, opts);
    const SparseIntMatrix lap = laplacian(S, j);
    DenseSpectrum out;
    out.data.degree = j;
    const auto norm = static_cast<double>(lap.norm1());
    const auto n = static_cast<double>(S.cell_count(j));
    out.data.tolerance = std::max(1.0, n) * std::numeric_limits<double>::epsilon() * std::max(1.0, norm);
    out.data.cluster_tolerance = 1e-8 * (1.0 + norm);
    if (S.cell_count(j) == 0) return out;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.to_dense_double());
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    out.data.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    out.eigenvectors = solver.eigenvectors();
    return out;
}

SpectralData eigenvalues(const SectionComplex& S, int j, const SpectralOptions& opts) {
    check_degree(S, j);
    check_cap(S, j, opts);
    const SparseIntMatrix lap = laplacian(S, j);
    SpectralData out;
    out.degree = j;
    const auto norm = static_cast<double>(lap.norm1());
    const auto n = static_cast<double>(S.cell_count(j));
    out.tolerance = std::max(1.0, n) * std::numeric_limits<double>::epsilon() * std::max(1.0, norm);
    out.cluster_tolerance = 1e-8 * (1.0 + norm);
    if (S.cell_count(j) == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.to_dense_double(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    return out;
}

int zero_multiplicity(const SpectralData& spectrum) {
    return static_cast<int>(std::count_if(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                                          [&](double mu) { return std::abs(mu) <= spectrum.cluster_tolerance; }));
}

double heat_trace(const SpectralData& spectrum, double t) {
    if (!(t > 0)) throw DomainError("heat trace needs t > 0");
    double sum = 0.0;
    for (double mu : spectrum.eigenvalues) sum += std::exp(-t * std::max(mu, 0.0));
    return sum;
}

HeatTrace heat_trace(const SectionComplex& S, int j, double t, const SpectralOptions& opts) {
    check_degree(S, j);
    if (!(t > 0)) throw DomainError("heat trace needs t > 0");
    if (S.cell_count(j) <= opts.dense_cap) return {heat_trace(eigenvalues(S, j, opts), t), 0.0, "dense"};
    return heat_trace_stochastic(laplacian(S, j), t, opts.trace_probes, opts.seed);
}

std::vector<double> scaled_bessel_i_sequence(double x, int kmax) {
    if (x < 0) throw DomainError("scaled Bessel sequence needs x >= 0");
    std::vector<double> out(static_cast<std::size_t>(kmax + 1), 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    // start well above both kmax and x so the recurrence has settled
    const int start = kmax + 32 + static_cast<int>(std::ceil(x + 10.0 * std::sqrt(x + 1.0)));
    std::vector<double> v(static_cast<std::size_t>(start + 2), 0.0);
    v[static_cast<std::size_t>(start + 1)] = 0.0;
    v[static_cast<std::size_t>(start)] = 1e-300;
    double sum = 0.0;
    for (int k = start; k >= 1; --k) {
        v[static_cast<std::size_t>(k - 1)] =
            v[static_cast<std::size_t>(k + 1)] + (2.0 * k / x) * v[static_cast<std::size_t>(k)];
        if (v[static_cast<std::size_t>(k - 1)] > 1e250) {
            for (int i = k - 1; i <= start + 1; ++i) v[static_cast<std::size_t>(i)] *= 1e-250;
            sum *= 1e-250;
        }
        sum += 2.0 * v[static_cast<std::size_t>(k)];
    }
    sum += v[0];
    for (int k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k)] / sum;
    return out;
}

HeatTrace heat_trace_stochastic(const SparseIntMatrix& lap, double t, int probes, std::uint64_t seed) {
    if (!(t > 0)) throw DomainError("heat trace needs t > 0");
    if (probes < 2) throw DomainError("stochastic trace needs at least two probes");
    const int n = lap.rows();
    HeatTrace out;
    out.method = "chebyshev-hutchinson";
    if (n == 0) return out;

    // Gershgorin bound on the spectrum of a PSD matrix
    const double b = std::max(1.0, static_cast<double>(lap.norm1()));
    const double tau = t * b / 2.0;
    int degree = static_cast<int>(std::ceil(tau + 12.0 * std::sqrt(tau + 1.0) + 20.0));
    auto bessel = scaled_bessel_i_sequence(tau, degree);
    while (degree > 1 && bessel[static_cast<std::size_t>(degree)] < 1e-17) --degree;
    std::vector<double> coeff(static_cast<std::size_t>(degree + 1));
    coeff[0] = bessel[0];
    for (int k = 1; k <= degree; ++k) coeff[static_cast<std::size_t>(k)] = 2.0 * ((k % 2) ? -1.0 : 1.0) * bessel[static_cast<std::size_t>(k)];

    // y = (2/b) x - 1 maps [0, b] onto [-1, 1]
    const Eigen::SparseMatrix<double> A = lap.to_sparse_double();
    auto apply_y = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return (2.0 / b) * (A * v) - v; };

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(probes));
    for (int p = 0; p < probes; ++p) {
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z[i] = coin(rng) ? 1.0 : -1.0;
        Eigen::VectorXd prev = z;
        Eigen::VectorXd cur = apply_y(z);
        double acc = coeff[0] * z.dot(prev) + (degree >= 1 ? coeff[1] * z.dot(cur) : 0.0);
        for (int k = 2; k <= degree; ++k) {
            Eigen::VectorXd next = 2.0 * apply_y(cur) - prev;
            acc += coeff[static_cast<std::size_t>(k)] * z.dot(next);
            prev = std::move(cur);
            cur = std::move(next);
        }
        samples.push_back(acc);
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= probes;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (probes - 1);
    out.value = mean;
    out.standard_error = std::sqrt(var / probes);
    return out;
}

double heat_kernel_entry(const DenseSpectrum& spectrum, double t, int x, int y) {
    if (t < 0) throw DomainError("heat kernel needs t >= 0");
    const auto& V = spectrum.eigenvectors;
    if (x < 0 || y < 0 || x >= V.rows() || y >= V.rows()) throw DomainError("heat kernel cell index out of range");
    double sum = 0.0;
    for (Eigen::Index k = 0; k < V.cols(); ++k)
        sum += std::exp(-t * std::max(spectrum.data.eigenvalues[static_cast<std::size_t>(k)], 0.0)) * V(x, k) * V(y, k);
    return sum;
}

double heat_kernel_entry(const SectionComplex& S, int j, double t, int x, int y, const SpectralOptions& opts) {
    return heat_kernel_entry(dense_spectrum(S, j, opts), t, x, y);
}

int spectral_count(const SpectralData& spectrum, double lambda) {
    if (lambda < 0) throw DomainError("spectral count needs lambda >= 0");
    return static_cast<int>(std::count_if(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                                          [&](double mu) { return mu <= lambda + spectrum.cluster_tolerance; }));
}

int spectral_count(const SectionComplex& S, int j, double lambda, const SpectralOptions& opts) {
    return spectral_count(eigenvalues(S, j, opts), lambda);
}

std::vector<DenseSpectrum> all_spectra(const SectionComplex& S, const SpectralOptions& opts) {
    std::vector<DenseSpectrum> out;
    for (int j = 0; j <= S.dim(); ++j) out.push_back(dense_spectrum(S, j, opts));
    return out;
}

std::vector<EigenCluster> positive_clusters(const std::vector<DenseSpectrum>& spectra) {
    struct Tagged {
        double mu;
        int degree;
    };
    std::vector<Tagged> all;
    double tol = 0.0;
    for (const auto& sp : spectra) {
        tol = std::max(tol, sp.data.cluster_tolerance);
    }
    for (const auto& sp : spectra)
        for (double mu : sp.data.eigenvalues)
            if (mu > tol) all.push_back({mu, sp.data.degree});
    std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.mu < b.mu; });

    std::vector<EigenCluster> clusters;
    const std::size_t ndeg = spectra.size();
    for (std::size_t i = 0; i < all.size();) {
        std::size_t k = i + 1;
        while (k < all.size() && all[k].mu - all[k - 1].mu <= tol) ++k;
        EigenCluster c;
        c.lo = all[i].mu;
        c.hi = all[k - 1].mu;
        c.multiplicity.assign(ndeg, 0);
        double sum = 0.0;
        for (std::size_t x = i; x < k; ++x) {
            ++c.multiplicity[static_cast<std::size_t>(all[x].degree)];
            sum += all[x].mu;
        }
        c.center = sum / static_cast<double>(k - i);
        c.ambiguous = (c.hi - c.lo) > tol;
        clusters.push_back(std::move(c));
        i = k;
    }
    return clusters;
}

int dsum(const EigenCluster& cluster, int N) {
    if (cluster.ambiguous)
        throw DomainError("eigenvalue cluster near " + std::to_string(cluster.center) +
                          " is ambiguous at the clustering tolerance");
    if (N < 0) throw DomainError("dsum needs N >= 0");
    int sum = 0;
    for (int j = 0; j <= N && j < static_cast<int>(cluster.multiplicity.size()); ++j)
        sum += ((N - j) % 2 == 0 ? 1 : -1) * cluster.multiplicity[static_cast<std::size_t>(j)];
    return sum;
}

int dsum(const SectionComplex& S, double lambda, int N, const SpectralOptions& opts) {
    auto spectra = all_spectra(S, opts);
    for (const auto& c : positive_clusters(spectra)) {
        double tol = 0.0;
        for (const auto& sp : spectra) tol = std::max(tol, sp.data.cluster_tolerance);
        if (lambda >= c.lo - tol && lambda <= c.hi + tol) return dsum(c, N);
    }
    throw DomainError("no positive eigenvalue cluster at lambda = " + std::to_string(lambda));
}

namespace {

int numeric_rank(const Eigen::MatrixXd& m, double threshold) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++r;
    return r;
}

Eigen::MatrixXd cluster_basis(const DenseSpectrum& sp, const EigenCluster& c, double tol) {
    std::vector<Eigen::Index> idx;
    for (std::size_t k = 0; k < sp.data.eigenvalues.size(); ++k) {
        double mu = sp.data.eigenvalues[k];
        if (mu >= c.lo - tol && mu <= c.hi + tol) idx.push_back(static_cast<Eigen::Index>(k));
    }
    Eigen::MatrixXd basis(sp.eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = sp.eigenvectors.col(idx[k]);
    return basis;
}

}  // namespace

SupersymmetryReport supersymmetry_check(const SectionComplex& S, const std::vector<DenseSpectrum>& spectra) {
    SupersymmetryReport rep;
    if (S.dim() == 0) {
        rep.vacuous = true;
        rep.message = "0-dimensional complex";
        return rep;
    }
    double tol = 0.0;
    for (const auto& sp : spectra) tol = std::max(tol, sp.data.cluster_tolerance);
    // coboundary d_p = (boundary of degree p+1)^T
    std::vector<Eigen::MatrixXd> cob;
    for (int p = 0; p < S.dim(); ++p) cob.push_back(S.boundary(p + 1).transpose().to_dense_double());

    for (const auto& c : positive_clusters(spectra)) {
        if (c.ambiguous) {
            ++rep.ambiguous_clusters;
            rep.ok = false;
            rep.message = "ambiguous cluster near " + std::to_string(c.center);
            continue;
        }
        // ||d v||^2 = lambda on the coexact part and 0 on the exact part
        const double threshold = 0.5 * std::sqrt(c.lo);
        std::vector<Eigen::MatrixXd> bases;
        for (int p = 0; p <= S.dim(); ++p) bases.push_back(cluster_basis(spectra[static_cast<std::size_t>(p)], c, tol));
        for (int p = 0; p < S.dim(); ++p) {
            SupersymmetryPair pair;
            pair.lambda = c.center;
            pair.degree = p;
            const auto& Vp = bases[static_cast<std::size_t>(p)];
            const auto& Vq = bases[static_cast<std::size_t>(p + 1)];
            pair.coexact = Vp.cols() ? numeric_rank(cob[static_cast<std::size_t>(p)] * Vp, threshold) : 0;
            int rank_next = 0;
            if (p + 1 < S.dim() && Vq.cols()) rank_next = numeric_rank(cob[static_cast<std::size_t>(p + 1)] * Vq, threshold);
            pair.exact_next = static_cast<int>(Vq.cols()) - rank_next;
            if (pair.coexact != pair.exact_next) {
                rep.ok = false;
                rep.message = "pairing fails at lambda=" + std::to_string(c.center) + " degree " + std::to_string(p);
            }
            if (pair.coexact || pair.exact_next) rep.pairs.push_back(pair);
        }
    }
    if (rep.ok && rep.pairs.empty()) rep.vacuous = true;
    return rep;
}

SupersymmetryReport supersymmetry_check(const SectionComplex& S, const SpectralOptions& opts) {
    return supersymmetry_check(S, all_spectra(S, opts));
}

std::complex<double> zeta_finite(const SpectralData& spectrum, std::complex<double> s, double lambda,
                                 double normalization) {
    if (!(lambda > 0)) throw DomainError("zeta needs lambda > 0");
    if (!(normalization > 0)) throw DomainError("zeta normalization must be positive");
    std::complex<double> sum = 0.0;
    for (double mu : spectrum.eigenvalues)
        if (mu > spectrum.cluster_tolerance) sum += std::exp(-s * std::log(mu + lambda));
    return sum / normalization;
}

std::complex<double> zeta_finite(const SectionComplex& S, int j, std::complex<double> s, double lambda,
                                 double normalization, const SpectralOptions& opts) {
    return zeta_finite(eigenvalues(S, j, opts), s, lambda, normalization);
}

}  // namespace l2lab
