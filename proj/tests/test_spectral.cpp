#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "l2lab/errors.hpp"
#include "l2lab/spectral.hpp"
#include "oracles.hpp"
#include "random_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace l2lab;

namespace {

SectionComplex section(const std::string& name, int L, BoundaryCondition bc) {
    auto X = builtin_complex(name);
    return build_section(X, folner_box(X.spec, L), bc);
}

std::vector<SectionComplex> small_sections() {
    std::vector<SectionComplex> out;
    for (auto bc : {BoundaryCondition::Relative, BoundaryCondition::Absolute}) {
        out.push_back(section("circle_Z", 7, bc));
        out.push_back(section("torus2_Z2", 4, bc));
        out.push_back(section("torus3_Z3", 2, bc));
        out.push_back(section("surface_genus(2)_Z4", 2, bc));
        out.push_back(section("wedge2_F2", 3, bc));
        out.push_back(section("heisenberg_manifold", 2, bc));
    }
    return out;
}

}  // namespace

TEST_CASE("laplacian assembly") {
    auto abs = laplacian(section("circle_Z", 2, BoundaryCondition::Absolute), 0);
    CHECK(abs == SparseIntMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 2}, {2, 2, 1}, {0, 1, -1}, {1, 0, -1},
                                                       {1, 2, -1}, {2, 1, -1}}));
    // edge 1 loses its far vertex, so vertex 0 keeps degree one
    auto rel = laplacian(section("circle_Z", 2, BoundaryCondition::Relative), 0);
    CHECK(rel == SparseIntMatrix::from_triplets(2, 2, {{0, 0, 1}, {1, 1, 2}, {0, 1, -1}, {1, 0, -1}}));
    for (const auto& S : small_sections())
        for (int j = 0; j <= S.dim(); ++j) {
            auto D = laplacian(S, j);
            CHECK(D == D.transpose());
        }
    CHECK_THROWS_AS(laplacian(section("circle_Z", 2, BoundaryCondition::Absolute), 2), DomainError);
}

TEST_CASE("betti examples") {
    for (int L = 1; L <= 8; ++L) {
        auto abs = betti_numbers(section("circle_Z", L, BoundaryCondition::Absolute));
        CHECK(abs.values == std::vector<int>{1, 0});
        auto rel = section("circle_Z", L, BoundaryCondition::Relative);
        CHECK(betti_numbers(rel).values == std::vector<int>{0, 0});
        CHECK(oracle::rational_rank(rel.boundary(1)) == L);
    }
    for (int r = 1; r <= 5; ++r) {
        auto S = section("wedge2_F2", r, BoundaryCondition::Absolute);
        CHECK(betti_numbers(S).values == std::vector<int>{1, 0});
        CHECK(oracle::rational_rank(S.boundary(1)) == static_cast<int>(S.cell_count(0)) - 1);
    }
    auto torus = betti_numbers(section("torus2_Z2", 3, BoundaryCondition::Absolute));
    CHECK(torus.values == std::vector<int>{1, 0, 0});
    CHECK(torus.condition == BoundaryCondition::Absolute);
}

TEST_CASE("betti vectors are consistent with euler") {
    for (const auto& S : small_sections()) {
        auto b = betti_numbers(S);
        long long alt = 0;
        for (int j = 0; j <= S.dim(); ++j) {
            CHECK(b.values[static_cast<std::size_t>(j)] >= 0);
            alt += (j % 2 ? -1 : 1) * b.values[static_cast<std::size_t>(j)];
        }
        CHECK(alt == cell_counts(S).euler);
    }
}

TEST_CASE("eigenvalues match closed forms") {
    auto rel = eigenvalues(section("circle_Z", 2, BoundaryCondition::Relative), 0);
    REQUIRE(rel.eigenvalues.size() == 2);
    CHECK(rel.eigenvalues[0] == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(rel.eigenvalues[1] == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));

    auto abs = eigenvalues(section("circle_Z", 2, BoundaryCondition::Absolute), 0);
    CHECK(abs.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(abs.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(abs.eigenvalues[2] == doctest::Approx(3.0));

    for (int L : {3, 10, 25}) {
        auto r = eigenvalues(section("circle_Z", L, BoundaryCondition::Relative), 0).eigenvalues;
        auto expected = oracle::relative_circle_spectrum(L);
        std::sort(expected.begin(), expected.end());
        for (std::size_t k = 0; k < r.size(); ++k) CHECK(r[k] == doctest::Approx(expected[k]).epsilon(1e-10));
        auto a = eigenvalues(section("circle_Z", L, BoundaryCondition::Absolute), 0).eigenvalues;
        auto path = oracle::path_spectrum(L + 1);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(path[k]).epsilon(1e-10).scale(1));
    }
}

TEST_CASE("spectral data invariants") {
    for (const auto& S : small_sections())
        for (int j = 0; j <= S.dim(); ++j) {
            auto spec = eigenvalues(S, j);
            CHECK(spec.eigenvalues.size() == S.cell_count(j));
            CHECK(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));
            if (!spec.eigenvalues.empty()) CHECK(spec.eigenvalues.front() >= -spec.tolerance);
            CHECK(zero_multiplicity(spec) == betti(S, j));
        }
}

TEST_CASE("dense cap is enforced") {
    SpectralOptions opts;
    opts.dense_cap = 10;
    CHECK_THROWS_AS(eigenvalues(section("circle_Z", 20, BoundaryCondition::Relative), 0, opts), CapExceededError);
}

TEST_CASE("heat trace examples") {
    auto S = section("circle_Z", 2, BoundaryCondition::Relative);
    double expected = std::exp(-(3 - std::sqrt(5.0)) / 2) + std::exp(-(3 + std::sqrt(5.0)) / 2);
    auto h = heat_trace(S, 0, 1.0);
    CHECK(h.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(h.method == "dense");

    for (const auto& T : small_sections())
        for (int j = 0; j <= T.dim(); ++j) {
            CHECK(std::abs(heat_trace(T, j, 1e-6).value - static_cast<double>(T.cell_count(j))) <= 1e-3);
            auto spec = eigenvalues(T, j);
            auto gap = std::find_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                    [&](double x) { return x > spec.cluster_tolerance; });
            if (gap == spec.eigenvalues.end() || *gap >= 0.5)
                CHECK(std::abs(heat_trace(T, j, 50.0).value - betti(T, j)) <= 1e-6);
        }
}

TEST_CASE("mckean singer") {
    for (const auto& S : small_sections())
        for (double t : {0.1, 1.0, 10.0}) {
            double alt = 0.0;
            for (int j = 0; j <= S.dim(); ++j) alt += (j % 2 ? -1.0 : 1.0) * heat_trace(S, j, t).value;
            CHECK(std::abs(alt - static_cast<double>(cell_counts(S).euler)) <= 1e-8);
        }
}

TEST_CASE("heat trace is decreasing, convex, and bounds the partial betti sums") {
    std::vector<double> ts;
    for (int k = 0; k <= 20; ++k) ts.push_back(0.05 * std::pow(1.4, k));
    for (const auto& S : small_sections()) {
        for (int j = 0; j <= S.dim(); ++j) {
            auto spec = eigenvalues(S, j);
            if (zero_multiplicity(spec) == static_cast<int>(spec.eigenvalues.size())) continue;
            for (std::size_t k = 0; k + 2 < ts.size(); ++k) {
                double a = heat_trace(spec, ts[k]), b = heat_trace(spec, ts[k + 1]), c = heat_trace(spec, ts[k + 2]);
                CHECK(b < a);
                double w = (ts[k + 2] - ts[k + 1]) / (ts[k + 2] - ts[k]);
                CHECK(b <= w * a + (1 - w) * c + 1e-12);
            }
        }
        for (int N = 0; N <= S.dim(); ++N)
            for (double t : ts) {
                double lhs = 0.0;
                long long rhs = 0;
                for (int j = 0; j <= N; ++j) {
                    int sign = (N - j) % 2 ? -1 : 1;
                    lhs += sign * heat_trace(S, j, t).value;
                    rhs += sign * betti(S, j);
                }
                CHECK(lhs >= static_cast<double>(rhs) - 1e-8);
            }
    }
}

TEST_CASE("heat kernel entries") {
    auto S = section("torus2_Z2", 3, BoundaryCondition::Absolute);
    auto D = dense_spectrum(S, 1);
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y)
            CHECK(std::abs(heat_kernel_entry(D, 0.7, x, y) - heat_kernel_entry(D, 0.7, y, x)) <= 1e-10);
    CHECK(heat_kernel_entry(D, 1e-9, 3, 3) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(heat_kernel_entry(D, 1e-9, 3, 4)) <= 1e-6);
    double diag = 0.0;
    for (int x = 0; x < static_cast<int>(S.cell_count(1)); ++x) diag += heat_kernel_entry(D, 2.0, x, x);
    CHECK(diag == doctest::Approx(heat_trace(S, 1, 2.0).value).epsilon(1e-12));
}

TEST_CASE("spectral counting") {
    auto S = section("circle_Z", 2, BoundaryCondition::Relative);
    CHECK(spectral_count(S, 0, 2.0) == 1);
    CHECK(spectral_count(S, 0, 0.0) == 0);
    for (const auto& T : small_sections())
        for (int j = 0; j <= T.dim(); ++j) {
            auto spec = eigenvalues(T, j);
            CHECK(spectral_count(spec, 0.0) == betti(T, j));
            double top = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back();
            CHECK(spectral_count(spec, top) == static_cast<int>(T.cell_count(j)));
            int prev = 0;
            for (double lam = 0.0; lam <= top + 0.5; lam += 0.25) {
                int n = spectral_count(spec, lam);
                CHECK(n >= prev);
                prev = n;
            }
        }
}

TEST_CASE("alternating eigenspace sums") {
    auto circle = section("circle_Z", 2, BoundaryCondition::Relative);
    auto clusters = positive_clusters(all_spectra(circle));
    REQUIRE(clusters.size() == 2);
    for (const auto& c : clusters) {
        CHECK(c.multiplicity == std::vector<int>{1, 1});
        CHECK(dsum(c, 0) == 1);
        CHECK(dsum(c, 1) == 0);
    }
    CHECK(dsum(circle, (3 + std::sqrt(5.0)) / 2, 1) == 0);
    CHECK_THROWS_AS(dsum(circle, 2.0, 1), DomainError);

    for (const auto& S : small_sections())
        for (const auto& c : positive_clusters(all_spectra(S))) {
            CHECK_FALSE(c.ambiguous);
            for (int N = 0; N <= S.dim(); ++N) CHECK(dsum(c, N) >= 0);
            CHECK(dsum(c, S.dim()) == 0);
        }
}

TEST_CASE("supersymmetry pairing") {
    auto circle = supersymmetry_check(section("circle_Z", 2, BoundaryCondition::Relative));
    CHECK(circle.ok);
    CHECK(circle.pairs.size() == 2);
    CHECK(supersymmetry_check(section("torus2_Z2", 2, BoundaryCondition::Relative)).ok);
    for (const auto& S : small_sections()) {
        auto report = supersymmetry_check(S);
        CHECK(report.ok);
        for (const auto& p : report.pairs) CHECK(p.coexact == p.exact_next);
    }
    auto X = builtin_complex("circle_Z");
    X.orbit_counts = {1};
    X.boundaries.resize(1);
    X.euler_characteristic = 1;
    auto point = build_section(X, folner_box(X.spec, 3), BoundaryCondition::Relative);
    auto vac = supersymmetry_check(point);
    CHECK(vac.ok);
    CHECK(vac.vacuous);
}

TEST_CASE("finite zeta") {
    auto S = section("circle_Z", 2, BoundaryCondition::Relative);
    // eigenvalue product 1 and sum 3 make 1/(1+a) + 1/(1+b) = 1
    CHECK(zeta_finite(S, 0, 1.0, 1.0, 2.0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(zeta_finite(S, 0, 0.0, 1.0, 2.0).real() == doctest::Approx(1.0));
    auto T = section("torus2_Z2", 3, BoundaryCondition::Absolute);
    for (int j = 0; j <= 2; ++j) {
        auto spec = eigenvalues(T, j);
        std::complex<double> s(1.7, 0.4);
        std::complex<double> brute = 0.0;
        for (double mu : spec.eigenvalues)
            if (mu > spec.cluster_tolerance) brute += std::pow(mu + 0.3, -s);
        brute /= 9.0;
        CHECK(std::abs(zeta_finite(T, j, s, 0.3, 9.0) - brute) <= 1e-12);
        double cells = static_cast<double>(T.cell_count(j) - static_cast<std::size_t>(betti(T, j)));
        CHECK(zeta_finite(T, j, 0.0, 0.3, 9.0).real() == doctest::Approx(cells / 9.0));
        // dominated decay for large lambda
        CHECK(zeta_finite(T, j, 2.0, 1e6, 9.0).real() * 1e12 == doctest::Approx(cells / 9.0).epsilon(1e-4));
    }
}

TEST_CASE("scaled bessel sequence") {
    for (double x : {0.2, 1.0, 2.0, 7.5}) {
        auto seq = scaled_bessel_i_sequence(x, 12);
        for (int k = 0; k <= 12; ++k)
            CHECK(seq[static_cast<std::size_t>(k)] ==
                  doctest::Approx(std::exp(-x) * oracle::bessel_i_series(k, x)).epsilon(1e-12));
    }
}

TEST_CASE("stochastic trace agrees with the dense trace") {
    for (auto bc : {BoundaryCondition::Relative, BoundaryCondition::Absolute}) {
        auto S = section("torus2_Z2", 12, bc);
        auto L = laplacian(S, 1);
        for (double t : {0.1, 1.0, 5.0}) {
            auto est = heat_trace_stochastic(L, t, 256, 11);
            double exact = heat_trace(S, 1, t).value;
            CHECK(est.standard_error > 0.0);
            CHECK(std::abs(est.value - exact) <= 4.0 * est.standard_error + 1e-9);
            CHECK(std::abs(est.value - exact) / static_cast<double>(L.rows()) <= 0.02);
        }
        auto again = heat_trace_stochastic(L, 1.0, 64, 11);
        CHECK(again.value == heat_trace_stochastic(L, 1.0, 64, 11).value);
    }
    SpectralOptions opts;
    opts.dense_cap = 50;
    auto S = section("torus2_Z2", 8, BoundaryCondition::Relative);
    auto h = heat_trace(S, 0, 1.0, opts);
    CHECK(h.method == "chebyshev-hutchinson");
    CHECK(std::abs(h.value - heat_trace(S, 0, 1.0).value) <= 4.0 * h.standard_error + 1e-9);
}
