#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "l2lab/errors.hpp"
#include "l2lab/section.hpp"
#include "oracles.hpp"
#include "random_sets.hpp"

#include <cstdlib>

using namespace l2lab;

namespace {

SectionComplex section(const std::string& name, int L, BoundaryCondition bc) {
    auto X = builtin_complex(name);
    return build_section(X, folner_box(X.spec, L), bc);
}

}  // namespace

TEST_CASE("circle sections") {
    auto abs = section("circle_Z", 5, BoundaryCondition::Absolute);
    CHECK(abs.cell_count(0) == 6);
    CHECK(abs.cell_count(1) == 5);
    // path graph incidence: edge k joins vertices k and k+1
    for (int k = 0; k < 5; ++k) {
        CHECK(abs.boundary(1).at(k, k) == -1);
        CHECK(abs.boundary(1).at(k + 1, k) == 1);
    }
    CHECK(abs.cells(0).back() == Cell{0, GroupElement{5}});

    auto rel = section("circle_Z", 5, BoundaryCondition::Relative);
    CHECK(rel.cell_count(0) == 5);
    CHECK(rel.cell_count(1) == 5);
    CHECK(rel.boundary(1).nonzeros() == 9);
    CHECK(rel.boundary(1).at(4, 4) == -1);
    CHECK(rel.folner_size() == 5);
    CHECK(abs.folner_size() == 5);
}

TEST_CASE("torus unit box relative boundaries") {
    auto S = section("torus2_Z2", 1, BoundaryCondition::Relative);
    CHECK(cell_counts(S).counts == std::vector<std::size_t>{1, 2, 1});
    // d2 = (1 - b, a - 1): the b- and a-translates leave F
    CHECK(S.boundary(2).at(0, 0) == 1);
    CHECK(S.boundary(2).at(1, 0) == -1);
    CHECK(S.boundary(1).at(0, 0) == -1);
    CHECK(S.boundary(1).at(0, 1) == -1);
    CHECK((S.boundary(1) * S.boundary(2)).is_zero());
}

TEST_CASE("cell counts") {
    auto rel = cell_counts(section("circle_Z", 5, BoundaryCondition::Relative));
    CHECK(rel.counts == std::vector<std::size_t>{5, 5});
    CHECK(rel.euler == 0);
    auto abs = cell_counts(section("circle_Z", 5, BoundaryCondition::Absolute));
    CHECK(abs.counts == std::vector<std::size_t>{6, 5});
    CHECK(abs.euler == 1);
    for (int L : {1, 2, 5, 9}) {
        auto t = cell_counts(section("torus2_Z2", L, BoundaryCondition::Relative));
        std::size_t n = static_cast<std::size_t>(L * L);
        CHECK(t.counts == std::vector<std::size_t>{n, 2 * n, n});
        CHECK(t.euler == 0);
    }
    // absolute torus box: the closed (L+1)^2 grid
    auto ta = cell_counts(section("torus2_Z2", 4, BoundaryCondition::Absolute));
    CHECK(ta.counts == std::vector<std::size_t>{25, 40, 16});
    CHECK(ta.euler == 1);
}

TEST_CASE("euler characteristic per cell tends to chi") {
    for (auto bc : {BoundaryCondition::Relative, BoundaryCondition::Absolute}) {
        double prev = 1e9;
        for (int L : {2, 3, 4}) {
            auto S = section("surface_genus(2)_Z4", L, bc);
            double gap = std::abs(static_cast<double>(cell_counts(S).euler) / static_cast<double>(S.folner_size()) + 2.0);
            CHECK(gap <= 8.0 / L);
            CHECK(gap <= prev);
            prev = gap;
        }
    }
    for (int L : {2, 4, 6}) CHECK(cell_counts(section("torus3_Z3", L, BoundaryCondition::Relative)).euler == 0);
}

TEST_CASE("relative and absolute counts differ by a boundary layer") {
    for (const char* name : {"torus2_Z2", "torus3_Z3", "heisenberg_manifold"}) {
        auto X = builtin_complex(name);
        for (int L : {2, 3}) {
            auto F = folner_box(X.spec, L);
            auto rel = cell_counts(build_section(X, F, BoundaryCondition::Relative));
            auto abs = cell_counts(build_section(X, F, BoundaryCondition::Absolute));
            auto layer = boundary_layer(F, 1).size();
            for (std::size_t j = 0; j < rel.counts.size(); ++j) {
                CHECK(abs.counts[j] >= rel.counts[j]);
                CHECK(abs.counts[j] - rel.counts[j] <= layer * static_cast<std::size_t>(X.orbit_counts[j]));
            }
        }
    }
}

TEST_CASE("sections are chain complexes") {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (const auto& name : builtin_complex_names()) {
        auto X = builtin_complex(name);
        for (int trial = 0; trial < 10; ++trial) {
            auto blob = testing_support::random_connected_set(X.spec, 3 + 4 * static_cast<std::size_t>(trial), rng);
            auto box = testing_support::random_box(X.spec, 4, rng);
            for (auto [F, bc] : {std::pair{&blob, BoundaryCondition::Absolute}, std::pair{&box, BoundaryCondition::Relative},
                                 std::pair{&box, BoundaryCondition::Absolute}}) {
                auto S = build_section(X, *F, bc);
                CHECK_FALSE(find_nonzero_composite(S).has_value());
                for (int j = 1; j < S.dim(); ++j) REQUIRE((S.boundary(j) * S.boundary(j + 1)).is_zero());
                ++checked;
            }
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("relative sections need the exterior to stay outside") {
    // the exterior edge from (1,1) to (2,1) ends back inside the U
    auto X = builtin_complex("torus2_Z2");
    FolnerSet U(X.spec, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}}, "U");
    CHECK_THROWS_AS(build_section(X, U, BoundaryCondition::Relative), ValidationError);
    CHECK_NOTHROW(build_section(X, U, BoundaryCondition::Absolute));
}

TEST_CASE("nesting of relative sections") {
    auto X = builtin_complex("torus2_Z2");
    for (int L = 1; L < 5; ++L) {
        auto small = build_section(X, folner_box(X.spec, L), BoundaryCondition::Relative);
        auto large = build_section(X, folner_box(X.spec, L + 1), BoundaryCondition::Relative);
        for (int j = 0; j <= 2; ++j)
            for (const auto& c : small.cells(j)) CHECK(large.cell_index(j, c).has_value());
    }
}

TEST_CASE("cell ordering and lookup") {
    auto S = section("torus2_Z2", 3, BoundaryCondition::Relative);
    const auto& edges = S.cells(1);
    CHECK(std::is_sorted(edges.begin(), edges.end()));
    CHECK(edges.front().orbit == 0);
    CHECK(edges.back().orbit == 1);
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) CHECK(S.cell_index(1, edges[static_cast<std::size_t>(i)]) == i);
    CHECK_FALSE(S.cell_index(1, Cell{0, GroupElement{5, 5}}).has_value());
}

TEST_CASE("group mismatch is a domain error") {
    auto X = builtin_complex("torus2_Z2");
    CHECK_THROWS_AS(build_section(X, folner_box(GroupSpec::free_abelian(1), 3), BoundaryCondition::Relative),
                    DomainError);
    CHECK(parse_boundary_condition("absolute") == BoundaryCondition::Absolute);
    CHECK(to_string(BoundaryCondition::Relative) == "relative");
    CHECK_THROWS(parse_boundary_condition("dirichlet-ish"));
}

TEST_CASE("exact rank agrees with rational elimination") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> val(-3, 3), dim(1, 9);
    for (int trial = 0; trial < 200; ++trial) {
        int r = dim(rng), c = dim(rng);
        std::vector<std::tuple<int, int, std::int64_t>> trip;
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < c; ++k)
                if (val(rng) > 1) trip.emplace_back(i, k, val(rng));
        auto m = SparseIntMatrix::from_triplets(r, c, trip);
        int expected = oracle::rational_rank(m);
        REQUIRE(exact_rank(m) == expected);
        REQUIRE(rank_bareiss(m) == expected);
    }
    auto S = section("surface_genus(2)_Z4", 2, BoundaryCondition::Absolute);
    CHECK(exact_rank(S.boundary(1)) == oracle::rational_rank(S.boundary(1)));
    CHECK(exact_rank(S.boundary(2)) == oracle::rational_rank(S.boundary(2)));
}

TEST_CASE("sparse integer matrix algebra") {
    auto a = SparseIntMatrix::from_triplets(2, 3, {{0, 0, 1}, {1, 2, -2}, {0, 0, 1}});
    CHECK(a.at(0, 0) == 2);
    CHECK(a.nonzeros() == 2);
    CHECK(a.transpose().at(2, 1) == -2);
    CHECK((a * a.transpose()).at(1, 1) == 4);
    CHECK(a.norm1() == 2);
    CHECK((a + a).at(1, 2) == -4);
}
