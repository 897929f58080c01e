#pragma once

#include "l2lab/folner.hpp"
#include "l2lab/groups.hpp"

#include <random>
#include <set>

namespace testing_support {

/// Random connected set containing the identity, grown one neighbor at a time.
inline l2lab::FolnerSet random_connected_set(const l2lab::GroupSpec& spec, std::size_t size, std::mt19937_64& rng) {
    std::set<l2lab::GroupElement> members{l2lab::identity(spec)};
    std::vector<l2lab::GroupElement> order{l2lab::identity(spec)};
    auto gens = l2lab::directed_generators(spec);
    while (members.size() < size) {
        const auto& base = order[std::uniform_int_distribution<std::size_t>(0, order.size() - 1)(rng)];
        auto next = l2lab::multiply(spec, base, gens[std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng)]);
        if (members.insert(next).second) order.push_back(next);
    }
    return l2lab::FolnerSet(spec, order, "random");
}

/// Random coordinate box containing the identity, prod_i [-a_i, b_i], for free
/// abelian specs; a standard box of random side for Heisenberg and F2.
inline l2lab::FolnerSet random_box(const l2lab::GroupSpec& spec, int max_side, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> side(0, max_side - 1);
    if (!spec.abelian()) return l2lab::folner_box(spec, 1 + side(rng) % 3);
    int n = spec.arity();
    std::vector<int> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        lo[static_cast<std::size_t>(i)] = -side(rng) / 2;
        hi[static_cast<std::size_t>(i)] = side(rng);
    }
    std::vector<l2lab::GroupElement> elems;
    std::vector<std::int64_t> x(lo.begin(), lo.end());
    while (true) {
        elems.emplace_back(x);
        int i = n - 1;
        while (i >= 0 && ++x[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) {
            x[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
            --i;
        }
        if (i < 0) break;
    }
    return l2lab::FolnerSet(spec, elems, "random box");
}

}  // namespace testing_support
