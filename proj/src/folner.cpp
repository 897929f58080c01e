#include "l2lab/folner.hpp"

#include "l2lab/errors.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace l2lab {

namespace {

using ElementSet = std::unordered_set<GroupElement, GroupElementHash>;
using DistanceMap = std::unordered_map<GroupElement, int, GroupElementHash>;

// Multi-source breadth-first search out to max_depth.
DistanceMap bfs(const GroupSpec& spec, const std::vector<GroupElement>& sources, int max_depth) {
    const auto gens = directed_generators(spec);
    DistanceMap dist;
    std::deque<GroupElement> queue;
    for (const auto& s : sources) {
        if (dist.emplace(s, 0).second) queue.push_back(s);
    }
    while (!queue.empty()) {
        GroupElement g = std::move(queue.front());
        queue.pop_front();
        int d = dist.at(g);
        if (d == max_depth) continue;
        for (const auto& s : gens) {
            GroupElement h = multiply(spec, g, s);
            if (dist.emplace(h, d + 1).second) queue.push_back(std::move(h));
        }
    }
    return dist;
}

}  // namespace

FolnerSet::FolnerSet(GroupSpec spec, std::vector<GroupElement> elements, std::string label)
    : spec_(spec), elements_(std::move(elements)), label_(std::move(label)) {
    if (elements_.empty()) throw DomainError("Folner set must be nonempty");
    for (const auto& g : elements_) check_element(spec_, g);
    std::sort(elements_.begin(), elements_.end());
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
        throw DomainError("Folner set elements must be distinct");
    members_.insert(elements_.begin(), elements_.end());
    if (!contains(identity(spec_))) throw DomainError("Folner set must contain the identity");

    // connectivity inside F
    const auto gens = directed_generators(spec_);
    ElementSet seen{identity(spec_)};
    std::deque<GroupElement> queue{identity(spec_)};
    while (!queue.empty()) {
        GroupElement g = std::move(queue.front());
        queue.pop_front();
        for (const auto& s : gens) {
            GroupElement h = multiply(spec_, g, s);
            if (contains(h) && seen.insert(h).second) queue.push_back(std::move(h));
        }
    }
    if (seen.size() != elements_.size())
        throw DomainError("Folner set is not connected in the Cayley graph");
}

FolnerSet folner_box(const GroupSpec& spec, int L) {
    if (L < 1) throw DomainError("Folner parameter must be >= 1");
    std::vector<GroupElement> elems;
    switch (spec.family) {
        case GroupFamily::FreeAbelian: {
            const int d = spec.rank;
            std::vector<std::int64_t> c(static_cast<std::size_t>(d), 0);
            while (true) {
                elems.emplace_back(c);
                int i = d - 1;
                while (i >= 0 && ++c[static_cast<std::size_t>(i)] == L) {
                    c[static_cast<std::size_t>(i)] = 0;
                    --i;
                }
                if (i < 0) break;
            }
            return FolnerSet(spec, std::move(elems), "box L=" + std::to_string(L));
        }
        case GroupFamily::Heisenberg3: {
            const std::int64_t L2 = static_cast<std::int64_t>(L) * L;
            for (std::int64_t a = 0; a < L; ++a)
                for (std::int64_t b = 0; b < L; ++b)
                    for (std::int64_t c = 0; c < L2; ++c) elems.push_back(GroupElement{a, b, c});
            return FolnerSet(spec, std::move(elems), "box L=" + std::to_string(L));
        }
        case GroupFamily::FreeGroup2: {
            auto dist = bfs(spec, {identity(spec)}, L);
            for (auto& [g, d] : dist) elems.push_back(g);
            return FolnerSet(spec, std::move(elems), "ball r=" + std::to_string(L));
        }
    }
    throw DomainError("unknown group family");
}

std::vector<GroupElement> boundary_layer(const FolnerSet& F, int delta) {
    if (delta < 1) throw DomainError("boundary layer width must be >= 1");
    const auto& spec = F.spec();
    const auto gens = directed_generators(spec);

    std::vector<GroupElement> inner;
    for (const auto& g : F.elements()) {
        for (const auto& s : gens) {
            if (!F.contains(multiply(spec, g, s))) {
                inner.push_back(g);
                break;
            }
        }
    }

    ElementSet layer;
    for (const auto& [g, d] : bfs(spec, inner, delta - 1)) {
        if (F.contains(g)) layer.insert(g);
    }
    for (const auto& [g, d] : bfs(spec, F.elements(), delta)) {
        if (!F.contains(g)) layer.insert(g);
    }
    std::vector<GroupElement> out(layer.begin(), layer.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t edge_boundary_size(const FolnerSet& F) {
    const auto gens = directed_generators(F.spec());
    std::size_t count = 0;
    for (const auto& g : F.elements())
        for (const auto& s : gens)
            if (!F.contains(multiply(F.spec(), g, s))) ++count;
    return count;
}

double cheeger_ratio(const FolnerSet& F) {
    if (F.size() == 0) throw DomainError("cheeger ratio of an empty set");
    return static_cast<double>(edge_boundary_size(F)) / static_cast<double>(F.size());
}

int distance_to_complement(const FolnerSet& F, const GroupElement& g) {
    if (!F.contains(g)) return 0;
    const auto gens = directed_generators(F.spec());
    DistanceMap dist{{g, 0}};
    std::deque<GroupElement> queue{g};
    while (!queue.empty()) {
        GroupElement x = std::move(queue.front());
        queue.pop_front();
        int d = dist.at(x);
        for (const auto& s : gens) {
            GroupElement y = multiply(F.spec(), x, s);
            if (!F.contains(y)) return d + 1;
            if (dist.emplace(y, d + 1).second) queue.push_back(std::move(y));
        }
    }
    throw DomainError("Folner set has no complement");  // unreachable for infinite groups
}

int word_distance(const GroupSpec& spec, const GroupElement& g, const GroupElement& h,
                  int max_radius) {
    GroupElement target = multiply(spec, inverse(spec, g), h);
    if (is_identity(spec, target)) return 0;
    auto dist = bfs(spec, {identity(spec)}, max_radius);
    auto it = dist.find(target);
    if (it == dist.end()) throw DomainError("word distance exceeds search radius");
    return it->second;
}

}  // namespace l2lab
