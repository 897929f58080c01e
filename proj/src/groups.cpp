#include "l2lab/groups.hpp"

#include "l2lab/errors.hpp"

#include <sstream>

namespace l2lab {

GroupSpec GroupSpec::free_abelian(int d) {
    if (d < 1) throw DomainError("free abelian rank must be positive");
    return GroupSpec{GroupFamily::FreeAbelian, d};
}

GroupSpec GroupSpec::heisenberg() { return GroupSpec{GroupFamily::Heisenberg3, 3}; }

GroupSpec GroupSpec::free_group2() { return GroupSpec{GroupFamily::FreeGroup2, 2}; }

int GroupSpec::arity() const {
    switch (family) {
        case GroupFamily::FreeAbelian: return rank;
        case GroupFamily::Heisenberg3: return 3;
        case GroupFamily::FreeGroup2: return -1;
    }
    return -1;
}

std::string GroupSpec::name() const {
    switch (family) {
        case GroupFamily::FreeAbelian: return "free_abelian " + std::to_string(rank);
        case GroupFamily::Heisenberg3: return "heisenberg";
        case GroupFamily::FreeGroup2: return "free_group2";
    }
    return {};
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
    // FNV-1a over the coordinates
    std::uint64_t h = 1469598103934665603ULL;
    for (std::int64_t c : g.coords) {
        auto u = static_cast<std::uint64_t>(c);
        for (int i = 0; i < 8; ++i) {
            h ^= (u >> (8 * i)) & 0xffU;
            h *= 1099511628211ULL;
        }
    }
    return static_cast<std::size_t>(h);
}

GroupElement identity(const GroupSpec& spec) {
    if (spec.family == GroupFamily::FreeGroup2) return GroupElement{};
    return GroupElement(std::vector<std::int64_t>(static_cast<std::size_t>(spec.arity()), 0));
}

bool is_identity(const GroupSpec& spec, const GroupElement& g) { return g == identity(spec); }

void check_element(const GroupSpec& spec, const GroupElement& g) {
    if (spec.family == GroupFamily::FreeGroup2) {
        for (std::size_t i = 0; i < g.coords.size(); ++i) {
            std::int64_t l = g.coords[i];
            if (l != kLetterX && l != -kLetterX && l != kLetterY && l != -kLetterY)
                throw InvalidElementError("free group word contains an invalid letter");
            if (i > 0 && g.coords[i - 1] == -l)
                throw InvalidElementError("free group word is not reduced");
        }
        return;
    }
    if (static_cast<int>(g.coords.size()) != spec.arity()) {
        throw InvalidElementError("element has " + std::to_string(g.coords.size()) +
                                  " coordinates, group " + spec.name() + " needs " +
                                  std::to_string(spec.arity()));
    }
}

GroupElement multiply(const GroupSpec& spec, const GroupElement& g, const GroupElement& h) {
    check_element(spec, g);
    check_element(spec, h);
    switch (spec.family) {
        case GroupFamily::FreeAbelian: {
            GroupElement r = g;
            for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += h.coords[i];
            return r;
        }
        case GroupFamily::Heisenberg3: {
            const auto& a = g.coords;
            const auto& b = h.coords;
            return GroupElement{a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]};
        }
        case GroupFamily::FreeGroup2: {
            std::vector<std::int64_t> word = g.coords;
            for (std::int64_t l : h.coords) {
                if (!word.empty() && word.back() == -l)
                    word.pop_back();
                else
                    word.push_back(l);
            }
            return GroupElement(std::move(word));
        }
    }
    return {};
}

GroupElement inverse(const GroupSpec& spec, const GroupElement& g) {
    check_element(spec, g);
    switch (spec.family) {
        case GroupFamily::FreeAbelian: {
            GroupElement r = g;
            for (auto& c : r.coords) c = -c;
            return r;
        }
        case GroupFamily::Heisenberg3: {
            const auto& a = g.coords;
            return GroupElement{-a[0], -a[1], -a[2] + a[0] * a[1]};
        }
        case GroupFamily::FreeGroup2: {
            std::vector<std::int64_t> word(g.coords.rbegin(), g.coords.rend());
            for (auto& l : word) l = -l;
            return GroupElement(std::move(word));
        }
    }
    return {};
}

std::vector<GroupElement> positive_generators(const GroupSpec& spec) {
    std::vector<GroupElement> gens;
    switch (spec.family) {
        case GroupFamily::FreeAbelian:
            for (int i = 0; i < spec.rank; ++i) {
                GroupElement e = identity(spec);
                e.coords[static_cast<std::size_t>(i)] = 1;
                gens.push_back(std::move(e));
            }
            break;
        case GroupFamily::Heisenberg3:
            gens.push_back(GroupElement{1, 0, 0});
            gens.push_back(GroupElement{0, 1, 0});
            break;
        case GroupFamily::FreeGroup2:
            gens.push_back(GroupElement{kLetterX});
            gens.push_back(GroupElement{kLetterY});
            break;
    }
    return gens;
}

std::vector<GroupElement> directed_generators(const GroupSpec& spec) {
    std::vector<GroupElement> gens;
    for (const auto& g : positive_generators(spec)) {
        gens.push_back(g);
        gens.push_back(inverse(spec, g));
    }
    return gens;
}

std::string format_element(const GroupSpec& spec, const GroupElement& g) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < g.coords.size(); ++i) {
        if (i) out << ',';
        if (spec.family == GroupFamily::FreeGroup2) {
            switch (g.coords[i]) {
                case kLetterX: out << 'x'; break;
                case -kLetterX: out << 'X'; break;
                case kLetterY: out << 'y'; break;
                default: out << 'Y'; break;
            }
        } else {
            out << g.coords[i];
        }
    }
    out << ')';
    return out.str();
}

}  // namespace l2lab
