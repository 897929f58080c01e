#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace l2lab {

enum class GroupFamily { FreeAbelian, Heisenberg3, FreeGroup2 };

/// A deck group from one of the built-in families.
///
/// Generators are right-multiplied: the Cayley graph has edges g -- g*s.
/// FreeAbelian(d) uses the unit vectors, Heisenberg3 uses a=(1,0,0),
/// b=(0,1,0) with product (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b'),
/// FreeGroup2 uses letters x, y.
struct GroupSpec {
    GroupFamily family = GroupFamily::FreeAbelian;
    int rank = 1;  // d for FreeAbelian; ignored otherwise

    static GroupSpec free_abelian(int d);
    static GroupSpec heisenberg();
    static GroupSpec free_group2();

    bool amenable() const { return family != GroupFamily::FreeGroup2; }
    bool abelian() const { return family == GroupFamily::FreeAbelian; }
    /// Number of integer coordinates of an element (free group: variable).
    int arity() const;
    std::string name() const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Free group letters. Negative values are inverses.
inline constexpr std::int64_t kLetterX = 1;
inline constexpr std::int64_t kLetterY = 2;

/// Element of a deck group.
///
/// FreeAbelian / Heisenberg3: fixed-length integer coordinates.
/// FreeGroup2: a reduced word of letters in {1, -1, 2, -2}.
struct GroupElement {
    std::vector<std::int64_t> coords;

    GroupElement() = default;
    explicit GroupElement(std::vector<std::int64_t> c) : coords(std::move(c)) {}
    GroupElement(std::initializer_list<std::int64_t> c) : coords(c) {}

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend std::strong_ordering operator<=>(const GroupElement&, const GroupElement&) = default;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept;
};

GroupElement identity(const GroupSpec& spec);
bool is_identity(const GroupSpec& spec, const GroupElement& g);
/// Throws InvalidElementError when g does not belong to spec.
void check_element(const GroupSpec& spec, const GroupElement& g);

GroupElement multiply(const GroupSpec& spec, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupSpec& spec, const GroupElement& g);

/// The positive generators (one per undirected Cayley edge class).
std::vector<GroupElement> positive_generators(const GroupSpec& spec);
/// Generators together with their inverses (2d for FreeAbelian(d), 4 otherwise).
std::vector<GroupElement> directed_generators(const GroupSpec& spec);

/// Coordinates printed as "(a,b,...)"; free group words as "(x,Y,...)".
std::string format_element(const GroupSpec& spec, const GroupElement& g);

}  // namespace l2lab
