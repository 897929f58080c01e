#pragma once

#include "l2lab/groups.hpp"

#include <string>
#include <unordered_set>
#include <vector>

namespace l2lab {

/// A finite, identity-containing, Cayley-connected subset of a deck group.
///
/// Elements are kept sorted so that every derived structure (sections,
/// spectra, CSV rows) is reproducible.
class FolnerSet {
public:
    /// Validates distinctness, identity membership and connectivity.
    FolnerSet(GroupSpec spec, std::vector<GroupElement> elements, std::string label);

    const GroupSpec& spec() const { return spec_; }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return elements_.size(); }
    bool contains(const GroupElement& g) const { return members_.count(g) != 0; }

private:
    GroupSpec spec_;
    std::vector<GroupElement> elements_;
    std::unordered_set<GroupElement, GroupElementHash> members_;
    std::string label_;
};

/// Box [0,L)^d for FreeAbelian(d); {0<=a,b<L, 0<=c<L^2} for Heisenberg3;
/// the Cayley ball of radius L for FreeGroup2.
FolnerSet folner_box(const GroupSpec& spec, int L);

/// Elements of F within distance delta-1 of the inner boundary of F, plus
/// exterior elements within distance delta of F. Sorted.
std::vector<GroupElement> boundary_layer(const FolnerSet& F, int delta);

/// Number of Cayley edges with exactly one endpoint in F, divided by |F|.
double cheeger_ratio(const FolnerSet& F);

/// Number of Cayley edges with exactly one endpoint in F.
std::size_t edge_boundary_size(const FolnerSet& F);

/// Word distance from g to the nearest element outside F (0 when g is outside).
int distance_to_complement(const FolnerSet& F, const GroupElement& g);

/// Word-metric distance between two elements (breadth-first, bounded search).
int word_distance(const GroupSpec& spec, const GroupElement& g, const GroupElement& h,
                  int max_radius = 64);

}  // namespace l2lab
