#pragma once

#include "l2lab/complex.hpp"
#include "l2lab/folner.hpp"
#include "l2lab/sparse.hpp"

#include <optional>
#include <string>
#include <vector>

namespace l2lab {

/// Relative: the quotient complex on exactly the cells over F
/// (Dirichlet-like). Absolute: the subcomplex generated by the cells over F
/// (Neumann-like).
enum class BoundaryCondition { Relative, Absolute };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

struct Cell {
    int orbit = 0;
    GroupElement element;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Finite integer chain complex cut out of an equivariant complex by a
/// Folner set. Cells are ordered orbit-major, then by group coordinates.
class SectionComplex {
public:
    SectionComplex(BoundaryCondition condition, GroupSpec spec, std::vector<std::vector<Cell>> cells,
                   std::vector<SparseIntMatrix> boundaries, std::string complex_name, std::string folner_label,
                   std::size_t folner_size);

    BoundaryCondition condition() const { return condition_; }
    const GroupSpec& spec() const { return spec_; }
    int dim() const { return static_cast<int>(cells_.size()) - 1; }
    const std::vector<Cell>& cells(int j) const { return cells_.at(static_cast<std::size_t>(j)); }
    std::size_t cell_count(int j) const;
    /// d_j : C_j -> C_{j-1}; a 0 x n_0 matrix for j = 0 and n_dim x 0 for j = dim+1.
    const SparseIntMatrix& boundary(int j) const;
    std::optional<int> cell_index(int j, const Cell& cell) const;

    const std::string& complex_name() const { return complex_name_; }
    const std::string& folner_label() const { return folner_label_; }
    /// |F|, the normalization used for every averaged quantity.
    std::size_t folner_size() const { return folner_size_; }

private:
    BoundaryCondition condition_;
    GroupSpec spec_;
    std::vector<std::vector<Cell>> cells_;
    std::vector<SparseIntMatrix> boundaries_;  // index 0 .. dim+1
    std::string complex_name_;
    std::string folner_label_;
    std::size_t folner_size_;
};

/// Builds the Relative or Absolute section; throws DomainError on a group
/// mismatch and ValidationError if d o d != 0 (a construction bug).
SectionComplex build_section(const EquivariantChainComplex& complex, const FolnerSet& folner,
                             BoundaryCondition condition);

struct CellCounts {
    std::vector<std::size_t> counts;
    long long euler = 0;
};

CellCounts cell_counts(const SectionComplex& section);

/// First degree j where d_j o d_{j+1} is nonzero, if any.
std::optional<int> find_nonzero_composite(const SectionComplex& section);

}  // namespace l2lab
