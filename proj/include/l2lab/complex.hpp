#pragma once

#include "l2lab/group_ring.hpp"
#include "l2lab/groups.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace l2lab {

/// Dense matrix of group-ring entries, row-major.
class GroupRingMatrix {
public:
    GroupRingMatrix() = default;
    GroupRingMatrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    GroupRingElement& at(int r, int c);
    const GroupRingElement& at(int r, int c) const;

    friend bool operator==(const GroupRingMatrix&, const GroupRingMatrix&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<GroupRingElement> entries_;
};

/// A finite free Gamma-CW chain complex: one basis cell per orbit in each
/// degree, boundaries over the integral group ring.
///
/// Cell (c, g) in degree j has boundary sum_i sum_h n_h (i, g*h) where
/// sum_h n_h h is boundary(j).at(i, c). With that convention a Fox
/// derivative is used verbatim as a boundary entry.
struct EquivariantChainComplex {
    std::string name;
    GroupSpec spec;
    std::vector<int> orbit_counts;            // n_0 .. n_dim
    std::vector<GroupRingMatrix> boundaries;  // index j holds d_j (n_{j-1} x n_j); index 0 unused
    int euler_characteristic = 0;
    /// True for closed orientable manifolds, enabling L2 Poincare duality.
    bool closed_manifold = false;

    int dim() const { return static_cast<int>(orbit_counts.size()) - 1; }
    const GroupRingMatrix& boundary(int j) const { return boundaries.at(static_cast<std::size_t>(j)); }
    int orbit_euler() const;
};

struct ValidationReport {
    bool ok = true;
    std::string message;
    /// For a composite failure: d_{degree} o d_{degree+1}; row/col are 1-based.
    int degree = -1;
    int row = -1;
    int col = -1;
};

/// Checks shapes, Euler metadata and d o d = 0 over the group ring.
ValidationReport validate(const EquivariantChainComplex& complex);

/// circle_Z, torus2_Z2, torus3_Z3, surface_genus(<g>)[_Z<2g>], wedge2_F2,
/// heisenberg_manifold. Throws DomainError on an unknown name.
EquivariantChainComplex builtin_complex(const std::string& name);
std::vector<std::string> builtin_complex_names();

/// Fox derivative of a relator word (pairs of generator index, +-1).
GroupRingElement fox_derivative(const GroupSpec& spec, const std::vector<GroupElement>& generators,
                                const std::vector<std::pair<int, int>>& relator, int generator);

/// Parses the text complex format; throws ParseError (with line) or
/// ValidationError.
EquivariantChainComplex parse_complex(const std::string& text);
EquivariantChainComplex load_complex(const std::filesystem::path& path);
std::string format_complex(const EquivariantChainComplex& complex);

}  // namespace l2lab
