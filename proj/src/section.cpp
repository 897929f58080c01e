#include "l2lab/section.hpp"

#include "l2lab/errors.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

namespace l2lab {

std::string to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Relative ? "relative" : "absolute";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
    if (text == "relative" || text == "Relative" || text == "rel") return BoundaryCondition::Relative;
    if (text == "absolute" || text == "Absolute" || text == "abs") return BoundaryCondition::Absolute;
    throw DomainError("unknown boundary condition '" + text + "'");
}

SectionComplex::SectionComplex(BoundaryCondition condition, GroupSpec spec, std::vector<std::vector<Cell>> cells,
                               std::vector<SparseIntMatrix> boundaries, std::string complex_name,
                               std::string folner_label, std::size_t folner_size)
    : condition_(condition),
      spec_(spec),
      cells_(std::move(cells)),
      boundaries_(std::move(boundaries)),
      complex_name_(std::move(complex_name)),
      folner_label_(std::move(folner_label)),
      folner_size_(folner_size) {
    if (boundaries_.size() != cells_.size() + 1) throw DomainError("section needs boundaries for degrees 0..dim+1");
}

std::size_t SectionComplex::cell_count(int j) const {
    if (j < 0 || j > dim()) return 0;
    return cells_[static_cast<std::size_t>(j)].size();
}

const SparseIntMatrix& SectionComplex::boundary(int j) const {
    if (j < 0 || j > dim() + 1) throw DomainError("boundary degree out of range");
    return boundaries_[static_cast<std::size_t>(j)];
}

std::optional<int> SectionComplex::cell_index(int j, const Cell& cell) const {
    const auto& cs = cells(j);
    auto it = std::lower_bound(cs.begin(), cs.end(), cell);
    if (it == cs.end() || !(*it == cell)) return std::nullopt;
    return static_cast<int>(it - cs.begin());
}

namespace {

struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept {
        return GroupElementHash{}(c.element) * 31U + static_cast<std::size_t>(c.orbit);
    }
};

}  // namespace

SectionComplex build_section(const EquivariantChainComplex& X, const FolnerSet& F, BoundaryCondition bc) {
    if (!(X.spec == F.spec()))
        throw DomainError("complex group " + X.spec.name() + " does not match Folner set group " + F.spec().name());
    const int dim = X.dim();

    std::vector<std::set<Cell>> cellsets(static_cast<std::size_t>(dim + 1));
    for (int j = 0; j <= dim; ++j)
        for (int c = 0; c < X.orbit_counts[static_cast<std::size_t>(j)]; ++c)
            for (const auto& g : F.elements()) cellsets[static_cast<std::size_t>(j)].insert(Cell{c, g});

    if (bc == BoundaryCondition::Absolute) {
        for (int j = dim; j >= 1; --j) {
            const auto& d = X.boundary(j);
            for (const auto& cell : cellsets[static_cast<std::size_t>(j)])
                for (int i = 0; i < d.rows(); ++i)
                    for (const auto& [h, n] : d.at(i, cell.orbit).terms())
                        cellsets[static_cast<std::size_t>(j - 1)].insert(Cell{i, multiply(X.spec, cell.element, h)});
        }
    }

    std::vector<std::vector<Cell>> cells(static_cast<std::size_t>(dim + 1));
    std::vector<std::unordered_map<Cell, int, CellHash>> index(static_cast<std::size_t>(dim + 1));
    for (int j = 0; j <= dim; ++j) {
        auto& cs = cells[static_cast<std::size_t>(j)];
        cs.assign(cellsets[static_cast<std::size_t>(j)].begin(), cellsets[static_cast<std::size_t>(j)].end());
        for (std::size_t k = 0; k < cs.size(); ++k) index[static_cast<std::size_t>(j)].emplace(cs[k], static_cast<int>(k));
    }

    std::vector<SparseIntMatrix> boundaries(static_cast<std::size_t>(dim + 2));
    boundaries[0] = SparseIntMatrix(0, static_cast<int>(cells[0].size()));
    boundaries[static_cast<std::size_t>(dim + 1)] = SparseIntMatrix(static_cast<int>(cells[static_cast<std::size_t>(dim)].size()), 0);
    for (int j = 1; j <= dim; ++j) {
        const auto& d = X.boundary(j);
        const auto& cols = cells[static_cast<std::size_t>(j)];
        const auto& lower = index[static_cast<std::size_t>(j - 1)];
        std::vector<std::tuple<int, int, std::int64_t>> trip;
        for (std::size_t col = 0; col < cols.size(); ++col) {
            const Cell& cell = cols[col];
            for (int i = 0; i < d.rows(); ++i)
                for (const auto& [h, n] : d.at(i, cell.orbit).terms()) {
                    auto it = lower.find(Cell{i, multiply(X.spec, cell.element, h)});
                    if (it != lower.end()) trip.emplace_back(it->second, static_cast<int>(col), n);
                }
        }
        boundaries[static_cast<std::size_t>(j)] = SparseIntMatrix::from_triplets(
            static_cast<int>(cells[static_cast<std::size_t>(j - 1)].size()), static_cast<int>(cols.size()), trip);
    }

    SectionComplex S(bc, X.spec, std::move(cells), std::move(boundaries), X.name, F.label(), F.size());
    if (auto bad = find_nonzero_composite(S))
        throw ValidationError(to_string(bc) + " section of " + X.name + " over " + F.label() + ": d_" +
                              std::to_string(*bad) + " o d_" + std::to_string(*bad + 1) + " != 0" +
                              (bc == BoundaryCondition::Relative
                                   ? " (a boundary path leaves F and re-enters it, so dropping exterior cells is not a quotient)"
                                   : ""));
    return S;
}

CellCounts cell_counts(const SectionComplex& S) {
    CellCounts out;
    for (int j = 0; j <= S.dim(); ++j) {
        out.counts.push_back(S.cell_count(j));
        out.euler += (j % 2 == 0 ? 1 : -1) * static_cast<long long>(S.cell_count(j));
    }
    return out;
}

std::optional<int> find_nonzero_composite(const SectionComplex& S) {
    for (int j = 1; j < S.dim(); ++j)
        if (!(S.boundary(j) * S.boundary(j + 1)).is_zero()) return j;
    return std::nullopt;
}

}  // namespace l2lab
