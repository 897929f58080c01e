#include "l2lab/complex.hpp"
#include "l2lab/errors.hpp"
#include "l2lab/folner.hpp"
#include "l2lab/lab.hpp"
#include "l2lab/section.hpp"
#include "l2lab/spectral.hpp"
#include "l2lab/vn_oracle.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace l2lab;
using namespace pybind11::literals;

namespace {

BoundaryCondition condition(const std::string& name) { return parse_boundary_condition(name); }

QuadratureGrid grid(int points) {
    QuadratureGrid g;
    g.points_per_axis = points;
    return g;
}

py::array_t<std::int64_t> dense_boundary(const SectionComplex& S, int j) {
    const auto& d = S.boundary(j);
    py::array_t<std::int64_t> out({d.rows(), d.cols()});
    auto view = out.mutable_unchecked<2>();
    for (int r = 0; r < d.rows(); ++r)
        for (int c = 0; c < d.cols(); ++c) view(r, c) = 0;
    for (int c = 0; c < d.cols(); ++c)
        for (auto [r, v] : d.column(c)) view(r, c) = v;
    return out;
}

py::dict result_dict(const ExperimentResult& r) {
    py::dict tables;
    for (const auto& t : r.tables) tables[py::str(t.name)] = py::dict("columns"_a = t.columns, "rows"_a = t.rows);
    py::list assertions;
    for (const auto& a : r.assertions)
        assertions.append(py::dict("name"_a = a.name, "passed"_a = a.passed, "detail"_a = a.detail));
    return py::dict("experiment"_a = r.experiment, "config_hash"_a = r.config_hash, "passed"_a = r.passed(),
                    "tables"_a = tables, "assertions"_a = assertions, "notes"_a = r.notes, "warnings"_a = r.warnings,
                    "report"_a = render_report(r));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite sections of equivariant chain complexes and their spectra.";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", error);
    py::register_exception<ValidationError>(m, "ValidationError", error);
    py::register_exception<DomainError>(m, "DomainError", error);
    py::register_exception<InvalidElementError>(m, "InvalidElementError", error);
    py::register_exception<CapExceededError>(m, "CapExceededError", error);
    py::register_exception<UnsupportedOracleError>(m, "UnsupportedOracleError", error);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error);
    py::register_exception<ConfigError>(m, "ConfigError", error);

    py::class_<EquivariantChainComplex>(m, "Complex")
        .def_readonly("name", &EquivariantChainComplex::name)
        .def_readonly("orbit_counts", &EquivariantChainComplex::orbit_counts)
        .def_readonly("euler_characteristic", &EquivariantChainComplex::euler_characteristic)
        .def_readonly("closed_manifold", &EquivariantChainComplex::closed_manifold)
        .def_property_readonly("dim", &EquivariantChainComplex::dim)
        .def_property_readonly("group", [](const EquivariantChainComplex& X) { return X.spec.name(); })
        .def("__repr__", [](const EquivariantChainComplex& X) { return "<Complex " + X.name + ">"; });

    m.def("builtin_complex", &builtin_complex, "name"_a);
    m.def("builtin_complex_names", &builtin_complex_names);
    m.def("parse_complex", &parse_complex, "text"_a);
    m.def("load_complex", &load_complex, "path"_a);
    m.def("format_complex", &format_complex, "complex"_a);
    m.def("validate", [](const EquivariantChainComplex& X) {
        auto r = validate(X);
        return py::dict("ok"_a = r.ok, "message"_a = r.message, "degree"_a = r.degree, "row"_a = r.row, "col"_a = r.col);
    }, "complex"_a);

    py::class_<SectionComplex>(m, "Section")
        .def_property_readonly("dim", &SectionComplex::dim)
        .def_property_readonly("folner_size", &SectionComplex::folner_size)
        .def_property_readonly("condition", [](const SectionComplex& S) { return to_string(S.condition()); })
        .def_property_readonly("cell_counts", [](const SectionComplex& S) { return cell_counts(S).counts; })
        .def_property_readonly("euler_characteristic", [](const SectionComplex& S) { return cell_counts(S).euler; })
        .def("boundary", &dense_boundary, "j"_a, "Dense integer matrix of d_j : C_j -> C_{j-1}.")
        .def("cells", [](const SectionComplex& S, int j) {
            py::list out;
            for (const auto& c : S.cells(j)) out.append(py::make_tuple(c.orbit, c.element.coords));
            return out;
        }, "j"_a);

    m.def("build_section", [](const EquivariantChainComplex& X, int L, const std::string& bc) {
        return build_section(X, folner_box(X.spec, L), condition(bc));
    }, "complex"_a, "L"_a, "condition"_a = "relative");
    m.def("folner_size", [](const EquivariantChainComplex& X, int L) { return folner_box(X.spec, L).size(); },
          "complex"_a, "L"_a);
    m.def("cheeger_ratio", [](const EquivariantChainComplex& X, int L) { return cheeger_ratio(folner_box(X.spec, L)); },
          "complex"_a, "L"_a);

    m.def("betti_numbers", [](const SectionComplex& S) { return betti_numbers(S).values; }, "section"_a);
    m.def("laplacian", [](const SectionComplex& S, int j) {
        auto dense = laplacian(S, j).to_dense_double();
        return py::array_t<double>({dense.rows(), dense.cols()}, {sizeof(double), sizeof(double) * dense.rows()},
                                   dense.data());
    }, "section"_a, "j"_a);
    m.def("eigenvalues", [](const SectionComplex& S, int j, std::size_t cap) {
        SpectralOptions o;
        o.dense_cap = cap;
        return eigenvalues(S, j, o).eigenvalues;
    }, "section"_a, "j"_a, "dense_cap"_a = 4000);
    m.def("heat_trace", [](const SectionComplex& S, int j, double t, std::size_t cap, int probes, std::uint64_t seed) {
        auto h = heat_trace(S, j, t, SpectralOptions{cap, probes, seed});
        return py::dict("value"_a = h.value, "standard_error"_a = h.standard_error, "method"_a = h.method);
    }, "section"_a, "j"_a, "t"_a, "dense_cap"_a = 4000, "probes"_a = 64, "seed"_a = 1);
    m.def("spectral_count", [](const SectionComplex& S, int j, double lambda) { return spectral_count(S, j, lambda); },
          "section"_a, "j"_a, "lam"_a);
    m.def("zeta_finite", [](const SectionComplex& S, int j, std::complex<double> s, double lambda) {
        return zeta_finite(S, j, s, lambda, static_cast<double>(S.folner_size()));
    }, "section"_a, "j"_a, "s"_a, "lam"_a);
    m.def("supersymmetry_ok", [](const SectionComplex& S) { return supersymmetry_check(S).ok; }, "section"_a);

    m.def("vn_heat_trace", [](const EquivariantChainComplex& X, int j, double t, int points) {
        return vn_heat_trace(X, j, t, grid(points));
    }, "complex"_a, "j"_a, "t"_a, "points"_a = 256);
    m.def("vn_spectral_function", [](const EquivariantChainComplex& X, int j, double lambda, int points) {
        return vn_spectral_function(X, j, lambda, grid(points));
    }, "complex"_a, "j"_a, "lam"_a, "points"_a = 256);
    m.def("vn_zeta", [](const EquivariantChainComplex& X, int j, std::complex<double> s, double lambda, int points) {
        return vn_zeta(X, j, s, lambda, grid(points));
    }, "complex"_a, "j"_a, "s"_a, "lam"_a, "points"_a = 256);
    m.def("l2_betti", [](const EquivariantChainComplex& X, int j, int points) { return l2_betti(X, j, grid(points)).value; },
          "complex"_a, "j"_a, "points"_a = 256);
    m.def("l2_betti_from_euler", &l2_betti_from_euler, "complex"_a);
    m.def("lattice_heat_kernel", &lattice_heat_kernel, "d"_a, "t"_a, "offset"_a);

    m.def("experiment_names", &experiment_names);
    m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); }, "text"_a);
    m.def("run_experiment", [](const std::string& name, const std::string& text, int threads,
                               const std::string& base_dir) {
        auto c = parse_config(text);
        c.threads = threads;
        c.base_dir = base_dir;
        ExperimentResult r;
        {
            py::gil_scoped_release release;
            r = run_experiment(name, c);
        }
        return result_dict(r);
    }, "name"_a, "config"_a, "threads"_a = 1, "base_dir"_a = ".");
}
