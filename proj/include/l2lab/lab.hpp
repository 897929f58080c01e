#pragma once

#include "l2lab/config.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace l2lab {

/// A CSV table. Cells are preformatted strings; numbers go through fmt_num.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    /// Index of a column; throws std::out_of_range.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
};

/// 12 significant digits; "nan" for missing values.
std::string fmt_num(double value);
std::string fmt_num(long long value);
std::string fmt_num(int value);

struct Assertion {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ExperimentResult {
    std::string experiment;
    std::string config_hash;
    std::vector<Table> tables;
    std::vector<Assertion> assertions;
    std::vector<std::string> notes;
    std::vector<std::string> warnings;

    bool passed() const;
    const Table& table(const std::string& name) const;
};

/// Writes `<dir>/<experiment>_<table>.csv` for every table and
/// `<dir>/<experiment>_report.txt`; returns the written paths.
std::vector<std::filesystem::path> write_result(const ExperimentResult& result, const std::filesystem::path& dir);

/// Renders a CSV with its versioned header comment.
std::string to_csv(const Table& table, const std::string& experiment, const std::string& config_hash);

/// Human-readable summary: assertions, warnings and notes.
std::string render_report(const ExperimentResult& result);

/// Runs f(0) .. f(n-1) on up to `threads` workers. Callers write results
/// into preallocated slots, so output order never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f);

/// Least-squares line y = slope * x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Distance from a vertex of a box section to the reflecting boundary that
/// the method of images would place: half an edge past a Neumann side, the
/// first dropped vertex on a Dirichlet side. Free abelian boxes only.
double mirror_distance(const GroupElement& vertex, int L, BoundaryCondition condition);

ExperimentResult run_betti_convergence(const ExperimentConfig& config);
ExperimentResult run_heat_convergence(const ExperimentConfig& config);
ExperimentResult run_ids(const ExperimentConfig& config);
ExperimentResult run_nfb(const ExperimentConfig& config);
ExperimentResult run_zeta(const ExperimentConfig& config);
ExperimentResult run_euler(const ExperimentConfig& config);
ExperimentResult run_ns_fit(const ExperimentConfig& config);
ExperimentResult run_validate(const ExperimentConfig& config);

/// Dispatch by subcommand name: betti, heat, ids, nfb, zeta, euler, nsfit, validate.
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& config);
std::vector<std::string> experiment_names();

}  // namespace l2lab
