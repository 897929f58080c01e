#include "l2lab/lab.hpp"

#include "l2lab/errors.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace l2lab {

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size())
        throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& col) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == col) return i;
    throw std::out_of_range("table " + name + " has no column " + col);
}

double Table::number(std::size_t row, const std::string& col) const {
    return std::stod(rows.at(row).at(column(col)));
}

std::string fmt_num(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string fmt_num(long long value) { return std::to_string(value); }

std::string fmt_num(int value) { return std::to_string(value); }

bool ExperimentResult::passed() const {
    for (const auto& a : assertions)
        if (!a.passed) return false;
    return true;
}

const Table& ExperimentResult::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw std::out_of_range("no table " + name + " in " + experiment);
}

std::string to_csv(const Table& table, const std::string& experiment, const std::string& hash) {
    std::ostringstream out;
    out << "# l2lab-csv v1 experiment=" << experiment << " table=" << table.name << " config_hash=" << hash << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

std::string render_report(const ExperimentResult& r) {
    std::ostringstream out;
    out << "experiment " << r.experiment << " config_hash=" << r.config_hash << "\n";
    for (const auto& a : r.assertions)
        out << (a.passed ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : ": " + a.detail) << "\n";
    for (const auto& w : r.warnings) out << "WARNING " << w << "\n";
    for (const auto& n : r.notes) out << "NOTE " << n << "\n";
    out << (r.passed() ? "result: all assertions passed" : "result: assertion failure") << "\n";
    return out.str();
}

std::vector<std::filesystem::path> write_result(const ExperimentResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot write " + p.string());
        out << content;
        written.push_back(p);
    };
    for (const auto& t : r.tables) write(dir / (r.experiment + "_" + t.name + ".csv"), to_csv(t, r.experiment, r.config_hash));
    write(dir / (r.experiment + "_report.txt"), render_report(r));
    return written;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
    std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit fit;
    fit.points = x.size();
    if (x.size() != y.size() || x.size() < 2) return fit;
    double n = static_cast<double>(x.size()), mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
    return fit;
}

double mirror_distance(const GroupElement& v, int L, BoundaryCondition bc) {
    // Low side: the edge from -1 is absent in both conditions, a reflecting
    // wall at -1/2. High side: relative keeps the edge into the dropped vertex
    // L (absorbing there); absolute keeps vertex L and reflects at L + 1/2.
    double best = 1e300;
    for (auto x : v.coords) {
        double low = static_cast<double>(x) + 0.5;
        double high = bc == BoundaryCondition::Relative ? static_cast<double>(L - x) : static_cast<double>(L - x) + 0.5;
        best = std::min({best, low, high});
    }
    return best;
}

}  // namespace l2lab
