#include "l2lab/config.hpp"

#include "l2lab/errors.hpp"
#include "l2lab/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace l2lab {

namespace {

using Scalar = std::variant<long long, double, std::string, bool>;

struct Value {
    bool is_array = false;
    std::vector<Scalar> items;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

Scalar parse_scalar(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s.empty()) throw ConfigError("line " + std::to_string(line) + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ConfigError("line " + std::to_string(line) + ": unterminated string");
        return s.substr(1, s.size() - 2);
    }
    if (s == "true") return true;
    if (s == "false") return false;
    long long i = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc() && p == s.data() + s.size()) return i;
    double d = 0.0;
    auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec2 == std::errc() && q == s.data() + s.size()) return d;
    throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" + s + "'");
}

Value parse_value(const std::string& raw, int line) {
    std::string s = trim(raw);
    Value v;
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated array");
        v.is_array = true;
        std::string body = trim(s.substr(1, s.size() - 2));
        if (body.empty()) return v;
        std::string item;
        bool quoted = false;
        for (char c : body) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                v.items.push_back(parse_scalar(item, line));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) v.items.push_back(parse_scalar(item, line));
        return v;
    }
    v.items.push_back(parse_scalar(s, line));
    return v;
}

struct Reader {
    const std::string& key;
    const Value& value;
    int line;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("line " + std::to_string(line) + ": " + key + " " + what);
    }
    const Scalar& single() const {
        if (value.is_array || value.items.size() != 1) fail("expects a single value");
        return value.items.front();
    }
    static bool numeric(const Scalar& s) { return std::holds_alternative<long long>(s) || std::holds_alternative<double>(s); }
    static double as_double(const Scalar& s) {
        return std::holds_alternative<long long>(s) ? static_cast<double>(std::get<long long>(s)) : std::get<double>(s);
    }
    std::string str() const {
        const auto& s = single();
        if (!std::holds_alternative<std::string>(s)) fail("expects a string");
        return std::get<std::string>(s);
    }
    long long integer() const {
        const auto& s = single();
        if (!std::holds_alternative<long long>(s)) fail("expects an integer");
        return std::get<long long>(s);
    }
    double real() const {
        const auto& s = single();
        if (!numeric(s)) fail("expects a number");
        return as_double(s);
    }
    std::vector<double> reals() const {
        if (!value.is_array) fail("expects an array");
        std::vector<double> out;
        for (const auto& s : value.items) {
            if (!numeric(s)) fail("expects numbers");
            out.push_back(as_double(s));
        }
        return out;
    }
    std::vector<int> integers() const {
        if (!value.is_array) fail("expects an array");
        std::vector<int> out;
        for (const auto& s : value.items) {
            if (!std::holds_alternative<long long>(s)) fail("expects integers");
            out.push_back(static_cast<int>(std::get<long long>(s)));
        }
        return out;
    }
    std::vector<std::string> strings() const {
        if (!value.is_array) fail("expects an array");
        std::vector<std::string> out;
        for (const auto& s : value.items) {
            if (!std::holds_alternative<std::string>(s)) fail("expects strings");
            out.push_back(std::get<std::string>(s));
        }
        return out;
    }
};

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
    return out + "]";
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

void check(const ExperimentConfig& c) {
    if (c.ladder.empty()) throw ConfigError("ladder must be nonempty");
    for (std::size_t i = 0; i < c.ladder.size(); ++i) {
        if (c.ladder[i] < 1) throw ConfigError("ladder entries must be positive");
        if (i > 0 && c.ladder[i] <= c.ladder[i - 1]) throw ConfigError("ladder must be strictly increasing");
    }
    if (c.conditions.empty()) throw ConfigError("conditions must be nonempty");
    if (c.t_grid.empty() || c.lambda_grid.empty() || c.s_samples.empty()) throw ConfigError("grids must be nonempty");
    for (double t : c.t_grid)
        if (!(t > 0)) throw ConfigError("t_grid entries must be positive");
    for (double l : c.lambda_grid)
        if (l < 0) throw ConfigError("lambda_grid entries must be nonnegative");
    if (!(c.zeta_lambda > 0)) throw ConfigError("zeta_lambda must be positive");
    if (c.ns_window.size() != 2 || !(c.ns_window[0] > 0) || !(c.ns_window[1] > c.ns_window[0]))
        throw ConfigError("ns_window must be [lo, hi] with 0 < lo < hi");
    if (c.ns_points < 3) throw ConfigError("ns_points must be at least 3");
    if (c.quadrature.points_per_axis < 8) throw ConfigError("quadrature_points must be at least 8");
    if (c.trace_probes < 1) throw ConfigError("trace_probes must be positive");
    if (c.dense_cap < 1) throw ConfigError("dense_cap must be positive");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (seen.count(key)) throw ConfigError("line " + std::to_string(line) + ": duplicate key " + key);
        seen[key] = line;
        Value value = parse_value(s.substr(eq + 1), line);
        Reader r{key, value, line};

        if (key == "name") c.name = r.str();
        else if (key == "complex") c.complex = r.str();
        else if (key == "complex_file") c.complex_file = r.str();
        else if (key == "ladder") c.ladder = r.integers();
        else if (key == "conditions") {
            c.conditions.clear();
            for (const auto& name : r.strings()) {
                try {
                    c.conditions.push_back(parse_boundary_condition(name));
                } catch (const Error&) {
                    r.fail("has unknown condition '" + name + "'");
                }
            }
        }
        else if (key == "degrees") c.degrees = r.integers();
        else if (key == "t_grid") c.t_grid = r.reals();
        else if (key == "lambda_grid") c.lambda_grid = r.reals();
        else if (key == "s_samples") c.s_samples = r.reals();
        else if (key == "zeta_lambda") c.zeta_lambda = r.real();
        else if (key == "ns_window") c.ns_window = r.reals();
        else if (key == "ns_points") c.ns_points = static_cast<int>(r.integer());
        else if (key == "nfb_min_r2") c.nfb_min_r2 = r.real();
        else if (key == "nfb_center_tolerance") c.nfb_center_tolerance = r.real();
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(r.integer());
        else if (key == "dense_cap") c.dense_cap = static_cast<std::size_t>(std::max(0LL, r.integer()));
        else if (key == "trace_probes") c.trace_probes = static_cast<int>(r.integer());
        else if (key == "quadrature_points") c.quadrature.points_per_axis = static_cast<int>(r.integer());
        else if (key == "quadrature_rule") {
            auto rule = r.str();
            if (rule == "trapezoid") c.quadrature.rule = QuadratureRule::Trapezoid;
            else if (rule == "gauss-legendre") c.quadrature.rule = QuadratureRule::GaussLegendre;
            else r.fail("must be \"trapezoid\" or \"gauss-legendre\"");
        }
        else if (key == "output_dir") c.output_dir = r.str();
        else throw ConfigError("line " + std::to_string(line) + ": unknown key " + key);
    }
    check(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    auto c = parse_config(buf.str());
    c.base_dir = path.parent_path();
    return c;
}

std::string format_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto num = [](const double& x) { return fmt_num(x); };
    auto integer = [](const int& x) { return std::to_string(x); };
    auto cond = [](const BoundaryCondition& b) { return quote(to_string(b)); };
    out << "name = " << quote(c.name) << "\n";
    out << "complex = " << quote(c.complex) << "\n";
    if (!c.complex_file.empty()) out << "complex_file = " << quote(c.complex_file) << "\n";
    out << "ladder = " << join<int>(c.ladder, integer) << "\n";
    out << "conditions = " << join<BoundaryCondition>(c.conditions, cond) << "\n";
    out << "degrees = " << join<int>(c.degrees, integer) << "\n";
    out << "t_grid = " << join<double>(c.t_grid, num) << "\n";
    out << "lambda_grid = " << join<double>(c.lambda_grid, num) << "\n";
    out << "s_samples = " << join<double>(c.s_samples, num) << "\n";
    out << "zeta_lambda = " << fmt_num(c.zeta_lambda) << "\n";
    out << "ns_window = " << join<double>(c.ns_window, num) << "\n";
    out << "ns_points = " << c.ns_points << "\n";
    out << "nfb_min_r2 = " << fmt_num(c.nfb_min_r2) << "\n";
    out << "nfb_center_tolerance = " << fmt_num(c.nfb_center_tolerance) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "dense_cap = " << c.dense_cap << "\n";
    out << "trace_probes = " << c.trace_probes << "\n";
    out << "quadrature_points = " << c.quadrature.points_per_axis << "\n";
    out << "quadrature_rule = "
        << quote(c.quadrature.rule == QuadratureRule::Trapezoid ? "trapezoid" : "gauss-legendre") << "\n";
    out << "output_dir = " << quote(c.output_dir) << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& c) {
    // output_dir is where results go, not what they are
    ExperimentConfig canonical = c;
    canonical.output_dir.clear();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : format_config(canonical)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EquivariantChainComplex resolve_complex(const ExperimentConfig& c) {
    if (c.complex_file.empty()) return builtin_complex(c.complex);
    std::filesystem::path p(c.complex_file);
    if (p.is_relative() && !c.base_dir.empty()) p = c.base_dir / p;
    return load_complex(p);
}

std::vector<int> resolve_degrees(const ExperimentConfig& c, const EquivariantChainComplex& X) {
    if (c.degrees.empty()) {
        std::vector<int> all;
        for (int j = 0; j <= X.dim(); ++j) all.push_back(j);
        return all;
    }
    for (int j : c.degrees)
        if (j < 0 || j > X.dim())
            throw ConfigError("degree " + std::to_string(j) + " out of range for " + X.name);
    return c.degrees;
}

}  // namespace l2lab
