#include "l2lab/complex.hpp"

#include "l2lab/errors.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace l2lab {

GroupRingMatrix::GroupRingMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (rows < 0 || cols < 0) throw DomainError("negative matrix shape");
}

GroupRingElement& GroupRingMatrix::at(int r, int c) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw DomainError("group ring matrix index out of range");
    return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)];
}

const GroupRingElement& GroupRingMatrix::at(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw DomainError("group ring matrix index out of range");
    return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)];
}

int EquivariantChainComplex::orbit_euler() const {
    int chi = 0;
    for (std::size_t j = 0; j < orbit_counts.size(); ++j) chi += (j % 2 == 0 ? 1 : -1) * orbit_counts[j];
    return chi;
}

ValidationReport validate(const EquivariantChainComplex& X) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) {
        rep.ok = false;
        rep.message = std::move(msg);
        return rep;
    };
    if (X.orbit_counts.empty()) return fail("complex has no degrees");
    for (int n : X.orbit_counts)
        if (n < 0) return fail("negative orbit count");
    if (X.boundaries.size() != X.orbit_counts.size())
        return fail("expected one boundary matrix per positive degree");
    for (int j = 1; j <= X.dim(); ++j) {
        const auto& d = X.boundary(j);
        if (d.rows() != X.orbit_counts[static_cast<std::size_t>(j - 1)] ||
            d.cols() != X.orbit_counts[static_cast<std::size_t>(j)])
            return fail("boundary d_" + std::to_string(j) + " has the wrong shape");
        for (int r = 0; r < d.rows(); ++r)
            for (int c = 0; c < d.cols(); ++c)
                for (const auto& [g, n] : d.at(r, c).terms()) {
                    try {
                        check_element(X.spec, g);
                    } catch (const InvalidElementError& e) {
                        return fail("d_" + std::to_string(j) + " entry: " + e.what());
                    }
                }
    }
    if (X.orbit_euler() != X.euler_characteristic)
        return fail("alternating orbit count " + std::to_string(X.orbit_euler()) +
                    " differs from Euler characteristic " + std::to_string(X.euler_characteristic));

    for (int j = 1; j < X.dim(); ++j) {
        const auto& lower = X.boundary(j);
        const auto& upper = X.boundary(j + 1);
        for (int k = 0; k < lower.rows(); ++k) {
            for (int c = 0; c < upper.cols(); ++c) {
                GroupRingElement sum;
                for (int i = 0; i < upper.rows(); ++i)
                    sum += multiply(X.spec, upper.at(i, c), lower.at(k, i));
                if (!sum.is_zero()) {
                    rep.ok = false;
                    rep.degree = j;
                    rep.row = k + 1;
                    rep.col = c + 1;
                    rep.message = "d_" + std::to_string(j) + " o d_" + std::to_string(j + 1) + " is nonzero at (" +
                                  std::to_string(k + 1) + "," + std::to_string(c + 1) +
                                  "): " + format_group_ring(X.spec, sum);
                    return rep;
                }
            }
        }
    }
    return rep;
}

GroupRingElement fox_derivative(const GroupSpec& spec, const std::vector<GroupElement>& generators,
                                const std::vector<std::pair<int, int>>& relator, int generator) {
    GroupRingElement result;
    GroupElement prefix = identity(spec);
    for (auto [index, exponent] : relator) {
        const GroupElement& g = generators.at(static_cast<std::size_t>(index));
        if (exponent == 1) {
            if (index == generator) result.add_term(prefix, 1);
            prefix = multiply(spec, prefix, g);
        } else if (exponent == -1) {
            prefix = multiply(spec, prefix, inverse(spec, g));
            if (index == generator) result.add_term(prefix, -1);
        } else {
            throw DomainError("relator letters must have exponent +-1");
        }
    }
    if (!is_identity(spec, prefix)) throw DomainError("relator is not trivial in the deck group");
    return result;
}

namespace {

using Word = std::vector<std::pair<int, int>>;

Word commutator(int a, int b) { return {{a, 1}, {b, 1}, {a, -1}, {b, -1}}; }

// One-vertex presentation complex: d_1 = (x_i - 1), d_2 = Fox derivatives.
EquivariantChainComplex presentation_complex(std::string name, GroupSpec spec,
                                             const std::vector<GroupElement>& gens,
                                             const std::vector<Word>& relators) {
    EquivariantChainComplex X;
    X.name = std::move(name);
    X.spec = spec;
    const int n1 = static_cast<int>(gens.size());
    const int n2 = static_cast<int>(relators.size());
    X.orbit_counts = {1, n1};
    if (n2 > 0) X.orbit_counts.push_back(n2);
    X.boundaries.resize(X.orbit_counts.size());
    GroupRingMatrix d1(1, n1);
    for (int i = 0; i < n1; ++i) {
        d1.at(0, i).add_term(gens[static_cast<std::size_t>(i)], 1);
        d1.at(0, i).add_term(identity(spec), -1);
    }
    X.boundaries[1] = std::move(d1);
    if (n2 > 0) {
        GroupRingMatrix d2(n1, n2);
        for (int r = 0; r < n2; ++r)
            for (int i = 0; i < n1; ++i)
                d2.at(i, r) = fox_derivative(spec, gens, relators[static_cast<std::size_t>(r)], i);
        X.boundaries[2] = std::move(d2);
    }
    X.euler_characteristic = X.orbit_euler();
    return X;
}

GroupRingElement ring(std::initializer_list<std::pair<GroupElement, std::int64_t>> terms) {
    GroupRingElement r;
    for (const auto& [g, c] : terms) r.add_term(g, c);
    return r;
}

EquivariantChainComplex with_top_cell(EquivariantChainComplex X, GroupRingMatrix d3) {
    X.orbit_counts.push_back(d3.cols());
    X.boundaries.push_back(std::move(d3));
    X.euler_characteristic = X.orbit_euler();
    return X;
}

EquivariantChainComplex surface(int genus) {
    if (genus < 1) throw DomainError("surface genus must be >= 1");
    auto spec = GroupSpec::free_abelian(2 * genus);
    auto gens = positive_generators(spec);
    Word relator;
    for (int i = 0; i < genus; ++i)
        for (auto letter : commutator(2 * i, 2 * i + 1)) relator.push_back(letter);
    auto X = presentation_complex("surface_genus(" + std::to_string(genus) + ")_Z" + std::to_string(2 * genus),
                                  spec, gens, {relator});
    X.closed_manifold = true;
    return X;
}

int parse_genus(const std::string& name) {
    static const std::regex pattern(R"(surface_genus(?:\((\d+)\)|_?(\d+))(?:_Z(\d+))?)");
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) return -1;
    int g = std::stoi(m[1].matched ? m[1].str() : m[2].str());
    if (m[3].matched && std::stoi(m[3].str()) != 2 * g)
        throw DomainError("surface " + name + ": deck group rank must be 2g");
    return g;
}

}  // namespace

EquivariantChainComplex builtin_complex(const std::string& name) {
    if (name == "circle_Z") {
        auto spec = GroupSpec::free_abelian(1);
        auto X = presentation_complex(name, spec, positive_generators(spec), {});
        X.closed_manifold = true;
        return X;
    }
    if (name == "torus2_Z2") {
        auto spec = GroupSpec::free_abelian(2);
        auto X = presentation_complex(name, spec, positive_generators(spec), {commutator(0, 1)});
        X.closed_manifold = true;
        return X;
    }
    if (name == "torus3_Z3") {
        auto spec = GroupSpec::free_abelian(3);
        auto gens = positive_generators(spec);
        auto X = presentation_complex(name, spec, gens, {commutator(0, 1), commutator(0, 2), commutator(1, 2)});
        const auto& e = identity(spec);
        GroupRingMatrix d3(3, 1);
        d3.at(0, 0) = ring({{gens[2], 1}, {e, -1}});
        d3.at(1, 0) = ring({{e, 1}, {gens[1], -1}});
        d3.at(2, 0) = ring({{gens[0], 1}, {e, -1}});
        X = with_top_cell(std::move(X), std::move(d3));
        X.closed_manifold = true;
        return X;
    }
    if (name == "wedge2_F2") {
        auto spec = GroupSpec::free_group2();
        return presentation_complex(name, spec, positive_generators(spec), {});
    }
    if (name == "heisenberg_manifold") {
        auto spec = GroupSpec::heisenberg();
        const GroupElement a{1, 0, 0}, b{0, 1, 0}, c{0, 0, 1}, e{0, 0, 0};
        // generators a, b, c = [a, b]; relators [a,b]c^-1, [a,c], [b,c]
        Word r1 = commutator(0, 1);
        r1.push_back({2, -1});
        auto X = presentation_complex(name, spec, {a, b, c}, {r1, commutator(0, 2), commutator(1, 2)});
        GroupRingMatrix d3(3, 1);
        d3.at(0, 0) = ring({{c, 1}, {e, -1}});
        d3.at(1, 0) = ring({{e, 1}, {GroupElement{0, 1, 1}, -1}});
        d3.at(2, 0) = ring({{a, 1}, {c, -1}});
        X = with_top_cell(std::move(X), std::move(d3));
        X.closed_manifold = true;
        return X;
    }
    if (int g = parse_genus(name); g >= 1) return surface(g);
    throw DomainError("unknown built-in complex '" + name + "'");
}

std::vector<std::string> builtin_complex_names() {
    return {"circle_Z", "torus2_Z2", "torus3_Z3", "surface_genus(2)_Z4", "wedge2_F2", "heisenberg_manifold"};
}

// ---------------------------------------------------------------------------
// Text format
//
//   # comment
//   name <identifier>
//   group free_abelian <d> | group heisenberg | group free_group2
//   euler <int>                 (optional, defaults to the alternating count)
//   closed_manifold <0|1>       (optional)
//   cells <j> <n_j>             (degrees 0..dim, in order)
//   d <j> <row> <col> = <sum>   (0-based row/col; omitted entries are zero)
//
// A sum is "0" or terms joined by + / -, each term "[<int>*]g(<coords>)".
// Free group coordinates are letters x, X, y, Y (capital = inverse).

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char ch) {
        if (peek() == ch) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, line); }
    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        std::size_t digits = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == digits) error("expected an integer");
        return std::stoll(s.substr(start, pos - start));
    }
};

GroupElement parse_coords(Cursor& cur, const GroupSpec& spec) {
    if (!cur.accept('(')) cur.error("expected '(' after g");
    std::vector<std::int64_t> coords;
    if (!cur.accept(')')) {
        while (true) {
            if (spec.family == GroupFamily::FreeGroup2) {
                char ch = cur.peek();
                std::int64_t letter = 0;
                switch (ch) {
                    case 'x': letter = kLetterX; break;
                    case 'X': letter = -kLetterX; break;
                    case 'y': letter = kLetterY; break;
                    case 'Y': letter = -kLetterY; break;
                    default: cur.error("expected a free group letter x, X, y or Y");
                }
                ++cur.pos;
                coords.push_back(letter);
            } else {
                coords.push_back(cur.integer());
            }
            if (cur.accept(')')) break;
            if (cur.eof()) cur.error("unbalanced parentheses");
            if (!cur.accept(',')) cur.error("expected ',' or ')' in coordinates");
        }
    }
    GroupElement g(std::move(coords));
    if (spec.family == GroupFamily::FreeGroup2) {
        std::vector<std::int64_t> reduced;
        for (auto l : g.coords) {
            if (!reduced.empty() && reduced.back() == -l)
                reduced.pop_back();
            else
                reduced.push_back(l);
        }
        g = GroupElement(std::move(reduced));
    }
    try {
        check_element(spec, g);
    } catch (const InvalidElementError& e) {
        cur.error(e.what());
    }
    return g;
}

GroupRingElement parse_sum(Cursor& cur, const GroupSpec& spec) {
    GroupRingElement sum;
    if (cur.peek() == '0') {
        std::size_t save = cur.pos;
        ++cur.pos;
        if (cur.eof()) return sum;
        cur.pos = save;
    }
    bool first = true;
    while (!cur.eof()) {
        std::int64_t sign = 1;
        if (cur.accept('+')) {
        } else if (cur.accept('-')) {
            sign = -1;
        } else if (!first) {
            cur.error("expected '+' or '-' between terms");
        }
        std::int64_t coeff = 1;
        if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
            coeff = cur.integer();
            if (!cur.accept('*')) cur.error("expected '*' after coefficient");
        }
        if (!cur.accept('g')) cur.error("expected a term of the form <int>*g(...)");
        GroupElement g = parse_coords(cur, spec);
        sum.add_term(g, sign * coeff);
        first = false;
    }
    if (first) cur.error("empty sum");
    return sum;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int to_int(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", line);
    }
}

}  // namespace

EquivariantChainComplex parse_complex(const std::string& text) {
    EquivariantChainComplex X;
    X.name = "unnamed";
    bool have_group = false;
    bool have_euler = false;
    struct Entry {
        int j, row, col, line;
        std::string sum;
    };
    std::vector<Entry> entries;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string content = raw.substr(0, raw.find('#'));
        auto toks = split_ws(content);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "name") {
            if (toks.size() != 2) throw ParseError("name takes one identifier", line);
            X.name = toks[1];
        } else if (key == "group") {
            if (toks.size() < 2) throw ParseError("group needs a family", line);
            if (toks[1] == "free_abelian") {
                if (toks.size() != 3) throw ParseError("group free_abelian takes a rank", line);
                int d = to_int(toks[2], line);
                if (d < 1) throw ParseError("free abelian rank must be positive", line);
                X.spec = GroupSpec::free_abelian(d);
            } else if (toks[1] == "heisenberg" && toks.size() == 2) {
                X.spec = GroupSpec::heisenberg();
            } else if (toks[1] == "free_group2" && toks.size() == 2) {
                X.spec = GroupSpec::free_group2();
            } else {
                throw ParseError("unknown group family '" + toks[1] + "'", line);
            }
            have_group = true;
        } else if (key == "euler") {
            if (toks.size() != 2) throw ParseError("euler takes one integer", line);
            X.euler_characteristic = to_int(toks[1], line);
            have_euler = true;
        } else if (key == "closed_manifold") {
            if (toks.size() != 2 || (toks[1] != "0" && toks[1] != "1"))
                throw ParseError("closed_manifold takes 0 or 1", line);
            X.closed_manifold = toks[1] == "1";
        } else if (key == "cells") {
            if (toks.size() != 3) throw ParseError("cells takes a degree and a count", line);
            int j = to_int(toks[1], line);
            int n = to_int(toks[2], line);
            if (j != static_cast<int>(X.orbit_counts.size()))
                throw ParseError("cells must be listed for degrees 0, 1, ... in order", line);
            if (n < 0) throw ParseError("negative cell count", line);
            X.orbit_counts.push_back(n);
        } else if (key == "d") {
            auto eq = content.find('=');
            if (eq == std::string::npos) throw ParseError("boundary entry needs '='", line);
            auto head = split_ws(content.substr(0, eq));
            if (head.size() != 4) throw ParseError("expected d <j> <row> <col> = <sum>", line);
            entries.push_back({to_int(head[1], line), to_int(head[2], line), to_int(head[3], line), line,
                               content.substr(eq + 1)});
        } else {
            throw ParseError("unknown field '" + key + "'", line);
        }
    }
    if (!have_group) throw ParseError("missing group header", line);
    if (X.orbit_counts.empty()) throw ParseError("no cells declared", line);

    X.boundaries.resize(X.orbit_counts.size());
    for (int j = 1; j <= X.dim(); ++j)
        X.boundaries[static_cast<std::size_t>(j)] =
            GroupRingMatrix(X.orbit_counts[static_cast<std::size_t>(j - 1)], X.orbit_counts[static_cast<std::size_t>(j)]);
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : entries) {
        if (e.j < 1 || e.j > X.dim()) throw ParseError("boundary degree out of range", e.line);
        auto& d = X.boundaries[static_cast<std::size_t>(e.j)];
        if (e.row < 0 || e.row >= d.rows() || e.col < 0 || e.col >= d.cols())
            throw ParseError("boundary entry index out of range", e.line);
        if (!seen.insert({e.j, e.row, e.col}).second) throw ParseError("duplicate boundary entry", e.line);
        Cursor cur{e.sum, 0, e.line};
        d.at(e.row, e.col) = parse_sum(cur, X.spec);
    }
    if (!have_euler) X.euler_characteristic = X.orbit_euler();

    auto report = validate(X);
    if (!report.ok) throw ValidationError("complex '" + X.name + "' failed validation: " + report.message);
    return X;
}

EquivariantChainComplex load_complex(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open complex file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_complex(buf.str());
}

std::string format_complex(const EquivariantChainComplex& X) {
    std::ostringstream out;
    out << "name " << X.name << "\n";
    out << "group " << X.spec.name() << "\n";
    out << "euler " << X.euler_characteristic << "\n";
    out << "closed_manifold " << (X.closed_manifold ? 1 : 0) << "\n";
    for (int j = 0; j <= X.dim(); ++j) out << "cells " << j << " " << X.orbit_counts[static_cast<std::size_t>(j)] << "\n";
    for (int j = 1; j <= X.dim(); ++j) {
        const auto& d = X.boundary(j);
        for (int r = 0; r < d.rows(); ++r)
            for (int c = 0; c < d.cols(); ++c)
                if (!d.at(r, c).is_zero())
                    out << "d " << j << " " << r << " " << c << " = " << format_group_ring(X.spec, d.at(r, c)) << "\n";
    }
    return out.str();
}

}  // namespace l2lab
