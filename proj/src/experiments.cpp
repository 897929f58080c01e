#include "l2lab/errors.hpp"
#include "l2lab/folner.hpp"
#include "l2lab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace l2lab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
    const ExperimentConfig& config;
    EquivariantChainComplex complex;
    std::vector<int> degrees;
    ExperimentResult result;

    Context(const ExperimentConfig& c, const std::string& experiment)
        : config(c), complex(resolve_complex(c)), degrees(resolve_degrees(c, complex)) {
        result.experiment = experiment;
        result.config_hash = config_hash(c);
    }
    bool abelian() const { return complex.spec.family == GroupFamily::FreeAbelian; }
    void check(const std::string& name, bool ok, const std::string& detail) {
        result.assertions.push_back({name, ok, detail});
    }
};

struct Rung {
    int L = 0;
    BoundaryCondition condition = BoundaryCondition::Relative;
    std::size_t folner_size = 0;
    double cheeger = 0.0;
    std::optional<SectionComplex> section;
};

std::vector<Rung> build_rungs(const Context& ctx, const std::vector<int>& ladder) {
    std::vector<Rung> rungs;
    for (int L : ladder)
        for (auto bc : ctx.config.conditions) rungs.push_back({L, bc, 0, 0.0, std::nullopt});
    parallel_for(rungs.size(), ctx.config.threads, [&](std::size_t i) {
        auto F = folner_box(ctx.complex.spec, rungs[i].L);
        rungs[i].folner_size = F.size();
        rungs[i].cheeger = cheeger_ratio(F);
        rungs[i].section.emplace(build_section(ctx.complex, F, rungs[i].condition));
    });
    return rungs;
}

std::vector<Rung> build_rungs(const Context& ctx) { return build_rungs(ctx, ctx.config.ladder); }

/// Caps the grid so the tensor product stays under max_points samples.
QuadratureGrid capped_grid(QuadratureGrid grid, int d, double max_points) {
    int cap = static_cast<int>(std::floor(std::pow(max_points, 1.0 / std::max(d, 1)) + 1e-9));
    grid.points_per_axis = std::max(8, std::min(grid.points_per_axis, cap));
    return grid;
}

std::string cond_name(BoundaryCondition bc) { return to_string(bc); }

std::vector<double> l2_betti_oracle(Context& ctx, std::vector<std::string>& source) {
    int n = ctx.complex.dim();
    std::vector<double> out(static_cast<std::size_t>(n + 1), kNaN);
    source.assign(static_cast<std::size_t>(n + 1), "none");
    auto euler = l2_betti_from_euler(ctx.complex);
    if (euler) {
        out = *euler;
        source.assign(out.size(), "euler-identity");
    }
    if (ctx.abelian()) {
        QuadratureGrid coarse{std::min(ctx.config.quadrature.points_per_axis, 16), ctx.config.quadrature.rule};
        for (int j = 0; j <= n; ++j) {
            double sym = l2_betti(ctx.complex, j, coarse).value;
            auto js = static_cast<std::size_t>(j);
            if (std::isnan(out[js])) {
                out[js] = sym;
                source[js] = "symbol";
            } else if (std::abs(out[js] - sym) > 1e-9) {
                ctx.result.warnings.push_back("degree " + std::to_string(j) + ": Euler-identity L2 Betti " +
                                              fmt_num(out[js]) + " disagrees with symbol generic rank " + fmt_num(sym));
            }
        }
    }
    return out;
}

/// Largest change of a sorted eigenvalue between grid neighbours; every band
/// of the true symbol lies within this distance of its sampled range.
double neighbor_jump(const SymbolSpectrumTable& table, int d, int m) {
    double worst = 0.0;
    const std::size_t n = table.points();
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t stride = 1;
        for (int axis = 0; axis < d; ++axis, stride *= static_cast<std::size_t>(m)) {
            std::size_t digit = (p / stride) % static_cast<std::size_t>(m);
            std::size_t q = digit + 1 < static_cast<std::size_t>(m) ? p + stride : p - digit * stride;
            for (int k = 0; k < table.size(); ++k)
                worst = std::max(worst, std::abs(table.eigenvalues(p)[k] - table.eigenvalues(q)[k]));
        }
    }
    return worst;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

std::string list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt_num(v[i]);
    return s;
}

}  // namespace

ExperimentResult run_betti_convergence(const ExperimentConfig& config) {
    Context ctx(config, "betti");
    auto rungs = build_rungs(ctx);
    std::vector<std::string> source;
    auto oracle = l2_betti_oracle(ctx, source);
    const int n = ctx.complex.dim();

    std::vector<BettiVector> betti(rungs.size());
    parallel_for(rungs.size(), config.threads, [&](std::size_t i) { betti[i] = betti_numbers(*rungs[i].section); });

    Table rows{"betti", {"L", "folner_size", "condition", "degree", "cells", "betti", "normalized", "oracle",
                         "oracle_source", "gap", "cheeger"}, {}};
    Table sums{"partial_sums", {"L", "folner_size", "condition", "N", "betti_alt", "cells_alt", "normalized_alt",
                                "oracle_alt", "morse_ok"}, {}};
    bool morse_ok = true, euler_ok = true;
    std::string morse_detail, euler_detail;
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        const auto& S = *r.section;
        const double size = static_cast<double>(r.folner_size);
        for (int j : ctx.degrees) {
            auto js = static_cast<std::size_t>(j);
            double norm = betti[i].values[js] / size;
            rows.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition),
                          fmt_num(j), fmt_num(static_cast<long long>(S.cell_count(j))), fmt_num(betti[i].values[js]),
                          fmt_num(norm), fmt_num(oracle[js]), source[js], fmt_num(std::abs(norm - oracle[js])),
                          fmt_num(r.cheeger)});
        }
        for (int N = 0; N <= n; ++N) {
            long long b = 0, c = 0;
            double o = 0.0;
            for (int j = 0; j <= N; ++j) {
                int sign = (N - j) % 2 ? -1 : 1;
                b += sign * betti[i].values[static_cast<std::size_t>(j)];
                c += sign * static_cast<long long>(S.cell_count(j));
                o += sign * oracle[static_cast<std::size_t>(j)];
            }
            bool ok = b <= c;
            if (!ok) {
                morse_ok = false;
                morse_detail += " L=" + std::to_string(r.L) + "/" + cond_name(r.condition) + "/N=" + std::to_string(N);
            }
            if (N == n && b != (n % 2 ? -1 : 1) * cell_counts(S).euler) {
                euler_ok = false;
                euler_detail += " L=" + std::to_string(r.L) + "/" + cond_name(r.condition);
            }
            sums.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition),
                          fmt_num(N), fmt_num(b), fmt_num(c), fmt_num(b / size), fmt_num(o), ok ? "1" : "0"});
        }
    }
    ctx.check("morse partial-sum inequalities", morse_ok,
              morse_ok ? "sum_{j<=N} (-1)^{N-j} b_j <= same sum of cell counts on every row" : "violated at" + morse_detail);
    ctx.check("euler identity at top degree", euler_ok,
              euler_ok ? "alternating Betti sum equals chi(section) on every row" : "violated at" + euler_detail);

    if (!ctx.complex.spec.amenable()) {
        // On a tree every relative 1-cycle survives (b^1 = |F| exactly), so the
        // failure of convergence is a statement about the absolute sections.
        bool have_absolute = false;
        for (int j : ctx.degrees) {
            double target = oracle[static_cast<std::size_t>(j)];
            if (!(target > 0)) continue;
            double min_gap = 1e300;
            for (std::size_t i = 0; i < rungs.size(); ++i) {
                if (rungs[i].condition != BoundaryCondition::Absolute) continue;
                have_absolute = true;
                min_gap = std::min(min_gap, std::abs(betti[i].values[static_cast<std::size_t>(j)] /
                                                         static_cast<double>(rungs[i].folner_size) - target));
            }
            if (have_absolute)
                ctx.check("negative control: absolute degree " + std::to_string(j) + " gap persists", min_gap >= 0.9,
                          "min gap " + fmt_num(min_gap) + " against L2 Betti " + fmt_num(target) + " (required >= 0.9)");
        }
        std::vector<double> h;
        for (int L : config.ladder) h.push_back(cheeger_ratio(folner_box(ctx.complex.spec, L)));
        double lowest = *std::min_element(h.begin(), h.end());
        ctx.check("negative control: cheeger ratio bounded away from zero", lowest >= 1.0,
                  "ratios " + list(h) + " (required >= 1 at every rung)");
    }
    for (std::size_t j = 0; j < source.size(); ++j)
        if (source[j] == "none")
            ctx.result.notes.push_back("degree " + std::to_string(j) + ": no L2 Betti oracle for " +
                                       ctx.complex.spec.name() + "; rows report the finite sections only");
    ctx.result.tables = {rows, sums};
    return ctx.result;
}

ExperimentResult run_heat_convergence(const ExperimentConfig& config) {
    Context ctx(config, "heat");
    auto rungs = build_rungs(ctx);
    const auto opts = config.spectral_options();

    std::map<int, std::optional<SymbolSpectrumTable>> tables;
    if (ctx.abelian()) {
        auto grid = capped_grid(config.quadrature, ctx.complex.spec.rank, 1 << 22);
        for (int j : ctx.degrees) tables[j].emplace(ctx.complex, j, grid);
    } else {
        ctx.result.notes.push_back("no von Neumann oracle for " + ctx.complex.spec.name() + "; gaps are not reported");
    }

    struct Cell {
        HeatTrace trace;
        int betti = 0;
    };
    const std::size_t per_rung = ctx.degrees.size() * config.t_grid.size();
    std::vector<Cell> cells(rungs.size() * per_rung);
    parallel_for(rungs.size() * ctx.degrees.size(), config.threads, [&](std::size_t task) {
        std::size_t i = task / ctx.degrees.size(), k = task % ctx.degrees.size();
        const auto& S = *rungs[i].section;
        int j = ctx.degrees[k];
        int b = betti(S, j);
        SpectralOptions local = opts;
        local.seed = opts.seed + 7919 * task;
        std::optional<SpectralData> spectrum;
        if (S.cell_count(j) <= opts.dense_cap) spectrum = eigenvalues(S, j, local);
        for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
            auto& c = cells[i * per_rung + k * config.t_grid.size() + ti];
            c.betti = b;
            if (spectrum) c.trace = {heat_trace(*spectrum, config.t_grid[ti]), 0.0, "dense"};
            else c.trace = heat_trace(S, j, config.t_grid[ti], local);
        }
    });

    Table rows{"heat", {"L", "folner_size", "condition", "degree", "t", "trace_normalized", "standard_error", "method",
                        "oracle", "gap", "betti_normalized"}, {}};
    Table uniform{"uniformity", {"L", "folner_size", "condition", "degree", "max_gap"}, {}};
    Table envelope{"envelope", {"condition", "degree", "t", "envelope"}, {}};
    std::map<std::tuple<int, int, std::size_t>, std::vector<double>> gaps;  // (cond, j, t) -> along ladder
    std::map<std::tuple<int, int, std::size_t>, double> env;
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        const double size = static_cast<double>(r.folner_size);
        for (std::size_t k = 0; k < ctx.degrees.size(); ++k) {
            int j = ctx.degrees[k];
            double max_gap = kNaN;
            for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
                const auto& c = cells[i * per_rung + k * config.t_grid.size() + ti];
                double t = config.t_grid[ti];
                double norm = c.trace.value / size;
                double oracle = tables.count(j) ? tables[j]->heat_trace(t) : kNaN;
                double gap = std::abs(norm - oracle);
                rows.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition),
                              fmt_num(j), fmt_num(t), fmt_num(norm), fmt_num(c.trace.standard_error / size),
                              c.trace.method, fmt_num(oracle), fmt_num(gap), fmt_num(c.betti / size)});
                auto key = std::make_tuple(static_cast<int>(r.condition), j, ti);
                gaps[key].push_back(gap);
                double excess = norm - c.betti / size;
                env[key] = env.count(key) ? std::max(env[key], excess) : excess;
                if (!std::isnan(gap)) max_gap = std::isnan(max_gap) ? gap : std::max(max_gap, gap);
            }
            uniform.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition),
                             fmt_num(j), fmt_num(max_gap)});
        }
    }
    for (auto bc : config.conditions)
        for (int j : ctx.degrees)
            for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti)
                envelope.add_row({cond_name(bc), fmt_num(j), fmt_num(config.t_grid[ti]),
                                  fmt_num(env[{static_cast<int>(bc), j, ti}])});

    Table trend{"monotonicity", {"condition", "degree", "t", "gaps", "decreasing"}, {}};
    if (ctx.abelian() && config.ladder.size() > 1) {
        for (const auto& [key, g] : gaps) {
            bool down = strictly_decreasing(g);
            std::string where = cond_name(static_cast<BoundaryCondition>(std::get<0>(key)));
            trend.add_row({where, fmt_num(std::get<1>(key)), fmt_num(config.t_grid[std::get<2>(key)]), list(g), down ? "1" : "0"});
            if (!down)
                ctx.result.warnings.push_back("heat gap not strictly decreasing along the ladder at " + where + "/j=" +
                                              std::to_string(std::get<1>(key)) + "/t=" +
                                              fmt_num(config.t_grid[std::get<2>(key)]) + ": " + list(g));
        }
    }
    ctx.result.notes.push_back(
        "envelope f_j(t) is the supremum over this finite ladder of (trace - betti)/|F|; it is an empirical "
        "envelope and does not certify that a uniform envelope exists for the whole exhaustion");
    ctx.result.tables = {rows, uniform, envelope, trend};
    return ctx.result;
}

ExperimentResult run_ids(const ExperimentConfig& config) {
    Context ctx(config, "ids");
    auto rungs = build_rungs(ctx);
    const auto opts = config.spectral_options();

    std::map<int, std::optional<SymbolSpectrumTable>> tables;
    double resolution = kNaN;
    if (ctx.abelian()) {
        auto grid = capped_grid(config.quadrature, ctx.complex.spec.rank, 1 << 22);
        resolution = 1e-8;
        for (int j : ctx.degrees) {
            tables[j].emplace(ctx.complex, j, grid);
            resolution = std::max(resolution, 1e-8 + neighbor_jump(*tables[j], ctx.complex.spec.rank, grid.points_per_axis));
        }
    } else {
        ctx.result.notes.push_back("no von Neumann oracle for " + ctx.complex.spec.name());
    }

    std::vector<std::map<int, std::optional<SpectralData>>> spectra(rungs.size());
    std::vector<std::map<int, int>> bettis(rungs.size());
    std::vector<std::pair<std::size_t, int>> tasks;
    for (std::size_t i = 0; i < rungs.size(); ++i)
        for (int j : ctx.degrees) {
            spectra[i][j];
            bettis[i][j];
            tasks.emplace_back(i, j);
        }
    parallel_for(tasks.size(), config.threads, [&](std::size_t t) {
        auto [i, j] = tasks[t];
        const auto& S = *rungs[i].section;
        bettis[i][j] = betti(S, j);
        if (S.cell_count(j) <= opts.dense_cap) spectra[i][j] = eigenvalues(S, j, opts);
    });

    Table rows{"ids", {"L", "folner_size", "degree", "lambda", "relative", "absolute", "oracle", "rel_abs_diff",
                       "relative_gap", "absolute_gap", "status"}, {}};
    Table contain{"containment", {"L", "condition", "degree", "eigenvalues", "outside", "max_excess", "resolution"}, {}};
    bool hodge_ok = true, contain_ok = true;
    std::string hodge_detail, contain_detail;
    for (int L : config.ladder) {
        for (int j : ctx.degrees) {
            std::map<BoundaryCondition, std::size_t> at;
            for (std::size_t i = 0; i < rungs.size(); ++i)
                if (rungs[i].L == L) at[rungs[i].condition] = i;
            std::size_t size = rungs[at.begin()->second].folner_size;
            for (double lam : config.lambda_grid) {
                double val[2] = {kNaN, kNaN};
                std::string status = "ok";
                for (auto [bc, i] : at) {
                    const auto& sp = spectra[i][j];
                    if (!sp) {
                        status = "skipped:cap";
                        continue;
                    }
                    int count = spectral_count(*sp, lam);
                    val[bc == BoundaryCondition::Relative ? 0 : 1] = count / static_cast<double>(size);
                    if (lam == 0.0 && count != bettis[i][j]) {
                        hodge_ok = false;
                        hodge_detail += " L=" + std::to_string(L) + "/" + cond_name(bc) + "/j=" + std::to_string(j);
                    }
                }
                double oracle = tables.count(j) ? tables[j]->spectral_function(lam) : kNaN;
                rows.add_row({fmt_num(L), fmt_num(static_cast<long long>(size)), fmt_num(j), fmt_num(lam),
                              fmt_num(val[0]), fmt_num(val[1]), fmt_num(oracle), fmt_num(std::abs(val[0] - val[1])),
                              fmt_num(std::abs(val[0] - oracle)), fmt_num(std::abs(val[1] - oracle)), status});
            }
            if (!tables.count(j)) continue;
            auto bands = tables[j]->bands();
            for (auto [bc, i] : at) {
                const auto& sp = spectra[i][j];
                if (!sp) continue;
                std::size_t outside = 0;
                double max_excess = 0.0;
                for (double mu : sp->eigenvalues) {
                    double dist = 1e300;
                    for (const auto& [lo, hi] : bands) dist = std::min(dist, std::max({lo - mu, mu - hi, 0.0}));
                    max_excess = std::max(max_excess, dist);
                    if (dist > resolution) ++outside;
                }
                if (outside) {
                    contain_ok = false;
                    contain_detail += " L=" + std::to_string(L) + "/" + cond_name(bc) + "/j=" + std::to_string(j);
                }
                contain.add_row({fmt_num(L), cond_name(bc), fmt_num(j), fmt_num(static_cast<long long>(sp->eigenvalues.size())),
                                 fmt_num(static_cast<long long>(outside)), fmt_num(max_excess), fmt_num(resolution)});
            }
        }
    }
    ctx.check("counting function at zero equals exact betti", hodge_ok,
              hodge_ok ? "every lambda = 0 row" : "mismatch at" + hodge_detail);
    if (ctx.abelian())
        ctx.check("finite spectra inside the oracle spectral support", contain_ok,
                  contain_ok ? "every eigenvalue within " + fmt_num(resolution) + " of a sampled band"
                             : "outside at" + contain_detail);
    ctx.result.tables = {rows, contain};
    return ctx.result;
}

ExperimentResult run_nfb(const ExperimentConfig& config) {
    Context ctx(config, "nfb");
    if (!ctx.abelian() || ctx.complex.orbit_counts.at(0) != 1)
        throw ConfigError("nfb needs a free abelian complex with one vertex orbit (circle_Z, torus2_Z2)");
    const int d = ctx.complex.spec.rank;
    const int L = config.ladder.back();
    auto rungs = build_rungs(ctx, {L});

    Table kernel{"kernel", {"condition", "t", "vertex", "D", "D2_over_t", "lattice", "section", "diff"}, {}};
    Table fits{"fit", {"condition", "scope", "slope", "intercept", "r2", "points"}, {}};
    Table center{"center", {"condition", "t", "vertex", "D", "diff"}, {}};

    std::vector<std::optional<DenseSpectrum>> dense(rungs.size());
    parallel_for(rungs.size(), config.threads,
                 [&](std::size_t i) { dense[i].emplace(dense_spectrum(*rungs[i].section, 0, config.spectral_options())); });

    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        const auto& S = *r.section;
        const auto& spectrum = *dense[i];
        const std::string bc = cond_name(r.condition);
        std::vector<double> all_x, all_y;
        bool monotone = true;
        std::string monotone_detail;
        int center_index = -1;
        double best_center = -1;
        for (int v = 0; v < static_cast<int>(S.cell_count(0)); ++v) {
            double D = mirror_distance(S.cells(0)[static_cast<std::size_t>(v)].element, L, r.condition);
            if (D > best_center) best_center = D, center_index = v;
        }
        for (double t : config.t_grid) {
            double lattice = lattice_heat_kernel(d, t, std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
            std::vector<std::pair<double, double>> by_distance;
            std::vector<double> xs, ys;
            for (int v = 0; v < static_cast<int>(S.cell_count(0)); ++v) {
                const auto& g = S.cells(0)[static_cast<std::size_t>(v)].element;
                bool inside = std::all_of(g.coords.begin(), g.coords.end(), [&](auto c) { return c >= 0 && c < L; });
                if (!inside) continue;
                double D = mirror_distance(g, L, r.condition);
                double entry = heat_kernel_entry(spectrum, t, v, v);
                double diff = std::abs(lattice - entry);
                kernel.add_row({bc, fmt_num(t), format_element(ctx.complex.spec, g), fmt_num(D), fmt_num(D * D / t),
                                fmt_num(lattice), fmt_num(entry), fmt_num(diff)});
                if (diff > 1e-14) {
                    xs.push_back(D * D / t);
                    ys.push_back(std::log(diff));
                    by_distance.emplace_back(D, diff);
                }
            }
            std::sort(by_distance.begin(), by_distance.end());
            // equal distances (different axes of a torus) are not ordered against each other
            double prev_D = -1, prev_max = 1e300, cur_max = 0;
            for (const auto& [D, diff] : by_distance) {
                if (D != prev_D) {
                    if (prev_D >= 0) prev_max = cur_max;
                    cur_max = 0;
                    prev_D = D;
                }
                cur_max = std::max(cur_max, diff);
                if (diff >= prev_max) {
                    monotone = false;
                    monotone_detail = " t=" + fmt_num(t) + " D=" + fmt_num(D);
                }
            }
            if (xs.size() < 2) {
                ctx.result.warnings.push_back(bc + " t=" + fmt_num(t) + ": fewer than two diffs above 1e-14; "
                                              "use larger t (or a smaller L) so the boundary effect is resolvable");
            } else {
                auto f = fit_line(xs, ys);
                fits.add_row({bc, "t=" + fmt_num(t), fmt_num(f.slope), fmt_num(f.intercept), fmt_num(f.r2),
                              fmt_num(static_cast<long long>(f.points))});
            }
            all_x.insert(all_x.end(), xs.begin(), xs.end());
            all_y.insert(all_y.end(), ys.begin(), ys.end());

            const auto& cg = S.cells(0)[static_cast<std::size_t>(center_index)].element;
            double cdiff = std::abs(lattice - heat_kernel_entry(spectrum, t, center_index, center_index));
            center.add_row({bc, fmt_num(t), format_element(ctx.complex.spec, cg), fmt_num(best_center), fmt_num(cdiff)});
            ctx.check(bc + ": center diff at t=" + fmt_num(t), cdiff <= config.nfb_center_tolerance,
                      fmt_num(cdiff) + " (required <= " + fmt_num(config.nfb_center_tolerance) + ")");
        }
        auto pooled = fit_line(all_x, all_y);
        fits.add_row({bc, "pooled", fmt_num(pooled.slope), fmt_num(pooled.intercept), fmt_num(pooled.r2),
                      fmt_num(static_cast<long long>(pooled.points))});
        ctx.check(bc + ": pooled decay slope negative", pooled.points >= 2 && pooled.slope < 0,
                  "slope " + fmt_num(pooled.slope) + " over " + std::to_string(pooled.points) + " points");
        ctx.check(bc + ": pooled fit R^2", pooled.points >= 2 && pooled.r2 >= config.nfb_min_r2,
                  "R^2 " + fmt_num(pooled.r2) + " (required >= " + fmt_num(config.nfb_min_r2) + ")");
        ctx.check(bc + ": diff decreasing in distance", monotone,
                  monotone ? "at every t" : "first increase at" + monotone_detail);
    }
    ctx.result.notes.push_back("D is the distance to the reflecting boundary: half an edge beyond a side whose "
                               "outward edges are absent, the first dropped vertex on a side whose edges are kept");
    ctx.result.tables = {kernel, fits, center};
    return ctx.result;
}

ExperimentResult run_zeta(const ExperimentConfig& config) {
    Context ctx(config, "zeta");
    if (!ctx.abelian()) throw UnsupportedOracleError("zeta comparison needs a free abelian deck group");
    const int d = ctx.complex.spec.rank;
    std::vector<double> samples;
    for (double s : config.s_samples) {
        if (s > d / 2.0) samples.push_back(s);
        else ctx.result.notes.push_back("s=" + fmt_num(s) + " skipped: outside the half-plane Re s > " + fmt_num(d / 2.0));
    }
    if (samples.empty()) throw ConfigError("no s sample lies in the half-plane Re s > d/2");
    auto rungs = build_rungs(ctx);
    const auto opts = config.spectral_options();
    auto grid = capped_grid(config.quadrature, d, 1 << 22);

    std::map<int, std::vector<double>> oracle;
    for (int j : ctx.degrees) {
        SymbolSpectrumTable table(ctx.complex, j, grid);
        for (double s : samples) oracle[j].push_back(table.zeta(s, config.zeta_lambda).real());
    }

    std::vector<std::optional<SpectralData>> spectra(rungs.size() * ctx.degrees.size());
    parallel_for(spectra.size(), config.threads, [&](std::size_t t) {
        const auto& S = *rungs[t / ctx.degrees.size()].section;
        int j = ctx.degrees[t % ctx.degrees.size()];
        if (S.cell_count(j) <= opts.dense_cap) spectra[t] = eigenvalues(S, j, opts);
    });

    Table rows{"zeta", {"L", "folner_size", "condition", "degree", "s", "lambda", "finite", "oracle", "gap", "status"}, {}};
    Table uniform{"uniformity", {"L", "folner_size", "condition", "degree", "max_gap"}, {}};
    std::map<std::tuple<int, int, std::size_t>, std::vector<double>> gaps;
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        for (std::size_t k = 0; k < ctx.degrees.size(); ++k) {
            int j = ctx.degrees[k];
            const auto& sp = spectra[i * ctx.degrees.size() + k];
            double max_gap = 0.0;
            for (std::size_t si = 0; si < samples.size(); ++si) {
                double finite = sp ? zeta_finite(*sp, samples[si], config.zeta_lambda, static_cast<double>(r.folner_size)).real() : kNaN;
                double gap = std::abs(finite - oracle[j][si]);
                rows.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition),
                              fmt_num(j), fmt_num(samples[si]), fmt_num(config.zeta_lambda), fmt_num(finite),
                              fmt_num(oracle[j][si]), fmt_num(gap), sp ? "ok" : "skipped:cap"});
                if (sp) {
                    gaps[{static_cast<int>(r.condition), j, si}].push_back(gap);
                    max_gap = std::max(max_gap, gap);
                }
            }
            uniform.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition),
                             fmt_num(j), sp ? fmt_num(max_gap) : "nan"});
        }
    }
    Table trend{"monotonicity", {"condition", "degree", "s", "gaps", "decreasing"}, {}};
    if (config.ladder.size() > 1) {
        for (const auto& [key, g] : gaps) {
            bool down = strictly_decreasing(g);
            std::string where = cond_name(static_cast<BoundaryCondition>(std::get<0>(key)));
            trend.add_row({where, fmt_num(std::get<1>(key)), fmt_num(samples[std::get<2>(key)]), list(g), down ? "1" : "0"});
            if (!down)
                ctx.result.warnings.push_back("zeta gap not strictly decreasing along the ladder at " + where + "/j=" +
                                              std::to_string(std::get<1>(key)) + "/s=" +
                                              fmt_num(samples[std::get<2>(key)]) + ": " + list(g));
        }
    }
    ctx.result.tables = {rows, uniform, trend};
    return ctx.result;
}

ExperimentResult run_euler(const ExperimentConfig& config) {
    Context ctx(config, "euler");
    auto rungs = build_rungs(ctx);
    const auto opts = config.spectral_options();
    const int chi = ctx.complex.euler_characteristic;

    std::vector<double> residual(rungs.size(), kNaN);
    parallel_for(rungs.size(), config.threads, [&](std::size_t i) {
        const auto& S = *rungs[i].section;
        for (int j = 0; j <= S.dim(); ++j)
            if (S.cell_count(j) > opts.dense_cap) return;
        std::vector<SpectralData> sp;
        for (int j = 0; j <= S.dim(); ++j) sp.push_back(eigenvalues(S, j, opts));
        double worst = 0.0;
        for (double t : config.t_grid) {
            double alt = 0.0;
            for (int j = 0; j <= S.dim(); ++j) alt += (j % 2 ? -1.0 : 1.0) * heat_trace(sp[static_cast<std::size_t>(j)], t);
            worst = std::max(worst, std::abs(alt - static_cast<double>(cell_counts(S).euler)));
        }
        residual[i] = worst;
    });

    Table rows{"euler", {"L", "folner_size", "condition", "chi_section", "chi_normalized", "chi_manifold", "gap",
                         "gap_times_L", "mckean_singer_residual", "status"}, {}};
    bool exact_ok = true, mks_ok = true;
    std::string exact_detail;
    double worst_mks = 0.0;
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        long long e = cell_counts(*r.section).euler;
        double norm = static_cast<double>(e) / static_cast<double>(r.folner_size);
        double gap = std::abs(norm - chi);
        rows.add_row({fmt_num(r.L), fmt_num(static_cast<long long>(r.folner_size)), cond_name(r.condition), fmt_num(e),
                      fmt_num(norm), fmt_num(chi), fmt_num(gap), fmt_num(gap * r.L), fmt_num(residual[i]),
                      std::isnan(residual[i]) ? "skipped:cap" : "ok"});
        if (r.condition == BoundaryCondition::Relative && e != static_cast<long long>(chi) * static_cast<long long>(r.folner_size)) {
            exact_ok = false;
            exact_detail += " L=" + std::to_string(r.L);
        }
        if (!std::isnan(residual[i])) {
            worst_mks = std::max(worst_mks, residual[i]);
            if (residual[i] > 1e-8) mks_ok = false;
        }
    }
    if (std::count(config.conditions.begin(), config.conditions.end(), BoundaryCondition::Relative))
        ctx.check("relative euler characteristic equals |F| chi exactly", exact_ok,
                  exact_ok ? "every relative rung" : "differs at" + exact_detail);
    ctx.check("mckean-singer residual", mks_ok, "max " + fmt_num(worst_mks) + " over t-grid (required <= 1e-8)");
    ctx.result.tables = {rows};
    return ctx.result;
}

ExperimentResult run_ns_fit(const ExperimentConfig& config) {
    Context ctx(config, "nsfit");
    if (!ctx.abelian()) throw UnsupportedOracleError("nsfit needs a free abelian deck group");
    const int L = config.ladder.back();
    auto rungs = build_rungs(ctx, {L});
    const auto opts = config.spectral_options();
    // the counting function jumps at lambda ~ 0.01; resolve it finely
    QuadratureGrid fine = capped_grid({65536, config.quadrature.rule}, ctx.complex.spec.rank, 1 << 22);

    auto log_grid = [&](double lo, double hi) {
        std::vector<double> out;
        for (int k = 0; k < config.ns_points; ++k)
            out.push_back(lo * std::pow(hi / lo, k / static_cast<double>(config.ns_points - 1)));
        return out;
    };
    Table rows{"nsfit", {"source", "L", "degree", "window_lo", "window_hi", "beta", "intercept", "r2", "points"}, {}};

    auto fit = [&](const std::string& source, int j, const std::function<double(double)>& excess, double max_lambda) {
        double lo = config.ns_window[0], hi = config.ns_window[1];
        while (true) {
            std::vector<double> xs, ys;
            std::set<double> distinct;
            for (double lam : log_grid(lo, hi)) {
                double v = excess(lam);
                if (v > 0) {
                    xs.push_back(std::log(lam));
                    ys.push_back(std::log(v));
                    distinct.insert(v);
                }
            }
            if (distinct.size() >= 3 || hi >= max_lambda) {
                auto f = fit_line(xs, ys);
                rows.add_row({source, source == "oracle" ? "nan" : fmt_num(L), fmt_num(j), fmt_num(lo), fmt_num(hi),
                              distinct.size() >= 2 ? fmt_num(f.slope) : "nan", fmt_num(f.intercept), fmt_num(f.r2),
                              fmt_num(static_cast<long long>(f.points))});
                return;
            }
            hi *= 2;
            ctx.result.warnings.push_back(source + " degree " + std::to_string(j) +
                                          ": fewer than three distinct small eigenvalue counts; window widened to [" +
                                          fmt_num(lo) + ", " + fmt_num(hi) + "]");
        }
    };

    for (int j : ctx.degrees) {
        for (const auto& r : rungs) {
            const auto& S = *r.section;
            if (S.cell_count(j) > opts.dense_cap) {
                ctx.result.warnings.push_back(cond_name(r.condition) + " degree " + std::to_string(j) +
                                              ": skipped, cell count above dense cap");
                continue;
            }
            auto sp = eigenvalues(S, j, opts);
            int zero = spectral_count(sp, 0.0);
            double size = static_cast<double>(r.folner_size);
            double top = sp.eigenvalues.empty() ? 1.0 : sp.eigenvalues.back();
            fit(cond_name(r.condition), j, [&](double lam) { return (spectral_count(sp, lam) - zero) / size; }, top);
        }
        SymbolSpectrumTable table(ctx.complex, j, fine);
        double generic_kernel = static_cast<double>(table.size() - table.max_rank());
        double top = 0.0;
        for (const auto& [lo, hi] : table.bands()) top = std::max(top, hi);
        fit("oracle", j, [&](double lam) { return table.spectral_function(lam) - generic_kernel; }, top);
    }
    ctx.result.notes.push_back("oracle grid " + std::to_string(fine.points_per_axis) + " points per axis");
    ctx.result.notes.push_back("fitted exponents are reported without a reference value; compare finite sections "
                               "against the symbol-side fit");
    ctx.result.tables = {rows};
    return ctx.result;
}

ExperimentResult run_validate(const ExperimentConfig& config) {
    ExperimentResult result;
    result.experiment = "validate";
    result.config_hash = config_hash(config);
    EquivariantChainComplex X;
    try {
        X = resolve_complex(config);
    } catch (const ValidationError& err) {
        // loading validates; a failure here is the answer, not a config problem
        result.assertions.push_back({"complex is a chain complex", false, err.what()});
        return result;
    }
    auto report = validate(X);
    result.assertions.push_back({"complex " + X.name + " is a chain complex", report.ok,
                                 report.ok ? "d o d = 0 over the group ring" : report.message});
    Table rows{"sections", {"L", "folner_size", "condition", "cells", "euler", "status"}, {}};
    bool sections_ok = true;
    for (int L : config.ladder)
        for (auto bc : config.conditions) {
            auto F = folner_box(X.spec, L);
            std::string cells, status = "ok";
            long long e = 0;
            try {
                auto S = build_section(X, F, bc);
                auto counts = cell_counts(S);
                for (std::size_t j = 0; j < counts.counts.size(); ++j)
                    cells += (j ? " " : "") + std::to_string(counts.counts[j]);
                e = counts.euler;
            } catch (const ValidationError& err) {
                status = "invalid";
                sections_ok = false;
                result.warnings.push_back(err.what());
            }
            rows.add_row({fmt_num(L), fmt_num(static_cast<long long>(F.size())), cond_name(bc), cells, fmt_num(e), status});
        }
    result.assertions.push_back({"sections are chain complexes", sections_ok, "every rung and condition"});
    result.tables = {rows};
    return result;
}

std::vector<std::string> experiment_names() { return {"betti", "heat", "ids", "nfb", "zeta", "euler", "nsfit", "validate"}; }

ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& config) {
    if (name == "betti") return run_betti_convergence(config);
    if (name == "heat") return run_heat_convergence(config);
    if (name == "ids") return run_ids(config);
    if (name == "nfb") return run_nfb(config);
    if (name == "zeta") return run_zeta(config);
    if (name == "euler") return run_euler(config);
    if (name == "nsfit") return run_ns_fit(config);
    if (name == "validate") return run_validate(config);
    throw ConfigError("unknown experiment " + name);
}

}  // namespace l2lab
