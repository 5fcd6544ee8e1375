#include "eik/harness.hpp"

#include "eik/errors.hpp"
#include "eik/reference.hpp"
#include "eik/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace eik {

std::string to_string(ExperimentCase c) {
    switch (c) {
        case ExperimentCase::Canonical1D: return "canonical-1d";
        case ExperimentCase::Canonical2D: return "canonical-2d";
        case ExperimentCase::NonconstantP: return "nonconstant-p";
    }
    return "?";
}

ExperimentCase experiment_case_from_string(const std::string& s) {
    if (s == "canonical-1d") return ExperimentCase::Canonical1D;
    if (s == "canonical-2d") return ExperimentCase::Canonical2D;
    if (s == "nonconstant-p") return ExperimentCase::NonconstantP;
    throw ConfigError("unknown experiment case: " + s);
}

int case_dim(ExperimentCase c) {
    return c == ExperimentCase::Canonical2D ? 2 : 1;
}

DomainSpec case_domain(ExperimentCase c) {
    return DomainSpec::box_boundary(case_dim(c));
}

PotentialSpec case_potential(ExperimentCase c) {
    if (c == ExperimentCase::NonconstantP)
        return PotentialSpec::radial_ramp(1.0, 0.5, std::vector<double>(case_dim(c), 0.5));
    return PotentialSpec::constant(1.0);
}

BoundaryDataSpec case_psi(ExperimentCase c) {
    if (c == ExperimentCase::NonconstantP)
        return BoundaryDataSpec::linear(0.0, std::vector<double>(case_dim(c), 0.25));
    return BoundaryDataSpec::zero();
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n_list.empty()) throw ConfigError("n_list is empty");
    if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
        std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end())
        throw ConfigError("n_list must be strictly increasing");
    if (cfg.seeds.empty()) throw ConfigError("seeds is empty");
    if (cfg.dt_rule.kind == DtRule::Kind::EpsPower && cfg.dt_rule.p < 1.0)
        throw ConfigError("dt rule exponent p must be >= 1 (dt = o(eps))");
    if (cfg.dt_rule.kind == DtRule::Kind::CflFraction &&
        !(cfg.dt_rule.c > 0.0 && cfg.dt_rule.c <= 1.0))
        throw ConfigError("CFL fraction must lie in (0, 1]");
    if (cfg.eps_mode == EpsMode::Manual && cfg.manual_eps.size() != cfg.n_list.size())
        throw ConfigError("manual_eps must match n_list");
    if (!(cfg.T > 0.0)) throw ConfigError("experiment horizon T must be positive");
}

ConvergenceSummary summarize(const std::vector<ConvergenceRow>& rows, double nu, int m) {
    ConvergenceSummary s;
    s.theoretical_slope = std::min(nu, 0.5) / ((1.0 + nu) * m);
    for (const auto& r : rows) {
        if (!r.status.empty()) continue;
        auto it = std::find(s.ns.begin(), s.ns.end(), r.n);
        if (it == s.ns.end()) {
            s.ns.push_back(r.n);
            s.mean_error.push_back(0.0);
        }
    }
    std::sort(s.ns.begin(), s.ns.end());
    std::vector<int> counts(s.ns.size(), 0);
    for (const auto& r : rows) {
        if (!r.status.empty()) continue;
        std::size_t k = std::lower_bound(s.ns.begin(), s.ns.end(), r.n) - s.ns.begin();
        s.mean_error[k] += r.sup_error;
        counts[k] += 1;
    }
    for (std::size_t k = 0; k < s.ns.size(); ++k)
        if (counts[k] > 0) s.mean_error[k] /= counts[k];

    if (s.ns.size() >= 2) {
        // least squares of log(mean err) on log(log n / n)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t k = 0; k < s.ns.size(); ++k) {
            if (!(s.mean_error[k] > 0.0)) continue;
            double x = std::log(std::log(static_cast<double>(s.ns[k])) / s.ns[k]);
            double y = std::log(s.mean_error[k]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2) {
            double denom = cnt * sxx - sx * sx;
            if (std::abs(denom) > 0) {
                s.fitted_slope = (cnt * sxy - sx * sy) / denom;
                s.slope_defined = true;
            }
        }
    }
    return s;
}

namespace {

double rule_dt(const DtRule& rule, double eps, double cfl_bound) {
    if (rule.kind == DtRule::Kind::CflFraction) return rule.c * cfl_bound;
    return rule.c * std::pow(eps, rule.p);
}

struct CaseSetup {
    DomainSpec domain;
    PotentialSpec P;
    BoundaryDataSpec psi;
    KernelProfile profile;
    int m;
};

CaseSetup make_setup(const ExperimentConfig& cfg) {
    CaseSetup s{case_domain(cfg.kase), case_potential(cfg.kase), case_psi(cfg.kase),
                KernelProfile{}, case_dim(cfg.kase)};
    RawProfile raw;
    raw.shape = cfg.kernel;
    raw.r_g = cfg.r_g;
    s.profile = validate_profile(raw);
    return s;
}

} // namespace

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
    validate_config(cfg);
    CaseSetup setup = make_setup(cfg);

    // reference oracle: closed form for the canonical cases, upwind grid else
    GridUpwindSolution grid;
    const bool analytic = cfg.kase != ExperimentCase::NonconstantP;
    if (!analytic)
        grid = grid_upwind_solve(setup.domain, setup.P, setup.psi, cfg.grid_spacing, cfg.T, 0.0,
                                 cfg.snapshots);

    std::vector<double> snaps = cfg.snapshots;
    std::sort(snaps.begin(), snaps.end());

    struct RowSpec {
        int n;
        std::size_t n_index;
        std::uint64_t seed;
    };
    std::vector<RowSpec> specs;
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
        for (std::uint64_t seed : cfg.seeds) specs.push_back({cfg.n_list[i], i, seed});

    std::vector<ConvergenceRow> rows(specs.size());

    auto run_row = [&](std::size_t ri) {
        const RowSpec& rs = specs[ri];
        ConvergenceRow row;
        row.n = rs.n;
        row.seed = rs.seed;
        auto t0 = std::chrono::steady_clock::now();
        try {
            SamplingConfig sc;
            sc.n = rs.n;
            sc.m = setup.m;
            sc.nu = cfg.nu;
            sc.tau = cfg.tau;
            sc.seed = rs.seed;

            double eps;
            if (cfg.eps_mode == EpsMode::Manual) {
                eps = cfg.manual_eps[rs.n_index];
            } else {
                try {
                    eps = scale_parameter(sc, setup.profile);
                } catch (const ScaleExceedsDomain&) {
                    // law exceeds the domain at desk scale: cap at the largest
                    // usable scale and flag the row
                    eps = std::sqrt(static_cast<double>(setup.m)) / setup.profile.r_g;
                    row.eps_clamped = true;
                }
            }
            row.eps = eps;

            GraphProblem graph =
                build_graph(setup.domain, sc, setup.profile, setup.P, setup.psi, eps);
            if (cfg.perturb_delta > 0.0) {
                auto gen = substream(rs.seed, "harness.perturb");
                for (int u = 0; u < graph.size(); ++u)
                    graph.potential[u] = std::max(
                        0.0, graph.potential[u] + cfg.perturb_delta * (2.0 * uniform01(gen) - 1.0));
            }

            SchemeConfig sch;
            sch.scheme = cfg.scheme;
            sch.T = cfg.T;
            sch.dt = rule_dt(cfg.dt_rule, eps, graph.cfl_bound);
            row.dt = sch.dt;

            SolveOptions opts;
            opts.snapshot_times = snaps;
            SolveResult sol = solve(graph, sch, opts);

            double err = 0.0;
            for (std::size_t k = 0; k < snaps.size(); ++k) {
                const SolverState& st = sol.snapshots[k];
                for (int u = 0; u < graph.size(); ++u) {
                    double ref = analytic
                                     ? analytic_min_dist(setup.domain, setup.P, setup.psi,
                                                         graph.vertices[u], snaps[k])
                                     : grid.eval(graph.vertices[u], snaps[k]);
                    err = std::max(err, std::abs(st.values[u] - ref));
                }
            }
            row.sup_error = err;

            double supP = 0.0;
            for (int u = 0; u < graph.size(); ++u) supP = std::max(supP, graph.potential[u]);
            double L = setup.psi.lip() + supP;
            row.time_lip_ratio = L > 0.0 ? sol.max_increment / (L * sch.dt) : 0.0;
        } catch (const std::exception& e) {
            row.status = e.what();
            std::replace(row.status.begin(), row.status.end(), ',', ';');
        }
        row.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows[ri] = std::move(row);
    };

    int nw = std::min<int>(thread_count(), static_cast<int>(specs.size()));
    if (nw <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) run_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1))
                    run_row(i);
            });
        for (auto& th : pool) th.join();
    }

    ConvergenceReport rep;
    rep.rows = std::move(rows); // already in (n, seed) order by construction
    rep.summary = summarize(rep.rows, cfg.nu, setup.m);
    return rep;
}

// --- report emission ----------------------------------------------------------

void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path,
                 double nu, int m, bool include_timing) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    if (format == ReportFormat::Csv) {
        out << "n,seed,eps,dt,sup_error,eps_clamped,status";
        if (include_timing) out << ",wall_time";
        out << "\n";
        for (const auto& r : report.rows) {
            out << r.n << "," << r.seed << "," << fmt_g17(r.eps) << "," << fmt_g17(r.dt) << ","
                << fmt_g17(r.sup_error) << "," << (r.eps_clamped ? 1 : 0) << "," << r.status;
            if (include_timing) out << "," << fmt_g17(r.wall_time);
            out << "\n";
        }
        if (report.rows.empty()) {
            if (!out) throw IoFailure("write failed: " + path);
            return; // header-only
        }
        const auto& s = report.summary;
        for (std::size_t k = 0; k < s.ns.size(); ++k)
            out << "# summary n=" << s.ns[k] << " mean_error=" << fmt_g17(s.mean_error[k]) << "\n";
        if (s.slope_defined)
            out << "# summary fitted_slope=" << fmt_g17(s.fitted_slope)
                << " theoretical_slope=" << fmt_g17(s.theoretical_slope) << "\n";
        else
            out << "# summary fitted_slope=insufficient-points theoretical_slope="
                << fmt_g17(s.theoretical_slope) << "\n";
    } else {
        for (const auto& r : report.rows) {
            out << "{\"n\":" << r.n << ",\"seed\":" << r.seed << ",\"eps\":" << fmt_g17(r.eps)
                << ",\"dt\":" << fmt_g17(r.dt) << ",\"sup_error\":" << fmt_g17(r.sup_error)
                << ",\"eps_clamped\":" << (r.eps_clamped ? "true" : "false") << ",\"status\":\""
                << r.status << "\"";
            if (include_timing) out << ",\"wall_time\":" << fmt_g17(r.wall_time);
            out << "}\n";
        }
        if (report.rows.empty()) {
            if (!out) throw IoFailure("write failed: " + path);
            return;
        }
        const auto& s = report.summary;
        out << "{\"summary\":{\"mean_error\":{";
        for (std::size_t k = 0; k < s.ns.size(); ++k)
            out << (k ? "," : "") << "\"" << s.ns[k] << "\":" << fmt_g17(s.mean_error[k]);
        out << "}";
        if (s.slope_defined) out << ",\"fitted_slope\":" << fmt_g17(s.fitted_slope);
        out << ",\"theoretical_slope\":" << fmt_g17(s.theoretical_slope) << "}}\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

ConvergenceReport parse_report(const std::string& path, ReportFormat format, double nu, int m) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    ConvergenceReport rep;
    std::string line;
    if (format == ReportFormat::Csv) {
        if (!std::getline(in, line)) throw IoFailure("empty report: " + path);
        bool has_timing = line.find("wall_time") != std::string::npos;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ss(line);
            std::string tok;
            ConvergenceRow r;
            std::getline(ss, tok, ','); r.n = std::atoi(tok.c_str());
            std::getline(ss, tok, ','); r.seed = std::strtoull(tok.c_str(), nullptr, 10);
            std::getline(ss, tok, ','); r.eps = std::strtod(tok.c_str(), nullptr);
            std::getline(ss, tok, ','); r.dt = std::strtod(tok.c_str(), nullptr);
            std::getline(ss, tok, ','); r.sup_error = std::strtod(tok.c_str(), nullptr);
            std::getline(ss, tok, ','); r.eps_clamped = tok == "1";
            std::getline(ss, tok, ','); r.status = tok;
            if (has_timing && std::getline(ss, tok, ','))
                r.wall_time = std::strtod(tok.c_str(), nullptr);
            rep.rows.push_back(std::move(r));
        }
    } else {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            if (j.contains("summary")) continue;
            ConvergenceRow r;
            r.n = j.at("n").get<int>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.eps = j.at("eps").get<double>();
            r.dt = j.at("dt").get<double>();
            r.sup_error = j.at("sup_error").get<double>();
            r.eps_clamped = j.value("eps_clamped", false);
            r.status = j.value("status", std::string{});
            r.wall_time = j.value("wall_time", 0.0);
            rep.rows.push_back(std::move(r));
        }
    }
    rep.summary = summarize(rep.rows, nu, m);
    return rep;
}

} // namespace eik
