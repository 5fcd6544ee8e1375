// graph-eikonal: generate random graph problems, march the nonlocal Eikonal
// schemes, produce reference solutions, and run convergence/property suites.
//
// Exit codes: 0 success, 1 property-suite failure, 2 configuration error,
// 3 numerical failure.

#include "eik/config.hpp"
#include "eik/errors.hpp"
#include "eik/harness.hpp"
#include "eik/reference.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace eik;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::strtod(tok.c_str(), nullptr));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::atoi(tok.c_str()));
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::strtoull(tok.c_str(), nullptr, 10));
    return out;
}

DomainSpec parse_gamma_flag(int m, const std::string& gamma) {
    if (gamma == "box") return DomainSpec::box_boundary(m);
    if (gamma.rfind("sphere:", 0) == 0) {
        auto vals = parse_double_list(gamma.substr(7));
        if (static_cast<int>(vals.size()) != m + 1)
            throw ConfigError("sphere:<c0,..,c_{m-1},r> needs m+1 values");
        double r = vals.back();
        vals.pop_back();
        return DomainSpec::sphere_shell(m, vals, r);
    }
    if (gamma.rfind("points:", 0) == 0)
        return DomainSpec::point_set(m, read_cloud_csv(gamma.substr(7)));
    throw ConfigError("unknown gamma spec: " + gamma);
}

PotentialSpec parse_potential_flag(int m, const std::string& s) {
    if (s.rfind("const:", 0) == 0) return PotentialSpec::constant(std::strtod(s.c_str() + 6, nullptr));
    if (s.rfind("ramp:", 0) == 0) {
        auto vals = parse_double_list(s.substr(5)); // base,slope[,x0...]
        if (vals.size() < 2) throw ConfigError("ramp:<base,slope[,x0...]>");
        std::vector<double> x0(vals.begin() + 2, vals.end());
        if (x0.empty()) x0.assign(m, 0.5);
        return PotentialSpec::radial_ramp(vals[0], vals[1], x0);
    }
    throw ConfigError("unknown potential spec: " + s);
}

BoundaryDataSpec parse_psi_flag(int m, const std::string& s) {
    if (s == "zero") return BoundaryDataSpec::zero();
    if (s.rfind("linear:", 0) == 0) {
        auto vals = parse_double_list(s.substr(7)); // offset,c0,...
        if (static_cast<int>(vals.size()) != m + 1) throw ConfigError("linear:<offset,c0..c_{m-1}>");
        return BoundaryDataSpec::linear(vals[0], {vals.begin() + 1, vals.end()});
    }
    throw ConfigError("unknown psi spec: " + s);
}

KernelProfile profile_from_flags(const std::string& shape, double r_g, double a) {
    RawProfile raw;
    raw.shape = kernel_shape_from_string(shape);
    raw.r_g = r_g;
    if (a > 0.0) raw.a = a;
    return validate_profile(raw);
}

int cmd_gen(int n, int m, double nu, double tau, std::uint64_t seed, const std::string& gamma,
            const std::string& eps_flag, const std::string& kernel, double r_g, double a,
            const std::string& out, const std::string& boundary_out, const std::string& edges_out) {
    DomainSpec domain = parse_gamma_flag(m, gamma);
    validate_domain(domain);
    KernelProfile prof = profile_from_flags(kernel, r_g, a);
    SamplingConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.nu = nu;
    cfg.tau = tau;
    cfg.seed = seed;

    PointCloud pts = sample_vertices(domain, cfg);
    double eps;
    if (eps_flag == "auto") {
        eps = scale_parameter(cfg, prof);
    } else {
        eps = std::strtod(eps_flag.c_str(), nullptr);
        std::cerr << "note: manual eps bypasses the n-scaling law\n";
    }
    auto gamma_n = build_boundary(pts, domain, eps, nu, prof);
    write_cloud_csv(out, pts);
    if (!boundary_out.empty()) write_index_csv(boundary_out, gamma_n);
    if (!edges_out.empty()) {
        std::vector<std::int32_t> sorted = gamma_n;
        write_edges_csv(edges_out, build_adjacency(pts, eps, prof, sorted));
    }
    std::cout << "n=" << n << " m=" << m << " eps=" << fmt_g17(eps)
              << " boundary=" << gamma_n.size() << "\n";
    return 0;
}

int cmd_solve(const std::string& graph_path, const std::string& gamma_path,
              const std::string& scheme, double T, const std::string& dt_flag,
              const std::string& eps_flag, const std::string& snapshots,
              const std::string& kernel, double r_g, double a, double nu, double tau,
              const std::string& potential, const std::string& psi, const std::string& out) {
    PointCloud pts = read_cloud_csv(graph_path);
    auto gamma_idx = read_index_csv(gamma_path);
    KernelProfile prof = profile_from_flags(kernel, r_g, a);
    const int m = pts.m;

    double eps;
    if (eps_flag == "auto") {
        SamplingConfig cfg;
        cfg.n = pts.size();
        cfg.m = m;
        cfg.nu = nu;
        cfg.tau = tau;
        eps = scale_parameter(cfg, prof);
    } else {
        eps = std::strtod(eps_flag.c_str(), nullptr);
    }

    PotentialSpec P = parse_potential_flag(m, potential);
    BoundaryDataSpec b = parse_psi_flag(m, psi);
    GraphProblem g = assemble_graph(std::move(pts), gamma_idx, eps, prof, P, b);

    SchemeConfig cfg;
    cfg.scheme = scheme_from_string(scheme);
    cfg.T = T;
    cfg.dt = dt_flag == "auto" ? 0.0 : std::strtod(dt_flag.c_str(), nullptr);

    SolveOptions opts;
    opts.snapshot_times = parse_double_list(snapshots);
    if (opts.snapshot_times.empty()) opts.snapshot_times = {T};
    SolveResult res = solve(g, cfg, opts);

    std::ofstream os(out);
    if (!os) throw IoFailure("cannot open " + out);
    os << "idx";
    for (int axis = 0; axis < m; ++axis) os << ",x" << axis;
    std::vector<double> snaps = opts.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    for (double s : snaps) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", s);
        os << ",f@" << buf;
    }
    os << "\n";
    for (int u = 0; u < g.size(); ++u) {
        os << u;
        auto x = g.vertices[u];
        for (int axis = 0; axis < m; ++axis) os << "," << fmt_g17(x[axis]);
        for (const auto& st : res.snapshots) os << "," << fmt_g17(st.values[u]);
        os << "\n";
    }
    std::cout << "solved " << g.size() << " vertices to T=" << fmt_g17(T)
              << " dt=" << fmt_g17(res.snapshots.back().dt) << " steps=" << res.steps << "\n";
    return 0;
}

int cmd_reference(const std::string& kase, int m, double spacing, double T,
                  const std::string& dt_flag, const std::string& gamma, const std::string& out) {
    if (kase != "canonical") throw ConfigError("reference supports --case canonical");
    DomainSpec domain = parse_gamma_flag(m, gamma);
    double dt = dt_flag == "auto" ? 0.0 : std::strtod(dt_flag.c_str(), nullptr);
    GridUpwindSolution sol = grid_upwind_solve(domain, PotentialSpec::constant(1.0),
                                               BoundaryDataSpec::zero(), spacing, T, dt, {});
    write_grid_dump(out, sol);
    std::cout << "grid reference m=" << m << " spacing=" << fmt_g17(spacing)
              << " dt=" << fmt_g17(sol.dt) << " -> " << out << "\n";
    return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out,
                 const std::string& format, bool timing, const std::string& n_list,
                 const std::string& seeds, const std::string& kase, const std::string& scheme,
                 const std::string& eps_mode, const std::string& manual_eps) {
    FullConfig full = config_path.empty() ? default_config() : load_config_file(config_path);
    ExperimentConfig& e = full.experiment;
    if (!kase.empty()) e.kase = experiment_case_from_string(kase);
    if (!n_list.empty()) e.n_list = parse_int_list(n_list);
    if (!seeds.empty()) e.seeds = parse_u64_list(seeds);
    if (!scheme.empty()) e.scheme = scheme_from_string(scheme);
    if (!eps_mode.empty()) e.eps_mode = eps_mode == "manual" ? EpsMode::Manual : EpsMode::TheoremLaw;
    if (!manual_eps.empty()) e.manual_eps = parse_double_list(manual_eps);

    ConvergenceReport rep = run_convergence(e);
    ReportFormat fmt = format == "json-lines" ? ReportFormat::JsonLines : ReportFormat::Csv;
    emit_report(rep, fmt, out, e.nu, case_dim(e.kase), timing);

    for (std::size_t k = 0; k < rep.summary.ns.size(); ++k)
        std::cout << "n=" << rep.summary.ns[k]
                  << " mean_error=" << fmt_g17(rep.summary.mean_error[k]) << "\n";
    if (rep.summary.slope_defined)
        std::cout << "fitted_slope=" << fmt_g17(rep.summary.fitted_slope)
                  << " theoretical_slope=" << fmt_g17(rep.summary.theoretical_slope) << "\n";
    else
        std::cout << "fitted_slope: insufficient points (theoretical "
                  << fmt_g17(rep.summary.theoretical_slope) << ")\n";
    bool any_err = false;
    for (const auto& r : rep.rows)
        if (!r.status.empty()) {
            std::cerr << "row n=" << r.n << " seed=" << r.seed << " failed: " << r.status << "\n";
            any_err = true;
        }
    return any_err ? 3 : 0;
}

int cmd_verify(const std::string& suite, int trials, std::uint64_t seed) {
    std::vector<PropertySuite> suites;
    if (suite == "all")
        suites = all_property_suites();
    else
        suites.push_back(property_suite_from_string(suite));

    bool all_pass = true;
    for (PropertySuite s : suites) {
        int t = trials;
        if (t <= 0) {
            switch (s) {
                case PropertySuite::Monotonicity: t = 200; break;
                case PropertySuite::Comparison: t = 100; break;
                case PropertySuite::AdjacencyOracle: t = 10; break;
                case PropertySuite::FwBwAgreement: t = 1; break;
                default: t = 8; break;
            }
        }
        SuiteResult r = run_property_suite(s, t, seed);
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << to_string(s) << " trials=" << r.trials
                  << " violations=" << r.violations << " worst_slack=" << fmt_g17(r.worst_slack)
                  << " (" << r.detail << ")\n";
    }
    return all_pass ? 0 : 1;
}

int cmd_report(const std::string& in, const std::string& format, const std::string& out,
               const std::string& to_format, double nu, int m) {
    ReportFormat fmt = format == "json-lines" ? ReportFormat::JsonLines : ReportFormat::Csv;
    ConvergenceReport rep = parse_report(in, fmt, nu, m);
    for (std::size_t k = 0; k < rep.summary.ns.size(); ++k)
        std::cout << "n=" << rep.summary.ns[k]
                  << " mean_error=" << fmt_g17(rep.summary.mean_error[k]) << "\n";
    if (rep.summary.slope_defined)
        std::cout << "fitted_slope=" << fmt_g17(rep.summary.fitted_slope)
                  << " theoretical_slope=" << fmt_g17(rep.summary.theoretical_slope) << "\n";
    else
        std::cout << "fitted_slope: insufficient points\n";
    if (!out.empty()) {
        ReportFormat tf = to_format == "json-lines" ? ReportFormat::JsonLines : ReportFormat::Csv;
        emit_report(rep, tf, out, nu, m, false);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal Eikonal solver on weighted geometric graphs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "sample a random graph problem");
    int g_n = 4000, g_m = 2;
    double g_nu = 0.5, g_tau = 1.0, g_rg = 1.0, g_a = -1.0;
    std::uint64_t g_seed = 42;
    std::string g_gamma = "box", g_eps = "auto", g_kernel = "triangle";
    std::string g_out = "cloud.csv", g_bout = "gamma.csv", g_eout;
    gen->add_option("--n", g_n);
    gen->add_option("--m", g_m);
    gen->add_option("--nu", g_nu);
    gen->add_option("--tau", g_tau);
    gen->add_option("--seed", g_seed);
    gen->add_option("--gamma", g_gamma, "box | sphere:<c..,r> | points:<csv>");
    gen->add_option("--eps", g_eps, "auto | <value>");
    gen->add_option("--kernel", g_kernel, "triangle | trunc-exp");
    gen->add_option("--r-g", g_rg);
    gen->add_option("--a", g_a);
    gen->add_option("--out", g_out);
    gen->add_option("--boundary-out", g_bout);
    gen->add_option("--edges-out", g_eout);

    // solve
    auto* sv = app.add_subcommand("solve", "march a scheme on a stored graph");
    std::string s_graph, s_gamma, s_scheme = "fd", s_dt = "auto", s_eps = "auto";
    std::string s_snaps = "", s_kernel = "triangle", s_pot = "const:1", s_psi = "zero";
    std::string s_out = "solution.csv";
    double s_T = 1.0, s_rg = 1.0, s_a = -1.0, s_nu = 0.5, s_tau = 1.0;
    sv->add_option("--graph", s_graph)->required();
    sv->add_option("--gamma-idx", s_gamma)->required();
    sv->add_option("--scheme", s_scheme, "fd | bd");
    sv->add_option("--T", s_T);
    sv->add_option("--dt", s_dt, "auto | <value>");
    sv->add_option("--eps", s_eps, "auto | <value>");
    sv->add_option("--snapshots", s_snaps, "comma list of times");
    sv->add_option("--kernel", s_kernel);
    sv->add_option("--r-g", s_rg);
    sv->add_option("--a", s_a);
    sv->add_option("--nu", s_nu);
    sv->add_option("--tau", s_tau);
    sv->add_option("--potential", s_pot, "const:<v> | ramp:<base,slope[,x0..]>");
    sv->add_option("--psi", s_psi, "zero | linear:<offset,c..>");
    sv->add_option("--out", s_out);

    // reference
    auto* rf = app.add_subcommand("reference", "grid reference solution dump");
    std::string r_case = "canonical", r_dt = "auto", r_gamma = "box", r_out = "ref.bin";
    int r_m = 1;
    double r_spacing = 1.0 / 512.0, r_T = 1.0;
    rf->add_option("--case", r_case);
    rf->add_option("--m", r_m);
    rf->add_option("--spacing", r_spacing);
    rf->add_option("--T", r_T);
    rf->add_option("--dt", r_dt);
    rf->add_option("--gamma", r_gamma);
    rf->add_option("--out", r_out);

    // converge
    auto* cv = app.add_subcommand("converge", "convergence sweep vs the reference");
    std::string c_config, c_out = "report.csv", c_format = "csv";
    std::string c_nlist, c_seeds, c_case, c_scheme, c_epsmode, c_manual;
    bool c_timing = false;
    cv->add_option("--config", c_config, "JSON config file");
    cv->add_option("--out", c_out);
    cv->add_option("--format", c_format, "csv | json-lines");
    cv->add_flag("--timing", c_timing, "include wall_time (nondeterministic)");
    cv->add_option("--n-list", c_nlist);
    cv->add_option("--seeds", c_seeds);
    cv->add_option("--case", c_case);
    cv->add_option("--scheme", c_scheme);
    cv->add_option("--eps-mode", c_epsmode, "law | manual");
    cv->add_option("--manual-eps", c_manual);

    // verify
    auto* vf = app.add_subcommand("verify", "run the property suites");
    std::string v_suite = "all";
    int v_trials = 0;
    std::uint64_t v_seed = 20240101;
    vf->add_option("--suite", v_suite, "all | Monotonicity | Comparison | ...");
    vf->add_option("--trials", v_trials, "0 = per-suite default");
    vf->add_option("--seed", v_seed);

    // report
    auto* rp = app.add_subcommand("report", "summarize / convert a report");
    std::string p_in, p_format = "csv", p_out, p_to = "csv";
    double p_nu = 0.5;
    int p_m = 1;
    rp->add_option("--in", p_in)->required();
    rp->add_option("--format", p_format);
    rp->add_option("--out", p_out);
    rp->add_option("--to-format", p_to);
    rp->add_option("--nu", p_nu);
    rp->add_option("--m", p_m);

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            return cmd_gen(g_n, g_m, g_nu, g_tau, g_seed, g_gamma, g_eps, g_kernel, g_rg, g_a,
                           g_out, g_bout, g_eout);
        if (sv->parsed())
            return cmd_solve(s_graph, s_gamma, s_scheme, s_T, s_dt, s_eps, s_snaps, s_kernel, s_rg,
                             s_a, s_nu, s_tau, s_pot, s_psi, s_out);
        if (rf->parsed()) return cmd_reference(r_case, r_m, r_spacing, r_T, r_dt, r_gamma, r_out);
        if (cv->parsed())
            return cmd_converge(c_config, c_out, c_format, c_timing, c_nlist, c_seeds, c_case,
                                c_scheme, c_epsmode, c_manual);
        if (vf->parsed()) return cmd_verify(v_suite, v_trials, v_seed);
        if (rp->parsed()) return cmd_report(p_in, p_format, p_out, p_to, p_nu, p_m);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const eik::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case eik::ErrorKind::Config: return 2;
            case eik::ErrorKind::Io: return 2;
            case eik::ErrorKind::Numerical: return 3;
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
