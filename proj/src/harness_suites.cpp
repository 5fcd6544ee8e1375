#include "eik/errors.hpp"
#include "eik/harness.hpp"
#include "eik/reference.hpp"
#include "eik/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eik {

std::string to_string(PropertySuite s) {
    switch (s) {
        case PropertySuite::Monotonicity: return "Monotonicity";
        case PropertySuite::Comparison: return "Comparison";
        case PropertySuite::TimeLipschitz: return "TimeLipschitz";
        case PropertySuite::SpaceLipschitz: return "SpaceLipschitz";
        case PropertySuite::Barriers: return "Barriers";
        case PropertySuite::CflGuard: return "CflGuard";
        case PropertySuite::AdjacencyOracle: return "AdjacencyOracle";
        case PropertySuite::FwBwAgreement: return "FwBwAgreement";
    }
    return "?";
}

PropertySuite property_suite_from_string(const std::string& s) {
    for (PropertySuite p : all_property_suites())
        if (to_string(p) == s) return p;
    throw ConfigError("unknown property suite: " + s);
}

std::vector<PropertySuite> all_property_suites() {
    return {PropertySuite::Monotonicity,   PropertySuite::Comparison,
            PropertySuite::TimeLipschitz,  PropertySuite::SpaceLipschitz,
            PropertySuite::Barriers,       PropertySuite::CflGuard,
            PropertySuite::AdjacencyOracle, PropertySuite::FwBwAgreement};
}

namespace {

constexpr double kSlack = 1e-12;

// Builds a canonical graph, retrying with derived seeds on the rare draws
// where the boundary tube is empty. Deterministic for a given seed.
GraphProblem canonical_graph(int m, int n, double eps, std::uint64_t seed,
                             const KernelProfile& prof, const PotentialSpec& P,
                             const BoundaryDataSpec& psi, double nu = 0.5, double tau = 1.0) {
    DomainSpec dom = DomainSpec::box_boundary(m);
    for (int attempt = 0;; ++attempt) {
        SamplingConfig sc;
        sc.n = n;
        sc.m = m;
        sc.nu = nu;
        sc.tau = tau;
        sc.seed = seed + 1000003ull * static_cast<std::uint64_t>(attempt);
        try {
            return build_graph(dom, sc, prof, P, psi, eps);
        } catch (const EmptyBoundary&) {
            if (attempt >= 8) throw;
        } catch (const IsolatedInteriorVertex&) {
            if (attempt >= 8) throw;
        }
    }
}

SuiteResult monotonicity_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::Monotonicity;
    res.trials = trials;
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(1.0);
    BoundaryDataSpec psi = BoundaryDataSpec::zero();

    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        auto gen = substream(seed, "verify.monotonicity." + std::to_string(trial));
        int n = 50 + static_cast<int>(uniform01(gen) * 90);
        double eps = uniform(gen, 0.2, 0.35);
        GraphProblem g = canonical_graph(1, n, eps, seed + trial, prof, P, psi);

        SolverState a, b;
        a.dt = b.dt = 0.9 * g.cfl_bound;
        b.values.resize(g.size());
        a.values.resize(g.size());
        for (int u = 0; u < g.size(); ++u) {
            double base = uniform01(gen);
            b.values[u] = g.is_boundary[u] ? g.psi[u] : base;
            a.values[u] = g.is_boundary[u] ? g.psi[u] : base - 0.5 * uniform01(gen);
        }
        SolverState a1 = step_forward(a, g);
        SolverState b1 = step_forward(b, g);
        for (int u = 0; u < g.size(); ++u) {
            double gap = a1.values[u] - b1.values[u]; // must stay <= slack
            worst = std::max(worst, gap);
            if (gap > kSlack) {
                res.violations++;
                break;
            }
        }
    }

    // counterexample hunt at 2x the CFL bound documents why the bound matters
    bool found = false;
    {
        auto gen = substream(seed, "verify.monotonicity.adversarial");
        GraphProblem g = canonical_graph(1, 200, 0.25, seed + 777, prof, P, psi);
        for (int attempt = 0; attempt < 500 && !found; ++attempt) {
            SolverState a, b;
            a.dt = b.dt = 2.0 * g.cfl_bound;
            a.values.resize(g.size());
            b.values.resize(g.size());
            for (int u = 0; u < g.size(); ++u) {
                double base = uniform01(gen);
                b.values[u] = g.is_boundary[u] ? g.psi[u] : base;
                a.values[u] = g.is_boundary[u] ? g.psi[u] : base - uniform01(gen);
            }
            SolverState a1 = step_forward(a, g, CflPolicy::WarnOnly);
            SolverState b1 = step_forward(b, g, CflPolicy::WarnOnly);
            for (int u = 0; u < g.size(); ++u)
                if (a1.values[u] > b1.values[u] + kSlack) {
                    found = true;
                    break;
                }
        }
    }

    res.worst_slack = worst;
    res.pass = res.violations == 0 && found;
    res.detail = found ? "ordering preserved under CFL; counterexample found at 2x bound"
                       : "no counterexample found at 2x CFL bound";
    return res;
}

SuiteResult comparison_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::Comparison;
    res.trials = trials;
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(1.0);
    BoundaryDataSpec psi = BoundaryDataSpec::zero();

    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        auto gen = substream(seed, "verify.comparison." + std::to_string(trial));
        int n = 60 + static_cast<int>(uniform01(gen) * 80);
        double eps = uniform(gen, 0.2, 0.35);
        double delta = uniform(gen, 0.05, 0.3);
        double deltap = trial % 2 == 0 ? 0.0 : uniform(gen, 0.0, 0.2);
        GraphProblem base = canonical_graph(1, n, eps, seed + 13 * trial, prof, P, psi);

        GraphProblem sub = base, sup = base;
        for (int u = 0; u < base.size(); ++u) {
            sub.potential[u] = std::max(0.0, base.potential[u] - delta);
            sup.potential[u] = base.potential[u] + delta;
            sub.psi[u] = base.psi[u] - deltap;
            sup.psi[u] = base.psi[u] + deltap;
        }

        SchemeConfig cfg;
        cfg.T = 0.5;
        cfg.dt = 0.9 * base.cfl_bound;
        SolveOptions opts;
        opts.keep_trajectory = true;
        SolveResult f = solve(sub, cfg, opts);
        SolveResult h = solve(sup, cfg, opts);

        // sup over boundary/initial rows of |f - g|
        double rhs = 0.0;
        for (int u = 0; u < base.size(); ++u)
            rhs = std::max(rhs, std::abs(f.trajectory.values[0][u] - h.trajectory.values[0][u]));
        for (std::size_t k = 1; k < f.trajectory.values.size(); ++k)
            for (std::int32_t u : base.boundary_idx)
                rhs = std::max(rhs,
                               std::abs(f.trajectory.values[k][u] - h.trajectory.values[k][u]));

        double lhs = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < f.trajectory.values.size(); ++k)
            for (int u = 0; u < base.size(); ++u)
                lhs = std::max(lhs, f.trajectory.values[k][u] - h.trajectory.values[k][u]);

        double slackv = lhs - rhs;
        worst = std::max(worst, slackv);
        if (slackv > kSlack) res.violations++;
    }
    res.worst_slack = worst;
    res.pass = res.violations == 0;
    res.detail = "sub/super pairs via P-/+delta, psi-/+delta'";
    return res;
}

SuiteResult time_lipschitz_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::TimeLipschitz;
    KernelProfile prof = triangle_profile();

    struct Cfg {
        ExperimentCase kase;
        int n;
        double eps;
        Scheme scheme;
    };
    std::vector<Cfg> cfgs = {
        {ExperimentCase::Canonical1D, 500, 0.25, Scheme::ForwardEuler},
        {ExperimentCase::Canonical1D, 500, 0.25, Scheme::BackwardEuler},
        {ExperimentCase::Canonical2D, 600, 0.3, Scheme::ForwardEuler},
        {ExperimentCase::NonconstantP, 400, 0.25, Scheme::ForwardEuler},
    };
    double worst = 0.0;
    int count = 0;
    for (const Cfg& c : cfgs) {
        for (int trial = 0; trial < std::max(1, trials / static_cast<int>(cfgs.size())); ++trial) {
            PotentialSpec P = case_potential(c.kase);
            BoundaryDataSpec psi = case_psi(c.kase);
            GraphProblem g =
                canonical_graph(case_dim(c.kase), c.n, c.eps, seed + 31 * count, prof, P, psi);
            SchemeConfig sch;
            sch.scheme = c.scheme;
            sch.T = 1.0;
            sch.dt = 0.9 * g.cfl_bound;
            SolveResult sol = solve(g, sch);
            double supP = 0.0;
            for (int u = 0; u < g.size(); ++u) supP = std::max(supP, g.potential[u]);
            double bound = (psi.lip() + supP) * sch.dt;
            double gap = sol.max_increment - bound;
            worst = std::max(worst, gap);
            if (gap > kSlack) res.violations++;
            ++count;
        }
    }
    res.trials = count;
    res.worst_slack = worst;
    res.pass = res.violations == 0;
    res.detail = "max |f(u,t_k)-f(u,t_{k-1})| vs (Lip(psi)+||P||)*dt";
    return res;
}

SuiteResult space_lipschitz_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::SpaceLipschitz;
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(1.0);
    BoundaryDataSpec psi = BoundaryDataSpec::zero();
    DomainSpec dom = DomainSpec::box_boundary(1);

    double worst = 0.0;
    int used = 0;
    for (int trial = 0; trial < trials; ++trial) {
        double eps = 0.25;
        GraphProblem g = canonical_graph(1, 500, eps, seed + 7 * trial, prof, P, psi);
        // the spatial bound needs the coverage condition; skip draws missing it
        double cov = coverage_radius(dom, g.vertices, eps / 200.0);
        if (cov > prof.a * eps / 4.0) continue;
        ++used;
        SchemeConfig sch;
        sch.T = 1.0;
        sch.dt = 0.9 * g.cfl_bound;
        SolveOptions opts;
        opts.keep_trajectory = true;
        SolveResult sol = solve(g, sch, opts);
        RegularityReport rep = check_regularity(sol.trajectory, g, prof, psi.lip(), 1.0);
        for (const auto& e : rep.entries)
            if (e.name == "space_increment") {
                worst = std::max(worst, e.observed - e.bound);
                if (!e.pass) res.violations++;
            }
    }
    res.trials = used;
    res.worst_slack = worst;
    res.pass = res.violations == 0 && used > 0;
    res.detail = "|f(u,t)-f(v,t)| vs K*(|u-v|+eps), coverage condition verified";
    return res;
}

SuiteResult barriers_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::Barriers;
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(1.0);
    BoundaryDataSpec psi = BoundaryDataSpec::zero();

    double worst = 0.0;
    int count = 0;
    for (int trial = 0; trial < trials; ++trial) {
        int m = trial % 2 == 0 ? 1 : 2;
        int n = m == 1 ? 400 : 600;
        double eps = m == 1 ? 0.25 : 0.35;
        GraphProblem g = canonical_graph(m, n, eps, seed + 3 * trial, prof, P, psi);
        SchemeConfig sch;
        sch.T = 1.0;
        sch.dt = 0.9 * g.cfl_bound;
        SolveOptions opts;
        opts.keep_trajectory = true;
        SolveResult sol = solve(g, sch, opts);
        RegularityReport rep = check_regularity(sol.trajectory, g, prof, psi.lip(), 1.0);
        for (const auto& e : rep.entries)
            if (e.name == "barrier_lower" || e.name == "barrier_upper") {
                worst = std::max(worst, e.observed);
                if (!e.pass) res.violations++;
            }
        ++count;
    }
    res.trials = count;
    res.worst_slack = worst;
    res.pass = res.violations == 0;
    res.detail = "0 <= f <= min(psi+K1*t, psi+K2*d(u,Gamma_n))";
    return res;
}

SuiteResult cfl_guard_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::CflGuard;
    res.trials = trials;
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(1.0);
    BoundaryDataSpec psi = BoundaryDataSpec::zero();

    for (int trial = 0; trial < trials; ++trial) {
        auto gen = substream(seed, "verify.cflguard." + std::to_string(trial));
        int n = 60 + static_cast<int>(uniform01(gen) * 60);
        double eps = uniform(gen, 0.2, 0.35);
        GraphProblem g = canonical_graph(1, n, eps, seed + 5 * trial, prof, P, psi);
        SolverState st;
        st.values = g.psi;
        st.dt = 1.01 * g.cfl_bound;
        bool rejected = false;
        try {
            (void)step_forward(st, g, CflPolicy::Enforce);
        } catch (const CflViolation&) {
            rejected = true;
        }
        if (!rejected) res.violations++;
    }
    res.worst_slack = res.violations;
    res.pass = res.violations == 0;
    res.detail = "Enforce policy rejects dt = 1.01 * eps*C_g/sup g";
    return res;
}

SuiteResult adjacency_oracle_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::AdjacencyOracle;
    res.trials = trials;
    KernelProfile prof = triangle_profile();

    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        auto gen = substream(seed, "verify.adjacency." + std::to_string(trial));
        int m = 1 + trial % 2;
        double eps = uniform(gen, 0.1, 0.3);
        PointCloud pts(m);
        pts.data.resize(200 * static_cast<std::size_t>(m));
        for (double& c : pts.data) c = uniform01(gen);

        Adjacency fast = build_adjacency(pts, eps, prof);
        Adjacency slow = build_adjacency_brute_force(pts, eps, prof);
        bool same = fast.offsets == slow.offsets && fast.cols == slow.cols;
        double wgap = 0.0;
        if (same)
            for (std::size_t k = 0; k < fast.weights.size(); ++k)
                wgap = std::max(wgap, std::abs(fast.weights[k] - slow.weights[k]));
        worst = std::max(worst, same ? wgap : std::numeric_limits<double>::infinity());
        if (!same || wgap > 1e-14) res.violations++;
    }
    res.worst_slack = worst;
    res.pass = res.violations == 0;
    res.detail = "cell-grid adjacency vs O(n^2) brute force, 200 points";
    return res;
}

SuiteResult fw_bw_agreement_suite(int trials, std::uint64_t seed) {
    SuiteResult res;
    res.suite = PropertySuite::FwBwAgreement;
    res.trials = trials;
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(1.0);
    BoundaryDataSpec psi = BoundaryDataSpec::zero();

    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        GraphProblem g = canonical_graph(1, 2000, 0.3, seed + 97 * trial, prof, P, psi);
        double base_dt = 0.5 * g.cfl_bound;
        std::vector<double> diffs;
        for (int i = 0; i < 4; ++i) {
            SchemeConfig fw;
            fw.scheme = Scheme::ForwardEuler;
            fw.T = 1.0;
            fw.dt = base_dt / (1 << i);
            SchemeConfig bw = fw;
            bw.scheme = Scheme::BackwardEuler;
            bw.implicit_tol = 1e-13;
            SolveResult rf = solve(g, fw);
            SolveResult rb = solve(g, bw);
            double d = 0.0;
            for (int u = 0; u < g.size(); ++u)
                d = std::max(d, std::abs(rf.snapshots.back().values[u] -
                                         rb.snapshots.back().values[u]));
            diffs.push_back(d);
        }
        for (int i = 0; i + 1 < 4; ++i) {
            double ratio = diffs[i + 1] / diffs[i];
            worst = std::max(worst, std::max(ratio - 0.6, 0.4 - ratio));
            if (!(ratio >= 0.4 && ratio <= 0.6)) res.violations++;
        }
    }
    res.worst_slack = worst;
    res.pass = res.violations == 0;
    res.detail = "sup|fw-bw| at T=1 halves with dt over three halvings";
    return res;
}

} // namespace

SuiteResult run_property_suite(PropertySuite suite, int trials, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    switch (suite) {
        case PropertySuite::Monotonicity: return monotonicity_suite(trials, seed);
        case PropertySuite::Comparison: return comparison_suite(trials, seed);
        case PropertySuite::TimeLipschitz: return time_lipschitz_suite(trials, seed);
        case PropertySuite::SpaceLipschitz: return space_lipschitz_suite(trials, seed);
        case PropertySuite::Barriers: return barriers_suite(trials, seed);
        case PropertySuite::CflGuard: return cfl_guard_suite(trials, seed);
        case PropertySuite::AdjacencyOracle: return adjacency_oracle_suite(trials, seed);
        case PropertySuite::FwBwAgreement: return fw_bw_agreement_suite(trials, seed);
    }
    throw ConfigError("unknown suite");
}

} // namespace eik
