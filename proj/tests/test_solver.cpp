#include "eik/errors.hpp"
#include "eik/rng.hpp"
#include "eik/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace eik;

namespace {

// the worked 1-D example: nodes {0, 1/2, 1}, Gamma~ = {0, 1}, psi = 0, P = 1,
// eps = 1, triangle profile (inter-node weight 2)
GraphProblem line3(double P_value = 1.0, double psi_value = 0.0) {
    PointCloud pts(1);
    pts.push_back({0.0});
    pts.push_back({0.5});
    pts.push_back({1.0});
    KernelProfile prof = triangle_profile();
    PotentialSpec P = PotentialSpec::constant(P_value);
    BoundaryDataSpec psi = psi_value == 0.0
                               ? BoundaryDataSpec::zero()
                               : BoundaryDataSpec::linear(psi_value, {0.0});
    return assemble_graph(std::move(pts), {0, 2}, 1.0, prof, P, psi);
}

GraphProblem random_canonical(int n, double eps, std::uint64_t seed) {
    DomainSpec box1 = DomainSpec::box_boundary(1);
    KernelProfile prof = triangle_profile();
    SamplingConfig cfg;
    cfg.n = n;
    cfg.m = 1;
    cfg.seed = seed;
    return build_graph(box1, cfg, prof, PotentialSpec::constant(1.0), BoundaryDataSpec::zero(),
                       eps);
}

} // namespace

TEST_CASE("internal gradient norm on the line") {
    GraphProblem g = line3();
    std::vector<double> constant{0.7, 0.7, 0.7};
    CHECK(internal_gradient_norm(constant, 1, g) == 0.0);

    std::vector<double> bump{0.0, 0.3, 0.0};
    CHECK(internal_gradient_norm(bump, 1, g) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(internal_gradient_norm(bump, 0, g) == 0.0); // downhill only

    // shift invariance
    std::vector<double> shifted{1.0, 1.3, 1.0};
    CHECK(internal_gradient_norm(shifted, 1, g) ==
          doctest::Approx(internal_gradient_norm(bump, 1, g)).epsilon(1e-12));
}

TEST_CASE("max stable dt") {
    KernelProfile tri = triangle_profile();
    GraphProblem g = line3();
    CHECK(max_stable_dt(g, tri) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.cfl_bound == doctest::Approx(0.25).epsilon(1e-12));

    GraphProblem h = random_canonical(100, 0.3, 1);
    CHECK(max_stable_dt(h, tri) == doctest::Approx(0.25 * 0.3).epsilon(1e-12));

    // g -> 2g doubles both C_g and sup g: the bound is unchanged
    RawProfile raw;
    raw.custom = [](double t) { return 2.0 * std::max(0.0, 1.0 - t); };
    KernelProfile doubled = validate_profile(raw);
    CHECK(doubled.C_g / doubled.sup_g == doctest::Approx(tri.C_g / tri.sup_g).epsilon(1e-8));
}

TEST_CASE("forward steps reproduce the hand-iterated recurrence") {
    GraphProblem g = line3();
    SolverState s;
    s.values = {0.0, 0.0, 0.0};
    s.dt = 0.25;

    SolverState s1 = step_forward(s, g);
    CHECK(s1.values[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s1.values[0] == 0.0);
    CHECK(s1.values[2] == 0.0);

    SolverState s2 = step_forward(s1, g);
    CHECK(s2.values[1] == doctest::Approx(0.375).epsilon(1e-15));

    // iterates converge upward to the steady state 2w = 1
    SchemeConfig cfg;
    cfg.T = 5.0;
    cfg.dt = 0.25;
    SolveResult res = solve(g, cfg);
    CHECK(std::abs(res.snapshots.back().values[1] - 0.5) <= 1e-3);
}

TEST_CASE("zero potential with constant data is stationary") {
    GraphProblem g = line3(0.0, 0.7);
    SchemeConfig cfg;
    cfg.T = 3.0;
    cfg.dt = 0.2;
    SolveOptions opts;
    opts.keep_trajectory = true;
    SolveResult res = solve(g, cfg, opts);
    for (const auto& level : res.trajectory.values)
        for (double v : level) CHECK(v == 0.7); // bit-exact fixed point
}

TEST_CASE("cfl guard") {
    GraphProblem g = line3();
    SolverState s;
    s.values = {0.0, 0.0, 0.0};
    s.dt = 1.01 * g.cfl_bound;
    CHECK_THROWS_AS((void)step_forward(s, g, CflPolicy::Enforce), CflViolation);
    CHECK_NOTHROW((void)step_forward(s, g, CflPolicy::WarnOnly));

    SchemeConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1.01 * g.cfl_bound;
    CHECK_THROWS_AS(solve(g, cfg), CflViolation);
    cfg.cfl_policy = CflPolicy::WarnOnly;
    CHECK_NOTHROW(solve(g, cfg));
}

TEST_CASE("forward step preserves nodewise ordering under the cfl bound") {
    auto gen = substream(42, "test.solver.monotone");
    for (int trial = 0; trial < 60; ++trial) {
        GraphProblem g = random_canonical(80, 0.3, 1000 + trial);
        SolverState lo, hi;
        lo.dt = hi.dt = 0.9 * g.cfl_bound;
        lo.values.resize(g.size());
        hi.values.resize(g.size());
        for (int u = 0; u < g.size(); ++u) {
            double base = uniform01(gen);
            hi.values[u] = g.is_boundary[u] ? g.psi[u] : base;
            lo.values[u] = g.is_boundary[u] ? g.psi[u] : base - 0.5 * uniform01(gen);
        }
        SolverState lo1 = step_forward(lo, g);
        SolverState hi1 = step_forward(hi, g);
        for (int u = 0; u < g.size(); ++u) CHECK(lo1.values[u] <= hi1.values[u] + 1e-12);
    }
}

TEST_CASE("backward node solve matches the hand computation") {
    GraphProblem g = line3();
    SolverState s;
    s.values = {0.0, 0.0, 0.0};
    s.dt = 0.25;
    SchemeConfig cfg;
    cfg.scheme = Scheme::BackwardEuler;
    cfg.implicit_tol = 1e-13;

    // w + 0.25 * max(0, 2w) = 0.25  =>  w = 1/6
    SolverState s1 = step_backward(s, g, cfg);
    CHECK(s1.values[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(s1.values[0] == 0.0);
    CHECK(s1.values[2] == 0.0);
}

TEST_CASE("backward fixed point for constant data") {
    GraphProblem g = line3(0.0, 0.4);
    SolverState s;
    s.values = {0.4, 0.4, 0.4};
    s.dt = 0.3;
    SchemeConfig cfg;
    cfg.scheme = Scheme::BackwardEuler;
    SolverState s1 = step_backward(s, g, cfg);
    for (double v : s1.values) CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("one-step backward/forward gap is O(dt^2)") {
    GraphProblem g = line3();
    SchemeConfig cfg;
    cfg.scheme = Scheme::BackwardEuler;
    cfg.implicit_tol = 1e-14;
    auto gap = [&](double dt) {
        SolverState s;
        s.values = {0.0, 0.0, 0.0};
        s.dt = dt;
        SolverState f = step_forward(s, g);
        SolverState b = step_backward(s, g, cfg);
        double worst = 0.0;
        for (int u = 0; u < 3; ++u) worst = std::max(worst, std::abs(f.values[u] - b.values[u]));
        return worst;
    };
    // closed form on this example: gap(dt) = 2 dt^2/(1+2dt); halving dt gives
    // ratio (1+2dt)/(4(1+dt))
    double dt = 0.1;
    double ratio = gap(dt / 2) / gap(dt);
    CHECK(ratio > 0.2);
    CHECK(ratio < 0.3);
}

TEST_CASE("implicit sweep failure is reported") {
    GraphProblem g = line3();
    SolverState s;
    s.values = {0.0, 0.0, 0.0};
    s.dt = 0.25;
    SchemeConfig cfg;
    cfg.scheme = Scheme::BackwardEuler;
    cfg.implicit_max_sweeps = 0;
    CHECK_THROWS_AS((void)step_backward(s, g, cfg), NoConvergence);
}

TEST_CASE("jacobi mode reaches the gauss-seidel fixed point") {
    GraphProblem g = random_canonical(120, 0.3, 77);
    SchemeConfig gs;
    gs.scheme = Scheme::BackwardEuler;
    gs.T = 0.5;
    gs.dt = 0.05;
    gs.implicit_tol = 1e-13;
    SchemeConfig jac = gs;
    jac.implicit_mode = ImplicitMode::Jacobi;
    SolveResult a = solve(g, gs);
    SolveResult b = solve(g, jac);
    for (int u = 0; u < g.size(); ++u)
        CHECK(a.snapshots.back().values[u] ==
              doctest::Approx(b.snapshots.back().values[u]).epsilon(1e-10));
}

TEST_CASE("solve horizon and snapshot mechanics") {
    GraphProblem g = line3();
    SchemeConfig cfg;
    cfg.T = 0.0;
    SolveResult res = solve(g, cfg);
    REQUIRE(res.snapshots.size() == 1);
    CHECK(res.snapshots[0].t == 0.0);
    CHECK(res.snapshots[0].values == g.psi);
    CHECK(res.steps == 0);

    cfg.T = 1.0;
    cfg.dt = 0.25;
    SolveOptions opts;
    opts.snapshot_times = {0.5, 1.0};
    SolveResult r2 = solve(g, cfg, opts);
    REQUIRE(r2.snapshots.size() == 2);
    CHECK(r2.snapshots[0].t == doctest::Approx(0.5));
    CHECK(r2.snapshots[1].t == doctest::Approx(1.0));
}

TEST_CASE("dirichlet rows are bit-identical to psi at every snapshot") {
    DomainSpec box1 = DomainSpec::box_boundary(1);
    KernelProfile prof = triangle_profile();
    SamplingConfig sc;
    sc.n = 300;
    sc.m = 1;
    sc.seed = 5;
    BoundaryDataSpec psi = BoundaryDataSpec::linear(0.05, {0.2});
    GraphProblem g =
        build_graph(box1, sc, prof, PotentialSpec::constant(1.0), psi, 0.3);
    for (Scheme sch : {Scheme::ForwardEuler, Scheme::BackwardEuler}) {
        SchemeConfig cfg;
        cfg.scheme = sch;
        cfg.T = 1.0;
        SolveOptions opts;
        opts.snapshot_times = {0.25, 0.5, 1.0};
        SolveResult res = solve(g, cfg, opts);
        for (const auto& st : res.snapshots)
            for (std::int32_t b : g.boundary_idx) CHECK(st.values[b] == g.psi[b]);
    }
}

TEST_CASE("shift equivariance: psi + c maps to f + c") {
    GraphProblem g = random_canonical(150, 0.3, 11);
    GraphProblem shifted = g;
    const double c = 0.37;
    for (auto& v : shifted.psi) v += c;

    SchemeConfig cfg;
    cfg.T = 1.0;
    SolveResult a = solve(g, cfg);
    SolveResult b = solve(shifted, cfg);
    for (int u = 0; u < g.size(); ++u)
        CHECK(b.snapshots.back().values[u] - a.snapshots.back().values[u] ==
              doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("discrete comparison principle on perturbed sources") {
    auto gen = substream(55, "test.solver.comparison");
    for (int trial = 0; trial < 25; ++trial) {
        GraphProblem base = random_canonical(90, 0.3, 2000 + trial);
        double delta = uniform(gen, 0.05, 0.3);
        GraphProblem sub = base, sup = base;
        for (int u = 0; u < base.size(); ++u) {
            sub.potential[u] = std::max(0.0, base.potential[u] - delta);
            sup.potential[u] = base.potential[u] + delta;
        }
        SchemeConfig cfg;
        cfg.T = 0.5;
        SolveOptions opts;
        opts.keep_trajectory = true;
        SolveResult f = solve(sub, cfg, opts);
        SolveResult h = solve(sup, cfg, opts);
        for (std::size_t k = 0; k < f.trajectory.values.size(); ++k)
            for (int u = 0; u < base.size(); ++u)
                CHECK(f.trajectory.values[k][u] <= h.trajectory.values[k][u] + 1e-12);
    }
}

TEST_CASE("canonical steady state is monotone in t and dt-independent") {
    GraphProblem g = random_canonical(120, 0.3, 21);
    SchemeConfig cfg;
    cfg.T = 8.0;
    cfg.dt = 0.9 * g.cfl_bound;
    SolveOptions opts;
    opts.keep_trajectory = true;
    SolveResult a = solve(g, cfg, opts);
    for (std::size_t k = 1; k < a.trajectory.values.size(); ++k)
        for (int u = 0; u < g.size(); ++u)
            CHECK(a.trajectory.values[k][u] >= a.trajectory.values[k - 1][u] - 1e-12);

    SchemeConfig cfg2 = cfg;
    cfg2.dt = 0.45 * g.cfl_bound;
    SolveResult b = solve(g, cfg2);
    for (int u = 0; u < g.size(); ++u)
        CHECK(std::abs(a.snapshots.back().values[u] - b.snapshots.back().values[u]) <= 1e-10);
}

TEST_CASE("regularity report on the canonical case") {
    KernelProfile prof = triangle_profile();
    GraphProblem g = random_canonical(200, 0.3, 33);
    SchemeConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 0.9 * g.cfl_bound;
    SolveOptions opts;
    opts.keep_trajectory = true;
    SolveResult res = solve(g, cfg, opts);

    RegularityReport rep = check_regularity(res.trajectory, g, prof, 0.0, 1.0);
    REQUIRE(rep.entries.size() == 4);
    for (const auto& e : rep.entries) {
        INFO(e.name, " observed=", e.observed, " bound=", e.bound);
        CHECK(e.pass);
    }

    // P = 1, psi = 0: every per-step increment is exactly <= dt, and the
    // first interior step attains it
    CHECK(res.max_increment <= cfg.dt + 1e-15);
    CHECK(res.max_increment == doctest::Approx(cfg.dt).epsilon(1e-12));

    // K1 = 1 barrier: f(u,t) <= t
    for (std::size_t k = 0; k < res.trajectory.values.size(); ++k)
        for (int u = 0; u < g.size(); ++u)
            CHECK(res.trajectory.values[k][u] <= res.trajectory.times[k] + 1e-12);
}

TEST_CASE("stationary run satisfies all regularity bounds with zero slack") {
    KernelProfile prof = triangle_profile();
    GraphProblem g = line3(0.0, 0.0); // P = 0, psi = 0
    SchemeConfig cfg;
    cfg.T = 2.0;
    cfg.dt = 0.2;
    SolveOptions opts;
    opts.keep_trajectory = true;
    SolveResult res = solve(g, cfg, opts);
    CHECK(res.max_increment == 0.0);
    RegularityReport rep = check_regularity(res.trajectory, g, prof, 0.0, 0.0);
    for (const auto& e : rep.entries) CHECK(e.pass);
}
