#include "eik/solver.hpp"

#include "eik/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>

namespace eik {

std::string to_string(Scheme s) {
    return s == Scheme::ForwardEuler ? "fd" : "bd";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "fd" || s == "forward") return Scheme::ForwardEuler;
    if (s == "bd" || s == "backward") return Scheme::BackwardEuler;
    throw ConfigError("unknown scheme: " + s);
}

double internal_gradient_norm(std::span<const double> values, int u, const GraphProblem& graph) {
    auto cols = graph.adjacency.row_cols(u);
    auto ws = graph.adjacency.row_weights(u);
    double fu = values[u];
    double best = 0.0; // v = u contributes 0
    for (std::size_t k = 0; k < cols.size(); ++k) {
        double cand = ws[k] * (fu - values[cols[k]]);
        if (cand > best) best = cand;
    }
    return best;
}

double max_stable_dt(const GraphProblem& graph, const KernelProfile& profile) {
    return graph.eps * profile.C_g / profile.sup_g;
}

SolverState step_forward(const SolverState& state, const GraphProblem& graph, CflPolicy policy) {
    if (policy == CflPolicy::Enforce && state.dt > graph.cfl_bound)
        throw CflViolation("dt = " + fmt_g17(state.dt) + " exceeds the CFL bound " +
                           fmt_g17(graph.cfl_bound));
    const int n = graph.size();
    SolverState next = state;
    next.values.resize(n);
    for (int u = 0; u < n; ++u) {
        if (graph.is_boundary[u]) {
            next.values[u] = graph.psi[u];
        } else {
            double op = internal_gradient_norm(state.values, u, graph);
            next.values[u] = state.values[u] + state.dt * (graph.potential[u] - op);
        }
    }
    next.t = state.t + state.dt;
    next.step_index = state.step_index + 1;
    return next;
}

namespace {

// Exact root of w + dt*max(0, max_k a_k (w - b_k)) = r, a_k >= 0.
// The left side is the max of increasing linear pieces, so the root is the
// min of the per-piece roots: min(r, min_k (r + dt a_k b_k)/(1 + dt a_k)).
double scalar_node_solve(double r, double dt, std::span<const double> a,
                         std::span<const double> b) {
    double w = r;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] <= 0.0) continue;
        double cand = (r + dt * a[k] * b[k]) / (1.0 + dt * a[k]);
        if (cand < w) w = cand;
    }
    // residual check with bisection fallback
    auto phi = [&](double x) {
        double mx = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) mx = std::max(mx, a[k] * (x - b[k]));
        return x + dt * mx - r;
    };
    double res = phi(w);
    if (std::abs(res) > 1e-12 * std::max(1.0, std::abs(r))) {
        double lo = w, hi = w;
        double span = std::max(1.0, std::abs(r));
        while (phi(lo) > 0.0) lo -= span;
        while (phi(hi) < 0.0) hi += span;
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) < 0.0 ? lo : hi) = mid;
        }
        w = 0.5 * (lo + hi);
    }
    return w;
}

} // namespace

SolverState step_backward(const SolverState& state, const GraphProblem& graph,
                          const SchemeConfig& cfg) {
    const int n = graph.size();
    const double dt = state.dt;
    SolverState next = state;
    next.t = state.t + dt;
    next.step_index = state.step_index + 1;
    for (std::int32_t u : graph.boundary_idx) next.values[u] = graph.psi[u];

    std::vector<double> nb_vals;
    std::vector<double> jacobi; // scratch for Jacobi mode
    double residual = std::numeric_limits<double>::infinity();
    int sweep = 0;
    for (; sweep < cfg.implicit_max_sweeps; ++sweep) {
        if (cfg.implicit_mode == ImplicitMode::Jacobi) jacobi = next.values;
        const std::vector<double>& src = cfg.implicit_mode == ImplicitMode::Jacobi ? jacobi : next.values;
        for (int u = 0; u < n; ++u) {
            if (graph.is_boundary[u]) continue;
            auto cols = graph.adjacency.row_cols(u);
            auto ws = graph.adjacency.row_weights(u);
            nb_vals.resize(cols.size());
            for (std::size_t k = 0; k < cols.size(); ++k) nb_vals[k] = src[cols[k]];
            double r = state.values[u] + dt * graph.potential[u];
            next.values[u] = scalar_node_solve(r, dt, ws, nb_vals);
        }
        // residual of the implicit equation at the current iterate
        residual = 0.0;
        for (int u = 0; u < n; ++u) {
            if (graph.is_boundary[u]) continue;
            double op = internal_gradient_norm(next.values, u, graph);
            double res = (next.values[u] - state.values[u]) / dt + op - graph.potential[u];
            residual = std::max(residual, std::abs(res));
        }
        if (residual <= cfg.implicit_tol) break;
    }
    if (residual > cfg.implicit_tol)
        throw NoConvergence("implicit sweep residual " + fmt_g17(residual) + " after " +
                            std::to_string(sweep) + " sweeps");
    return next;
}

SolveResult solve(const GraphProblem& graph, const SchemeConfig& cfg, const SolveOptions& opts) {
    if (!(cfg.T >= 0.0)) throw ConfigError("horizon T must be >= 0");
    double dt = cfg.dt > 0.0 ? cfg.dt : 0.9 * graph.cfl_bound;
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (cfg.scheme == Scheme::ForwardEuler && cfg.cfl_policy == CflPolicy::Enforce &&
        dt > graph.cfl_bound)
        throw CflViolation("dt = " + fmt_g17(dt) + " exceeds the CFL bound " +
                           fmt_g17(graph.cfl_bound));

    const int n = graph.size();
    if (std::getenv("EIK_DEBUG")) {
        int bc = 0;
        for (auto b : graph.is_boundary) bc += b ? 1 : 0;
        std::fprintf(stderr, "[solve] n=%d bc=%d bidx=%zu dt=%.17g T=%.17g scheme=%d\n", n, bc,
                     graph.boundary_idx.size(), dt, cfg.T, static_cast<int>(cfg.scheme));
    }
    SolverState state;
    state.scheme = cfg.scheme;
    state.dt = dt;
    state.values = graph.psi; // f(.,0) = psi~ on all of the vertex set
    for (std::int32_t u : graph.boundary_idx) state.values[u] = graph.psi[u];

    std::vector<double> snaps = opts.snapshot_times;
    if (snaps.empty()) snaps.push_back(cfg.T);
    std::sort(snaps.begin(), snaps.end());

    const int n_steps = cfg.T > 0.0 ? static_cast<int>(std::ceil(cfg.T / dt - 1e-12)) : 0;

    SolveResult out;
    out.trajectory.dt = dt;
    auto record_traj = [&](const SolverState& s) {
        if (opts.keep_trajectory) {
            out.trajectory.times.push_back(s.t);
            out.trajectory.values.push_back(s.values);
        }
    };
    record_traj(state);

    std::size_t next_snap = 0;
    auto take_snaps = [&](const SolverState& s, bool last) {
        while (next_snap < snaps.size() &&
               (s.t >= snaps[next_snap] - 1e-12 || (last && next_snap < snaps.size()))) {
            out.snapshots.push_back(s);
            ++next_snap;
        }
    };
    take_snaps(state, n_steps == 0);

    for (int k = 0; k < n_steps; ++k) {
        SolverState next = cfg.scheme == Scheme::ForwardEuler
                               ? step_forward(state, graph, cfg.cfl_policy)
                               : step_backward(state, graph, cfg);
        if (std::getenv("EIK_DEBUG") && k == 0)
            std::fprintf(stderr, "[solve] after step 1: f[b0=%d]=%.17g is_b=%d\n",
                         graph.boundary_idx[0], next.values[graph.boundary_idx[0]],
                         static_cast<int>(graph.is_boundary[graph.boundary_idx[0]]));
        for (int u = 0; u < n; ++u)
            out.max_increment = std::max(out.max_increment,
                                         std::abs(next.values[u] - state.values[u]));
        state = std::move(next);
        record_traj(state);
        take_snaps(state, k + 1 == n_steps);
    }
    out.steps = n_steps;
    return out;
}

// --- regularity / barrier reporting -----------------------------------------

bool RegularityReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const RegularityEntry& e) { return e.pass; });
}

RegularityReport check_regularity(const Trajectory& traj, const GraphProblem& graph,
                                  const KernelProfile& profile, double lip_psi, double sup_P) {
    RegularityReport rep;
    const int n = graph.size();
    const std::size_t levels = traj.values.size();
    if (levels == 0) return rep;
    const double L = lip_psi + sup_P;
    const double m = static_cast<double>(graph.vertices.m);
    const double K = 2.0 * (profile.C_g / profile.c_g) * (L + sup_P) * std::pow(m, 1.5);
    const double T = traj.times.empty() ? 0.0 : traj.times.back();
    const double slack = 1e-12;

    // time increments: |f(u,t_k) - f(u,t_{k-1})| <= L*dt
    {
        double worst = 0.0;
        for (std::size_t k = 1; k < levels; ++k)
            for (int u = 0; u < n; ++u)
                worst = std::max(worst,
                                 std::abs(traj.values[k][u] - traj.values[k - 1][u]));
        RegularityEntry e;
        e.name = "time_increment";
        e.bound = L * traj.dt;
        e.observed = worst;
        e.slack = slack;
        e.pass = worst <= e.bound + slack;
        rep.entries.push_back(e);
    }

    // spatial increments: |f(u,t) - f(v,t)| <= K*(|u-v| + eps), all pairs at
    // the final level plus a coarse sweep of earlier levels
    {
        double worst_ratio = 0.0;
        auto scan_level = [&](const std::vector<double>& f) {
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) {
                    double diff = std::abs(f[u] - f[v]);
                    double denom = K * (dist(graph.vertices[u], graph.vertices[v]) + graph.eps);
                    double ratio = denom > 0.0 ? diff / denom : (diff > 0.0 ? 1e300 : 0.0);
                    if (ratio > worst_ratio) worst_ratio = ratio;
                }
        };
        std::size_t stride = std::max<std::size_t>(1, levels / 8);
        for (std::size_t k = 0; k < levels; k += stride) scan_level(traj.values[k]);
        scan_level(traj.values[levels - 1]);
        RegularityEntry e;
        e.name = "space_increment";
        e.bound = 1.0;
        e.observed = worst_ratio;
        e.slack = slack;
        e.pass = worst_ratio <= 1.0 + slack;
        rep.entries.push_back(e);
    }

    // barrier sandwich: psi_b <= f <= min(psi~ + K1 t, psi~ + K2 d(u,Gamma~));
    // the shipped cases have psi_b == 0
    {
        const double K1 = sup_P;
        const double d0 = min_pair_distance(graph.vertices);
        const double K2 = std::max(
            (profile.C_g / profile.c_g) * graph.eps / d0 * sup_P + lip_psi,
            profile.a > 0.0 && graph.eps > 0.0 ? K1 * std::max(T, traj.dt) / (profile.a * graph.eps)
                                               : std::numeric_limits<double>::infinity());

        PointCloud gamma_pts(graph.vertices.m);
        for (std::int32_t b : graph.boundary_idx) gamma_pts.push_back(graph.vertices[b]);
        std::vector<double> d_gamma(n);
        for (int u = 0; u < n; ++u) {
            double best = std::numeric_limits<double>::infinity();
            for (int b = 0; b < gamma_pts.size(); ++b)
                best = std::min(best, dist2(graph.vertices[u], gamma_pts[b]));
            d_gamma[u] = std::sqrt(best);
        }

        double worst_low = 0.0, worst_high = 0.0;
        for (std::size_t k = 0; k < levels; ++k) {
            double t = traj.times[k];
            for (int u = 0; u < n; ++u) {
                double f = traj.values[k][u];
                double upper = graph.psi[u] + std::min(K1 * t, K2 * d_gamma[u]);
                worst_low = std::max(worst_low, 0.0 - f);      // psi_b = 0
                worst_high = std::max(worst_high, f - upper);
            }
        }
        RegularityEntry lo;
        lo.name = "barrier_lower";
        lo.bound = 0.0;
        lo.observed = worst_low;
        lo.slack = slack;
        lo.pass = worst_low <= slack;
        rep.entries.push_back(lo);
        RegularityEntry hi;
        hi.name = "barrier_upper";
        hi.bound = 0.0;
        hi.observed = worst_high;
        hi.slack = slack;
        hi.pass = worst_high <= slack;
        rep.entries.push_back(hi);
    }
    return rep;
}

} // namespace eik
