#pragma once

#include "eik/graph.hpp"
#include "eik/kernel.hpp"

#include <string>
#include <vector>

namespace eik {

enum class Scheme { ForwardEuler, BackwardEuler };
enum class CflPolicy { Enforce, WarnOnly };
enum class ImplicitMode { GaussSeidel, Jacobi };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverState {
    std::vector<double> values;
    double t = 0.0;
    double dt = 0.0;
    int step_index = 0;
    Scheme scheme = Scheme::ForwardEuler;
};

struct SchemeConfig {
    Scheme scheme = Scheme::ForwardEuler;
    double T = 1.0;
    double dt = 0.0; // <= 0 selects 0.9 * cfl bound
    CflPolicy cfl_policy = CflPolicy::Enforce;
    double implicit_tol = 1e-12;
    int implicit_max_sweeps = 10000;
    ImplicitMode implicit_mode = ImplicitMode::GaussSeidel;
};

// |grad^- f(u)|_inf = max(0, max_v w(u,v) (f(u) - f(v))); the 0 floor is the
// v = u term of the underlying max.
double internal_gradient_norm(std::span<const double> values, int u, const GraphProblem& graph);

// CFL bound for the explicit scheme: eps * C_g / sup g.
double max_stable_dt(const GraphProblem& graph, const KernelProfile& profile);

// One explicit step: interior f += dt*(-|grad^- f|_inf + P~), Dirichlet rows
// pinned to psi~. Throws CflViolation under the Enforce policy.
SolverState step_forward(const SolverState& state, const GraphProblem& graph,
                         CflPolicy policy = CflPolicy::Enforce);

// One implicit step by nonlinear Gauss-Seidel in ascending vertex order.
// Each node solve is the strictly increasing piecewise-linear equation
//   w + dt * max(0, max_v w(u,v) (w - f_v)) = f(u, t_k) + dt * P~(u),
// solved exactly (root of the max of increasing linear pieces), bisection
// fallback at 1e-14. Throws NoConvergence past implicit_max_sweeps.
SolverState step_backward(const SolverState& state, const GraphProblem& graph,
                          const SchemeConfig& cfg);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> values; // one row per time level
    double dt = 0.0;
};

struct SolveOptions {
    std::vector<double> snapshot_times; // defaults to {T}
    bool keep_trajectory = false;
};

struct SolveResult {
    std::vector<SolverState> snapshots;
    Trajectory trajectory; // populated when keep_trajectory
    int steps = 0;
    double max_increment = 0.0; // max_u |f(u,t_k) - f(u,t_{k-1})| over all k
};

// March from f0 = psi~ to T = N_T * dt snapshots; deterministic.
SolveResult solve(const GraphProblem& graph, const SchemeConfig& cfg,
                  const SolveOptions& opts = {});

// --- regularity / barrier reporting -----------------------------------------

struct RegularityEntry {
    std::string name;
    double observed = 0.0; // worst observed ratio or violation
    double bound = 1.0;    // pass when observed <= bound + slack
    double slack = 0.0;
    bool pass = true;
};

struct RegularityReport {
    std::vector<RegularityEntry> entries;
    bool all_pass() const;
};

// Checks on a full trajectory: time increments vs L*dt with
// L = Lip(psi~) + ||P~||_inf; spatial increments vs K*(|u-v| + eps) with
// K = 2*(C_g/c_g)*(L + ||P~||_inf)*m^{3/2}; and the barrier sandwich
// psi_b <= f <= min(psi~ + K1*t, psi~ + K2*d(u, Gamma~)), K1 = ||P~||_inf and
// K2 = max((C_g/c_g)*eps/d0~*||P~||_inf + Lip(psi~), K1*T/(a*eps)) with d0~
// the minimal inter-vertex distance. K2 is reported, not asserted tight.
RegularityReport check_regularity(const Trajectory& traj, const GraphProblem& graph,
                                  const KernelProfile& profile, double lip_psi, double sup_P);

} // namespace eik
