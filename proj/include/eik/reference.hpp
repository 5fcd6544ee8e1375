#pragma once

#include "eik/domain.hpp"

#include <span>
#include <string>
#include <vector>

namespace eik {

// Closed form for the canonical case P == 1, psi == 0: f(x,t) = min(t, d(x,Gamma)).
// Where d < t the equation reads 0 = -1 + 1; where t < d it reads 1 = 0 + 1;
// continuity glues the pieces into the unique viscosity solution.
// Throws WrongCase for any other data.
double analytic_min_dist(const DomainSpec& domain, const PotentialSpec& P,
                         const BoundaryDataSpec& psi, std::span<const double> x, double t);

// First-order monotone upwind solve of f_t = -|grad f| + P on a regular grid
// over the unit box, forward Euler in time. Off-grid evaluation is
// multilinear; time evaluation requires one of the stored levels.
struct GridUpwindSolution {
    int m = 1;
    std::vector<int> dims; // nodes per axis
    double spacing = 0.0;
    double T = 0.0;
    double dt = 0.0;
    std::vector<double> times;                 // stored levels, ascending
    std::vector<std::vector<double>> levels;   // row-major grids

    double eval(std::span<const double> x, double t) const;
};

// CFL bound for the grid scheme (conservative): spacing / (2*m).
double grid_max_stable_dt(int m, double spacing);

// spacing must divide the unit box; dt <= grid CFL (<=0 selects half of it).
// store_times selects the retained levels (final time is always stored).
GridUpwindSolution grid_upwind_solve(const DomainSpec& domain, const PotentialSpec& P,
                                     const BoundaryDataSpec& psi, double spacing, double T,
                                     double dt = 0.0, std::span<const double> store_times = {});

// Binary dump: header (u32 magic, u32 m, u32 dims[m], f64 spacing, f64 T,
// f64 dt) followed by the row-major doubles of the final level, little-endian.
void write_grid_dump(const std::string& path, const GridUpwindSolution& sol);
GridUpwindSolution read_grid_dump(const std::string& path);

} // namespace eik
