#pragma once

#include "eik/util.hpp"

#include <span>
#include <string>
#include <vector>

namespace eik {

// Gamma is a union of analytic primitives with closed-form distances.
// Omega is always the unit box [0,1]^m.
struct GammaPrimitive {
    enum class Kind { BoxBoundary, SphereShell, PointSet };
    Kind kind = Kind::BoxBoundary;
    std::vector<double> center; // SphereShell
    double radius = 0.0;        // SphereShell
    PointCloud points;          // PointSet
};

struct DomainSpec {
    int m = 1;
    std::vector<GammaPrimitive> gamma; // union of >= 1 primitives

    static DomainSpec box_boundary(int m);
    static DomainSpec point_set(int m, PointCloud pts);
    static DomainSpec sphere_shell(int m, std::vector<double> center, double radius);
};

// Throws ConfigError when a gamma primitive sticks out of the unit box.
void validate_domain(const DomainSpec& domain);

// Exact Euclidean distance from x to Gamma. Throws PointOutsideDomain.
double distance_to_gamma(const DomainSpec& domain, std::span<const double> x);

// Two-sided Hausdorff distance between finite point sets (brute force).
double hausdorff_distance(const PointCloud& A, const PointCloud& B);

// max_x d(x, V) estimated on a regular probe grid with the given spacing.
// A lower bound on the continuum sup, tight to within spacing*sqrt(m).
double coverage_radius(const DomainSpec& domain, const PointCloud& V, double probe_resolution);

// Dense finite sampling of Gamma (spacing-controlled) used to measure
// d_H(Gamma, Gamma_n) against discrete boundary sets.
PointCloud sample_gamma(const DomainSpec& domain, double spacing);

// --- node functions -------------------------------------------------------

// Potential P: non-negative and Lipschitz, with recorded constants.
struct PotentialSpec {
    enum class Kind { Constant, RadialRamp }; // RadialRamp: value + slope*|x-x0|
    Kind kind = Kind::Constant;
    double value = 1.0;
    double slope = 0.5;
    std::vector<double> x0;

    double eval(std::span<const double> x) const;
    double lip() const;
    double sup(int m) const; // sup over the unit box

    static PotentialSpec constant(double v);
    static PotentialSpec radial_ramp(double base, double slope, std::vector<double> x0);
};

// Boundary data psi: Lipschitz with recorded constant.
struct BoundaryDataSpec {
    enum class Kind { Zero, Linear }; // Linear: offset + <coeff, x>
    Kind kind = Kind::Zero;
    double offset = 0.0;
    std::vector<double> coeff;

    double eval(std::span<const double> x) const;
    double lip() const;

    static BoundaryDataSpec zero();
    static BoundaryDataSpec linear(double offset, std::vector<double> coeff);
};

// Uniform cell index over the unit box for nearest-neighbor queries.
struct CellIndex {
    int m = 0;
    double cell = 1.0;
    std::vector<int> dims;               // cells per axis
    std::vector<std::vector<int>> bins;  // vertex ids per cell
    const PointCloud* cloud = nullptr;

    CellIndex() = default;
    CellIndex(const PointCloud& pts, double cell_size);

    // squared distance to the nearest point (expanding ring search)
    double nn_dist2(std::span<const double> x) const;
    double nn_dist(std::span<const double> x) const;

    std::size_t cell_of(std::span<const double> x) const;
};

// minimal pairwise distance within a cloud (exact)
double min_pair_distance(const PointCloud& pts);

} // namespace eik
