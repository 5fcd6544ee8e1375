#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace eik {

enum class KernelShape { Triangle, TruncatedExponential, TableLookup };

std::string to_string(KernelShape s);
KernelShape kernel_shape_from_string(const std::string& s);

// Input to validation: a closed form (shape + r_g), a sampled table, or an
// arbitrary callable (used by tests to probe the rejection paths).
struct RawProfile {
    KernelShape shape = KernelShape::Triangle;
    double r_g = 1.0;
    std::optional<double> a;               // monotone-decrease radius override
    std::vector<double> table_t, table_g;  // TableLookup: ascending t
    std::function<double(double)> custom;  // overrides the closed form when set
};

// Admissible radial profile together with the constants the schemes need.
// Immutable after validation; safe for concurrent reads.
struct KernelProfile {
    KernelShape shape = KernelShape::Triangle;
    double r_g = 1.0;   // support radius: g(t) = 0 for t > r_g
    double a = 0.5;     // g non-increasing on [0,a], g(a) > 0
    double c_g = 0.5;   // g(a)
    double L_g = 1.0;   // Lipschitz constant of g on its support
    double C_g = 0.25;  // sup_{t>=0} t*g(t)
    double sup_g = 1.0; // sup_{t>=0} g(t)
    std::vector<double> table_t, table_g; // present for TableLookup

    double eval(double t) const;
};

// Validates the admissibility requirements on g (non-negativity, compact
// support in [0, r_g], a non-increasing stretch [0,a] with g(a) > 0, and a
// bounded empirical Lipschitz ratio), then records c_g, L_g, C_g, sup g.
// Throws RejectNonNegative / RejectSupport / RejectMonotone / RejectLipschitz.
KernelProfile validate_profile(const RawProfile& raw);

// C_g = sup_{t in [0, r_g]} t*g(t), grid search with refinement until the
// estimate moves by < 1e-10 relative, then golden-section polish.
double normalization_constant(const KernelProfile& profile);

// J_eps at distance d: g(d/eps) / (eps * C_g); exactly 0 when d/eps > r_g.
double eval_scaled_kernel(const KernelProfile& profile, double eps, double d);

// Convenience constructors for the two shipped closed forms.
KernelProfile triangle_profile(double r_g = 1.0);
KernelProfile truncated_exponential_profile(double r_g = 1.0);

} // namespace eik
