#include "eik/errors.hpp"
#include "eik/kernel.hpp"
#include "eik/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace eik;

namespace {

// independent oracle: 1-D grid maximization of t*g(t) with 1e6 points
double grid_max_tg(const std::function<double(double)>& g, double r_g) {
    double best = 0.0;
    const int n = 1000000;
    for (int i = 0; i <= n; ++i) {
        double t = r_g * i / n;
        best = std::max(best, t * g(t));
    }
    return best;
}

RawProfile custom(double r_g, std::function<double(double)> f) {
    RawProfile raw;
    raw.r_g = r_g;
    raw.custom = std::move(f);
    return raw;
}

} // namespace

TEST_CASE("triangle profile validates with the documented constants") {
    KernelProfile p = triangle_profile();
    CHECK(p.a == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.c_g == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.L_g == doctest::Approx(1.0).epsilon(1e-6));
    double oracle = grid_max_tg([](double t) { return std::max(0.0, 1.0 - t); }, 1.0);
    CHECK(p.C_g == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(p.C_g == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.sup_g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate and inadmissible profiles are rejected") {
    CHECK_THROWS_AS(validate_profile(custom(1.0, [](double) { return 0.0; })), RejectMonotone);
    CHECK_THROWS_AS(validate_profile(custom(1.0, [](double t) { return t <= 1.0 ? 1.0 : 0.0; })),
                    RejectLipschitz);
    CHECK_THROWS_AS(
        validate_profile(custom(1.0, [](double t) { return t < 0.5 ? 1.0 - t : -0.1; })),
        RejectNonNegative);
    CHECK_THROWS_AS(
        validate_profile(custom(1.0, [](double t) { return std::max(0.0, 1.5 - t); })),
        RejectSupport);
}

TEST_CASE("normalization constant matches the grid oracle") {
    SUBCASE("truncated exponential") {
        KernelProfile p = truncated_exponential_profile();
        auto g = [](double t) {
            const double w = 1e-3, t0 = 1.0 - w;
            if (t <= t0) return std::exp(-t);
            if (t <= 1.0) return std::exp(-t0) * (1.0 - t) / w;
            return 0.0;
        };
        CHECK(p.C_g == doctest::Approx(grid_max_tg(g, 1.0)).epsilon(1e-8));
    }
    SUBCASE("constant with a thin Lipschitz ramp is ~ c * 1") {
        const double c = 0.7, w = 1e-6;
        auto g = [=](double t) {
            if (t <= 1.0 - w) return c;
            if (t <= 1.0) return c * (1.0 - t) / w;
            return 0.0;
        };
        KernelProfile p = validate_profile(custom(1.0, g));
        CHECK(p.C_g == doctest::Approx(c).epsilon(1e-4));
    }
    SUBCASE("sup is positively homogeneous: C(2g) = 2 C(g)") {
        KernelProfile p1 = triangle_profile();
        KernelProfile p2 =
            validate_profile(custom(1.0, [](double t) { return 2.0 * std::max(0.0, 1.0 - t); }));
        CHECK(p2.C_g == doctest::Approx(2.0 * p1.C_g).epsilon(1e-9));
    }
}

TEST_CASE("tabulated triangle reproduces C_g within 1e-4") {
    RawProfile raw;
    raw.shape = KernelShape::TableLookup;
    raw.r_g = 1.0;
    const int n = 100000;
    for (int i = 0; i <= n; ++i) {
        double t = 2.0 * i / n;
        raw.table_t.push_back(t);
        raw.table_g.push_back(std::max(0.0, 1.0 - t));
    }
    KernelProfile p = validate_profile(raw);
    CHECK(p.C_g == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(p.c_g > 0.0);
    CHECK(p.L_g == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("scaled kernel evaluation") {
    KernelProfile p = triangle_profile();
    CHECK(eval_scaled_kernel(p, 0.1, 0.05) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(eval_scaled_kernel(p, 1.0, 0.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(eval_scaled_kernel(p, 0.2, 0.2000001) == 0.0);
    CHECK(eval_scaled_kernel(p, 0.2, 5.0) == 0.0);
    CHECK_THROWS_AS(eval_scaled_kernel(p, 0.0, 0.1), NonPositiveEps);
    CHECK_THROWS_AS(eval_scaled_kernel(p, -1.0, 0.1), NonPositiveEps);
}

TEST_CASE("scaled kernel properties on random draws") {
    KernelProfile p = triangle_profile();
    auto gen = substream(7, "test.kernel.props");
    for (int trial = 0; trial < 200; ++trial) {
        double eps = uniform(gen, 0.01, 2.0);
        double d = uniform(gen, 0.0, 3.0 * eps);
        double w = eval_scaled_kernel(p, eps, d);
        CHECK(w >= 0.0);
        if (d > eps * p.r_g) CHECK(w == 0.0);
        // scale consistency: J_{l*eps}(l*d) = J_eps(d) / l
        double l = uniform(gen, 0.1, 4.0);
        double lhs = eval_scaled_kernel(p, l * eps, l * d);
        CHECK(lhs * l == doctest::Approx(w).epsilon(1e-11));
    }
}

TEST_CASE("user-supplied a is honored and monotonicity is enforced") {
    RawProfile raw;
    raw.shape = KernelShape::Triangle;
    raw.r_g = 1.0;
    raw.a = 0.25;
    KernelProfile p = validate_profile(raw);
    CHECK(p.a == doctest::Approx(0.25));
    CHECK(p.c_g == doctest::Approx(0.75).epsilon(1e-12));

    // a beyond the support edge or outside (0, r_g) is a config error
    raw.a = 1.5;
    CHECK_THROWS_AS(validate_profile(raw), ConfigError);
}
