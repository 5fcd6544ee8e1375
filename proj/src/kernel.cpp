#include "eik/kernel.hpp"

#include "eik/errors.hpp"
#include "eik/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eik {

namespace {

constexpr double kClosedFormTol = 1e-12;
constexpr double kTableTol = 1e-8;
// Empirical Lipschitz ratios above this are treated as unbounded (a jump).
constexpr double kLipschitzCap = 1e9;

double triangle_eval(double t, double r_g) {
    return std::max(0.0, 1.0 - t / r_g);
}

// e^{-t} truncated at r_g, with a linear ramp of width 1e-3*r_g so the
// profile stays Lipschitz across the cutoff.
double trunc_exp_eval(double t, double r_g) {
    const double w = 1e-3 * r_g;
    const double t0 = r_g - w;
    if (t < 0.0) return 0.0;
    if (t <= t0) return std::exp(-t);
    if (t <= r_g) return std::exp(-t0) * (r_g - t) / w;
    return 0.0;
}

double table_eval(const std::vector<double>& ts, const std::vector<double>& gs, double t) {
    if (ts.empty() || t < ts.front()) return t < 0.0 ? 0.0 : (ts.empty() ? 0.0 : gs.front());
    if (t >= ts.back()) return t > ts.back() ? 0.0 : gs.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    std::size_t lo = hi - 1;
    double span = ts[hi] - ts[lo];
    if (span <= 0.0) return gs[lo];
    double w = (t - ts[lo]) / span;
    return gs[lo] * (1.0 - w) + gs[hi] * w;
}

std::function<double(double)> raw_evaluator(const RawProfile& raw) {
    if (raw.custom) return raw.custom;
    switch (raw.shape) {
        case KernelShape::Triangle:
            return [r = raw.r_g](double t) { return triangle_eval(t, r); };
        case KernelShape::TruncatedExponential:
            return [r = raw.r_g](double t) { return trunc_exp_eval(t, r); };
        case KernelShape::TableLookup:
            return [ts = raw.table_t, gs = raw.table_g](double t) { return table_eval(ts, gs, t); };
    }
    return {};
}

// non-increasing on [0,a], verified at 1000 grid points with tolerance slack
bool check_nonincreasing(const std::function<double(double)>& f, double a, double tol) {
    const int n = 1000;
    double prev = f(0.0);
    for (int i = 1; i <= n; ++i) {
        double cur = f(a * i / n);
        if (cur > prev + tol) return false;
        prev = cur;
    }
    return true;
}

// Max consecutive-pair difference ratio of f on [0, t_hi] sampled at npts.
// t_hi extends past r_g so a jump sitting exactly at the cutoff is seen.
// Returns {ratio, left endpoint of the worst pair}.
std::pair<double, double> max_ratio(const std::function<double(double)>& f, double t_hi, int npts) {
    double h = t_hi / (npts - 1);
    double worst = 0.0, at = 0.0;
    double prev = f(0.0);
    for (int i = 1; i < npts; ++i) {
        double t = i * h;
        double cur = f(t);
        double ratio = std::abs(cur - prev) / h;
        if (ratio > worst) {
            worst = ratio;
            at = t - h;
        }
        prev = cur;
    }
    return {worst, at};
}

// Zoom on the steepest spot: keep halving the step until the local difference
// ratio stabilizes (Lipschitz) or exceeds the cap (jump).
double zoomed_lipschitz(const std::function<double(double)>& f, double t_hi, double t_left, double h0) {
    double h = h0;
    double t = t_left;
    double ratio = 0.0;
    while (h > 1e-13 * t_hi) {
        double best = 0.0, best_t = t;
        double lo = std::max(0.0, t), hi = std::min(t_hi, t + 2.0 * h);
        double step = (hi - lo) / 16.0;
        if (step <= 0.0) break;
        double prev = f(lo);
        for (int i = 1; i <= 16; ++i) {
            double x = lo + i * step;
            double cur = f(x);
            double r = std::abs(cur - prev) / step;
            if (r > best) {
                best = r;
                best_t = x - step;
            }
            prev = cur;
        }
        if (best > kLipschitzCap) return std::numeric_limits<double>::infinity();
        if (best <= ratio * 1.05) return std::max(ratio, best); // stabilized
        ratio = best;
        t = best_t;
        h = step;
    }
    return ratio;
}

} // namespace

std::string to_string(KernelShape s) {
    switch (s) {
        case KernelShape::Triangle: return "triangle";
        case KernelShape::TruncatedExponential: return "trunc-exp";
        case KernelShape::TableLookup: return "table";
    }
    return "?";
}

KernelShape kernel_shape_from_string(const std::string& s) {
    if (s == "triangle") return KernelShape::Triangle;
    if (s == "trunc-exp") return KernelShape::TruncatedExponential;
    if (s == "table") return KernelShape::TableLookup;
    throw ConfigError("unknown kernel shape: " + s);
}

double KernelProfile::eval(double t) const {
    if (t < 0.0) return 0.0;
    if (t > r_g) return 0.0;
    switch (shape) {
        case KernelShape::Triangle: return triangle_eval(t, r_g);
        case KernelShape::TruncatedExponential: return trunc_exp_eval(t, r_g);
        case KernelShape::TableLookup: return table_eval(table_t, table_g, t);
    }
    return 0.0;
}

KernelProfile validate_profile(const RawProfile& raw) {
    if (!(raw.r_g > 0.0)) throw ConfigError("r_g must be positive");
    const bool is_table = raw.shape == KernelShape::TableLookup && !raw.custom;
    const double tol = is_table ? kTableTol : kClosedFormTol;

    if (is_table) {
        if (raw.table_t.size() != raw.table_g.size() || raw.table_t.size() < 1000)
            throw ConfigError("table profiles need >= 1000 (t,g) samples");
        if (!std::is_sorted(raw.table_t.begin(), raw.table_t.end()))
            throw ConfigError("table t column must be ascending");
    }

    auto g = raw_evaluator(raw);
    const double r_g = raw.r_g;

    // (H.6) non-negativity, sampled on [0, 2 r_g]
    const int npts = 4001;
    for (int i = 0; i < npts; ++i) {
        double t = 2.0 * r_g * i / (npts - 1);
        if (g(t) < -tol) throw RejectNonNegative("g(" + fmt_g17(t) + ") < 0");
    }

    // (H.7) support contained in [0, r_g]
    for (int i = 0; i < npts; ++i) {
        double t = r_g + r_g * (i + 1) / npts;
        if (std::abs(g(t)) > tol) throw RejectSupport("g positive beyond r_g at t=" + fmt_g17(t));
    }

    // (H.8) find a: g non-increasing on [0,a] with g(a) > 0. The candidate
    // maximizing c_g = g(a) wins; the triangle defaults to a = r_g/2.
    double a = 0.0, c_g = 0.0;
    if (raw.a) {
        a = *raw.a;
        if (!(a > 0.0 && a < r_g)) throw ConfigError("a must lie in (0, r_g)");
        if (!check_nonincreasing(g, a, tol)) throw RejectMonotone("g not non-increasing on [0,a]");
        c_g = g(a);
        if (!(c_g > tol)) throw RejectMonotone("g(a) not positive");
    } else if (raw.shape == KernelShape::Triangle && !raw.custom) {
        a = r_g / 2.0;
        c_g = g(a);
    } else {
        double best_a = 0.0, best_c = 0.0;
        for (int k = 1; k <= 9; ++k) {
            double cand = 0.1 * k * r_g;
            if (!check_nonincreasing(g, cand, tol)) break; // larger a cannot work either
            double val = g(cand);
            if (val > tol && val > best_c) {
                best_c = val;
                best_a = cand;
            }
        }
        if (best_a == 0.0) throw RejectMonotone("no a in (0, r_g) with g non-increasing on [0,a] and g(a) > 0");
        a = best_a;
        c_g = best_c;
    }

    // (H.9) empirical Lipschitz constant, probed across the support cutoff so
    // a jump at t = r_g is caught; refinement distinguishes a steep ramp
    // (finite limit) from a jump (ratio keeps doubling).
    double L_g;
    if (is_table) {
        // a piecewise-linear table is Lipschitz with the max segment slope
        L_g = 0.0;
        for (std::size_t i = 1; i < raw.table_t.size(); ++i) {
            double dt = raw.table_t[i] - raw.table_t[i - 1];
            if (dt > 0.0) L_g = std::max(L_g, std::abs(raw.table_g[i] - raw.table_g[i - 1]) / dt);
        }
        if (raw.table_g.back() > tol)
            throw RejectLipschitz("table does not decay to 0 at its end (jump at the cutoff)");
    } else {
        const double t_hi = 1.25 * r_g;
        auto [ratio, at] = max_ratio(g, t_hi, 10001);
        L_g = zoomed_lipschitz(g, t_hi, at, t_hi / 10000.0);
        L_g = std::max(L_g, ratio);
        if (!std::isfinite(L_g) || L_g > kLipschitzCap)
            throw RejectLipschitz("empirical Lipschitz ratio unbounded near the steepest point");
    }

    KernelProfile p;
    p.shape = raw.custom ? KernelShape::TableLookup : raw.shape;
    p.r_g = r_g;
    p.a = a;
    p.c_g = c_g;
    p.L_g = L_g;
    if (is_table) {
        p.table_t = raw.table_t;
        p.table_g = raw.table_g;
    } else if (raw.custom) {
        // freeze the callable into a dense table so the profile stays immutable
        const int n = 1 << 17;
        p.table_t.resize(n + 1);
        p.table_g.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            double t = 2.0 * r_g * i / n;
            p.table_t[i] = t;
            p.table_g[i] = std::max(0.0, raw.custom(t));
        }
    }

    // sup g over the support (dense grid; profiles are Lipschitz by now)
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) sup = std::max(sup, p.eval(r_g * i / 20000.0));
    p.sup_g = sup;
    p.C_g = normalization_constant(p);
    if (!(p.C_g > 0.0)) throw RejectMonotone("degenerate profile: C_g = 0");
    return p;
}

double normalization_constant(const KernelProfile& profile) {
    auto h = [&](double t) { return t * profile.eval(t); };
    const double r = profile.r_g;
    double prev = -1.0, best = 0.0, best_t = 0.0;
    for (int n = 1 << 12; n <= (1 << 22); n <<= 1) {
        best = 0.0;
        for (int i = 0; i <= n; ++i) {
            double t = r * i / n;
            double v = h(t);
            if (v > best) {
                best = v;
                best_t = t;
            }
        }
        if (prev >= 0.0 && std::abs(best - prev) <= 1e-10 * std::max(1.0, best)) break;
        prev = best;
    }
    // golden-section polish on the bracketing interval
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(0.0, best_t - r / (1 << 12));
    double hi = std::min(r, best_t + r / (1 << 12));
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * r; ++it) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo); f2 = h(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo); f1 = h(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

double eval_scaled_kernel(const KernelProfile& profile, double eps, double d) {
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    double s = d / eps;
    if (s > profile.r_g) return 0.0;
    return profile.eval(s) / (eps * profile.C_g);
}

KernelProfile triangle_profile(double r_g) {
    RawProfile raw;
    raw.shape = KernelShape::Triangle;
    raw.r_g = r_g;
    return validate_profile(raw);
}

KernelProfile truncated_exponential_profile(double r_g) {
    RawProfile raw;
    raw.shape = KernelShape::TruncatedExponential;
    raw.r_g = r_g;
    return validate_profile(raw);
}

} // namespace eik
