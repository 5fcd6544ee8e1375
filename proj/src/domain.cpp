#include "eik/domain.hpp"

#include "eik/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eik {

namespace {

constexpr double kBoxTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;

void check_in_box(std::span<const double> x) {
    for (double c : x)
        if (c < -kBoxTol || c > 1.0 + kBoxTol)
            throw PointOutsideDomain("point outside the unit box");
}

double prim_distance(const GammaPrimitive& p, std::span<const double> x) {
    switch (p.kind) {
        case GammaPrimitive::Kind::BoxBoundary: {
            double d = std::numeric_limits<double>::infinity();
            for (double c : x) d = std::min(d, std::min(std::max(c, 0.0), std::max(1.0 - c, 0.0)));
            return d;
        }
        case GammaPrimitive::Kind::SphereShell: {
            double r = dist(x, std::span<const double>(p.center));
            return std::abs(r - p.radius);
        }
        case GammaPrimitive::Kind::PointSet: {
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < p.points.size(); ++i) best = std::min(best, dist(p.points[i], x));
            return best;
        }
    }
    return 0.0;
}

} // namespace

DomainSpec DomainSpec::box_boundary(int m) {
    DomainSpec d;
    d.m = m;
    d.gamma.push_back(GammaPrimitive{GammaPrimitive::Kind::BoxBoundary, {}, 0.0, {}});
    return d;
}

DomainSpec DomainSpec::point_set(int m, PointCloud pts) {
    DomainSpec d;
    d.m = m;
    GammaPrimitive p;
    p.kind = GammaPrimitive::Kind::PointSet;
    p.points = std::move(pts);
    d.gamma.push_back(std::move(p));
    return d;
}

DomainSpec DomainSpec::sphere_shell(int m, std::vector<double> center, double radius) {
    DomainSpec d;
    d.m = m;
    GammaPrimitive p;
    p.kind = GammaPrimitive::Kind::SphereShell;
    p.center = std::move(center);
    p.radius = radius;
    d.gamma.push_back(std::move(p));
    return d;
}

void validate_domain(const DomainSpec& domain) {
    if (domain.m < 1) throw ConfigError("dimension m must be >= 1");
    if (domain.gamma.empty()) throw ConfigError("gamma must contain at least one primitive");
    for (const auto& p : domain.gamma) {
        switch (p.kind) {
            case GammaPrimitive::Kind::BoxBoundary:
                break;
            case GammaPrimitive::Kind::SphereShell: {
                if (static_cast<int>(p.center.size()) != domain.m)
                    throw ConfigError("sphere center dimension mismatch");
                if (!(p.radius > 0.0)) throw ConfigError("sphere radius must be positive");
                for (double c : p.center)
                    if (c - p.radius < -kBoxTol || c + p.radius > 1.0 + kBoxTol)
                        throw ConfigError("sphere shell leaves the unit box");
                break;
            }
            case GammaPrimitive::Kind::PointSet: {
                if (p.points.m != domain.m) throw ConfigError("gamma point set dimension mismatch");
                if (p.points.empty()) throw ConfigError("gamma point set is empty");
                for (int i = 0; i < p.points.size(); ++i) check_in_box(p.points[i]);
                break;
            }
        }
    }
}

double distance_to_gamma(const DomainSpec& domain, std::span<const double> x) {
    check_in_box(x);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : domain.gamma) best = std::min(best, prim_distance(p, x));
    return best;
}

double hausdorff_distance(const PointCloud& A, const PointCloud& B) {
    if (A.empty() || B.empty()) throw EmptySet("hausdorff_distance needs non-empty sets");
    auto one_sided = [](const PointCloud& X, const PointCloud& Y) {
        double worst = 0.0;
        for (int i = 0; i < X.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < Y.size(); ++j) best = std::min(best, dist2(X[i], Y[j]));
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(one_sided(A, B), one_sided(B, A));
}

double coverage_radius(const DomainSpec& domain, const PointCloud& V, double probe_resolution) {
    if (V.empty()) throw EmptySet("coverage_radius needs a non-empty vertex set");
    if (!(probe_resolution > 0.0)) throw ConfigError("probe_resolution must be positive");
    const int m = domain.m;

    double per_axis = std::max(1.0, std::floor(1.0 / probe_resolution));
    CellIndex index(V, std::max(probe_resolution, std::pow(1.0 / std::max(1, V.size()), 1.0 / m)));

    // per-axis coordinates i*res plus the far face so corners are probed
    std::vector<double> coords;
    int k = static_cast<int>(per_axis);
    coords.reserve(k + 2);
    for (int i = 0; i <= k; ++i) coords.push_back(std::min(1.0, i * probe_resolution));
    if (coords.back() < 1.0) coords.push_back(1.0);

    std::vector<int> odo(m, 0);
    std::vector<double> x(m, 0.0);
    double worst2 = 0.0;
    while (true) {
        for (int a = 0; a < m; ++a) x[a] = coords[odo[a]];
        worst2 = std::max(worst2, index.nn_dist2(x));
        int a = 0;
        for (; a < m; ++a) {
            if (++odo[a] < static_cast<int>(coords.size())) break;
            odo[a] = 0;
        }
        if (a == m) break;
    }
    return std::sqrt(worst2);
}

PointCloud sample_gamma(const DomainSpec& domain, double spacing) {
    if (!(spacing > 0.0)) throw ConfigError("spacing must be positive");
    const int m = domain.m;
    PointCloud out(m);
    for (const auto& p : domain.gamma) {
        switch (p.kind) {
            case GammaPrimitive::Kind::BoxBoundary: {
                if (m == 1) {
                    out.push_back({0.0});
                    out.push_back({1.0});
                } else if (m == 2) {
                    int k = std::max(1, static_cast<int>(std::ceil(1.0 / spacing)));
                    for (int i = 0; i <= k; ++i) {
                        double s = static_cast<double>(i) / k;
                        out.push_back({s, 0.0});
                        out.push_back({s, 1.0});
                        out.push_back({0.0, s});
                        out.push_back({1.0, s});
                    }
                } else {
                    throw ConfigError("dense box-boundary sampling implemented for m <= 2");
                }
                break;
            }
            case GammaPrimitive::Kind::SphereShell: {
                if (m == 1) {
                    out.push_back({p.center[0] - p.radius});
                    out.push_back({p.center[0] + p.radius});
                } else if (m == 2) {
                    double step = spacing / p.radius;
                    int k = std::max(8, static_cast<int>(std::ceil(2.0 * kPi / step)));
                    for (int i = 0; i < k; ++i) {
                        double th = 2.0 * kPi * i / k;
                        out.push_back({p.center[0] + p.radius * std::cos(th),
                                       p.center[1] + p.radius * std::sin(th)});
                    }
                } else {
                    throw ConfigError("dense sphere sampling implemented for m <= 2");
                }
                break;
            }
            case GammaPrimitive::Kind::PointSet:
                for (int i = 0; i < p.points.size(); ++i) out.push_back(p.points[i]);
                break;
        }
    }
    return out;
}

// --- node functions --------------------------------------------------------

double PotentialSpec::eval(std::span<const double> x) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::RadialRamp: return value + slope * dist(x, std::span<const double>(x0));
    }
    return 0.0;
}

double PotentialSpec::lip() const {
    return kind == Kind::Constant ? 0.0 : std::abs(slope);
}

double PotentialSpec::sup(int m) const {
    if (kind == Kind::Constant) return value;
    double worst = 0.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        double d2 = 0.0;
        for (int a = 0; a < m; ++a) {
            double c = (mask >> a) & 1 ? 1.0 : 0.0;
            double dd = c - x0[a];
            d2 += dd * dd;
        }
        worst = std::max(worst, std::sqrt(d2));
    }
    return value + slope * worst;
}

PotentialSpec PotentialSpec::constant(double v) {
    PotentialSpec p;
    p.kind = Kind::Constant;
    p.value = v;
    return p;
}

PotentialSpec PotentialSpec::radial_ramp(double base, double slope, std::vector<double> x0) {
    PotentialSpec p;
    p.kind = Kind::RadialRamp;
    p.value = base;
    p.slope = slope;
    p.x0 = std::move(x0);
    return p;
}

double BoundaryDataSpec::eval(std::span<const double> x) const {
    if (kind == Kind::Zero) return 0.0;
    double s = offset;
    for (std::size_t a = 0; a < x.size(); ++a) s += coeff[a] * x[a];
    return s;
}

double BoundaryDataSpec::lip() const {
    if (kind == Kind::Zero) return 0.0;
    double s = 0.0;
    for (double c : coeff) s += c * c;
    return std::sqrt(s);
}

BoundaryDataSpec BoundaryDataSpec::zero() { return {}; }

BoundaryDataSpec BoundaryDataSpec::linear(double offset, std::vector<double> coeff) {
    BoundaryDataSpec b;
    b.kind = Kind::Linear;
    b.offset = offset;
    b.coeff = std::move(coeff);
    return b;
}

// --- cell index -------------------------------------------------------------

CellIndex::CellIndex(const PointCloud& pts, double cell_size) : m(pts.m), cloud(&pts) {
    cell_size = std::min(std::max(cell_size, 1e-6), 1.0);
    int per_axis = std::max(1, static_cast<int>(std::floor(1.0 / cell_size)));
    // keep the table bounded for tiny cells in higher dimension
    while (m >= 2 && std::pow(static_cast<double>(per_axis), m) > 4.0e6) per_axis /= 2;
    per_axis = std::max(1, per_axis);
    cell = 1.0 / per_axis;
    dims.assign(m, per_axis);
    std::size_t total = 1;
    for (int a = 0; a < m; ++a) total *= static_cast<std::size_t>(dims[a]);
    bins.assign(total, {});
    for (int i = 0; i < pts.size(); ++i) bins[cell_of(pts[i])].push_back(i);
}

std::size_t CellIndex::cell_of(std::span<const double> x) const {
    std::size_t lin = 0;
    for (int a = 0; a < m; ++a) {
        int c = static_cast<int>(std::floor(x[a] / cell));
        c = std::clamp(c, 0, dims[a] - 1);
        lin = lin * dims[a] + c;
    }
    return lin;
}

double CellIndex::nn_dist2(std::span<const double> x) const {
    std::vector<int> home(m);
    for (int a = 0; a < m; ++a)
        home[a] = std::clamp(static_cast<int>(std::floor(x[a] / cell)), 0, dims[a] - 1);

    double best = std::numeric_limits<double>::infinity();
    int max_ring = 0;
    for (int a = 0; a < m; ++a) max_ring = std::max(max_ring, dims[a]);

    std::vector<int> odo(m), lo(m), hi(m);
    for (int ring = 0; ring <= max_ring; ++ring) {
        // cells at Chebyshev ring r are at least (r-1)*cell away from x
        if (best <= static_cast<double>(ring - 1) * cell * (ring - 1) * cell && ring > 0) break;
        bool any = false;
        for (int a = 0; a < m; ++a) {
            lo[a] = std::max(0, home[a] - ring);
            hi[a] = std::min(dims[a] - 1, home[a] + ring);
            odo[a] = lo[a];
        }
        while (true) {
            bool on_shell = ring == 0;
            for (int a = 0; a < m && !on_shell; ++a)
                if (std::abs(odo[a] - home[a]) == ring) on_shell = true;
            if (on_shell) {
                any = true;
                std::size_t lin = 0;
                for (int a = 0; a < m; ++a) lin = lin * dims[a] + odo[a];
                for (int id : bins[lin]) best = std::min(best, dist2((*cloud)[id], x));
            }
            int a = 0;
            for (; a < m; ++a) {
                if (++odo[a] <= hi[a]) break;
                odo[a] = lo[a];
            }
            if (a == m) break;
        }
        if (!any && ring > 0 && std::isfinite(best)) break;
    }
    return best;
}

double CellIndex::nn_dist(std::span<const double> x) const { return std::sqrt(nn_dist2(x)); }

double min_pair_distance(const PointCloud& pts) {
    const int n = pts.size();
    if (n < 2) throw EmptySet("min_pair_distance needs >= 2 points");
    if (n <= 512) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) best = std::min(best, dist2(pts[i], pts[j]));
        return std::sqrt(best);
    }
    CellIndex index(pts, std::pow(1.0 / n, 1.0 / pts.m));
    double best = std::numeric_limits<double>::infinity();
    // nearest other point per vertex via ring search over the shared index
    for (int i = 0; i < n; ++i) {
        std::span<const double> x = pts[i];
        std::vector<int> home(pts.m);
        for (int a = 0; a < pts.m; ++a)
            home[a] = std::clamp(static_cast<int>(std::floor(x[a] / index.cell)), 0, index.dims[a] - 1);
        double local = std::numeric_limits<double>::infinity();
        int max_ring = 0;
        for (int a = 0; a < pts.m; ++a) max_ring = std::max(max_ring, index.dims[a]);
        std::vector<int> odo(pts.m), lo(pts.m), hi(pts.m);
        for (int ring = 0; ring <= max_ring; ++ring) {
            double reach = static_cast<double>(ring - 1) * index.cell;
            if (ring > 0 && local <= reach * reach) break;
            for (int a = 0; a < pts.m; ++a) {
                lo[a] = std::max(0, home[a] - ring);
                hi[a] = std::min(index.dims[a] - 1, home[a] + ring);
                odo[a] = lo[a];
            }
            while (true) {
                bool on_shell = ring == 0;
                for (int a = 0; a < pts.m && !on_shell; ++a)
                    if (std::abs(odo[a] - home[a]) == ring) on_shell = true;
                if (on_shell) {
                    std::size_t lin = 0;
                    for (int a = 0; a < pts.m; ++a) lin = lin * index.dims[a] + odo[a];
                    for (int id : index.bins[lin])
                        if (id != i) local = std::min(local, dist2(pts[id], x));
                }
                int a = 0;
                for (; a < pts.m; ++a) {
                    if (++odo[a] <= hi[a]) break;
                    odo[a] = lo[a];
                }
                if (a == pts.m) break;
            }
        }
        best = std::min(best, local);
    }
    return std::sqrt(best);
}

} // namespace eik
