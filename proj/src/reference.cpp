#include "eik/reference.hpp"

#include "eik/errors.hpp"
#include "eik/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace eik {

double analytic_min_dist(const DomainSpec& domain, const PotentialSpec& P,
                         const BoundaryDataSpec& psi, std::span<const double> x, double t) {
    if (P.kind != PotentialSpec::Kind::Constant || P.value != 1.0)
        throw WrongCase("analytic_min_dist requires P == 1");
    if (psi.kind != BoundaryDataSpec::Kind::Zero)
        throw WrongCase("analytic_min_dist requires psi == 0");
    return std::min(t, distance_to_gamma(domain, x));
}

double grid_max_stable_dt(int m, double spacing) {
    return spacing / (2.0 * m);
}

namespace {

int axis_nodes(double spacing) {
    double k = 1.0 / spacing;
    double rk = std::round(k);
    if (std::abs(k - rk) > 1e-9 || rk < 1.0)
        throw ConfigError("spacing must divide the unit box");
    return static_cast<int>(rk) + 1;
}

} // namespace

GridUpwindSolution grid_upwind_solve(const DomainSpec& domain, const PotentialSpec& P,
                                     const BoundaryDataSpec& psi, double spacing, double T,
                                     double dt, std::span<const double> store_times) {
    validate_domain(domain);
    const int m = domain.m;
    const int per_axis = axis_nodes(spacing);
    const double cfl = grid_max_stable_dt(m, spacing);
    if (dt <= 0.0) dt = 0.5 * cfl;
    if (dt > cfl) throw GridCflViolation("grid dt = " + fmt_g17(dt) + " exceeds " + fmt_g17(cfl));

    GridUpwindSolution sol;
    sol.m = m;
    sol.dims.assign(m, per_axis);
    sol.spacing = spacing;
    sol.T = T;
    sol.dt = dt;

    std::size_t total = 1;
    for (int a = 0; a < m; ++a) total *= static_cast<std::size_t>(per_axis);

    std::vector<std::size_t> stride(m);
    {
        std::size_t s = 1;
        for (int a = m - 1; a >= 0; --a) {
            stride[a] = s;
            s *= static_cast<std::size_t>(per_axis);
        }
    }

    // node coordinates, Dirichlet mask (within h/2 of Gamma), node data
    std::vector<std::uint8_t> dirichlet(total, 0);
    std::vector<double> pot(total), bdata(total);
    std::vector<double> x(m);
    std::vector<int> idx(m, 0);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (int a = 0; a < m; ++a) x[a] = (lin / stride[a] % per_axis) * spacing;
        double d = distance_to_gamma(domain, x);
        dirichlet[lin] = d <= 0.5 * spacing ? 1 : 0;
        pot[lin] = P.eval(x);
        bdata[lin] = psi.eval(x);
    }

    std::vector<double> f(total), fn(total);
    for (std::size_t lin = 0; lin < total; ++lin) f[lin] = bdata[lin];

    const int n_steps = T > 0.0 ? static_cast<int>(std::ceil(T / dt - 1e-12)) : 0;

    std::vector<double> stores(store_times.begin(), store_times.end());
    std::sort(stores.begin(), stores.end());
    std::size_t next_store = 0;
    auto maybe_store = [&](double t, const std::vector<double>& level, bool last) {
        bool want = false;
        while (next_store < stores.size() && (t >= stores[next_store] - 1e-12 || last)) {
            ++next_store;
            want = true;
        }
        if (want || (last && (sol.times.empty() || sol.times.back() != t))) {
            sol.times.push_back(t);
            sol.levels.push_back(level);
        }
    };
    maybe_store(0.0, f, n_steps == 0);

    for (int k = 0; k < n_steps; ++k) {
        for (std::size_t lin = 0; lin < total; ++lin) {
            if (dirichlet[lin]) {
                fn[lin] = bdata[lin];
                continue;
            }
            // Rouy-Tourin upwind: per axis q = max(0, D-, -D+), H = |q|_2
            double q2 = 0.0;
            for (int a = 0; a < m; ++a) {
                int ia = static_cast<int>(lin / stride[a] % per_axis);
                double q = 0.0;
                if (ia > 0) q = std::max(q, (f[lin] - f[lin - stride[a]]) / spacing);
                if (ia + 1 < per_axis) q = std::max(q, (f[lin] - f[lin + stride[a]]) / spacing);
                q2 += q * q;
            }
            fn[lin] = f[lin] + dt * (pot[lin] - std::sqrt(q2));
        }
        f.swap(fn);
        maybe_store((k + 1) * dt, f, k + 1 == n_steps);
    }
    return sol;
}

double GridUpwindSolution::eval(std::span<const double> x, double t) const {
    // nearest stored level; the O(dt) time offset is part of the oracle's
    // documented error budget (the solution is Lipschitz in t)
    std::size_t level = times.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < times.size(); ++k) {
        double gap = std::abs(times[k] - t);
        if (gap < best) {
            best = gap;
            level = k;
        }
    }
    if (level == times.size() || best > dt + 1e-9)
        throw ConfigError("grid solution has no stored level near t = " + fmt_g17(t));
    const std::vector<double>& grid = levels[level];

    // multilinear interpolation
    const int per_axis = dims[0];
    std::vector<int> base(m);
    std::vector<double> w(m);
    for (int a = 0; a < m; ++a) {
        double s = std::clamp(x[a], 0.0, 1.0) / spacing;
        int i = std::min(static_cast<int>(std::floor(s)), per_axis - 2);
        i = std::max(i, 0);
        base[a] = i;
        w[a] = std::clamp(s - i, 0.0, 1.0);
    }
    std::vector<std::size_t> stride(m);
    {
        std::size_t s = 1;
        for (int a = m - 1; a >= 0; --a) {
            stride[a] = s;
            s *= static_cast<std::size_t>(per_axis);
        }
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << m); ++corner) {
        double wc = 1.0;
        std::size_t lin = 0;
        for (int a = 0; a < m; ++a) {
            int bit = (corner >> a) & 1;
            wc *= bit ? w[a] : 1.0 - w[a];
            lin += stride[a] * static_cast<std::size_t>(base[a] + bit);
        }
        acc += wc * grid[lin];
    }
    return acc;
}

void write_grid_dump(const std::string& path, const GridUpwindSolution& sol) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(0x45494b47u); // "GKIE"
    put_u32(static_cast<std::uint32_t>(sol.m));
    for (int a = 0; a < sol.m; ++a) put_u32(static_cast<std::uint32_t>(sol.dims[a]));
    put_f64(sol.spacing);
    put_f64(sol.T);
    put_f64(sol.dt);
    const std::vector<double>& last = sol.levels.back();
    out.write(reinterpret_cast<const char*>(last.data()),
              static_cast<std::streamsize>(last.size() * sizeof(double)));
    if (!out) throw IoFailure("write failed: " + path);
}

GridUpwindSolution read_grid_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_f64 = [&]() {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    if (get_u32() != 0x45494b47u) throw IoFailure("bad magic in " + path);
    GridUpwindSolution sol;
    sol.m = static_cast<int>(get_u32());
    sol.dims.resize(sol.m);
    std::size_t total = 1;
    for (int a = 0; a < sol.m; ++a) {
        sol.dims[a] = static_cast<int>(get_u32());
        total *= static_cast<std::size_t>(sol.dims[a]);
    }
    sol.spacing = get_f64();
    sol.T = get_f64();
    sol.dt = get_f64();
    std::vector<double> grid(total);
    in.read(reinterpret_cast<char*>(grid.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!in) throw IoFailure("truncated grid dump: " + path);
    sol.times.push_back(sol.T);
    sol.levels.push_back(std::move(grid));
    return sol;
}

} // namespace eik
