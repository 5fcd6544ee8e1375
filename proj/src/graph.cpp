#include "eik/graph.hpp"

#include "eik/errors.hpp"
#include "eik/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eik {

double scale_parameter(const SamplingConfig& cfg, const KernelProfile& profile) {
    if (cfg.n < 3) throw ConfigError("scale_parameter needs n >= 3");
    if (!(cfg.nu > 0.0) || !(cfg.tau > 0.0)) throw ConfigError("nu and tau must be positive");
    const double m = static_cast<double>(cfg.m);
    const double c = 1.0; // inf rho for the uniform density on the unit box
    double pref = (8.0 / profile.a) * std::sqrt(2.0 * 3.14159265358979323846 * std::exp(4.0 / 3.0));
    pref *= std::pow((1.0 + cfg.tau) / (std::sqrt(3.14159265358979323846 * m) * c), 1.0 / m);
    double pow1nu = pref * std::pow(std::log(static_cast<double>(cfg.n)) / cfg.n, 1.0 / m);
    double eps = std::pow(pow1nu, 1.0 / (1.0 + cfg.nu));
    if (eps * profile.r_g > std::sqrt(m))
        throw ScaleExceedsDomain("eps_n*r_g = " + fmt_g17(eps * profile.r_g) +
                                 " exceeds diam(Omega); n too small for the asymptotic regime");
    return eps;
}

PointCloud sample_vertices(const DomainSpec& domain, const SamplingConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("need n >= 2 vertices");
    if (cfg.m != domain.m) throw ConfigError("sampling dimension mismatch");
    auto gen = substream(cfg.seed, "graph.sample");
    PointCloud pts(cfg.m);
    pts.data.resize(static_cast<std::size_t>(cfg.n) * cfg.m);
    for (double& c : pts.data) c = uniform01(gen);
    return pts;
}

std::vector<std::int32_t> build_boundary(const PointCloud& vertices, const DomainSpec& domain,
                                         double eps, double nu, const KernelProfile& profile) {
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    const double tube = profile.a * std::pow(eps, 1.0 + nu) / (2.0 * std::sqrt(domain.m));
    std::vector<std::int32_t> idx;
    for (int i = 0; i < vertices.size(); ++i)
        if (distance_to_gamma(domain, vertices[i]) <= tube) idx.push_back(i);
    if (idx.empty())
        throw EmptyBoundary("no vertex within " + fmt_g17(tube) +
                            " of Gamma; resample or enlarge n");
    return idx;
}

namespace {

Adjacency finalize_rows(std::vector<std::vector<std::pair<std::int32_t, double>>>& rows) {
    Adjacency adj;
    const int n = static_cast<int>(rows.size());
    adj.offsets.resize(n + 1);
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) {
        std::sort(rows[i].begin(), rows[i].end());
        adj.offsets[i] = total;
        total += static_cast<std::int64_t>(rows[i].size());
    }
    adj.offsets[n] = total;
    adj.cols.reserve(total);
    adj.weights.reserve(total);
    for (int i = 0; i < n; ++i) {
        for (auto& [j, w] : rows[i]) {
            adj.cols.push_back(j);
            adj.weights.push_back(w);
        }
        rows[i].clear();
        rows[i].shrink_to_fit();
    }
    return adj;
}

void check_isolation(const Adjacency& adj, std::span<const std::int32_t> boundary_sorted) {
    for (int u = 0; u < adj.size(); ++u) {
        if (std::binary_search(boundary_sorted.begin(), boundary_sorted.end(), u)) continue;
        if (adj.offsets[u + 1] == adj.offsets[u])
            throw IsolatedInteriorVertex("interior vertex " + std::to_string(u) +
                                         " has no neighbor within eps*r_g");
    }
}

} // namespace

Adjacency build_adjacency(const PointCloud& vertices, double eps, const KernelProfile& profile,
                          std::span<const std::int32_t> boundary_sorted) {
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    const int n = vertices.size();
    const int m = vertices.m;
    const double cutoff = eps * profile.r_g;
    const double cutoff2 = cutoff * cutoff;

    CellIndex grid(vertices, cutoff);
    const int reach = std::max(1, static_cast<int>(std::ceil(cutoff / grid.cell)));

    std::vector<int> lo(m), hi(m), odo(m);
    auto scan = [&](int u, auto&& emit) {
        std::span<const double> x = vertices[u];
        for (int a = 0; a < m; ++a) {
            int c = std::clamp(static_cast<int>(std::floor(x[a] / grid.cell)), 0, grid.dims[a] - 1);
            lo[a] = std::max(0, c - reach);
            hi[a] = std::min(grid.dims[a] - 1, c + reach);
            odo[a] = lo[a];
        }
        while (true) {
            std::size_t lin = 0;
            for (int a = 0; a < m; ++a) lin = lin * grid.dims[a] + odo[a];
            for (int v : grid.bins[lin]) {
                if (v == u) continue;
                double d2 = dist2(x, vertices[v]);
                if (d2 <= cutoff2) emit(v, d2);
            }
            int a = 0;
            for (; a < m; ++a) {
                if (++odo[a] <= hi[a]) break;
                odo[a] = lo[a];
            }
            if (a == m) break;
        }
    };

    // two passes keep the peak footprint at one CSR copy
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (int u = 0; u < n; ++u) {
        std::int64_t cnt = 0;
        scan(u, [&](int, double) { ++cnt; });
        adj.offsets[u + 1] = adj.offsets[u] + cnt;
    }
    adj.cols.resize(adj.offsets[n]);
    adj.weights.resize(adj.offsets[n]);
    std::vector<std::pair<std::int32_t, double>> row;
    for (int u = 0; u < n; ++u) {
        row.clear();
        scan(u, [&](int v, double d2) {
            row.emplace_back(v, eval_scaled_kernel(profile, eps, std::sqrt(d2)));
        });
        std::sort(row.begin(), row.end());
        std::int64_t base = adj.offsets[u];
        for (std::size_t k = 0; k < row.size(); ++k) {
            adj.cols[base + k] = row[k].first;
            adj.weights[base + k] = row[k].second;
        }
    }
    check_isolation(adj, boundary_sorted);
    return adj;
}

Adjacency build_adjacency_brute_force(const PointCloud& vertices, double eps,
                                      const KernelProfile& profile) {
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    const int n = vertices.size();
    const double cutoff2 = eps * profile.r_g * eps * profile.r_g;
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            double d2 = dist2(vertices[u], vertices[v]);
            if (d2 <= cutoff2)
                rows[u].emplace_back(v, eval_scaled_kernel(profile, eps, std::sqrt(d2)));
        }
    return finalize_rows(rows);
}

GraphProblem build_graph(const DomainSpec& domain, const SamplingConfig& cfg,
                         const KernelProfile& profile, const PotentialSpec& potential,
                         const BoundaryDataSpec& psi, std::optional<double> eps_override) {
    validate_domain(domain);
    PointCloud pts = sample_vertices(domain, cfg);
    double eps = eps_override ? *eps_override : scale_parameter(cfg, profile);
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    std::vector<std::int32_t> gamma_n = build_boundary(pts, domain, eps, cfg.nu, profile);
    return assemble_graph(std::move(pts), std::move(gamma_n), eps, profile, potential, psi);
}

GraphProblem assemble_graph(PointCloud vertices, std::vector<std::int32_t> boundary_idx,
                            double eps, const KernelProfile& profile,
                            const PotentialSpec& potential, const BoundaryDataSpec& psi) {
    std::sort(boundary_idx.begin(), boundary_idx.end());
    if (boundary_idx.empty()) throw EmptyBoundary("boundary index set is empty");

    GraphProblem g;
    g.eps = eps;
    g.adjacency = build_adjacency(vertices, eps, profile, boundary_idx);
    const int n = vertices.size();
    g.is_boundary.assign(n, 0);
    for (std::int32_t i : boundary_idx) {
        if (i < 0 || i >= n) throw ConfigError("boundary index out of range");
        g.is_boundary[i] = 1;
    }
    g.potential.resize(n);
    g.psi.resize(n);
    for (int i = 0; i < n; ++i) {
        g.potential[i] = potential.eval(vertices[i]);
        if (g.potential[i] < 0.0) throw ConfigError("potential must be non-negative");
        g.psi[i] = psi.eval(vertices[i]);
    }
    g.vertices = std::move(vertices);
    g.boundary_idx = std::move(boundary_idx);
    g.cfl_bound = eps * profile.C_g / profile.sup_g;
    return g;
}

// --- import/export ----------------------------------------------------------

void write_cloud_csv(const std::string& path, const PointCloud& pts) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    for (int a = 0; a < pts.m; ++a) out << (a ? "," : "") << "x" << a;
    out << "\n";
    for (int i = 0; i < pts.size(); ++i) {
        std::span<const double> p = pts[i];
        for (int a = 0; a < pts.m; ++a) out << (a ? "," : "") << fmt_g17(p[a]);
        out << "\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

PointCloud read_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoFailure("empty cloud file: " + path);
    int m = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    PointCloud pts(m);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) pts.data.push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (pts.data.size() % m != 0) throw IoFailure("ragged cloud file: " + path);
    return pts;
}

void write_index_csv(const std::string& path, std::span<const std::int32_t> idx) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << "idx\n";
    for (std::int32_t i : idx) out << i << "\n";
    if (!out) throw IoFailure("write failed: " + path);
}

std::vector<std::int32_t> read_index_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<std::int32_t> idx;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        idx.push_back(static_cast<std::int32_t>(std::strtol(line.c_str(), nullptr, 10)));
    }
    return idx;
}

void write_edges_csv(const std::string& path, const Adjacency& adj) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << "i,j,weight\n";
    for (int u = 0; u < adj.size(); ++u) {
        auto cols = adj.row_cols(u);
        auto ws = adj.row_weights(u);
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (u < cols[k]) out << u << "," << cols[k] << "," << fmt_g17(ws[k]) << "\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

} // namespace eik
