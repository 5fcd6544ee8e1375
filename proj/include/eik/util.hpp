#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace eik {

// Full-precision double formatting used by every serialized artifact.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Flat row-major point storage; points are spans into it.
struct PointCloud {
    int m = 0;
    std::vector<double> data;

    PointCloud() = default;
    explicit PointCloud(int dim) : m(dim) {}

    int size() const { return m > 0 ? static_cast<int>(data.size()) / m : 0; }
    bool empty() const { return data.empty(); }

    std::span<const double> operator[](int i) const {
        return {data.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)};
    }

    void push_back(std::span<const double> p) {
        data.insert(data.end(), p.begin(), p.end());
    }
    void push_back(std::initializer_list<double> p) {
        data.insert(data.end(), p.begin(), p.end());
    }
};

inline double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(dist2(a, b));
}

// Worker count for parallel sections; GRAPH_EIKONAL_THREADS caps it.
// Defaults to 1: every parallel path must give output identical to the
// sequential one, so this is purely a speed knob.
int thread_count();

} // namespace eik
