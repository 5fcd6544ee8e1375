#include "eik/config.hpp"
#include "eik/errors.hpp"
#include "eik/harness.hpp"
#include "eik/reference.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <cstdlib>

namespace py = pybind11;
using namespace eik;

namespace {

PointCloud cloud_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw ConfigError("points must be an (n, m) array");
    PointCloud pts(static_cast<int>(arr.shape(1)));
    pts.data.assign(arr.data(), arr.data() + arr.size());
    return pts;
}

py::array_t<double> cloud_to_array(const PointCloud& pts) {
    py::array_t<double> arr({static_cast<py::ssize_t>(pts.size()), static_cast<py::ssize_t>(pts.m)});
    std::copy(pts.data.begin(), pts.data.end(), arr.mutable_data());
    return arr;
}

DomainSpec make_domain(int m, const std::string& gamma, std::vector<double> center, double radius,
                       py::object points) {
    DomainSpec d;
    if (gamma == "box") {
        d = DomainSpec::box_boundary(m);
    } else if (gamma == "sphere") {
        d = DomainSpec::sphere_shell(m, center, radius);
    } else if (gamma == "points") {
        d = DomainSpec::point_set(m, cloud_from_array(points.cast<py::array_t<double>>()));
    } else {
        throw ConfigError("gamma must be box | sphere | points");
    }
    validate_domain(d);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlocal Eikonal equation on weighted geometric graphs";

    py::register_exception<Error>(m, "EikError");

    py::enum_<KernelShape>(m, "KernelShape")
        .value("Triangle", KernelShape::Triangle)
        .value("TruncatedExponential", KernelShape::TruncatedExponential)
        .value("TableLookup", KernelShape::TableLookup);

    py::class_<KernelProfile>(m, "KernelProfile")
        .def_readonly("r_g", &KernelProfile::r_g)
        .def_readonly("a", &KernelProfile::a)
        .def_readonly("c_g", &KernelProfile::c_g)
        .def_readonly("L_g", &KernelProfile::L_g)
        .def_readonly("C_g", &KernelProfile::C_g)
        .def_readonly("sup_g", &KernelProfile::sup_g)
        .def("eval", &KernelProfile::eval)
        .def("__repr__", [](const KernelProfile& p) {
            return "<KernelProfile " + to_string(p.shape) + " r_g=" + fmt_g17(p.r_g) + ">";
        });

    m.def(
        "validate_profile",
        [](const std::string& shape, double r_g, py::object a, py::object table) {
            RawProfile raw;
            raw.shape = kernel_shape_from_string(shape);
            raw.r_g = r_g;
            if (!a.is_none()) raw.a = a.cast<double>();
            if (!table.is_none()) {
                auto arr = table.cast<py::array_t<double, py::array::c_style | py::array::forcecast>>();
                if (arr.ndim() != 2 || arr.shape(1) != 2)
                    throw ConfigError("table must be an (n, 2) array of (t, g)");
                for (py::ssize_t i = 0; i < arr.shape(0); ++i) {
                    raw.table_t.push_back(arr.at(i, 0));
                    raw.table_g.push_back(arr.at(i, 1));
                }
            }
            return validate_profile(raw);
        },
        py::arg("shape") = "triangle", py::arg("r_g") = 1.0, py::arg("a") = py::none(),
        py::arg("table") = py::none());

    m.def("eval_scaled_kernel", &eval_scaled_kernel, py::arg("profile"), py::arg("eps"),
          py::arg("dist"));
    m.def("normalization_constant", &normalization_constant);

    py::class_<DomainSpec>(m, "DomainSpec").def_readonly("m", &DomainSpec::m);
    m.def("make_domain", &make_domain, py::arg("m"), py::arg("gamma") = "box",
          py::arg("center") = std::vector<double>{}, py::arg("radius") = 0.0,
          py::arg("points") = py::none());

    m.def("distance_to_gamma", [](const DomainSpec& d, std::vector<double> x) {
        return distance_to_gamma(d, x);
    });
    m.def("hausdorff_distance", [](py::array_t<double> A, py::array_t<double> B) {
        return hausdorff_distance(cloud_from_array(A), cloud_from_array(B));
    });
    m.def("coverage_radius", [](const DomainSpec& d, py::array_t<double> V, double res) {
        return coverage_radius(d, cloud_from_array(V), res);
    });

    py::class_<SamplingConfig>(m, "SamplingConfig")
        .def(py::init([](int n, int mm, double nu, double tau, std::uint64_t seed) {
                 SamplingConfig c;
                 c.n = n;
                 c.m = mm;
                 c.nu = nu;
                 c.tau = tau;
                 c.seed = seed;
                 return c;
             }),
             py::arg("n"), py::arg("m"), py::arg("nu") = 0.5, py::arg("tau") = 1.0,
             py::arg("seed") = 0)
        .def_readwrite("n", &SamplingConfig::n)
        .def_readwrite("m", &SamplingConfig::m)
        .def_readwrite("nu", &SamplingConfig::nu)
        .def_readwrite("tau", &SamplingConfig::tau)
        .def_readwrite("seed", &SamplingConfig::seed);

    m.def("scale_parameter", &scale_parameter);
    m.def("sample_vertices", [](const DomainSpec& d, const SamplingConfig& c) {
        return cloud_to_array(sample_vertices(d, c));
    });

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_static("constant", &PotentialSpec::constant)
        .def_static("radial_ramp", &PotentialSpec::radial_ramp)
        .def("eval", [](const PotentialSpec& p, std::vector<double> x) { return p.eval(x); })
        .def("lip", &PotentialSpec::lip)
        .def("sup", &PotentialSpec::sup);

    py::class_<BoundaryDataSpec>(m, "BoundaryDataSpec")
        .def_static("zero", &BoundaryDataSpec::zero)
        .def_static("linear", &BoundaryDataSpec::linear)
        .def("eval", [](const BoundaryDataSpec& b, std::vector<double> x) { return b.eval(x); })
        .def("lip", &BoundaryDataSpec::lip);

    py::class_<GraphProblem>(m, "GraphProblem")
        .def_property_readonly("n", &GraphProblem::size)
        .def_readonly("eps", &GraphProblem::eps)
        .def_readonly("cfl_bound", &GraphProblem::cfl_bound)
        .def_property_readonly("vertices",
                               [](const GraphProblem& g) { return cloud_to_array(g.vertices); })
        .def_property_readonly("boundary_idx",
                               [](const GraphProblem& g) { return g.boundary_idx; })
        .def_property_readonly("is_boundary_count",
                               [](const GraphProblem& g) {
                                   int c = 0;
                                   for (auto b : g.is_boundary) c += b ? 1 : 0;
                                   return c;
                               })
        .def_property_readonly("potential", [](const GraphProblem& g) { return g.potential; })
        .def_property_readonly("psi", [](const GraphProblem& g) { return g.psi; })
        .def_property_readonly("degree_sum",
                               [](const GraphProblem& g) { return g.adjacency.cols.size(); });

    m.def(
        "build_graph",
        [](const DomainSpec& d, const SamplingConfig& c, const KernelProfile& prof,
           const PotentialSpec& P, const BoundaryDataSpec& psi, py::object eps) {
            std::optional<double> ov;
            if (!eps.is_none()) ov = eps.cast<double>();
            return build_graph(d, c, prof, P, psi, ov);
        },
        py::arg("domain"), py::arg("sampling"), py::arg("profile"), py::arg("potential"),
        py::arg("psi"), py::arg("eps") = py::none());

    m.def("max_stable_dt", &max_stable_dt);
    m.def("internal_gradient_norm", [](std::vector<double> values, int u, const GraphProblem& g) {
        return internal_gradient_norm(values, u, g);
    });

    py::enum_<Scheme>(m, "Scheme")
        .value("ForwardEuler", Scheme::ForwardEuler)
        .value("BackwardEuler", Scheme::BackwardEuler);

    m.def(
        "solve",
        [](const GraphProblem& g, const std::string& scheme, double T, double dt,
           std::vector<double> snapshots, double implicit_tol) {
            SchemeConfig cfg;
            cfg.scheme = scheme_from_string(scheme);
            cfg.T = T;
            cfg.dt = dt;
            cfg.implicit_tol = implicit_tol;
            SolveOptions opts;
            opts.snapshot_times = std::move(snapshots);
            SolveResult res = solve(g, cfg, opts);
            if (std::getenv("EIK_DEBUG") && !res.snapshots.empty() && !g.boundary_idx.empty())
                std::fprintf(stderr, "[binding] snapshots=%zu last.t=%.17g f[b0]=%.17g\n",
                             res.snapshots.size(), res.snapshots.back().t,
                             res.snapshots.back().values[g.boundary_idx[0]]);
            py::list out;
            for (const auto& st : res.snapshots) {
                py::dict d;
                d["t"] = st.t;
                py::array_t<double> vals(static_cast<py::ssize_t>(st.values.size()));
                std::copy(st.values.begin(), st.values.end(), vals.mutable_data());
                d["values"] = vals;
                out.append(d);
            }
            return out;
        },
        py::arg("graph"), py::arg("scheme") = "fd", py::arg("T") = 1.0, py::arg("dt") = 0.0,
        py::arg("snapshots") = std::vector<double>{}, py::arg("implicit_tol") = 1e-12);

    m.def("analytic_min_dist", [](const DomainSpec& d, std::vector<double> x, double t) {
        return analytic_min_dist(d, PotentialSpec::constant(1.0), BoundaryDataSpec::zero(), x, t);
    });

    m.def(
        "run_convergence_json",
        [](const std::string& config_json) {
            FullConfig full = parse_config_json(config_json);
            ConvergenceReport rep = run_convergence(full.experiment);
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["n"] = r.n;
                d["seed"] = r.seed;
                d["eps"] = r.eps;
                d["dt"] = r.dt;
                d["sup_error"] = r.sup_error;
                d["status"] = r.status;
                rows.append(d);
            }
            py::dict summary;
            for (std::size_t k = 0; k < rep.summary.ns.size(); ++k)
                summary[py::int_(rep.summary.ns[k])] = rep.summary.mean_error[k];
            py::dict out;
            out["rows"] = rows;
            out["mean_error"] = summary;
            if (rep.summary.slope_defined) out["fitted_slope"] = rep.summary.fitted_slope;
            out["theoretical_slope"] = rep.summary.theoretical_slope;
            return out;
        },
        py::arg("config_json"));

    m.def(
        "run_property_suite",
        [](const std::string& suite, int trials, std::uint64_t seed) {
            SuiteResult r = run_property_suite(property_suite_from_string(suite), trials, seed);
            py::dict d;
            d["suite"] = to_string(r.suite);
            d["trials"] = r.trials;
            d["violations"] = r.violations;
            d["worst_slack"] = r.worst_slack;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            return d;
        },
        py::arg("suite"), py::arg("trials"), py::arg("seed") = 20240101);
}
