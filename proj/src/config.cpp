#include "eik/config.hpp"

#include "eik/errors.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eik {

using nlohmann::json;

namespace {

GammaPrimitive parse_gamma_primitive(const json& j) {
    GammaPrimitive p;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "box") {
        p.kind = GammaPrimitive::Kind::BoxBoundary;
    } else if (kind == "sphere") {
        p.kind = GammaPrimitive::Kind::SphereShell;
        p.center = j.at("center").get<std::vector<double>>();
        p.radius = j.at("radius").get<double>();
    } else if (kind == "points") {
        p.kind = GammaPrimitive::Kind::PointSet;
        if (j.contains("path")) {
            p.points = read_cloud_csv(j.at("path").get<std::string>());
        } else {
            auto rows = j.at("points").get<std::vector<std::vector<double>>>();
            if (rows.empty()) throw ConfigError("gamma points list is empty");
            p.points = PointCloud(static_cast<int>(rows[0].size()));
            for (auto& r : rows) p.points.push_back(std::span<const double>(r));
        }
    } else {
        throw ConfigError("unknown gamma kind: " + kind);
    }
    return p;
}

json dump_gamma_primitive(const GammaPrimitive& p) {
    json j;
    switch (p.kind) {
        case GammaPrimitive::Kind::BoxBoundary:
            j["kind"] = "box";
            break;
        case GammaPrimitive::Kind::SphereShell:
            j["kind"] = "sphere";
            j["center"] = p.center;
            j["radius"] = p.radius;
            break;
        case GammaPrimitive::Kind::PointSet: {
            j["kind"] = "points";
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < p.points.size(); ++i) {
                auto s = p.points[i];
                rows.emplace_back(s.begin(), s.end());
            }
            j["points"] = rows;
            break;
        }
    }
    return j;
}

} // namespace

FullConfig default_config() {
    FullConfig c;
    c.sampling.n = 1000;
    c.experiment.n_list = {500, 1000, 2000, 4000, 8000};
    c.experiment.seeds = {1, 2, 3, 4, 5};
    return c;
}

FullConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    FullConfig c = default_config();

    if (j.contains("domain")) {
        const json& d = j["domain"];
        c.domain.m = d.value("m", 1);
        c.domain.gamma.clear();
        if (d.contains("gamma")) {
            const json& g = d["gamma"];
            if (g.is_array())
                for (const auto& e : g) c.domain.gamma.push_back(parse_gamma_primitive(e));
            else if (g.contains("kind") && g["kind"] == "union")
                for (const auto& e : g.at("parts")) c.domain.gamma.push_back(parse_gamma_primitive(e));
            else
                c.domain.gamma.push_back(parse_gamma_primitive(g));
        } else {
            c.domain.gamma.push_back(GammaPrimitive{});
        }
    }

    if (j.contains("kernel")) {
        const json& k = j["kernel"];
        c.kernel.shape = kernel_shape_from_string(k.value("shape", std::string("triangle")));
        c.kernel.r_g = k.value("r_g", 1.0);
        if (k.contains("a") && !k["a"].is_null()) c.kernel.a = k["a"].get<double>();
        if (k.contains("table_path") && !k["table_path"].is_null()) {
            // two-column CSV "t,g" ascending in t
            std::ifstream in(k["table_path"].get<std::string>());
            if (!in) throw IoFailure("cannot open kernel table");
            std::string line;
            std::getline(in, line); // header
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::stringstream ss(line);
                std::string a, b;
                std::getline(ss, a, ',');
                std::getline(ss, b, ',');
                c.kernel.table_t.push_back(std::strtod(a.c_str(), nullptr));
                c.kernel.table_g.push_back(std::strtod(b.c_str(), nullptr));
            }
        }
    }

    if (j.contains("sampling")) {
        const json& s = j["sampling"];
        c.sampling.n = s.value("n", c.sampling.n);
        c.sampling.m = s.value("m", c.domain.m);
        c.sampling.nu = s.value("nu", 0.5);
        c.sampling.tau = s.value("tau", 1.0);
        c.sampling.seed = s.value("seed", static_cast<std::uint64_t>(0));
        std::string den = s.value("density", std::string("uniform"));
        if (den != "uniform") throw ConfigError("only the uniform density is implemented");
    } else {
        c.sampling.m = c.domain.m;
    }

    if (j.contains("scheme")) {
        const json& s = j["scheme"];
        c.scheme.scheme = scheme_from_string(s.value("scheme", std::string("fd")));
        c.scheme.T = s.value("T", 1.0);
        if (s.contains("dt") && s["dt"].is_number()) c.scheme.dt = s["dt"].get<double>();
        std::string pol = s.value("cfl_policy", std::string("enforce"));
        c.scheme.cfl_policy = pol == "warn-only" ? CflPolicy::WarnOnly : CflPolicy::Enforce;
        c.scheme.implicit_tol = s.value("implicit_tol", 1e-12);
        c.scheme.implicit_max_sweeps = s.value("implicit_max_sweeps", 10000);
    }

    if (j.contains("experiment")) {
        const json& e = j["experiment"];
        c.experiment.kase =
            experiment_case_from_string(e.value("case", std::string("canonical-1d")));
        if (e.contains("n_list")) c.experiment.n_list = e["n_list"].get<std::vector<int>>();
        if (e.contains("seeds")) c.experiment.seeds = e["seeds"].get<std::vector<std::uint64_t>>();
        c.experiment.nu = e.value("nu", 0.5);
        c.experiment.tau = e.value("tau", 1.0);
        if (e.contains("dt_rule")) {
            const json& r = e["dt_rule"];
            std::string kind = r.value("kind", std::string("eps-power"));
            c.experiment.dt_rule.kind = kind == "cfl-fraction" ? DtRule::Kind::CflFraction
                                                               : DtRule::Kind::EpsPower;
            c.experiment.dt_rule.c = r.value("c", 0.25);
            c.experiment.dt_rule.p = r.value("p", 1.5);
        }
        c.experiment.T = e.value("T", 1.0);
        c.experiment.scheme = scheme_from_string(e.value("scheme", std::string("fd")));
        std::string mode = e.value("eps_mode", std::string("law"));
        c.experiment.eps_mode = mode == "manual" ? EpsMode::Manual : EpsMode::TheoremLaw;
        if (e.contains("manual_eps"))
            c.experiment.manual_eps = e["manual_eps"].get<std::vector<double>>();
        if (e.contains("snapshots"))
            c.experiment.snapshots = e["snapshots"].get<std::vector<double>>();
        c.experiment.kernel = kernel_shape_from_string(e.value("kernel", std::string("triangle")));
        c.experiment.r_g = e.value("r_g", 1.0);
        c.experiment.perturb_delta = e.value("perturb_delta", 0.0);
        c.experiment.grid_spacing = e.value("grid_spacing", 1.0 / 512.0);
    }
    return c;
}

FullConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string dump_config_json(const FullConfig& c) {
    json j;
    j["domain"]["m"] = c.domain.m;
    json parts = json::array();
    for (const auto& p : c.domain.gamma) parts.push_back(dump_gamma_primitive(p));
    j["domain"]["gamma"] = parts.size() == 1 ? parts[0] : parts;

    j["kernel"]["shape"] = to_string(c.kernel.shape);
    j["kernel"]["r_g"] = c.kernel.r_g;
    if (c.kernel.a) j["kernel"]["a"] = *c.kernel.a;

    j["sampling"] = {{"n", c.sampling.n},   {"m", c.sampling.m},     {"nu", c.sampling.nu},
                     {"tau", c.sampling.tau}, {"seed", c.sampling.seed}, {"density", "uniform"}};

    j["scheme"] = {{"scheme", to_string(c.scheme.scheme)},
                   {"T", c.scheme.T},
                   {"cfl_policy", c.scheme.cfl_policy == CflPolicy::Enforce ? "enforce" : "warn-only"},
                   {"implicit_tol", c.scheme.implicit_tol},
                   {"implicit_max_sweeps", c.scheme.implicit_max_sweeps}};
    if (c.scheme.dt > 0.0) j["scheme"]["dt"] = c.scheme.dt;
    else j["scheme"]["dt"] = "auto";

    j["experiment"] = {
        {"case", to_string(c.experiment.kase)},
        {"n_list", c.experiment.n_list},
        {"seeds", c.experiment.seeds},
        {"nu", c.experiment.nu},
        {"tau", c.experiment.tau},
        {"dt_rule",
         {{"kind", c.experiment.dt_rule.kind == DtRule::Kind::CflFraction ? "cfl-fraction"
                                                                          : "eps-power"},
          {"c", c.experiment.dt_rule.c},
          {"p", c.experiment.dt_rule.p}}},
        {"T", c.experiment.T},
        {"scheme", to_string(c.experiment.scheme)},
        {"eps_mode", c.experiment.eps_mode == EpsMode::Manual ? "manual" : "law"},
        {"manual_eps", c.experiment.manual_eps},
        {"snapshots", c.experiment.snapshots},
        {"kernel", to_string(c.experiment.kernel)},
        {"r_g", c.experiment.r_g},
        {"perturb_delta", c.experiment.perturb_delta},
        {"grid_spacing", c.experiment.grid_spacing},
    };
    return j.dump(2);
}

} // namespace eik
