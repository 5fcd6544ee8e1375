#pragma once

#include "eik/domain.hpp"
#include "eik/graph.hpp"
#include "eik/kernel.hpp"
#include "eik/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace eik {

enum class ExperimentCase { Canonical1D, Canonical2D, NonconstantP };

std::string to_string(ExperimentCase c);
ExperimentCase experiment_case_from_string(const std::string& s);

// dt per row: CflFraction -> dt = c * (eps C_g / sup g); EpsPower -> c * eps^p.
struct DtRule {
    enum class Kind { CflFraction, EpsPower };
    Kind kind = Kind::EpsPower;
    double c = 0.25;
    double p = 1.5; // p >= 1 keeps dt = o(eps)
};

enum class EpsMode { TheoremLaw, Manual };

struct ExperimentConfig {
    ExperimentCase kase = ExperimentCase::Canonical1D;
    std::vector<int> n_list;
    std::vector<std::uint64_t> seeds;
    double nu = 0.5;
    double tau = 1.0;
    DtRule dt_rule;
    double T = 1.0;
    Scheme scheme = Scheme::ForwardEuler;
    EpsMode eps_mode = EpsMode::TheoremLaw;
    std::vector<double> manual_eps;     // parallel to n_list when Manual
    std::vector<double> snapshots = {0.25, 0.5, 0.75, 1.0};
    KernelShape kernel = KernelShape::Triangle;
    double r_g = 1.0;
    double perturb_delta = 0.0;         // uniform noise added to P~ when > 0
    double grid_spacing = 1.0 / 512.0;  // reference grid for NonconstantP
};

void validate_config(const ExperimentConfig& cfg);

// Experiment geometry per case.
DomainSpec case_domain(ExperimentCase c);
PotentialSpec case_potential(ExperimentCase c);
BoundaryDataSpec case_psi(ExperimentCase c);
int case_dim(ExperimentCase c);

struct ConvergenceRow {
    int n = 0;
    std::uint64_t seed = 0;
    double eps = 0.0;
    double dt = 0.0;
    double sup_error = 0.0;
    double wall_time = 0.0;     // excluded from emitted reports by default
    bool eps_clamped = false;   // scaling law exceeded diam(Omega); eps capped
    double time_lip_ratio = 0.0; // max increment / (L*dt), streamed during solve
    std::string status;         // empty = ok, else the row-level error
};

struct ConvergenceSummary {
    std::vector<int> ns;
    std::vector<double> mean_error;  // seed-averaged, parallel to ns
    bool slope_defined = false;
    double fitted_slope = 0.0;       // log(mean err) vs log(log n / n)
    double theoretical_slope = 0.0;  // min(nu,1/2) / ((1+nu) m)
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    ConvergenceSummary summary;
};

ConvergenceSummary summarize(const std::vector<ConvergenceRow>& rows, double nu, int m);

// Runs the sweep; rows are independent and may execute on
// GRAPH_EIKONAL_THREADS workers, merged in (n, seed) order.
// Row-level failures are recorded in the row status, not fatal.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, JsonLines };

// Bit-stable emission ("%.17g" doubles). wall_time is nondeterministic and is
// only written when include_timing is set, keeping default reports
// byte-identical across runs.
void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path,
                 double nu, int m, bool include_timing = false);

// Parses rows back and recomputes the summary.
ConvergenceReport parse_report(const std::string& path, ReportFormat format, double nu, int m);

// --- property suites ---------------------------------------------------------

enum class PropertySuite {
    Monotonicity,
    Comparison,
    TimeLipschitz,
    SpaceLipschitz,
    Barriers,
    CflGuard,
    AdjacencyOracle,
    FwBwAgreement,
};

std::string to_string(PropertySuite s);
PropertySuite property_suite_from_string(const std::string& s);
std::vector<PropertySuite> all_property_suites();

struct SuiteResult {
    PropertySuite suite;
    int trials = 0;
    int violations = 0;
    double worst_slack = 0.0; // most adverse margin observed (sign convention per suite)
    bool pass = false;
    std::string detail;
};

SuiteResult run_property_suite(PropertySuite suite, int trials, std::uint64_t seed);

} // namespace eik
