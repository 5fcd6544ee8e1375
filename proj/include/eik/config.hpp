#pragma once

#include "eik/domain.hpp"
#include "eik/graph.hpp"
#include "eik/harness.hpp"
#include "eik/kernel.hpp"
#include "eik/solver.hpp"

#include <string>

namespace eik {

// One JSON document carries every block (domain, kernel, sampling, scheme,
// experiment); CLI flags override file values. Missing blocks fall back to
// the defaults below.
struct FullConfig {
    DomainSpec domain = DomainSpec::box_boundary(1);
    RawProfile kernel;
    SamplingConfig sampling;
    SchemeConfig scheme;
    ExperimentConfig experiment;
};

FullConfig default_config();
FullConfig load_config_file(const std::string& path);
FullConfig parse_config_json(const std::string& text);
std::string dump_config_json(const FullConfig& cfg);

} // namespace eik
