#pragma once

#include <stdexcept>
#include <string>

namespace eik {

// Error categories map to process exit codes in the CLI:
//   Config -> 2, Numerical -> 3, Io -> 2. Property-suite failures are
// reported as data (exit 1 in the CLI), not exceptions.
enum class ErrorKind { Config, Numerical, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define EIK_DEFINE_ERROR(Name, Kind)                                           \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
    }

// kernel
EIK_DEFINE_ERROR(RejectNonNegative, Config);
EIK_DEFINE_ERROR(RejectSupport, Config);
EIK_DEFINE_ERROR(RejectMonotone, Config);
EIK_DEFINE_ERROR(RejectLipschitz, Config);
EIK_DEFINE_ERROR(NonPositiveEps, Config);

// domain_geometry
EIK_DEFINE_ERROR(PointOutsideDomain, Config);
EIK_DEFINE_ERROR(EmptySet, Config);

// graph_build
EIK_DEFINE_ERROR(ScaleExceedsDomain, Numerical);
EIK_DEFINE_ERROR(EmptyBoundary, Numerical);
EIK_DEFINE_ERROR(IsolatedInteriorVertex, Numerical);

// nonlocal_solver
EIK_DEFINE_ERROR(CflViolation, Numerical);
EIK_DEFINE_ERROR(NoConvergence, Numerical);

// reference_solver
EIK_DEFINE_ERROR(WrongCase, Config);
EIK_DEFINE_ERROR(GridCflViolation, Numerical);

// harness
EIK_DEFINE_ERROR(IoFailure, Io);
EIK_DEFINE_ERROR(ConfigError, Config);

#undef EIK_DEFINE_ERROR

} // namespace eik
