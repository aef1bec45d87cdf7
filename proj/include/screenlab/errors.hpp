#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace screenlab {

/// Base class for all screenlab-specific failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Config file rejected (bad JSON, unknown field, invalid value). CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// A stage threshold sits at or above the upper bound of the score distribution,
/// so the acceptance event has probability zero.
struct ZeroCapacityError : Error {
    std::size_t stage_index;
    explicit ZeroCapacityError(std::size_t stage, const std::string& what)
        : Error(what), stage_index(stage) {}
};

/// Root finding could not reach the requested residual. CLI exit code 3.
struct SolverError : Error {
    using Error::Error;
};

/// Materialized density integral strayed too far from 1 (grid too coarse).
struct NormalizationDriftError : Error {
    double integral;
    explicit NormalizationDriftError(double got, const std::string& what)
        : Error(what), integral(got) {}
};

/// Monte Carlo run accepted fewer samples than the floor needed for estimates.
struct InsufficientAcceptanceError : Error {
    std::uint64_t accepted;
    explicit InsufficientAcceptanceError(std::uint64_t got, const std::string& what)
        : Error(what), accepted(got) {}
};

/// A reproduction command's built-in assertion failed. CLI exit code 4.
struct ReproductionError : Error {
    using Error::Error;
};

}  // namespace screenlab
