#pragma once

#include <stdexcept>
#include <string>

namespace cbkp {

// Thrown when a rewriting rule for a v/w jet is requested beyond the
// depth of the relation table in use.
struct DepthExceeded : std::runtime_error {
    explicit DepthExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a coefficient below the precision floor of a truncated
// operator is needed, or when a computation cannot reach the requested
// truncation depth.
struct InsufficientPrecision : std::runtime_error {
    explicit InsufficientPrecision(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when combining operators oriented in different main derivations.
struct OrientationMismatch : std::runtime_error {
    explicit OrientationMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the symmetric-form extractor when a slot forced to vanish by
// self-adjointness carries a nonzero coefficient.
struct NotSelfAdjoint : std::runtime_error {
    explicit NotSelfAdjoint(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a pseudodifferential operator with Laurent tail is used
// where a differential operator is required.
struct NegativeExponent : std::runtime_error {
    explicit NegativeExponent(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cbkp
