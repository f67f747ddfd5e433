#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Base class for all failures raised by the library. Each concrete type
// corresponds to one documented error condition of some operation.
struct ForgeError : std::runtime_error {
    explicit ForgeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Group closure grew past the configured element cap.
struct CapExceeded : ForgeError {
    explicit CapExceeded(const std::string& msg) : ForgeError(msg) {}
};

// A randomized search strategy ran out of tries without a valid result.
struct SearchExhausted : ForgeError {
    explicit SearchExhausted(const std::string& msg) : ForgeError(msg) {}
};

// The size schedule demands a group larger than the configured cap.
struct ScheduleInfeasible : ForgeError {
    explicit ScheduleInfeasible(const std::string& msg) : ForgeError(msg) {}
};

// No path between two elements of a level (cannot happen on a verified
// level, where the generators generate the whole group; kept defensively).
struct Unreachable : ForgeError {
    explicit Unreachable(const std::string& msg) : ForgeError(msg) {}
};

// The tower is too shallow for the requested avoiding-node extension.
struct DepthExceeded : ForgeError {
    explicit DepthExceeded(const std::string& msg) : ForgeError(msg) {}
};

// A permutation code fails to decode (wrong length or non-bijective image).
struct MalformedCode : ForgeError {
    explicit MalformedCode(const std::string& msg) : ForgeError(msg) {}
};

// Family extraction found too little data within the horizon.
struct FamilyNotFound : ForgeError {
    explicit FamilyNotFound(const std::string& msg) : ForgeError(msg) {}
};

// Surgery rewiring collided with itself and cannot yield a bijection.
struct NotBijective : ForgeError {
    explicit NotBijective(const std::string& msg) : ForgeError(msg) {}
};

// A surgered permutation has a fixed point.
struct FixedPointViolation : ForgeError {
    explicit FixedPointViolation(const std::string& msg) : ForgeError(msg) {}
};

// No case disjunct holds for a surgery spec.
struct NoCase : ForgeError {
    explicit NoCase(const std::string& msg) : ForgeError(msg) {}
};

// More than one case disjunct holds for a surgery spec.
struct AmbiguousCase : ForgeError {
    explicit AmbiguousCase(const std::string& msg) : ForgeError(msg) {}
};

// The classifier data supports no surgery spec at the current horizon.
struct NoSpecFound : ForgeError {
    explicit NoSpecFound(const std::string& msg) : ForgeError(msg) {}
};

// Word recovery failed: letters inconsistent across blocks, or the
// exceptional-node count exceeds its factorial bound.
struct Unrepresentable : ForgeError {
    explicit Unrepresentable(const std::string& msg) : ForgeError(msg) {}
};

// A serialized tower, permutation, or generator file is invalid.
struct ParseError : ForgeError {
    explicit ParseError(const std::string& msg) : ForgeError(msg) {}
};

} // namespace forge
