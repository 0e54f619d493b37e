#pragma once

#include <stdexcept>
#include <string>

namespace seqcomplex {

// Enumeration or search budget exceeded. CLI maps this to exit code 2.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Operation applied to a class of the wrong kind (e.g. ldim on non-binary).
struct KindError : std::invalid_argument {
    explicit KindError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed tree/class structure (depth mismatch, bad node count, ...).
struct StructureError : std::invalid_argument {
    explicit StructureError(const std::string& what) : std::invalid_argument(what) {}
};

// A learner/adversary protocol contract was broken at runtime
// (e.g. version space emptied on input claimed realizable).
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seqcomplex
