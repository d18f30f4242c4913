#pragma once

#include <stdexcept>
#include <string>

namespace hsurf {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A curvature function returned a non-finite value, or an input point
/// could not be normalized onto the sphere.
struct EvaluationError : Error {
    using Error::Error;
};

/// Malformed configuration (JSON schema violation, bad parameters).
struct ConfigError : Error {
    using Error::Error;
};

/// Degenerate mesh data (zero-area cells, inconsistent masks).
struct MeshError : Error {
    using Error::Error;
};

/// A geometric construction could not be completed (profile failed to
/// close, axis collision, hemisphere condition violated, ...).
struct GeometryError : Error {
    using Error::Error;
};

} // namespace hsurf
