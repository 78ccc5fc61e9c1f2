#pragma once

#include <stdexcept>
#include <string>

namespace hirdiff {

/// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimension or layout mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

/// Parameter outside its documented domain.
struct ValueError : Error {
    using Error::Error;
};

/// Rank deficiency, singularity or loss of precision; the message
/// carries the diagnostic (condition estimate, offending index set).
struct NumericalError : Error {
    using Error::Error;
};

/// File format or filesystem failure.
struct IoError : Error {
    using Error::Error;
};

/// External denoiser process violated the wire protocol.
struct ProtocolError : Error {
    using Error::Error;
};

} // namespace hirdiff
