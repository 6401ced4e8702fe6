// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gsforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejected input data: non-finite fields, invalid probabilities, bad shapes.
struct InvalidInputError : Error {
    using Error::Error;
};

// Bad user-supplied configuration (flags, config files, parameter ranges).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed file content. Message carries the byte offset or line when known.
struct ParseError : Error {
    using Error::Error;
};

// Degenerate geometry: near-singular covariance, zero baseline.
struct DegenerateError : Error {
    using Error::Error;
};

// Not enough data to proceed: empty inputs, too few candidates or mask pixels.
struct InsufficientInputError : Error {
    using Error::Error;
};

} // namespace gsforge
