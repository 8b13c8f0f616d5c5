// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <stdexcept>
#include <string>

namespace mistweet {

// Error taxonomy mirrors the CLI exit codes: input 2, precondition 3, internal 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or missing external input (files, rows, artifacts).
struct InputError : Error {
    using Error::Error;
};

// Caller violated an operation contract (empty class, bad fraction, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// A library invariant failed; always a bug, never a user error.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace mistweet
