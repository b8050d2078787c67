// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace tokxform {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand shapes do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

// NaN/Inf where a finite value is required.
class NumericError : public Error {
public:
    using Error::Error;
};

// A documented precondition on the input (stochasticity, positivity, ...) was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

// Bad user-supplied parameter.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent weight files.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace tokxform
