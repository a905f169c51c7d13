// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace vistok {

enum class ErrorKind {
    InvalidConfig,
    InputShape,
    OversizeSample,
    InvalidSample,
    Protocol,
    CalibrationData,
    DegenerateTensor,
    Io,
    Format,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the core carries one of the kinds above so the C
/// layer can map it to a stable status code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace vistok
