// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/error.hpp"

namespace vistok {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid_config";
    case ErrorKind::InputShape: return "input_shape";
    case ErrorKind::OversizeSample: return "oversize_sample";
    case ErrorKind::InvalidSample: return "invalid_sample";
    case ErrorKind::Protocol: return "protocol";
    case ErrorKind::CalibrationData: return "calibration_data";
    case ErrorKind::DegenerateTensor: return "degenerate_tensor";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    }
    return "unknown";
}

}  // namespace vistok
