// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared plumbing for the vistok command-line tool: report envelope, error
// kinds with their exit codes, and helpers around the C API.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vistok/vistok.h"

namespace cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0.0";

// Exit codes. Library failures map one-to-one from vistok_status.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitInvalidConfig = 3,
    kExitInputShape = 4,
    kExitOversizeSample = 5,
    kExitInvalidSample = 6,
    kExitProtocol = 7,
    kExitCalibrationData = 8,
    kExitDegenerateTensor = 9,
    kExitIo = 10,
    kExitFormat = 11,
    kExitSchema = 12,
    kExitUnknownCommand = 13,
    kExitInternal = 70,
};

class CliError : public std::runtime_error {
public:
    CliError(std::string kind, int exit_code, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)), exit_code_(exit_code) {}

    const std::string& kind() const { return kind_; }
    int exit_code() const { return exit_code_; }

private:
    std::string kind_;
    int exit_code_;
};

[[noreturn]] inline void schema_error(const std::string& message) { throw CliError("schema", kExitSchema, message); }
[[noreturn]] inline void usage_error(const std::string& message) { throw CliError("usage", kExitUsage, message); }

inline int exit_code_for(vistok_status status) {
    switch (status) {
        case VISTOK_OK: return kExitOk;
        case VISTOK_ERR_INVALID_CONFIG: return kExitInvalidConfig;
        case VISTOK_ERR_INPUT_SHAPE: return kExitInputShape;
        case VISTOK_ERR_OVERSIZE_SAMPLE: return kExitOversizeSample;
        case VISTOK_ERR_INVALID_SAMPLE: return kExitInvalidSample;
        case VISTOK_ERR_PROTOCOL: return kExitProtocol;
        case VISTOK_ERR_CALIBRATION_DATA: return kExitCalibrationData;
        case VISTOK_ERR_DEGENERATE_TENSOR: return kExitDegenerateTensor;
        case VISTOK_ERR_IO: return kExitIo;
        case VISTOK_ERR_FORMAT: return kExitFormat;
        default: return kExitInternal;
    }
}

// Throws CliError carrying the library's message when status is not OK.
inline void check(vistok_status status) {
    if (status == VISTOK_OK) return;
    const int code = exit_code_for(status);
    throw CliError(code == kExitInternal ? "internal" : vistok_status_name(status), code, vistok_last_error());
}

// Move-only owner for C handles.
template <class T, void (*Destroy)(T*)>
class Handle {
public:
    Handle() = default;
    explicit Handle(T* p) : p_(p) {}
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    Handle(Handle&& o) noexcept : p_(o.p_) { o.p_ = nullptr; }
    Handle& operator=(Handle&& o) noexcept {
        if (this != &o) {
            Destroy(p_);
            p_ = o.p_;
            o.p_ = nullptr;
        }
        return *this;
    }
    ~Handle() { Destroy(p_); }

    T* get() const { return p_; }
    T** out() {
        Destroy(p_);
        p_ = nullptr;
        return &p_;
    }

private:
    T* p_ = nullptr;
};

using FrameHandle = Handle<vistok_frame, vistok_frame_destroy>;
using TileSetHandle = Handle<vistok_tile_set, vistok_tile_set_destroy>;
using FramePlanHandle = Handle<vistok_frame_plan, vistok_frame_plan_destroy>;
using PatchGridHandle = Handle<vistok_patch_grid, vistok_patch_grid_destroy>;
using PruneMaskHandle = Handle<vistok_prune_mask, vistok_prune_mask_destroy>;
using PackerHandle = Handle<vistok_packer, vistok_packer_destroy>;
using CalibratorHandle = Handle<vistok_calibrator, vistok_calibrator_destroy>;
using TensorSetHandle = Handle<vistok_tensor_set, vistok_tensor_set_destroy>;
using ShardPlanHandle = Handle<vistok_shard_plan, vistok_shard_plan_destroy>;

// A finished command: JSON payload plus an optional hand-written text view.
struct Report {
    Json body = Json::object();
    std::string text;  // empty: render body generically
};

// Reads a whole file; failures raise an io CliError.
std::string read_text(const std::string& path);
void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Parses JSON, raising a schema CliError that names `what` on failure.
Json parse_json(const std::string& text, const std::string& what);

// Field accessors that raise schema errors naming the offending field.
std::uint64_t get_count(const Json& obj, const char* key, const std::string& where);
double get_number(const Json& obj, const char* key, const std::string& where);
std::string get_string(const Json& obj, const char* key, const std::string& where);

// Deterministic "key: value" text rendering of a report body.
std::string render_text(const Json& body);

// Fixed-width table with right-aligned numeric columns.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace cli
