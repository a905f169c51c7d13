// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace cli {

struct TileArgs {
    std::optional<std::uint32_t> width;
    std::optional<std::uint32_t> height;
    std::string frame;
    std::uint32_t max_tiles = 12;
    std::uint32_t tile_side = 512;
    std::uint32_t patch_size = 16;
    std::uint32_t shuffle = 2;
    bool no_thumbnail = false;
};

struct SampleFramesArgs {
    double duration = 0.0;
    double fps = 0.0;
    std::uint64_t frame_count = 0;
    double rate = 2.0;
    std::uint32_t cap = 128;
    std::uint32_t tokens_per_frame = 256;
};

struct EvsArgs {
    std::vector<std::string> frames;
    double ratio = 0.0;
    std::string metric = "mad";
    std::uint32_t patch = 16;
    std::string mask_out;
};

struct PackArgs {
    std::string input;
    std::uint64_t capacity = 0;
    std::size_t buffer = 4096;
};

struct BudgetArgs {
    std::string trace;
    std::vector<std::uint64_t> budgets = {2048, 4096, 8192, 12288};
    std::uint64_t grace = 500;
};

struct QuantCalibrateArgs {
    std::string input;
    std::string format = "e4m3";
};

struct QuantRoundtripArgs {
    std::string input;
    std::string spec;
};

struct PlanArgs {
    std::string prompt;
    std::optional<int> stage;
    std::uint32_t cp = 1;
};

Report run_tile(const TileArgs& a);
Report run_sample_frames(const SampleFramesArgs& a);
Report run_evs(const EvsArgs& a);
Report run_pack(const PackArgs& a);
Report run_budget(const BudgetArgs& a);
Report run_quant_calibrate(const QuantCalibrateArgs& a);
Report run_quant_roundtrip(const QuantRoundtripArgs& a);
Report run_plan(const PlanArgs& a);

}  // namespace cli
