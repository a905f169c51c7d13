// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vistok/image_tiling.hpp"
#include "vistok/video_sampling.hpp"

namespace vistok {

struct VideoInput {
    VideoDescriptor video;
    double evs_ratio = 0.0;
};

struct PromptSpec {
    std::uint64_t text_tokens = 0;
    std::vector<ImageDescriptor> images;
    std::optional<VideoInput> video;
};

struct TokenAccount {
    std::uint64_t text_tokens = 0;
    std::vector<TileLayout> image_layouts;
    std::uint64_t image_tokens = 0;
    std::uint64_t image_tiles = 0;
    std::uint64_t video_frames = 0;
    std::uint64_t video_tokens_before_evs = 0;
    std::uint64_t evs_dropped_tokens = 0;
    std::uint64_t video_tokens = 0;
    std::uint64_t total = 0;

    /// Tiles fed to the vision encoder: image tiles (thumbnails included)
    /// followed by one tile per sampled video frame.
    std::uint64_t vision_tiles() const { return image_tiles + video_frames; }
};

/// Sequence length of a mixed prompt. Each video frame is a single tile of
/// cfg.tokens_per_tile() tokens laid out as a square token grid; EVS drops
/// prune_count(ratio, (frames - 1) * tokens_per_tile) of them.
TokenAccount account_tokens(const PromptSpec& prompt, const TilingConfig& cfg = {});

/// Max sequence length of a training stage (0..4).
std::uint64_t stage_max_length(int stage);
inline constexpr std::uint64_t kStageMaxLengths[] = {16384, 49152, 311296};

struct StageFit {
    bool fits = false;
    std::int64_t headroom = 0;  // stage_max - total; negative when over
};

StageFit fits_stage(std::uint64_t total, std::uint64_t stage_max);

struct ShardPlan {
    std::uint32_t ways = 1;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sequence_ranges;  // [start, end)
    std::vector<std::vector<std::uint64_t>> vision_shards;                // tile indices

    /// Tile indices in the order the gathered shard outputs are consumed.
    std::vector<std::uint64_t> gather_order() const;
};

/// Contiguous near-even sequence split plus round-robin tile assignment.
ShardPlan plan_shards(std::uint64_t seq_len, std::uint64_t tiles, std::uint32_t ways);

}  // namespace vistok
