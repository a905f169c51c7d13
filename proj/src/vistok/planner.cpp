// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/planner.hpp"

#include <string>

#include "vistok/error.hpp"
#include "vistok/evs_pruning.hpp"

namespace vistok {

TokenAccount account_tokens(const PromptSpec& prompt, const TilingConfig& cfg) {
    cfg.validate();
    TokenAccount acc;
    acc.text_tokens = prompt.text_tokens;

    acc.image_layouts.reserve(prompt.images.size());
    for (const auto& img : prompt.images) {
        const TileLayout layout = layout_image(img, cfg);
        acc.image_tokens += layout.total_tokens;
        acc.image_tiles += layout.total_tiles;
        acc.image_layouts.push_back(layout);
    }

    if (prompt.video) {
        const FramePlan plan = plan_frames(prompt.video->video);
        const std::uint64_t per_frame = cfg.tokens_per_tile();
        acc.video_frames = plan.size();
        acc.video_tokens_before_evs = frame_token_count(plan, cfg.tokens_per_tile());
        acc.evs_dropped_tokens = prune_count(prompt.video->evs_ratio, (acc.video_frames - 1) * per_frame);
        acc.video_tokens = acc.video_tokens_before_evs - acc.evs_dropped_tokens;
    }

    acc.total = acc.text_tokens + acc.image_tokens + acc.video_tokens;
    return acc;
}

std::uint64_t stage_max_length(int stage) {
    switch (stage) {
    case 0:
    case 1: return kStageMaxLengths[0];
    case 2:
    case 3: return kStageMaxLengths[1];
    case 4: return kStageMaxLengths[2];
    default: fail(ErrorKind::InvalidConfig, "unknown training stage " + std::to_string(stage) + " (expected 0-4)");
    }
}

StageFit fits_stage(std::uint64_t total, std::uint64_t stage_max) {
    StageFit fit;
    fit.fits = total <= stage_max;
    fit.headroom = static_cast<std::int64_t>(stage_max) - static_cast<std::int64_t>(total);
    return fit;
}

std::vector<std::uint64_t> ShardPlan::gather_order() const {
    std::vector<std::uint64_t> order;
    std::size_t total = 0;
    for (const auto& s : vision_shards) total += s.size();
    order.reserve(total);
    // Round-robin dealing means tile i sits at position i / ways of shard
    // i % ways; walking the shards in lockstep restores the input order.
    for (std::size_t depth = 0; order.size() < total; ++depth) {
        for (const auto& shard : vision_shards) {
            if (depth < shard.size()) order.push_back(shard[depth]);
        }
    }
    return order;
}

ShardPlan plan_shards(std::uint64_t seq_len, std::uint64_t tiles, std::uint32_t ways) {
    if (ways == 0) fail(ErrorKind::InvalidConfig, "context-parallel ways must be at least 1");
    if (seq_len < ways) {
        fail(ErrorKind::InvalidConfig, "sequence length " + std::to_string(seq_len) + " is shorter than " +
                                           std::to_string(ways) + " context-parallel ranks");
    }
    ShardPlan plan;
    plan.ways = ways;
    const std::uint64_t base = seq_len / ways;
    const std::uint64_t extra = seq_len % ways;
    std::uint64_t start = 0;
    for (std::uint32_t k = 0; k < ways; ++k) {
        const std::uint64_t len = base + (k < extra ? 1 : 0);
        plan.sequence_ranges.emplace_back(start, start + len);
        start += len;
    }
    plan.vision_shards.resize(ways);
    for (std::uint64_t t = 0; t < tiles; ++t) plan.vision_shards[t % ways].push_back(t);
    return plan;
}

}  // namespace vistok
