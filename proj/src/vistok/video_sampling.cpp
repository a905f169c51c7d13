// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/video_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vistok/error.hpp"

namespace vistok {

namespace {

void validate(const VideoDescriptor& v) {
    if (!(std::isfinite(v.duration) && v.duration > 0.0)) {
        fail(ErrorKind::InvalidConfig, "video duration must be positive and finite");
    }
    if (!(std::isfinite(v.native_fps) && v.native_fps > 0.0)) {
        fail(ErrorKind::InvalidConfig, "native fps must be positive and finite");
    }
    if (v.frame_count == 0) fail(ErrorKind::InvalidConfig, "video must contain at least one frame");
}

std::uint64_t nearest_index(double t, const VideoDescriptor& v) {
    const double idx = std::round(t * v.native_fps);
    if (idx <= 0.0) return 0;
    return std::min(static_cast<std::uint64_t>(idx), v.frame_count - 1);
}

}  // namespace

VideoDescriptor VideoDescriptor::from_duration(double duration, double native_fps) {
    VideoDescriptor v{duration, native_fps, 1};
    const double n = std::round(duration * native_fps);
    if (std::isfinite(n) && n > 1.0) v.frame_count = static_cast<std::uint64_t>(n);
    return v;
}

const char* to_string(SamplingMode mode) {
    return mode == SamplingMode::FixedRate ? "FIXED_RATE" : "UNIFORM";
}

FramePlan plan_frames(const VideoDescriptor& video, double rate, std::uint32_t cap) {
    if (!(std::isfinite(rate) && rate > 0.0)) fail(ErrorKind::InvalidConfig, "sampling rate must be positive");
    if (cap < 1) fail(ErrorKind::InvalidConfig, "frame cap must be at least 1");
    validate(video);

    FramePlan plan;
    const double wanted = video.duration * rate;
    std::vector<double> times;
    if (wanted <= static_cast<double>(cap)) {
        plan.mode = SamplingMode::FixedRate;
        // The 1e-9 nudge keeps exact products such as 64 * 2 from flooring
        // to 127 after representation error.
        const auto n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(wanted + 1e-9)));
        times.reserve(n);
        for (std::uint64_t k = 0; k < n; ++k) times.push_back(static_cast<double>(k) / rate);
    } else {
        plan.mode = SamplingMode::Uniform;
        times.reserve(cap);
        const double bin = video.duration / cap;
        for (std::uint32_t k = 0; k < cap; ++k) times.push_back((k + 0.5) * bin);
    }

    plan.indices.reserve(times.size());
    plan.timestamps.reserve(times.size());
    for (const double t : times) {
        const std::uint64_t idx = nearest_index(t, video);
        // A native clip slower than the sampling rate maps several instants
        // onto one stored frame; keep the earliest.
        if (!plan.indices.empty() && idx <= plan.indices.back()) continue;
        plan.indices.push_back(idx);
        plan.timestamps.push_back(t);
    }
    return plan;
}

std::uint64_t frame_token_count(const FramePlan& plan, std::uint32_t tokens_per_tile) {
    return static_cast<std::uint64_t>(plan.size()) * tokens_per_tile;
}

}  // namespace vistok
