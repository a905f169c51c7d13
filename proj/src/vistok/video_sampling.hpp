// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

namespace vistok {

struct VideoDescriptor {
    double duration = 0.0;  // seconds
    double native_fps = 0.0;
    std::uint64_t frame_count = 0;

    /// frame_count derived as round(duration * native_fps), at least 1.
    static VideoDescriptor from_duration(double duration, double native_fps);
};

enum class SamplingMode { FixedRate, Uniform };

const char* to_string(SamplingMode mode);

struct FramePlan {
    std::vector<std::uint64_t> indices;
    std::vector<double> timestamps;
    SamplingMode mode = SamplingMode::FixedRate;

    std::size_t size() const { return indices.size(); }
};

inline constexpr double kDefaultSampleRate = 2.0;
inline constexpr std::uint32_t kDefaultFrameCap = 128;

/// Fixed-rate sampling from t=0 while duration*rate fits under the cap
/// (boundary inclusive); otherwise exactly `cap` bin-center samples spread
/// over the whole clip.
FramePlan plan_frames(const VideoDescriptor& video, double rate = kDefaultSampleRate,
                      std::uint32_t cap = kDefaultFrameCap);

/// Every sampled frame is encoded as one tile.
std::uint64_t frame_token_count(const FramePlan& plan, std::uint32_t tokens_per_tile = 256);

}  // namespace vistok
