// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

namespace vistok {

struct SampleRecord {
    std::string sample_id;
    std::uint64_t total_tokens = 0;
    std::uint64_t vision_tokens = 0;
    std::uint64_t loss_tokens = 0;
};

struct Pack {
    std::vector<std::string> sample_ids;
    std::uint64_t used_tokens = 0;
    std::uint64_t padding_tokens = 0;
    std::uint64_t vision_tokens = 0;

    friend bool operator==(const Pack&, const Pack&) = default;
};

struct PackPlan {
    std::uint64_t capacity = 0;
    std::vector<Pack> packs;
    std::vector<std::string> leftover;

    friend bool operator==(const PackPlan&, const PackPlan&) = default;
};

inline constexpr std::size_t kDefaultPackBuffer = 4096;

/// Online buffered packer.
///
/// Samples queue in arrival order. Once the buffer holds `buffer_size`
/// samples (or finish() is called) it is flushed: first any open pack that
/// cannot take even the smallest buffered sample is closed, then the buffer
/// is placed in decreasing total_tokens order (arrival order breaks ties).
/// Each sample goes to the feasible open pack with the fewest vision tokens,
/// lowest pack index on ties, or opens a new pack when none fits. finish()
/// closes everything.
///
/// Single writer; snapshot() is a pure read.
class Packer {
public:
    Packer(std::uint64_t capacity, std::size_t buffer_size = kDefaultPackBuffer);

    /// Throws OversizeSample when the sample cannot fit an empty pack and
    /// InvalidSample when its token counts are inconsistent.
    void submit(SampleRecord sample);
    void finish();

    std::uint64_t capacity() const { return capacity_; }
    std::size_t buffered() const { return buffer_.size(); }

    /// Closed and open packs (in creation order) plus still-buffered ids.
    PackPlan snapshot() const;

private:
    struct OpenPack {
        Pack pack;
        std::size_t order;  // creation index
    };

    void flush();
    void close_pack(std::size_t open_index);

    std::uint64_t capacity_;
    std::size_t buffer_size_;
    std::deque<SampleRecord> buffer_;
    std::vector<OpenPack> open_;
    std::vector<std::pair<std::size_t, Pack>> closed_;
    std::size_t next_order_ = 0;
};

void validate_sample(const SampleRecord& s, std::uint64_t capacity);

PackPlan pack_buffer(std::span<const SampleRecord> samples, std::uint64_t capacity,
                     std::size_t buffer_size = kDefaultPackBuffer);

/// Next-fit in arrival order with a single open pack; the reference baseline.
PackPlan pack_fifo(std::span<const SampleRecord> samples, std::uint64_t capacity);

/// Sum of padding over the packed capacity; 0 for an empty plan.
double padding_report(const PackPlan& plan);

struct LossWeighting {
    std::vector<double> weights;
    double normalizer = 0.0;
};

/// weight_i = n_i^-1/2, normalizer = sum_i n_i^1/2.
LossWeighting square_average_weights(std::span<const std::uint64_t> loss_tokens);

/// sum_i loss_sum_i * weight_i / normalizer.
double weighted_batch_loss(std::span<const double> per_sample_loss_sums, const LossWeighting& weighting);

}  // namespace vistok
