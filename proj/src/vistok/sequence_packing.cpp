// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/sequence_packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vistok/error.hpp"

namespace vistok {

void validate_sample(const SampleRecord& s, std::uint64_t capacity) {
    if (s.loss_tokens == 0) fail(ErrorKind::InvalidSample, "sample '" + s.sample_id + "' has no loss tokens");
    if (s.loss_tokens > s.total_tokens || s.vision_tokens > s.total_tokens) {
        fail(ErrorKind::InvalidSample, "sample '" + s.sample_id + "' has more loss or vision tokens than total tokens");
    }
    if (s.total_tokens > capacity) {
        fail(ErrorKind::OversizeSample, "sample '" + s.sample_id + "' has " + std::to_string(s.total_tokens) +
                                            " tokens, exceeding capacity " + std::to_string(capacity));
    }
}

Packer::Packer(std::uint64_t capacity, std::size_t buffer_size) : capacity_(capacity), buffer_size_(buffer_size) {
    if (capacity == 0) fail(ErrorKind::InvalidConfig, "pack capacity must be positive");
    if (buffer_size == 0) fail(ErrorKind::InvalidConfig, "pack buffer size must be at least 1");
}

void Packer::submit(SampleRecord sample) {
    validate_sample(sample, capacity_);
    buffer_.push_back(std::move(sample));
    if (buffer_.size() >= buffer_size_) flush();
}

void Packer::finish() {
    flush();
    while (!open_.empty()) close_pack(0);
}

void Packer::close_pack(std::size_t open_index) {
    OpenPack op = std::move(open_[open_index]);
    open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(open_index));
    op.pack.padding_tokens = capacity_ - op.pack.used_tokens;
    closed_.emplace_back(op.order, std::move(op.pack));
}

void Packer::flush() {
    if (buffer_.empty()) return;

    std::uint64_t smallest = std::numeric_limits<std::uint64_t>::max();
    for (const auto& s : buffer_) smallest = std::min(smallest, s.total_tokens);
    for (std::size_t i = open_.size(); i-- > 0;) {
        if (capacity_ - open_[i].pack.used_tokens < smallest) close_pack(i);
    }

    std::vector<SampleRecord> batch(std::make_move_iterator(buffer_.begin()), std::make_move_iterator(buffer_.end()));
    buffer_.clear();
    std::stable_sort(batch.begin(), batch.end(),
                     [](const SampleRecord& a, const SampleRecord& b) { return a.total_tokens > b.total_tokens; });

    for (auto& s : batch) {
        std::size_t target = open_.size();
        for (std::size_t i = 0; i < open_.size(); ++i) {
            if (capacity_ - open_[i].pack.used_tokens < s.total_tokens) continue;
            if (target == open_.size() || open_[i].pack.vision_tokens < open_[target].pack.vision_tokens) target = i;
        }
        if (target == open_.size()) open_.push_back({Pack{}, next_order_++});
        Pack& p = open_[target].pack;
        p.sample_ids.push_back(std::move(s.sample_id));
        p.used_tokens += s.total_tokens;
        p.vision_tokens += s.vision_tokens;
        if (p.used_tokens == capacity_) close_pack(target);
    }
}

PackPlan Packer::snapshot() const {
    std::vector<std::pair<std::size_t, Pack>> all = closed_;
    for (const auto& op : open_) {
        Pack p = op.pack;
        p.padding_tokens = capacity_ - p.used_tokens;
        all.emplace_back(op.order, std::move(p));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    PackPlan plan;
    plan.capacity = capacity_;
    plan.packs.reserve(all.size());
    for (auto& [order, pack] : all) plan.packs.push_back(std::move(pack));
    for (const auto& s : buffer_) plan.leftover.push_back(s.sample_id);
    return plan;
}

PackPlan pack_buffer(std::span<const SampleRecord> samples, std::uint64_t capacity, std::size_t buffer_size) {
    Packer packer(capacity, buffer_size);
    for (const auto& s : samples) packer.submit(s);
    packer.finish();
    return packer.snapshot();
}

PackPlan pack_fifo(std::span<const SampleRecord> samples, std::uint64_t capacity) {
    if (capacity == 0) fail(ErrorKind::InvalidConfig, "pack capacity must be positive");
    PackPlan plan;
    plan.capacity = capacity;
    for (const auto& s : samples) {
        validate_sample(s, capacity);
        if (plan.packs.empty() || capacity - plan.packs.back().used_tokens < s.total_tokens) plan.packs.emplace_back();
        Pack& p = plan.packs.back();
        p.sample_ids.push_back(s.sample_id);
        p.used_tokens += s.total_tokens;
        p.vision_tokens += s.vision_tokens;
    }
    for (auto& p : plan.packs) p.padding_tokens = capacity - p.used_tokens;
    return plan;
}

double padding_report(const PackPlan& plan) {
    if (plan.packs.empty() || plan.capacity == 0) return 0.0;
    std::uint64_t padding = 0;
    for (const auto& p : plan.packs) padding += p.padding_tokens;
    return static_cast<double>(padding) / (static_cast<double>(plan.packs.size()) * static_cast<double>(plan.capacity));
}

LossWeighting square_average_weights(std::span<const std::uint64_t> loss_tokens) {
    LossWeighting out;
    out.weights.reserve(loss_tokens.size());
    for (const std::uint64_t n : loss_tokens) {
        if (n == 0) fail(ErrorKind::InvalidSample, "loss token count must be at least 1");
        const double root = std::sqrt(static_cast<double>(n));
        out.weights.push_back(1.0 / root);
        out.normalizer += root;
    }
    return out;
}

double weighted_batch_loss(std::span<const double> per_sample_loss_sums, const LossWeighting& weighting) {
    if (per_sample_loss_sums.size() != weighting.weights.size()) {
        fail(ErrorKind::InputShape, "loss sums and weights differ in length");
    }
    if (weighting.normalizer <= 0.0) fail(ErrorKind::InvalidSample, "empty loss weighting");
    double acc = 0.0;
    for (std::size_t i = 0; i < per_sample_loss_sums.size(); ++i) acc += per_sample_loss_sums[i] * weighting.weights[i];
    return acc / weighting.normalizer;
}

}  // namespace vistok
