// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vistok/frame.hpp"

namespace vistok {

struct PatchPos {
    std::uint32_t frame = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    friend auto operator<=>(const PatchPos&, const PatchPos&) = default;
};

/// Dense (frame, row, col, dim) lattice of patch payloads. Payloads are raw
/// pixel blocks when built from frames, or any fixed-width embedding.
class PatchGrid {
public:
    PatchGrid(std::uint32_t frames, std::uint32_t rows, std::uint32_t cols, std::uint32_t dim,
              std::vector<float> values);

    /// Cuts each frame into patch x patch blocks; payload is the block's RGB
    /// bytes in row-major, channel-interleaved order.
    static PatchGrid from_frames(std::span<const Frame> frames, std::uint32_t patch);

    std::uint32_t frames() const { return frames_; }
    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    std::uint32_t dim() const { return dim_; }
    std::uint64_t positions() const { return static_cast<std::uint64_t>(frames_) * rows_ * cols_; }
    std::uint64_t prunable() const { return static_cast<std::uint64_t>(frames_ - 1) * rows_ * cols_; }

    std::span<const float> payload(std::uint32_t f, std::uint32_t r, std::uint32_t c) const;

private:
    std::uint32_t frames_;
    std::uint32_t rows_;
    std::uint32_t cols_;
    std::uint32_t dim_;
    std::vector<float> values_;
};

enum class ChangeMetric { MeanAbsDiff, Cosine };

const char* to_string(ChangeMetric metric);
ChangeMetric parse_change_metric(const std::string& name);

/// Temporal change of every patch in frames 1..F-1 against the same position
/// in the previous frame. Index ((f - 1) * rows + r) * cols + c.
std::vector<double> change_scores(const PatchGrid& grid, ChangeMetric metric = ChangeMetric::MeanAbsDiff,
                                  unsigned threads = 0);

/// floor(ratio * prunable), robust to decimal ratios that are not exact in
/// binary (0.7 * 10 is 7, not 6).
std::uint64_t prune_count(double ratio, std::uint64_t prunable);

class PruneMask {
public:
    PruneMask(std::uint32_t frames, std::uint32_t rows, std::uint32_t cols, double ratio);

    std::uint32_t frames() const { return frames_; }
    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    double ratio() const { return ratio_; }

    bool keep(std::uint32_t f, std::uint32_t r, std::uint32_t c) const { return keep_[index(f, r, c)] != 0; }
    bool keep(const PatchPos& p) const { return keep(p.frame, p.row, p.col); }

    std::uint64_t kept() const { return kept_; }
    std::uint64_t dropped() const { return keep_.size() - kept_; }
    std::uint64_t kept_in_frame(std::uint32_t f) const;

    /// Kept ids in (frame, row, col) order.
    std::vector<PatchPos> kept_positions() const;

    /// One bit per position, frame-major then row-major; bit i lives in byte
    /// i / 8 at bit (i % 8), LSB first. Set bit means kept.
    std::vector<std::uint8_t> bitpack() const;

    void drop(std::uint64_t flat);
    std::uint64_t index(std::uint32_t f, std::uint32_t r, std::uint32_t c) const {
        return (static_cast<std::uint64_t>(f) * rows_ + r) * cols_ + c;
    }

private:
    std::uint32_t frames_;
    std::uint32_t rows_;
    std::uint32_t cols_;
    double ratio_;
    std::vector<std::uint8_t> keep_;
    std::uint64_t kept_;
};

/// Drops the prune_count(ratio, prunable) lowest-scoring patches of frames
/// 1..F-1, ties going to the earlier (frame, row, col). `scores` uses the
/// change_scores layout.
PruneMask prune_by_scores(std::uint32_t frames, std::uint32_t rows, std::uint32_t cols,
                          std::span<const double> scores, double ratio);

PruneMask prune(const PatchGrid& grid, double ratio, ChangeMetric metric = ChangeMetric::MeanAbsDiff);

/// Filters a token stream down to the kept ids, preserving order. The ids
/// must cover the mask lattice exactly once.
std::vector<PatchPos> apply_mask(std::span<const PatchPos> tokens, const PruneMask& mask);

}  // namespace vistok
