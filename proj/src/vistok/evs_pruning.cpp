// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/evs_pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vistok/error.hpp"
#include "vistok/parallel.hpp"

namespace vistok {

namespace {

double mean_abs_diff(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
    return acc / static_cast<double>(a.size());
}

double cosine_distance(std::span<const float> a, std::span<const float> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 && nb == 0.0) return 0.0;
    if (na == 0.0 || nb == 0.0) return 1.0;
    return std::max(0.0, 1.0 - dot / std::sqrt(na * nb));
}

}  // namespace

PatchGrid::PatchGrid(std::uint32_t frames, std::uint32_t rows, std::uint32_t cols, std::uint32_t dim,
                     std::vector<float> values)
    : frames_(frames), rows_(rows), cols_(cols), dim_(dim), values_(std::move(values)) {
    if (frames == 0 || rows == 0 || cols == 0 || dim == 0) {
        fail(ErrorKind::InputShape, "patch grid needs at least one frame, row, column and payload element");
    }
    if (values_.size() != positions() * dim) {
        fail(ErrorKind::InputShape, "patch grid payload has " + std::to_string(values_.size()) + " values, expected " +
                                        std::to_string(positions() * dim));
    }
}

PatchGrid PatchGrid::from_frames(std::span<const Frame> frames, std::uint32_t patch) {
    if (frames.empty()) fail(ErrorKind::InputShape, "no frames given");
    if (patch == 0) fail(ErrorKind::InvalidConfig, "patch size must be positive");
    const std::uint32_t w = frames[0].width();
    const std::uint32_t h = frames[0].height();
    if (w % patch != 0 || h % patch != 0) {
        fail(ErrorKind::InputShape, "frame " + std::to_string(w) + "x" + std::to_string(h) +
                                        " is not divisible into " + std::to_string(patch) + "px patches");
    }
    const std::uint32_t rows = h / patch;
    const std::uint32_t cols = w / patch;
    const std::uint32_t dim = patch * patch * Frame::kChannels;

    std::vector<float> values;
    values.reserve(static_cast<std::size_t>(frames.size()) * rows * cols * dim);
    for (const Frame& f : frames) {
        if (f.width() != w || f.height() != h) fail(ErrorKind::InputShape, "frames differ in size");
        for (std::uint32_t r = 0; r < rows; ++r) {
            for (std::uint32_t c = 0; c < cols; ++c) {
                for (std::uint32_t y = 0; y < patch; ++y) {
                    for (std::uint32_t x = 0; x < patch; ++x) {
                        for (std::uint32_t ch = 0; ch < Frame::kChannels; ++ch) {
                            values.push_back(static_cast<float>(f.at(c * patch + x, r * patch + y, ch)));
                        }
                    }
                }
            }
        }
    }
    return PatchGrid(static_cast<std::uint32_t>(frames.size()), rows, cols, dim, std::move(values));
}

std::span<const float> PatchGrid::payload(std::uint32_t f, std::uint32_t r, std::uint32_t c) const {
    const std::size_t flat = (static_cast<std::size_t>(f) * rows_ + r) * cols_ + c;
    return std::span<const float>(values_).subspan(flat * dim_, dim_);
}

const char* to_string(ChangeMetric metric) { return metric == ChangeMetric::MeanAbsDiff ? "mad" : "cosine"; }

ChangeMetric parse_change_metric(const std::string& name) {
    if (name == "mad") return ChangeMetric::MeanAbsDiff;
    if (name == "cosine") return ChangeMetric::Cosine;
    fail(ErrorKind::InvalidConfig, "unknown change metric '" + name + "' (expected mad or cosine)");
}

std::vector<double> change_scores(const PatchGrid& grid, ChangeMetric metric, unsigned threads) {
    const std::uint64_t per_frame = static_cast<std::uint64_t>(grid.rows()) * grid.cols();
    std::vector<double> scores(grid.prunable());
    parallel_for(scores.size(), threads == 0 ? max_threads() : threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const auto f = static_cast<std::uint32_t>(s / per_frame + 1);
            const auto r = static_cast<std::uint32_t>((s % per_frame) / grid.cols());
            const auto c = static_cast<std::uint32_t>(s % grid.cols());
            const auto cur = grid.payload(f, r, c);
            const auto prev = grid.payload(f - 1, r, c);
            scores[s] = metric == ChangeMetric::MeanAbsDiff ? mean_abs_diff(cur, prev) : cosine_distance(cur, prev);
        }
    });
    return scores;
}

std::uint64_t prune_count(double ratio, std::uint64_t prunable) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) fail(ErrorKind::InvalidConfig, "prune ratio must lie in [0, 1]");
    const long double x = static_cast<long double>(ratio) * static_cast<long double>(prunable);
    const auto n = static_cast<std::uint64_t>(std::floor(x * (1.0L + 1e-12L)));
    return std::min(n, prunable);
}

PruneMask::PruneMask(std::uint32_t frames, std::uint32_t rows, std::uint32_t cols, double ratio)
    : frames_(frames), rows_(rows), cols_(cols), ratio_(ratio),
      keep_(static_cast<std::size_t>(frames) * rows * cols, 1), kept_(keep_.size()) {}

void PruneMask::drop(std::uint64_t flat) {
    if (flat < static_cast<std::uint64_t>(rows_) * cols_) fail(ErrorKind::InvalidConfig, "frame 0 is never pruned");
    if (keep_.at(flat) != 0) {
        keep_[flat] = 0;
        --kept_;
    }
}

std::uint64_t PruneMask::kept_in_frame(std::uint32_t f) const {
    const std::size_t per_frame = static_cast<std::size_t>(rows_) * cols_;
    const auto first = keep_.begin() + static_cast<std::ptrdiff_t>(f * per_frame);
    return static_cast<std::uint64_t>(std::count(first, first + static_cast<std::ptrdiff_t>(per_frame), 1));
}

std::vector<PatchPos> PruneMask::kept_positions() const {
    std::vector<PatchPos> out;
    out.reserve(kept_);
    for (std::uint32_t f = 0; f < frames_; ++f) {
        for (std::uint32_t r = 0; r < rows_; ++r) {
            for (std::uint32_t c = 0; c < cols_; ++c) {
                if (keep(f, r, c)) out.push_back({f, r, c});
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> PruneMask::bitpack() const {
    std::vector<std::uint8_t> bits((keep_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < keep_.size(); ++i) {
        if (keep_[i] != 0) bits[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    }
    return bits;
}

PruneMask prune_by_scores(std::uint32_t frames, std::uint32_t rows, std::uint32_t cols,
                          std::span<const double> scores, double ratio) {
    if (frames == 0 || rows == 0 || cols == 0) fail(ErrorKind::InputShape, "empty patch lattice");
    const std::uint64_t per_frame = static_cast<std::uint64_t>(rows) * cols;
    const std::uint64_t prunable = static_cast<std::uint64_t>(frames - 1) * per_frame;
    if (scores.size() != prunable) {
        fail(ErrorKind::InputShape, "expected " + std::to_string(prunable) + " change scores, got " +
                                        std::to_string(scores.size()));
    }
    const std::uint64_t k = prune_count(ratio, prunable);
    PruneMask mask(frames, rows, cols, ratio);
    if (k == 0) return mask;

    for (const double s : scores) {
        if (!std::isfinite(s)) fail(ErrorKind::InputShape, "change scores must be finite");
    }

    // Score index order is (frame, row, col) order, so the index doubles as
    // the tie-break key.
    std::vector<std::uint64_t> order(prunable);
    std::iota(order.begin(), order.end(), 0);
    const auto less = [&](std::uint64_t a, std::uint64_t b) {
        return scores[a] < scores[b] || (scores[a] == scores[b] && a < b);
    };
    if (k < prunable) std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), less);
    for (std::uint64_t i = 0; i < k; ++i) mask.drop(order[i] + per_frame);
    return mask;
}

PruneMask prune(const PatchGrid& grid, double ratio, ChangeMetric metric) {
    // Validate the ratio before paying for the scores.
    prune_count(ratio, grid.prunable());
    const auto scores = change_scores(grid, metric);
    return prune_by_scores(grid.frames(), grid.rows(), grid.cols(), scores, ratio);
}

std::vector<PatchPos> apply_mask(std::span<const PatchPos> tokens, const PruneMask& mask) {
    const std::uint64_t total = static_cast<std::uint64_t>(mask.frames()) * mask.rows() * mask.cols();
    if (tokens.size() != total) {
        fail(ErrorKind::InputShape, "token stream has " + std::to_string(tokens.size()) + " ids, mask covers " +
                                        std::to_string(total));
    }
    std::vector<std::uint8_t> seen(total, 0);
    std::vector<PatchPos> out;
    out.reserve(mask.kept());
    for (const PatchPos& p : tokens) {
        if (p.frame >= mask.frames() || p.row >= mask.rows() || p.col >= mask.cols()) {
            fail(ErrorKind::InputShape, "token id outside the mask lattice");
        }
        const std::uint64_t flat = mask.index(p.frame, p.row, p.col);
        if (seen[flat] != 0) fail(ErrorKind::InputShape, "duplicate token id in stream");
        seen[flat] = 1;
        if (mask.keep(p)) out.push_back(p);
    }
    return out;
}

}  // namespace vistok
