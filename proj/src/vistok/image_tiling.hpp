// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "vistok/frame.hpp"

namespace vistok {

struct ImageDescriptor {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
};

struct TilingConfig {
    std::uint32_t tile_side = 512;
    std::uint32_t patch_size = 16;
    std::uint32_t max_tiles = 12;
    std::uint32_t pixel_shuffle_factor = 2;
    bool include_thumbnail = true;

    /// Throws ErrorKind::InvalidConfig when the geometry is inconsistent.
    void validate() const;

    /// Tokens along one side of a tile after pixel shuffle.
    std::uint32_t tokens_per_side() const {
        return tile_side / patch_size / pixel_shuffle_factor;
    }
    std::uint32_t tokens_per_tile() const {
        return tokens_per_side() * tokens_per_side();
    }
};

struct GridShape {
    std::uint32_t rows = 1;
    std::uint32_t cols = 1;

    std::uint32_t tiles() const { return rows * cols; }
    friend bool operator==(const GridShape&, const GridShape&) = default;
};

struct TileLayout {
    GridShape grid;
    std::uint32_t resized_width = 0;
    std::uint32_t resized_height = 0;
    bool has_thumbnail = false;
    std::uint32_t tokens_per_tile = 0;
    std::uint32_t total_tiles = 0;
    std::uint64_t total_tokens = 0;
};

/// Picks the tile grid whose column/row ratio is closest to width/height.
///
/// Distances are compared exactly as rationals. Candidates are scanned in
/// (tile count, rows) order; an equally close later candidate replaces the
/// current best only when the image area exceeds half of the candidate's
/// resized area, so small images are not blown up into many tiles.
GridShape select_grid(const ImageDescriptor& img, const TilingConfig& cfg);

TileLayout layout_image(const ImageDescriptor& img, const TilingConfig& cfg);

struct TokenCoord {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    friend bool operator==(const TokenCoord&, const TokenCoord&) = default;
};

/// Pixel-shuffle grouping: output slot (i, j) in row-major order owns the
/// factor*factor inputs (factor*i + a, factor*j + b), listed with (a, b) in
/// row-major order. Result is flattened: slot k occupies entries
/// [k*factor^2, (k+1)*factor^2).
std::vector<TokenCoord> pixel_shuffle_map(std::uint32_t grid_side, std::uint32_t factor);

/// Cuts a frame already resized to the layout's target into row-major tiles,
/// appending a bilinear thumbnail when the layout asks for one.
std::vector<Frame> slice_tiles(const Frame& frame, const TileLayout& layout);

/// Convenience: resize an arbitrary frame to the layout target, then slice.
std::vector<Frame> tile_frame(const Frame& frame, const TilingConfig& cfg, TileLayout* layout_out = nullptr);

}  // namespace vistok
