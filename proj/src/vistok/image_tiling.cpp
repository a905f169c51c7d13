// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/image_tiling.hpp"

#include <string>

#include "vistok/error.hpp"

namespace vistok {

namespace {

using u128 = unsigned __int128;

// |w/h - c/r| == num / (h * r); h is shared by every candidate so only
// (num, r) is kept.
struct RatioDistance {
    u128 num;
    u128 rows;
};

RatioDistance ratio_distance(const ImageDescriptor& img, const GridShape& g) {
    const u128 a = static_cast<u128>(img.width) * g.rows;
    const u128 b = static_cast<u128>(g.cols) * img.height;
    return {a > b ? a - b : b - a, g.rows};
}

// -1, 0, +1 for lhs <, ==, > rhs.
int compare(const RatioDistance& lhs, const RatioDistance& rhs) {
    const u128 l = lhs.num * rhs.rows;
    const u128 r = rhs.num * lhs.rows;
    return l < r ? -1 : (l > r ? 1 : 0);
}

}  // namespace

void TilingConfig::validate() const {
    if (tile_side == 0 || patch_size == 0 || pixel_shuffle_factor == 0) {
        fail(ErrorKind::InvalidConfig, "tile_side, patch_size and pixel_shuffle_factor must be positive");
    }
    if (tile_side % patch_size != 0) {
        fail(ErrorKind::InvalidConfig, "tile_side " + std::to_string(tile_side) + " is not a multiple of patch_size " +
                                           std::to_string(patch_size));
    }
    if ((tile_side / patch_size) % pixel_shuffle_factor != 0) {
        fail(ErrorKind::InvalidConfig, "pixel_shuffle_factor " + std::to_string(pixel_shuffle_factor) +
                                           " does not divide the patch grid side " +
                                           std::to_string(tile_side / patch_size));
    }
    if (max_tiles == 0) fail(ErrorKind::InvalidConfig, "max_tiles must be at least 1");
}

GridShape select_grid(const ImageDescriptor& img, const TilingConfig& cfg) {
    if (img.width == 0 || img.height == 0) fail(ErrorKind::InputShape, "image extent must be positive");
    cfg.validate();

    const u128 twice_area = 2 * static_cast<u128>(img.width) * img.height;
    const u128 tile_area = static_cast<u128>(cfg.tile_side) * cfg.tile_side;

    GridShape best{1, 1};
    RatioDistance best_dist = ratio_distance(img, best);
    for (std::uint32_t n = 1; n <= cfg.max_tiles; ++n) {
        for (std::uint32_t r = 1; r <= n; ++r) {
            if (n % r != 0) continue;
            const GridShape cand{r, n / r};
            if (cand == GridShape{1, 1}) continue;
            const RatioDistance d = ratio_distance(img, cand);
            const int cmp = compare(d, best_dist);
            if (cmp < 0 || (cmp == 0 && twice_area > tile_area * n)) {
                best = cand;
                best_dist = d;
            }
        }
    }
    return best;
}

TileLayout layout_image(const ImageDescriptor& img, const TilingConfig& cfg) {
    TileLayout out;
    out.grid = select_grid(img, cfg);
    out.resized_width = out.grid.cols * cfg.tile_side;
    out.resized_height = out.grid.rows * cfg.tile_side;
    out.has_thumbnail = cfg.include_thumbnail && out.grid.tiles() > 1;
    out.tokens_per_tile = cfg.tokens_per_tile();
    out.total_tiles = out.grid.tiles() + (out.has_thumbnail ? 1 : 0);
    out.total_tokens = static_cast<std::uint64_t>(out.total_tiles) * out.tokens_per_tile;
    return out;
}

std::vector<TokenCoord> pixel_shuffle_map(std::uint32_t grid_side, std::uint32_t factor) {
    if (factor == 0 || grid_side == 0 || grid_side % factor != 0) {
        fail(ErrorKind::InvalidConfig, "pixel shuffle factor " + std::to_string(factor) +
                                           " does not divide grid side " + std::to_string(grid_side));
    }
    const std::uint32_t out_side = grid_side / factor;
    std::vector<TokenCoord> groups;
    groups.reserve(static_cast<std::size_t>(grid_side) * grid_side);
    for (std::uint32_t i = 0; i < out_side; ++i) {
        for (std::uint32_t j = 0; j < out_side; ++j) {
            for (std::uint32_t a = 0; a < factor; ++a) {
                for (std::uint32_t b = 0; b < factor; ++b) groups.push_back({factor * i + a, factor * j + b});
            }
        }
    }
    return groups;
}

std::vector<Frame> slice_tiles(const Frame& frame, const TileLayout& layout) {
    if (frame.width() != layout.resized_width || frame.height() != layout.resized_height) {
        fail(ErrorKind::InputShape, "frame is " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                                        ", layout expects " + std::to_string(layout.resized_width) + "x" +
                                        std::to_string(layout.resized_height));
    }
    if (layout.grid.rows == 0 || layout.grid.cols == 0 || layout.resized_width % layout.grid.cols != 0 ||
        layout.resized_height % layout.grid.rows != 0 ||
        layout.resized_width / layout.grid.cols != layout.resized_height / layout.grid.rows) {
        fail(ErrorKind::InputShape, "layout does not describe square tiles");
    }
    const std::uint32_t side = layout.resized_width / layout.grid.cols;

    std::vector<Frame> tiles;
    tiles.reserve(layout.grid.tiles() + 1);
    for (std::uint32_t r = 0; r < layout.grid.rows; ++r) {
        for (std::uint32_t c = 0; c < layout.grid.cols; ++c) tiles.push_back(frame.crop(c * side, r * side, side, side));
    }
    if (layout.has_thumbnail) tiles.push_back(resize_bilinear(frame, side, side));
    return tiles;
}

std::vector<Frame> tile_frame(const Frame& frame, const TilingConfig& cfg, TileLayout* layout_out) {
    const TileLayout layout = layout_image({frame.width(), frame.height()}, cfg);
    if (layout_out != nullptr) *layout_out = layout;
    return slice_tiles(resize_bilinear(frame, layout.resized_width, layout.resized_height), layout);
}

}  // namespace vistok
