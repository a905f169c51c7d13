// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used only by the test suites. They
// are written independently of the library code paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u128 = unsigned __int128;

struct Grid {
    std::uint32_t rows;
    std::uint32_t cols;
};

/// Enumerate every grid with rows*cols <= max_tiles, keep the set at minimum
/// |w/h - c/r|, then resolve ties declaratively: the largest-count (then
/// most-rows) tied grid whose doubled tile area is below twice the image
/// area, excluding the first grid in (count, rows) order; otherwise that
/// first grid.
inline Grid select_grid(std::uint32_t w, std::uint32_t h, std::uint32_t side, std::uint32_t max_tiles) {
    struct Cand {
        Grid g;
        u128 num;
        u128 den;
    };
    std::vector<Cand> all;
    for (std::uint32_t r = 1; r <= max_tiles; ++r) {
        for (std::uint32_t c = 1; r * c <= max_tiles; ++c) {
            const u128 lhs = static_cast<u128>(w) * r;
            const u128 rhs = static_cast<u128>(c) * h;
            all.push_back({{r, c}, lhs > rhs ? lhs - rhs : rhs - lhs, static_cast<u128>(h) * r});
        }
    }
    auto less = [](const Cand& a, const Cand& b) { return a.num * b.den < b.num * a.den; };
    const Cand best = *std::min_element(all.begin(), all.end(), less);
    std::vector<Cand> tied;
    for (const auto& c : all) {
        if (!less(best, c) && !less(c, best)) tied.push_back(c);
    }
    std::sort(tied.begin(), tied.end(), [](const Cand& a, const Cand& b) {
        const auto na = a.g.rows * a.g.cols, nb = b.g.rows * b.g.cols;
        return na != nb ? na < nb : a.g.rows < b.g.rows;
    });
    const u128 twice_area = 2 * static_cast<u128>(w) * h;
    const u128 tile_area = static_cast<u128>(side) * side;
    const Grid* pick = &tied.front().g;
    for (std::size_t i = 1; i < tied.size(); ++i) {
        if (twice_area > tile_area * tied[i].g.rows * tied[i].g.cols) pick = &tied[i].g;
    }
    return *pick;
}

/// Mean absolute difference written as a plain nested loop.
inline double mad(const float* a, const float* b, std::size_t n) {
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(static_cast<long double>(a[i]) - b[i]);
    return static_cast<double>(s / n);
}

/// Minimum number of bins for the given item sizes, by exhaustive search
/// over assignments (items <= ~10).
inline std::size_t min_bins(std::vector<std::uint64_t> items, std::uint64_t capacity) {
    if (items.empty()) return 0;
    std::sort(items.rbegin(), items.rend());
    std::size_t best = items.size();
    std::vector<std::uint64_t> bins;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (bins.size() >= best) return;
        if (i == items.size()) {
            best = bins.size();
            return;
        }
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (bins[b] + items[i] <= capacity) {
                bins[b] += items[i];
                self(self, i + 1);
                bins[b] -= items[i];
            }
        }
        bins.push_back(items[i]);
        self(self, i + 1);
        bins.pop_back();
    };
    rec(rec, 0);
    return best;
}

/// Every finite E4M3 value, from the bit-field definition.
inline double e4m3_value(std::uint8_t code) {
    const int s = code >> 7;
    const int e = (code >> 3) & 0xF;
    const int m = code & 0x7;
    if (e == 0xF && m == 0x7) return std::numeric_limits<double>::quiet_NaN();
    const double mag = e == 0 ? (m / 8.0) * std::pow(2.0, -6) : (1.0 + m / 8.0) * std::pow(2.0, e - 7);
    return s ? -mag : mag;
}

/// Linear scan for the nearest code; ties prefer the code with an even
/// mantissa LSB. Saturates at +-448.
inline std::uint8_t e4m3_nearest(double v) {
    if (std::isnan(v)) return 0x7F;
    const bool neg = std::signbit(v);
    const double a = std::min(std::fabs(v), 448.0);
    int best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 0x7F; ++c) {
        const double err = std::fabs(e4m3_value(static_cast<std::uint8_t>(c)) - a);
        if (err < best_err || (err == best_err && (c & 1) == 0)) {
            best = c;
            best_err = err;
        }
    }
    return static_cast<std::uint8_t>(best | (neg ? 0x80 : 0));
}

inline constexpr double kFp4Codebook[8] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};

}  // namespace oracle
