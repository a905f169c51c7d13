// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vistok {

/// Interleaved 8-bit RGB image, row-major.
class Frame {
public:
    static constexpr std::uint32_t kChannels = 3;

    Frame() = default;
    Frame(std::uint32_t width, std::uint32_t height);
    Frame(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> rgb);

    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }
    std::span<const std::uint8_t> data() const { return rgb_; }
    std::span<std::uint8_t> data() { return rgb_; }

    std::uint8_t at(std::uint32_t x, std::uint32_t y, std::uint32_t c) const {
        return rgb_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
    }

    /// Copies the w x h region whose top-left corner is (x0, y0).
    Frame crop(std::uint32_t x0, std::uint32_t y0, std::uint32_t w, std::uint32_t h) const;

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::vector<std::uint8_t> rgb_;
};

/// Bilinear resize with half-pixel centers and edge clamping.
Frame resize_bilinear(const Frame& src, std::uint32_t width, std::uint32_t height);

// "MMTF" container: 16-byte header (magic, u32 LE width, height, channels=3)
// followed by the raw RGB bytes.
Frame decode_mmtf(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_mmtf(const Frame& frame);
Frame load_mmtf(const std::filesystem::path& path);
void save_mmtf(const Frame& frame, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace vistok
