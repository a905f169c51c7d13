// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vistok/error.hpp"

namespace vistok {

namespace {

constexpr char kMagic[4] = {'M', 'M', 'T', 'F'};
constexpr std::size_t kHeaderSize = 16;

std::uint32_t read_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

Frame::Frame(std::uint32_t width, std::uint32_t height)
    : width_(width), height_(height), rgb_(static_cast<std::size_t>(width) * height * kChannels, 0) {}

Frame::Frame(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
    if (rgb_.size() != static_cast<std::size_t>(width) * height * kChannels) {
        fail(ErrorKind::InputShape, "frame buffer holds " + std::to_string(rgb_.size()) + " bytes, expected " +
                                        std::to_string(static_cast<std::size_t>(width) * height * kChannels));
    }
}

Frame Frame::crop(std::uint32_t x0, std::uint32_t y0, std::uint32_t w, std::uint32_t h) const {
    if (static_cast<std::uint64_t>(x0) + w > width_ || static_cast<std::uint64_t>(y0) + h > height_) {
        fail(ErrorKind::InputShape, "crop region exceeds frame bounds");
    }
    Frame out(w, h);
    const std::size_t row_bytes = static_cast<std::size_t>(w) * kChannels;
    for (std::uint32_t y = 0; y < h; ++y) {
        const auto* src = rgb_.data() + ((static_cast<std::size_t>(y0) + y) * width_ + x0) * kChannels;
        std::memcpy(out.rgb_.data() + y * row_bytes, src, row_bytes);
    }
    return out;
}

Frame resize_bilinear(const Frame& src, std::uint32_t width, std::uint32_t height) {
    if (src.width() == 0 || src.height() == 0 || width == 0 || height == 0) {
        fail(ErrorKind::InputShape, "cannot resize an empty frame");
    }
    if (src.width() == width && src.height() == height) return src;

    const double sx = static_cast<double>(src.width()) / width;
    const double sy = static_cast<double>(src.height()) / height;

    // Precompute horizontal taps once per output column.
    std::vector<std::uint32_t> x0s(width), x1s(width);
    std::vector<double> wxs(width);
    for (std::uint32_t x = 0; x < width; ++x) {
        double fx = (x + 0.5) * sx - 0.5;
        fx = std::clamp(fx, 0.0, static_cast<double>(src.width() - 1));
        x0s[x] = static_cast<std::uint32_t>(fx);
        x1s[x] = std::min(x0s[x] + 1, src.width() - 1);
        wxs[x] = fx - x0s[x];
    }

    Frame out(width, height);
    auto dst = out.data();
    for (std::uint32_t y = 0; y < height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src.height() - 1));
        const auto y0 = static_cast<std::uint32_t>(fy);
        const auto y1 = std::min(y0 + 1, src.height() - 1);
        const double wy = fy - y0;
        for (std::uint32_t x = 0; x < width; ++x) {
            for (std::uint32_t c = 0; c < Frame::kChannels; ++c) {
                const double top = src.at(x0s[x], y0, c) * (1.0 - wxs[x]) + src.at(x1s[x], y0, c) * wxs[x];
                const double bot = src.at(x0s[x], y1, c) * (1.0 - wxs[x]) + src.at(x1s[x], y1, c) * wxs[x];
                const double v = top * (1.0 - wy) + bot * wy;
                dst[(static_cast<std::size_t>(y) * width + x) * Frame::kChannels + c] =
                    static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

Frame decode_mmtf(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        fail(ErrorKind::Format, "not an MMTF frame (bad magic or short header)");
    }
    const std::uint32_t width = read_u32le(bytes.data() + 4);
    const std::uint32_t height = read_u32le(bytes.data() + 8);
    const std::uint32_t channels = read_u32le(bytes.data() + 12);
    if (channels != Frame::kChannels) {
        fail(ErrorKind::Format, "MMTF channels must be 3, got " + std::to_string(channels));
    }
    if (width == 0 || height == 0) fail(ErrorKind::Format, "MMTF frame has zero extent");
    const std::size_t payload = static_cast<std::size_t>(width) * height * channels;
    if (bytes.size() != kHeaderSize + payload) {
        fail(ErrorKind::Format, "MMTF payload is " + std::to_string(bytes.size() - kHeaderSize) +
                                    " bytes, header implies " + std::to_string(payload));
    }
    return Frame(width, height, std::vector<std::uint8_t>(bytes.begin() + kHeaderSize, bytes.end()));
}

std::vector<std::uint8_t> encode_mmtf(const Frame& frame) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + frame.data().size());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    write_u32le(out, frame.width());
    write_u32le(out, frame.height());
    write_u32le(out, Frame::kChannels);
    out.insert(out.end(), frame.data().begin(), frame.data().end());
    return out;
}

Frame load_mmtf(const std::filesystem::path& path) { return decode_mmtf(read_file(path)); }

void save_mmtf(const Frame& frame, const std::filesystem::path& path) { write_file(path, encode_mmtf(frame)); }

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(ErrorKind::Io, "read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

}  // namespace vistok
