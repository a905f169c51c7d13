// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/quant_sim.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "vistok/error.hpp"
#include "vistok/frame.hpp"

namespace vistok {

namespace {

constexpr std::array<double, 8> kE2M1Values = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};

// Round half to even without depending on the floating-point environment.
double round_half_even(double q) {
    const double lo = std::floor(q);
    const double frac = q - lo;
    if (frac > 0.5) return lo + 1.0;
    if (frac < 0.5) return lo;
    return std::fmod(lo, 2.0) == 0.0 ? lo : lo + 1.0;
}

void check_scale(double scale) {
    if (!(std::isfinite(scale) && scale > 0.0)) fail(ErrorKind::InvalidConfig, "quantization scale must be positive");
}

template <typename T>
void observe_impl(double& amax, std::uint64_t& samples, std::span<const T> tensor) {
    double local = 0.0;
    for (const T v : tensor) {
        if (!std::isfinite(v)) fail(ErrorKind::CalibrationData, "calibration tensor contains NaN or Inf");
        local = std::max(local, std::fabs(static_cast<double>(v)));
    }
    amax = std::max(amax, local);
    ++samples;
}

}  // namespace

const char* to_string(QuantFormat format) { return format == QuantFormat::E4M3 ? "e4m3" : "nvfp4"; }

QuantFormat parse_quant_format(const std::string& name) {
    if (name == "e4m3" || name == "E4M3") return QuantFormat::E4M3;
    if (name == "nvfp4" || name == "NVFP4") return QuantFormat::NVFP4;
    fail(ErrorKind::InvalidConfig, "unknown quantization format '" + name + "' (expected e4m3 or nvfp4)");
}

std::uint8_t e4m3_encode(double v) {
    if (std::isnan(v)) return std::signbit(v) ? static_cast<std::uint8_t>(kE4M3NaN | 0x80) : kE4M3NaN;
    const std::uint8_t sign = std::signbit(v) ? 0x80 : 0x00;
    const double a = std::fabs(v);
    if (a >= kE4M3Max) return sign | 0x7E;

    constexpr double kMinNormal = 0.015625;  // 2^-6
    if (a < kMinNormal) {
        // Subnormal step is 2^-9; a rounded count of 8 lands exactly on the
        // first normal code, which has the same bit pattern.
        return sign | static_cast<std::uint8_t>(round_half_even(std::ldexp(a, 9)));
    }
    int exp2 = 0;
    std::frexp(a, &exp2);  // a = f * 2^exp2, f in [0.5, 1)
    const int e = exp2 - 1;
    const double steps = round_half_even(std::ldexp(a, 3 - e));  // in [8, 16]
    const int code = ((e + 7) << 3) + static_cast<int>(steps) - 8;
    return sign | static_cast<std::uint8_t>(code);
}

double e4m3_decode(std::uint8_t code) {
    if ((code & 0x7F) == kE4M3NaN) {
        return std::copysign(std::numeric_limits<double>::quiet_NaN(), (code & 0x80) ? -1.0 : 1.0);
    }
    const int exp = (code >> 3) & 0x0F;
    const int mant = code & 0x07;
    const double mag = exp == 0 ? std::ldexp(mant, -9) : std::ldexp(8 + mant, exp - 10);
    return (code & 0x80) ? -mag : mag;
}

std::uint8_t e4m3_quantize(double x, double scale) {
    check_scale(scale);
    return e4m3_encode(x / scale);
}

double e4m3_dequantize(std::uint8_t code, double scale) {
    check_scale(scale);
    return e4m3_decode(code) * scale;
}

std::uint8_t e2m1_encode(double v) {
    if (std::isnan(v)) fail(ErrorKind::InvalidConfig, "E2M1 has no NaN encoding");
    const std::uint8_t sign = std::signbit(v) ? 0x08 : 0x00;
    const double a = std::fabs(v);
    std::uint8_t idx = 7;
    for (std::uint8_t i = 0; i < 7; ++i) {
        const double mid = 0.5 * (kE2M1Values[i] + kE2M1Values[i + 1]);
        if (a < mid) {
            idx = i;
            break;
        }
        if (a == mid) {
            idx = (i % 2 == 0) ? i : static_cast<std::uint8_t>(i + 1);
            break;
        }
    }
    return sign | idx;
}

double e2m1_decode(std::uint8_t code) {
    const double mag = kE2M1Values[code & 0x07];
    return (code & 0x08) ? -mag : mag;
}

double format_max(QuantFormat format) { return format == QuantFormat::E4M3 ? kE4M3Max : kE2M1Max * kE4M3Max; }

void CalibrationAccumulator::observe(std::span<const float> tensor) { observe_impl(amax_, samples_, tensor); }

void CalibrationAccumulator::observe(std::span<const double> tensor) { observe_impl(amax_, samples_, tensor); }

void CalibrationAccumulator::merge(const CalibrationAccumulator& other) {
    amax_ = std::max(amax_, other.amax_);
    samples_ += other.samples_;
}

double CalibrationAccumulator::finalize_scale(QuantFormat format) const {
    if (samples_ == 0) fail(ErrorKind::DegenerateTensor, "no calibration samples observed");
    if (amax_ == 0.0) fail(ErrorKind::DegenerateTensor, "calibration amax is zero; scale undefined");
    return amax_ / format_max(format);
}

Nvfp4Block nvfp4_quantize_block(std::span<const double> xs, double per_tensor_scale, std::size_t block_size) {
    check_scale(per_tensor_scale);
    if (xs.size() != block_size || block_size == 0) {
        fail(ErrorKind::InputShape, "NVFP4 block needs exactly " + std::to_string(block_size) + " values, got " +
                                        std::to_string(xs.size()));
    }
    double amax = 0.0;
    for (const double x : xs) {
        if (!std::isfinite(x)) fail(ErrorKind::InputShape, "NVFP4 input must be finite");
        amax = std::max(amax, std::fabs(x));
    }

    Nvfp4Block block;
    block.codes.assign(xs.size(), 0);
    if (amax == 0.0) return block;

    block.scale_code = e4m3_encode(amax / kE2M1Max / per_tensor_scale);
    if (e4m3_decode(block.scale_code) == 0.0) block.scale_code = kE4M3MinPositive;
    const double step = e4m3_decode(block.scale_code) * per_tensor_scale;
    for (std::size_t i = 0; i < xs.size(); ++i) block.codes[i] = e2m1_encode(xs[i] / step);
    return block;
}

std::vector<double> nvfp4_dequantize_block(const Nvfp4Block& block, double per_tensor_scale) {
    check_scale(per_tensor_scale);
    const double step = e4m3_decode(block.scale_code) * per_tensor_scale;
    std::vector<double> out;
    out.reserve(block.codes.size());
    for (const std::uint8_t c : block.codes) out.push_back(e2m1_decode(c) * step);
    return out;
}

std::vector<Nvfp4Block> nvfp4_quantize(std::span<const double> xs, double per_tensor_scale, std::size_t block_size) {
    if (block_size == 0) fail(ErrorKind::InvalidConfig, "NVFP4 block size must be positive");
    std::vector<Nvfp4Block> blocks;
    blocks.reserve((xs.size() + block_size - 1) / block_size);
    for (std::size_t off = 0; off < xs.size(); off += block_size) {
        const auto chunk = xs.subspan(off, std::min(block_size, xs.size() - off));
        blocks.push_back(nvfp4_quantize_block(chunk, per_tensor_scale, chunk.size()));
    }
    return blocks;
}

void QuantSpec::validate() const {
    check_scale(per_tensor_scale);
    if (format == QuantFormat::NVFP4 && block_size == 0) {
        fail(ErrorKind::InvalidConfig, "NVFP4 block size must be positive");
    }
}

std::vector<double> fake_quantize(std::span<const float> tensor, const QuantSpec& spec) {
    spec.validate();
    std::vector<double> out;
    out.reserve(tensor.size());
    if (spec.format == QuantFormat::E4M3) {
        for (const float x : tensor) out.push_back(e4m3_dequantize(e4m3_quantize(x, spec.per_tensor_scale), spec.per_tensor_scale));
        return out;
    }
    const std::vector<double> wide(tensor.begin(), tensor.end());
    for (const auto& block : nvfp4_quantize(wide, spec.per_tensor_scale, spec.block_size)) {
        const auto deq = nvfp4_dequantize_block(block, spec.per_tensor_scale);
        out.insert(out.end(), deq.begin(), deq.end());
    }
    return out;
}

QuantErrorReport quant_error_report(std::span<const float> tensor, const QuantSpec& spec) {
    for (const float x : tensor) {
        if (!std::isfinite(x)) fail(ErrorKind::InputShape, "error report requires a finite tensor");
    }
    const std::vector<double> deq = fake_quantize(tensor, spec);

    QuantErrorReport rep;
    rep.count = tensor.size();
    double sq = 0.0;
    for (std::size_t i = 0; i < tensor.size(); ++i) {
        const double err = std::fabs(deq[i] - static_cast<double>(tensor[i]));
        rep.max_abs_err = std::max(rep.max_abs_err, err);
        sq += err * err;
    }
    if (!tensor.empty()) rep.mse = sq / static_cast<double>(tensor.size());

    if (spec.format == QuantFormat::E4M3) {
        for (const float x : tensor) {
            if (std::fabs(x / spec.per_tensor_scale) > kE4M3Max) ++rep.saturation_count;
        }
    } else {
        const std::vector<double> wide(tensor.begin(), tensor.end());
        const auto blocks = nvfp4_quantize(wide, spec.per_tensor_scale, spec.block_size);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const double step = e4m3_decode(blocks[b].scale_code) * spec.per_tensor_scale;
            for (std::size_t i = 0; i < blocks[b].codes.size(); ++i) {
                if (std::fabs(wide[b * spec.block_size + i] / step) > kE2M1Max) ++rep.saturation_count;
            }
        }
    }
    return rep;
}

std::vector<std::vector<float>> decode_mmtq(std::span<const std::uint8_t> bytes) {
    std::vector<std::vector<float>> out;
    std::size_t pos = 0;
    if (bytes.empty()) fail(ErrorKind::Format, "empty MMTQ file");
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 8 || std::memcmp(bytes.data() + pos, "MMTQ", 4) != 0) {
            fail(ErrorKind::Format, "bad MMTQ record header at byte " + std::to_string(pos));
        }
        const std::uint8_t* h = bytes.data() + pos + 4;
        const std::uint32_t count = static_cast<std::uint32_t>(h[0]) | (static_cast<std::uint32_t>(h[1]) << 8) |
                                    (static_cast<std::uint32_t>(h[2]) << 16) | (static_cast<std::uint32_t>(h[3]) << 24);
        pos += 8;
        if ((bytes.size() - pos) / 4 < count) {
            fail(ErrorKind::Format, "MMTQ record declares " + std::to_string(count) + " values but the file is short");
        }
        std::vector<float> values(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            const std::uint8_t* p = bytes.data() + pos + 4 * static_cast<std::size_t>(i);
            const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                       (static_cast<std::uint32_t>(p[2]) << 16) |
                                       (static_cast<std::uint32_t>(p[3]) << 24);
            values[i] = std::bit_cast<float>(bits);
        }
        pos += 4 * static_cast<std::size_t>(count);
        out.push_back(std::move(values));
    }
    return out;
}

std::vector<std::uint8_t> encode_mmtq(std::span<const std::vector<float>> tensors) {
    std::vector<std::uint8_t> out;
    auto put_u32 = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    for (const auto& t : tensors) {
        out.insert(out.end(), {'M', 'M', 'T', 'Q'});
        put_u32(static_cast<std::uint32_t>(t.size()));
        for (const float v : t) put_u32(std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

std::vector<std::vector<float>> load_mmtq(const std::filesystem::path& path) { return decode_mmtq(read_file(path)); }

}  // namespace vistok
