// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vistok {

enum class QuantFormat { E4M3, NVFP4 };

const char* to_string(QuantFormat format);
QuantFormat parse_quant_format(const std::string& name);

// E4M3 "FN" layout: 1 sign, 4 exponent (bias 7), 3 mantissa bits. No
// infinities; S.1111.111 is the only NaN pattern, so the largest finite
// magnitude is 1.75 * 2^8 = 448.
inline constexpr double kE4M3Max = 448.0;
inline constexpr std::uint8_t kE4M3NaN = 0x7F;
inline constexpr std::uint8_t kE4M3MinPositive = 0x01;  // 2^-9

// E2M1 element codebook used by NVFP4 blocks.
inline constexpr double kE2M1Max = 6.0;
inline constexpr std::size_t kNvfp4BlockSize = 16;

/// Nearest E4M3 code to v, ties to the even code, saturating at +-448.
std::uint8_t e4m3_encode(double v);
double e4m3_decode(std::uint8_t code);

/// Scaled forms; scale must be positive and finite.
std::uint8_t e4m3_quantize(double x, double scale);
double e4m3_dequantize(std::uint8_t code, double scale);

/// Four-bit sign-magnitude E2M1 code (sign in bit 3), ties to the even code,
/// saturating at +-6.
std::uint8_t e2m1_encode(double v);
double e2m1_decode(std::uint8_t code);

/// Largest magnitude the per-tensor scale maps onto: 448 for E4M3, 6 * 448
/// for NVFP4 (element max times block-scale max).
double format_max(QuantFormat format);

class CalibrationAccumulator {
public:
    /// Throws ErrorKind::CalibrationData on NaN/Inf; the accumulator is left
    /// untouched in that case.
    void observe(std::span<const float> tensor);
    void observe(std::span<const double> tensor);

    /// Max-combine of two calibration shards.
    void merge(const CalibrationAccumulator& other);

    double running_amax() const { return amax_; }
    std::uint64_t samples_seen() const { return samples_; }

    /// amax / format_max; throws ErrorKind::DegenerateTensor when amax is 0.
    double finalize_scale(QuantFormat format) const;

private:
    double amax_ = 0.0;
    std::uint64_t samples_ = 0;
};

struct Nvfp4Block {
    std::uint8_t scale_code = kE4M3MinPositive;
    std::vector<std::uint8_t> codes;  // one E2M1 code per element, low nibble
};

/// Block scale = E4M3(amax / 6 / per_tensor_scale); an all-zero block (or a
/// scale that would round to zero) uses the smallest positive E4M3 value.
Nvfp4Block nvfp4_quantize_block(std::span<const double> xs, double per_tensor_scale,
                                std::size_t block_size = kNvfp4BlockSize);
std::vector<double> nvfp4_dequantize_block(const Nvfp4Block& block, double per_tensor_scale);

/// Whole tensor in consecutive blocks; a short tail forms its own block.
std::vector<Nvfp4Block> nvfp4_quantize(std::span<const double> xs, double per_tensor_scale,
                                       std::size_t block_size = kNvfp4BlockSize);

struct QuantSpec {
    QuantFormat format = QuantFormat::E4M3;
    double per_tensor_scale = 1.0;
    std::size_t block_size = kNvfp4BlockSize;

    void validate() const;
};

/// dequantize(quantize(x)) under the spec.
std::vector<double> fake_quantize(std::span<const float> tensor, const QuantSpec& spec);

struct QuantErrorReport {
    std::uint64_t count = 0;
    double max_abs_err = 0.0;
    double mse = 0.0;
    std::uint64_t saturation_count = 0;  // elements beyond the representable range before rounding
};

QuantErrorReport quant_error_report(std::span<const float> tensor, const QuantSpec& spec);

// "MMTQ" tensor file: one or more records, each the magic, a u32 LE element
// count and that many f32 LE values.
std::vector<std::vector<float>> decode_mmtq(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_mmtq(std::span<const std::vector<float>> tensors);
std::vector<std::vector<float>> load_mmtq(const std::filesystem::path& path);

}  // namespace vistok
