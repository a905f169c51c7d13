// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/vistok.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "vistok/budget_control.hpp"
#include "vistok/error.hpp"
#include "vistok/evs_pruning.hpp"
#include "vistok/frame.hpp"
#include "vistok/image_tiling.hpp"
#include "vistok/planner.hpp"
#include "vistok/quant_sim.hpp"
#include "vistok/sequence_packing.hpp"
#include "vistok/video_sampling.hpp"

struct vistok_frame {
    vistok::Frame frame;
};

struct vistok_tile_set {
    std::vector<vistok_frame> tiles;
};

struct vistok_frame_plan {
    vistok::FramePlan plan;
};

struct vistok_patch_grid {
    vistok::PatchGrid grid;
};

struct vistok_prune_mask {
    vistok::PruneMask mask;
};

struct vistok_packer {
    vistok::Packer packer;
    vistok::PackPlan snapshot;
};

struct vistok_budget_controller {
    vistok::BudgetController ctl;
};

struct vistok_calibrator {
    vistok::CalibrationAccumulator acc;
};

struct vistok_tensor_set {
    std::vector<std::vector<float>> tensors;
};

struct vistok_shard_plan {
    vistok::ShardPlan plan;
};

namespace {

thread_local std::string g_last_error;

struct CallError {
    vistok_status status;
    std::string message;
};

vistok_status status_of(vistok::ErrorKind kind) {
    using vistok::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidConfig: return VISTOK_ERR_INVALID_CONFIG;
        case ErrorKind::InputShape: return VISTOK_ERR_INPUT_SHAPE;
        case ErrorKind::OversizeSample: return VISTOK_ERR_OVERSIZE_SAMPLE;
        case ErrorKind::InvalidSample: return VISTOK_ERR_INVALID_SAMPLE;
        case ErrorKind::Protocol: return VISTOK_ERR_PROTOCOL;
        case ErrorKind::CalibrationData: return VISTOK_ERR_CALIBRATION_DATA;
        case ErrorKind::DegenerateTensor: return VISTOK_ERR_DEGENERATE_TENSOR;
        case ErrorKind::Io: return VISTOK_ERR_IO;
        case ErrorKind::Format: return VISTOK_ERR_FORMAT;
    }
    return VISTOK_ERR_INTERNAL;
}

[[noreturn]] void raise(vistok_status status, const std::string& message) {
    throw CallError{status, message};
}

void require(const void* p, const char* name) {
    if (p == nullptr) raise(VISTOK_ERR_NULL_ARGUMENT, std::string(name) + " must not be NULL");
}

template <class F>
vistok_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return VISTOK_OK;
    } catch (const CallError& e) {
        g_last_error = e.message;
        return e.status;
    } catch (const vistok::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return VISTOK_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VISTOK_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return VISTOK_ERR_INTERNAL;
    }
}

// Copies src into (out, capacity) following the size-query convention.
template <class T, class U, class Conv>
void emit(const std::vector<U>& src, T* out, std::size_t capacity, std::size_t* written, Conv conv) {
    require(written, "written");
    *written = src.size();
    if (out == nullptr) {
        if (capacity != 0) raise(VISTOK_ERR_NULL_ARGUMENT, "output buffer is NULL but capacity is nonzero");
        return;
    }
    if (capacity < src.size()) {
        raise(VISTOK_ERR_BUFFER_TOO_SMALL,
              "buffer holds " + std::to_string(capacity) + " elements, " + std::to_string(src.size()) + " needed");
    }
    for (std::size_t i = 0; i < src.size(); ++i) out[i] = conv(src[i]);
}

template <class T>
void emit(const std::vector<T>& src, T* out, std::size_t capacity, std::size_t* written) {
    emit(src, out, capacity, written, [](const T& v) { return v; });
}

vistok::TilingConfig tiling_config(const vistok_tiling_config* cfg) {
    vistok::TilingConfig out;
    if (cfg != nullptr) {
        out.tile_side = cfg->tile_side;
        out.patch_size = cfg->patch_size;
        out.max_tiles = cfg->max_tiles;
        out.pixel_shuffle_factor = cfg->pixel_shuffle_factor;
        out.include_thumbnail = cfg->include_thumbnail != 0;
    }
    return out;
}

vistok_tile_layout to_c(const vistok::TileLayout& l) {
    vistok_tile_layout out{};
    out.grid_rows = l.grid.rows;
    out.grid_cols = l.grid.cols;
    out.resized_width = l.resized_width;
    out.resized_height = l.resized_height;
    out.has_thumbnail = l.has_thumbnail ? 1 : 0;
    out.tokens_per_tile = l.tokens_per_tile;
    out.total_tiles = l.total_tiles;
    out.total_tokens = l.total_tokens;
    return out;
}

vistok::TileLayout from_c(const vistok_tile_layout& l) {
    vistok::TileLayout out;
    out.grid = {l.grid_rows, l.grid_cols};
    out.resized_width = l.resized_width;
    out.resized_height = l.resized_height;
    out.has_thumbnail = l.has_thumbnail != 0;
    out.tokens_per_tile = l.tokens_per_tile;
    out.total_tiles = l.total_tiles;
    out.total_tokens = l.total_tokens;
    return out;
}

vistok::ChangeMetric metric_of(vistok_change_metric m) {
    switch (m) {
        case VISTOK_METRIC_MAD: return vistok::ChangeMetric::MeanAbsDiff;
        case VISTOK_METRIC_COSINE: return vistok::ChangeMetric::Cosine;
    }
    raise(VISTOK_ERR_INVALID_CONFIG, "unknown change metric");
}

vistok::QuantFormat format_of(vistok_quant_format f) {
    switch (f) {
        case VISTOK_FORMAT_E4M3: return vistok::QuantFormat::E4M3;
        case VISTOK_FORMAT_NVFP4: return vistok::QuantFormat::NVFP4;
    }
    raise(VISTOK_ERR_INVALID_CONFIG, "unknown quantization format");
}

vistok::BudgetConfig budget_config(const vistok_budget_config* cfg) {
    require(cfg, "cfg");
    vistok::BudgetConfig out;
    out.budget = cfg->budget;
    out.grace = cfg->grace;
    out.think_open = cfg->think_open;
    out.think_close = cfg->think_close;
    if (cfg->has_end_of_stream) out.end_of_stream = cfg->end_of_stream;
    return out;
}

vistok_budget_summary summary_of(std::uint64_t budget, bool unrestricted, const vistok::BudgetReplay& r) {
    vistok_budget_summary s{};
    s.budget = budget;
    s.unrestricted = unrestricted ? 1 : 0;
    s.forced = r.forced ? 1 : 0;
    s.soft_close_requested = r.soft_close_requested ? 1 : 0;
    s.thinking_total = r.thinking_total;
    s.thinking_kept = r.thinking_kept;
    s.answer_offset = r.answer_offset;
    s.output_length = r.output.size();
    return s;
}

}  // namespace

extern "C" {

// ---------------------------------------------------------------------------
// Status and library info

const char* vistok_version(void) { return VISTOK_VERSION_STRING; }

const char* vistok_status_name(vistok_status status) {
    switch (status) {
        case VISTOK_OK: return "ok";
        case VISTOK_ERR_INVALID_CONFIG: return "invalid_config";
        case VISTOK_ERR_INPUT_SHAPE: return "input_shape";
        case VISTOK_ERR_OVERSIZE_SAMPLE: return "oversize_sample";
        case VISTOK_ERR_INVALID_SAMPLE: return "invalid_sample";
        case VISTOK_ERR_PROTOCOL: return "protocol";
        case VISTOK_ERR_CALIBRATION_DATA: return "calibration_data";
        case VISTOK_ERR_DEGENERATE_TENSOR: return "degenerate_tensor";
        case VISTOK_ERR_IO: return "io";
        case VISTOK_ERR_FORMAT: return "format";
        case VISTOK_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
        case VISTOK_ERR_NULL_ARGUMENT: return "null_argument";
        case VISTOK_ERR_OUT_OF_RANGE: return "out_of_range";
        case VISTOK_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* vistok_last_error(void) { return g_last_error.c_str(); }

// ---------------------------------------------------------------------------
// Frames

vistok_status vistok_frame_create(uint32_t width, uint32_t height, const uint8_t* rgb, vistok_frame** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        if (rgb == nullptr) {
            *out = new vistok_frame{vistok::Frame(width, height)};
        } else {
            const std::size_t n = static_cast<std::size_t>(width) * height * vistok::Frame::kChannels;
            *out = new vistok_frame{vistok::Frame(width, height, std::vector<std::uint8_t>(rgb, rgb + n))};
        }
    });
}

vistok_status vistok_frame_load(const char* path, vistok_frame** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new vistok_frame{vistok::load_mmtf(path)};
    });
}

vistok_status vistok_frame_save(const vistok_frame* frame, const char* path) {
    return guarded([&] {
        require(frame, "frame");
        require(path, "path");
        vistok::save_mmtf(frame->frame, path);
    });
}

void vistok_frame_destroy(vistok_frame* frame) { delete frame; }

uint32_t vistok_frame_width(const vistok_frame* frame) { return frame ? frame->frame.width() : 0; }

uint32_t vistok_frame_height(const vistok_frame* frame) { return frame ? frame->frame.height() : 0; }

const uint8_t* vistok_frame_data(const vistok_frame* frame) { return frame ? frame->frame.data().data() : nullptr; }

size_t vistok_frame_size_bytes(const vistok_frame* frame) { return frame ? frame->frame.data().size() : 0; }

vistok_status vistok_frame_resize(const vistok_frame* frame, uint32_t width, uint32_t height, vistok_frame** out) {
    return guarded([&] {
        require(frame, "frame");
        require(out, "out");
        *out = nullptr;
        *out = new vistok_frame{vistok::resize_bilinear(frame->frame, width, height)};
    });
}

// ---------------------------------------------------------------------------
// Image tiling

void vistok_tiling_config_default(vistok_tiling_config* cfg) {
    if (cfg == nullptr) return;
    const vistok::TilingConfig d;
    cfg->tile_side = d.tile_side;
    cfg->patch_size = d.patch_size;
    cfg->max_tiles = d.max_tiles;
    cfg->pixel_shuffle_factor = d.pixel_shuffle_factor;
    cfg->include_thumbnail = d.include_thumbnail ? 1 : 0;
}

vistok_status vistok_select_grid(uint32_t width, uint32_t height, const vistok_tiling_config* cfg, uint32_t* rows,
                                 uint32_t* cols) {
    return guarded([&] {
        require(rows, "rows");
        require(cols, "cols");
        const auto g = vistok::select_grid({width, height}, tiling_config(cfg));
        *rows = g.rows;
        *cols = g.cols;
    });
}

vistok_status vistok_layout_image(uint32_t width, uint32_t height, const vistok_tiling_config* cfg,
                                  vistok_tile_layout* out) {
    return guarded([&] {
        require(out, "out");
        *out = to_c(vistok::layout_image({width, height}, tiling_config(cfg)));
    });
}

vistok_status vistok_pixel_shuffle_map(uint32_t grid_side, uint32_t factor, uint32_t* coords, size_t capacity,
                                       size_t* written) {
    return guarded([&] {
        require(written, "written");
        const auto map = vistok::pixel_shuffle_map(grid_side, factor);
        std::vector<std::uint32_t> flat;
        flat.reserve(map.size() * 2);
        for (const auto& c : map) {
            flat.push_back(c.row);
            flat.push_back(c.col);
        }
        emit(flat, coords, capacity, written);
    });
}

vistok_status vistok_slice_tiles(const vistok_frame* frame, const vistok_tile_layout* layout, vistok_tile_set** out) {
    return guarded([&] {
        require(frame, "frame");
        require(layout, "layout");
        require(out, "out");
        *out = nullptr;
        auto set = new vistok_tile_set;
        try {
            for (auto& t : vistok::slice_tiles(frame->frame, from_c(*layout))) set->tiles.push_back({std::move(t)});
        } catch (...) {
            delete set;
            throw;
        }
        *out = set;
    });
}

vistok_status vistok_tile_frame(const vistok_frame* frame, const vistok_tiling_config* cfg,
                                vistok_tile_layout* layout_out, vistok_tile_set** out) {
    return guarded([&] {
        require(frame, "frame");
        require(out, "out");
        *out = nullptr;
        vistok::TileLayout layout;
        auto tiles = vistok::tile_frame(frame->frame, tiling_config(cfg), &layout);
        auto set = new vistok_tile_set;
        set->tiles.reserve(tiles.size());
        for (auto& t : tiles) set->tiles.push_back({std::move(t)});
        if (layout_out != nullptr) *layout_out = to_c(layout);
        *out = set;
    });
}

size_t vistok_tile_set_count(const vistok_tile_set* set) { return set ? set->tiles.size() : 0; }

const vistok_frame* vistok_tile_set_get(const vistok_tile_set* set, size_t index) {
    if (set == nullptr || index >= set->tiles.size()) return nullptr;
    return &set->tiles[index];
}

void vistok_tile_set_destroy(vistok_tile_set* set) { delete set; }

// ---------------------------------------------------------------------------
// Video frame sampling

vistok_status vistok_plan_frames(double duration, double native_fps, uint64_t frame_count, double rate, uint32_t cap,
                                 vistok_frame_plan** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        vistok::VideoDescriptor video;
        if (frame_count == 0) {
            video = vistok::VideoDescriptor::from_duration(duration, native_fps);
        } else {
            video = {duration, native_fps, frame_count};
        }
        *out = new vistok_frame_plan{vistok::plan_frames(video, rate, cap)};
    });
}

size_t vistok_frame_plan_size(const vistok_frame_plan* plan) { return plan ? plan->plan.size() : 0; }

vistok_sampling_mode vistok_frame_plan_mode(const vistok_frame_plan* plan) {
    return plan && plan->plan.mode == vistok::SamplingMode::Uniform ? VISTOK_SAMPLING_UNIFORM
                                                                    : VISTOK_SAMPLING_FIXED_RATE;
}

uint64_t vistok_frame_plan_index(const vistok_frame_plan* plan, size_t i) {
    return plan && i < plan->plan.indices.size() ? plan->plan.indices[i] : 0;
}

double vistok_frame_plan_timestamp(const vistok_frame_plan* plan, size_t i) {
    return plan && i < plan->plan.timestamps.size() ? plan->plan.timestamps[i] : 0.0;
}

uint64_t vistok_frame_token_count(const vistok_frame_plan* plan, uint32_t tokens_per_tile) {
    return plan ? vistok::frame_token_count(plan->plan, tokens_per_tile) : 0;
}

void vistok_frame_plan_destroy(vistok_frame_plan* plan) { delete plan; }

// ---------------------------------------------------------------------------
// Temporal patch pruning

vistok_status vistok_patch_grid_create(uint32_t frames, uint32_t rows, uint32_t cols, uint32_t dim,
                                       const float* values, vistok_patch_grid** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        const std::size_t n = static_cast<std::size_t>(frames) * rows * cols * dim;
        if (n != 0) require(values, "values");
        std::vector<float> v(values, values + n);
        *out = new vistok_patch_grid{vistok::PatchGrid(frames, rows, cols, dim, std::move(v))};
    });
}

vistok_status vistok_patch_grid_from_frames(const vistok_frame* const* frames, size_t count, uint32_t patch,
                                            vistok_patch_grid** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        if (count != 0) require(frames, "frames");
        std::vector<vistok::Frame> fs;
        fs.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            require(frames[i], "frames[i]");
            fs.push_back(frames[i]->frame);
        }
        *out = new vistok_patch_grid{vistok::PatchGrid::from_frames(fs, patch)};
    });
}

void vistok_patch_grid_destroy(vistok_patch_grid* grid) { delete grid; }

uint32_t vistok_patch_grid_frames(const vistok_patch_grid* grid) { return grid ? grid->grid.frames() : 0; }

uint32_t vistok_patch_grid_rows(const vistok_patch_grid* grid) { return grid ? grid->grid.rows() : 0; }

uint32_t vistok_patch_grid_cols(const vistok_patch_grid* grid) { return grid ? grid->grid.cols() : 0; }

vistok_status vistok_change_scores(const vistok_patch_grid* grid, vistok_change_metric metric, double* scores,
                                   size_t capacity, size_t* written) {
    return guarded([&] {
        require(grid, "grid");
        emit(vistok::change_scores(grid->grid, metric_of(metric)), scores, capacity, written);
    });
}

vistok_status vistok_prune(const vistok_patch_grid* grid, double ratio, vistok_change_metric metric,
                           vistok_prune_mask** out) {
    return guarded([&] {
        require(grid, "grid");
        require(out, "out");
        *out = nullptr;
        *out = new vistok_prune_mask{vistok::prune(grid->grid, ratio, metric_of(metric))};
    });
}

vistok_status vistok_prune_by_scores(uint32_t frames, uint32_t rows, uint32_t cols, const double* scores,
                                     size_t count, double ratio, vistok_prune_mask** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        if (count != 0) require(scores, "scores");
        const std::span<const double> s(scores, count);
        *out = new vistok_prune_mask{vistok::prune_by_scores(frames, rows, cols, s, ratio)};
    });
}

void vistok_prune_mask_destroy(vistok_prune_mask* mask) { delete mask; }

uint64_t vistok_prune_mask_kept(const vistok_prune_mask* mask) { return mask ? mask->mask.kept() : 0; }

uint64_t vistok_prune_mask_dropped(const vistok_prune_mask* mask) { return mask ? mask->mask.dropped() : 0; }

uint64_t vistok_prune_mask_kept_in_frame(const vistok_prune_mask* mask, uint32_t frame) {
    if (mask == nullptr || frame >= mask->mask.frames()) return 0;
    return mask->mask.kept_in_frame(frame);
}

int vistok_prune_mask_keep(const vistok_prune_mask* mask, uint32_t frame, uint32_t row, uint32_t col) {
    if (mask == nullptr) return -1;
    const auto& m = mask->mask;
    if (frame >= m.frames() || row >= m.rows() || col >= m.cols()) return -1;
    return m.keep(frame, row, col) ? 1 : 0;
}

vistok_status vistok_prune_mask_kept_positions(const vistok_prune_mask* mask, vistok_patch_pos* out, size_t capacity,
                                               size_t* written) {
    return guarded([&] {
        require(mask, "mask");
        emit(mask->mask.kept_positions(), out, capacity, written,
             [](const vistok::PatchPos& p) { return vistok_patch_pos{p.frame, p.row, p.col}; });
    });
}

vistok_status vistok_prune_mask_bitpack(const vistok_prune_mask* mask, uint8_t* out, size_t capacity,
                                        size_t* written) {
    return guarded([&] {
        require(mask, "mask");
        emit(mask->mask.bitpack(), out, capacity, written);
    });
}

vistok_status vistok_apply_mask(const vistok_prune_mask* mask, const vistok_patch_pos* tokens, size_t count,
                                vistok_patch_pos* out, size_t capacity, size_t* written) {
    return guarded([&] {
        require(mask, "mask");
        if (count != 0) require(tokens, "tokens");
        std::vector<vistok::PatchPos> in(count);
        for (std::size_t i = 0; i < count; ++i) in[i] = {tokens[i].frame, tokens[i].row, tokens[i].col};
        emit(vistok::apply_mask(in, mask->mask), out, capacity, written,
             [](const vistok::PatchPos& p) { return vistok_patch_pos{p.frame, p.row, p.col}; });
    });
}

vistok_status vistok_prune_count(double ratio, uint64_t prunable, uint64_t* out) {
    return guarded([&] {
        require(out, "out");
        *out = vistok::prune_count(ratio, prunable);
    });
}

// ---------------------------------------------------------------------------
// Sequence packing

vistok_status vistok_packer_create(uint64_t capacity, size_t buffer_size, vistok_packer** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        const std::size_t buf = buffer_size == 0 ? vistok::kDefaultPackBuffer : buffer_size;
        *out = new vistok_packer{vistok::Packer(capacity, buf), {}};
        (*out)->snapshot.capacity = capacity;
    });
}

void vistok_packer_destroy(vistok_packer* packer) { delete packer; }

vistok_status vistok_packer_submit(vistok_packer* packer, const char* sample_id, uint64_t total_tokens,
                                   uint64_t vision_tokens, uint64_t loss_tokens) {
    return guarded([&] {
        require(packer, "packer");
        require(sample_id, "sample_id");
        packer->packer.submit({sample_id, total_tokens, vision_tokens, loss_tokens});
    });
}

vistok_status vistok_packer_finish(vistok_packer* packer) {
    return guarded([&] {
        require(packer, "packer");
        packer->packer.finish();
    });
}

vistok_status vistok_packer_snapshot(vistok_packer* packer) {
    return guarded([&] {
        require(packer, "packer");
        packer->snapshot = packer->packer.snapshot();
    });
}

size_t vistok_packer_pack_count(const vistok_packer* packer) { return packer ? packer->snapshot.packs.size() : 0; }

vistok_status vistok_packer_pack_info(const vistok_packer* packer, size_t pack, vistok_pack_info* out) {
    return guarded([&] {
        require(packer, "packer");
        require(out, "out");
        if (pack >= packer->snapshot.packs.size()) raise(VISTOK_ERR_OUT_OF_RANGE, "pack index out of range");
        const auto& p = packer->snapshot.packs[pack];
        *out = {p.used_tokens, p.padding_tokens, p.vision_tokens, p.sample_ids.size()};
    });
}

const char* vistok_packer_pack_sample(const vistok_packer* packer, size_t pack, size_t member) {
    if (packer == nullptr || pack >= packer->snapshot.packs.size()) return nullptr;
    const auto& ids = packer->snapshot.packs[pack].sample_ids;
    return member < ids.size() ? ids[member].c_str() : nullptr;
}

size_t vistok_packer_leftover_count(const vistok_packer* packer) {
    return packer ? packer->snapshot.leftover.size() : 0;
}

const char* vistok_packer_leftover(const vistok_packer* packer, size_t index) {
    if (packer == nullptr || index >= packer->snapshot.leftover.size()) return nullptr;
    return packer->snapshot.leftover[index].c_str();
}

double vistok_packer_padding_fraction(const vistok_packer* packer) {
    return packer ? vistok::padding_report(packer->snapshot) : 0.0;
}

vistok_status vistok_pack_fifo_padding(const uint64_t* total_tokens, size_t count, uint64_t capacity,
                                       double* padding_fraction, size_t* pack_count) {
    return guarded([&] {
        if (count != 0) require(total_tokens, "total_tokens");
        require(padding_fraction, "padding_fraction");
        std::vector<vistok::SampleRecord> samples(count);
        for (std::size_t i = 0; i < count; ++i) {
            samples[i] = {std::to_string(i), total_tokens[i], 0, 1};
        }
        const auto plan = vistok::pack_fifo(samples, capacity);
        *padding_fraction = vistok::padding_report(plan);
        if (pack_count != nullptr) *pack_count = plan.packs.size();
    });
}

vistok_status vistok_square_average_weights(const uint64_t* loss_tokens, size_t count, double* weights,
                                            double* normalizer) {
    return guarded([&] {
        if (count != 0) {
            require(loss_tokens, "loss_tokens");
            require(weights, "weights");
        }
        const auto w = vistok::square_average_weights(std::span<const std::uint64_t>(loss_tokens, count));
        std::copy(w.weights.begin(), w.weights.end(), weights);
        if (normalizer != nullptr) *normalizer = w.normalizer;
    });
}

// ---------------------------------------------------------------------------
// Reasoning budget control

void vistok_budget_config_default(vistok_budget_config* cfg) {
    if (cfg == nullptr) return;
    const vistok::BudgetConfig d;
    cfg->budget = d.budget;
    cfg->grace = d.grace;
    cfg->think_open = d.think_open;
    cfg->think_close = d.think_close;
    cfg->has_end_of_stream = 0;
    cfg->end_of_stream = 0;
}

vistok_status vistok_budget_controller_create(const vistok_budget_config* cfg, vistok_budget_controller** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new vistok_budget_controller{vistok::BudgetController(budget_config(cfg))};
    });
}

void vistok_budget_controller_destroy(vistok_budget_controller* ctl) { delete ctl; }

vistok_status vistok_budget_on_token(vistok_budget_controller* ctl, int64_t token, vistok_budget_action* action) {
    return guarded([&] {
        require(ctl, "ctl");
        const auto a = ctl->ctl.on_token(token);
        if (action != nullptr) *action = static_cast<vistok_budget_action>(static_cast<int>(a));
    });
}

void vistok_budget_finish(vistok_budget_controller* ctl) {
    if (ctl != nullptr) ctl->ctl.finish();
}

vistok_budget_phase vistok_budget_phase_of(const vistok_budget_controller* ctl) {
    if (ctl == nullptr) return VISTOK_PHASE_PRE_THINK;
    return static_cast<vistok_budget_phase>(static_cast<int>(ctl->ctl.state().phase));
}

uint64_t vistok_budget_thinking_used(const vistok_budget_controller* ctl) {
    return ctl ? ctl->ctl.state().thinking_tokens_used : 0;
}

int vistok_budget_forced_close(const vistok_budget_controller* ctl) {
    return ctl && ctl->ctl.state().forced_close ? 1 : 0;
}

vistok_status vistok_budget_replay(const vistok_budget_config* cfg, const int64_t* trace, size_t count,
                                   int64_t* output, size_t capacity, size_t* written,
                                   vistok_budget_summary* summary) {
    return guarded([&] {
        const auto c = budget_config(cfg);
        if (count != 0) require(trace, "trace");
        const auto r = vistok::replay_trace(std::span<const vistok::TokenId>(trace, count), c);
        if (summary != nullptr) *summary = summary_of(c.budget, false, r);
        if (written != nullptr || output != nullptr) emit(r.output, output, capacity, written);
    });
}

vistok_status vistok_budget_sweep(const int64_t* trace, size_t count, int64_t think_open, int64_t think_close,
                                  uint64_t grace, const uint64_t* budgets, size_t budget_count,
                                  vistok_budget_summary* summaries) {
    return guarded([&] {
        if (count != 0) require(trace, "trace");
        if (budget_count != 0) {
            require(budgets, "budgets");
            require(summaries, "summaries");
        }
        const auto s = vistok::budget_sweep(std::span<const vistok::TokenId>(trace, count),
                                            std::span<const std::uint64_t>(budgets, budget_count), think_open,
                                            think_close, grace);
        for (std::size_t i = 0; i < s.size(); ++i) summaries[i] = summary_of(s[i].budget, s[i].unrestricted, s[i].replay);
    });
}

// ---------------------------------------------------------------------------
// Quantization simulation

uint8_t vistok_e4m3_encode(double value) { return vistok::e4m3_encode(value); }

double vistok_e4m3_decode(uint8_t code) { return vistok::e4m3_decode(code); }

vistok_status vistok_e4m3_quantize(double x, double scale, uint8_t* code) {
    return guarded([&] {
        require(code, "code");
        *code = vistok::e4m3_quantize(x, scale);
    });
}

vistok_status vistok_e4m3_dequantize(uint8_t code, double scale, double* x) {
    return guarded([&] {
        require(x, "x");
        *x = vistok::e4m3_dequantize(code, scale);
    });
}

uint8_t vistok_e2m1_encode(double value) { return vistok::e2m1_encode(value); }

double vistok_e2m1_decode(uint8_t code) { return vistok::e2m1_decode(code); }

double vistok_format_max(vistok_quant_format format) {
    switch (format) {
        case VISTOK_FORMAT_E4M3: return vistok::format_max(vistok::QuantFormat::E4M3);
        case VISTOK_FORMAT_NVFP4: return vistok::format_max(vistok::QuantFormat::NVFP4);
    }
    return 0.0;
}

vistok_status vistok_calibrator_create(vistok_calibrator** out) {
    return guarded([&] {
        require(out, "out");
        *out = new vistok_calibrator{};
    });
}

void vistok_calibrator_destroy(vistok_calibrator* cal) { delete cal; }

vistok_status vistok_calibrator_observe(vistok_calibrator* cal, const float* values, size_t count) {
    return guarded([&] {
        require(cal, "cal");
        if (count != 0) require(values, "values");
        cal->acc.observe(std::span<const float>(values, count));
    });
}

vistok_status vistok_calibrator_merge(vistok_calibrator* dst, const vistok_calibrator* src) {
    return guarded([&] {
        require(dst, "dst");
        require(src, "src");
        dst->acc.merge(src->acc);
    });
}

double vistok_calibrator_amax(const vistok_calibrator* cal) { return cal ? cal->acc.running_amax() : 0.0; }

uint64_t vistok_calibrator_samples(const vistok_calibrator* cal) { return cal ? cal->acc.samples_seen() : 0; }

vistok_status vistok_calibrator_finalize_scale(const vistok_calibrator* cal, vistok_quant_format format,
                                               double* scale) {
    return guarded([&] {
        require(cal, "cal");
        require(scale, "scale");
        *scale = cal->acc.finalize_scale(format_of(format));
    });
}

vistok_status vistok_nvfp4_quantize_block(const double* xs, size_t block_size, double per_tensor_scale,
                                          uint8_t* scale_code, uint8_t* codes) {
    return guarded([&] {
        require(xs, "xs");
        require(scale_code, "scale_code");
        require(codes, "codes");
        const auto b = vistok::nvfp4_quantize_block(std::span<const double>(xs, block_size), per_tensor_scale,
                                                    block_size);
        *scale_code = b.scale_code;
        std::copy(b.codes.begin(), b.codes.end(), codes);
    });
}

vistok_status vistok_nvfp4_dequantize_block(uint8_t scale_code, const uint8_t* codes, size_t block_size,
                                            double per_tensor_scale, double* out) {
    return guarded([&] {
        require(codes, "codes");
        require(out, "out");
        vistok::Nvfp4Block b;
        b.scale_code = scale_code;
        b.codes.assign(codes, codes + block_size);
        const auto v = vistok::nvfp4_dequantize_block(b, per_tensor_scale);
        std::copy(v.begin(), v.end(), out);
    });
}

vistok_status vistok_quant_error_report(const float* values, size_t count, const vistok_quant_spec* spec,
                                        vistok_quant_report* out) {
    return guarded([&] {
        require(spec, "spec");
        require(out, "out");
        if (count != 0) require(values, "values");
        vistok::QuantSpec s;
        s.format = format_of(spec->format);
        s.per_tensor_scale = spec->per_tensor_scale;
        s.block_size = spec->block_size;
        const auto r = vistok::quant_error_report(std::span<const float>(values, count), s);
        *out = {r.count, r.max_abs_err, r.mse, r.saturation_count};
    });
}

vistok_status vistok_tensor_set_load(const char* path, vistok_tensor_set** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new vistok_tensor_set{vistok::load_mmtq(path)};
    });
}

size_t vistok_tensor_set_count(const vistok_tensor_set* set) { return set ? set->tensors.size() : 0; }

size_t vistok_tensor_set_length(const vistok_tensor_set* set, size_t index) {
    return set && index < set->tensors.size() ? set->tensors[index].size() : 0;
}

const float* vistok_tensor_set_data(const vistok_tensor_set* set, size_t index) {
    return set && index < set->tensors.size() ? set->tensors[index].data() : nullptr;
}

void vistok_tensor_set_destroy(vistok_tensor_set* set) { delete set; }

// ---------------------------------------------------------------------------
// Prompt planning

vistok_status vistok_account_tokens(const vistok_prompt* prompt, const vistok_tiling_config* cfg,
                                    vistok_token_account* out) {
    return guarded([&] {
        require(prompt, "prompt");
        require(out, "out");
        vistok::PromptSpec p;
        p.text_tokens = prompt->text_tokens;
        if (prompt->image_count != 0) require(prompt->images, "prompt->images");
        for (std::size_t i = 0; i < prompt->image_count; ++i) {
            p.images.push_back({prompt->images[i].width, prompt->images[i].height});
        }
        if (prompt->video.present) {
            const auto& v = prompt->video;
            vistok::VideoDescriptor d = v.frame_count == 0 ? vistok::VideoDescriptor::from_duration(v.duration, v.native_fps)
                                                           : vistok::VideoDescriptor{v.duration, v.native_fps, v.frame_count};
            p.video = vistok::VideoInput{d, v.evs_ratio};
        }
        const auto a = vistok::account_tokens(p, tiling_config(cfg));
        *out = {a.text_tokens,  a.image_tokens,       a.image_tiles,  a.video_frames, a.video_tokens_before_evs,
                a.evs_dropped_tokens, a.video_tokens, a.total};
    });
}

uint64_t vistok_stage_max_length(int stage) {
    if (stage < 0 || stage > 4) return 0;
    return vistok::stage_max_length(stage);
}

void vistok_fits_stage(uint64_t total, uint64_t stage_max, int* fits, int64_t* headroom) {
    const auto f = vistok::fits_stage(total, stage_max);
    if (fits != nullptr) *fits = f.fits ? 1 : 0;
    if (headroom != nullptr) *headroom = f.headroom;
}

vistok_status vistok_plan_shards(uint64_t seq_len, uint64_t tiles, uint32_t ways, vistok_shard_plan** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        *out = new vistok_shard_plan{vistok::plan_shards(seq_len, tiles, ways)};
    });
}

void vistok_shard_plan_destroy(vistok_shard_plan* plan) { delete plan; }

uint32_t vistok_shard_plan_ways(const vistok_shard_plan* plan) { return plan ? plan->plan.ways : 0; }

vistok_status vistok_shard_plan_range(const vistok_shard_plan* plan, uint32_t rank, uint64_t* start, uint64_t* end) {
    return guarded([&] {
        require(plan, "plan");
        require(start, "start");
        require(end, "end");
        if (rank >= plan->plan.sequence_ranges.size()) raise(VISTOK_ERR_OUT_OF_RANGE, "rank out of range");
        *start = plan->plan.sequence_ranges[rank].first;
        *end = plan->plan.sequence_ranges[rank].second;
    });
}

size_t vistok_shard_plan_shard_size(const vistok_shard_plan* plan, uint32_t rank) {
    return plan && rank < plan->plan.vision_shards.size() ? plan->plan.vision_shards[rank].size() : 0;
}

vistok_status vistok_shard_plan_shard_tiles(const vistok_shard_plan* plan, uint32_t rank, uint64_t* out,
                                            size_t capacity, size_t* written) {
    return guarded([&] {
        require(plan, "plan");
        if (rank >= plan->plan.vision_shards.size()) raise(VISTOK_ERR_OUT_OF_RANGE, "rank out of range");
        emit(plan->plan.vision_shards[rank], out, capacity, written);
    });
}

vistok_status vistok_shard_plan_gather_order(const vistok_shard_plan* plan, uint64_t* out, size_t capacity,
                                             size_t* written) {
    return guarded([&] {
        require(plan, "plan");
        emit(plan->plan.gather_order(), out, capacity, written);
    });
}

}  // extern "C"
