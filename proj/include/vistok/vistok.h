/*
 * Copyright (C) 2026 The vistok Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the vistok library: visual-token accounting for
 * vision-language inputs (image tiling, video frame sampling, temporal
 * patch pruning), sequence packing, reasoning budget control and low
 * precision quantization simulation.
 *
 * Conventions
 *   - Every fallible call returns vistok_status. On failure a message is
 *     available from vistok_last_error() on the calling thread.
 *   - Objects are opaque handles created by *_create / producer calls and
 *     released with the matching *_destroy. Destroy functions accept NULL.
 *   - Variable-length outputs use (buffer, capacity, *written). Passing a
 *     NULL buffer with capacity 0 reports the required size in *written and
 *     returns VISTOK_OK; a non-NULL buffer that is too small returns
 *     VISTOK_ERR_BUFFER_TOO_SMALL with the required size in *written.
 */

#ifndef VISTOK_VISTOK_H
#define VISTOK_VISTOK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#    if defined(VISTOK_BUILDING_LIBRARY)
#        define VISTOK_API __declspec(dllexport)
#    else
#        define VISTOK_API __declspec(dllimport)
#    endif
#else
#    define VISTOK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------------ */
/* Status and library info                                                  */

typedef enum vistok_status {
    VISTOK_OK = 0,
    VISTOK_ERR_INVALID_CONFIG = 1,
    VISTOK_ERR_INPUT_SHAPE = 2,
    VISTOK_ERR_OVERSIZE_SAMPLE = 3,
    VISTOK_ERR_INVALID_SAMPLE = 4,
    VISTOK_ERR_PROTOCOL = 5,
    VISTOK_ERR_CALIBRATION_DATA = 6,
    VISTOK_ERR_DEGENERATE_TENSOR = 7,
    VISTOK_ERR_IO = 8,
    VISTOK_ERR_FORMAT = 9,
    VISTOK_ERR_BUFFER_TOO_SMALL = 10,
    VISTOK_ERR_NULL_ARGUMENT = 11,
    VISTOK_ERR_OUT_OF_RANGE = 12,
    VISTOK_ERR_INTERNAL = 13
} vistok_status;

VISTOK_API const char* vistok_version(void);
/* Stable snake_case name, e.g. "invalid_config". */
VISTOK_API const char* vistok_status_name(vistok_status status);
/* Message for the last failing call on this thread; "" if none. */
VISTOK_API const char* vistok_last_error(void);

/* ------------------------------------------------------------------------ */
/* Frames (interleaved RGB8) and the MMTF container                         */

typedef struct vistok_frame vistok_frame;

/* rgb may be NULL for a zero-filled frame; otherwise width*height*3 bytes. */
VISTOK_API vistok_status vistok_frame_create(uint32_t width, uint32_t height, const uint8_t* rgb, vistok_frame** out);
VISTOK_API vistok_status vistok_frame_load(const char* path, vistok_frame** out);
VISTOK_API vistok_status vistok_frame_save(const vistok_frame* frame, const char* path);
VISTOK_API void vistok_frame_destroy(vistok_frame* frame);
VISTOK_API uint32_t vistok_frame_width(const vistok_frame* frame);
VISTOK_API uint32_t vistok_frame_height(const vistok_frame* frame);
VISTOK_API const uint8_t* vistok_frame_data(const vistok_frame* frame);
VISTOK_API size_t vistok_frame_size_bytes(const vistok_frame* frame);
/* Bilinear, half-pixel centers. */
VISTOK_API vistok_status vistok_frame_resize(const vistok_frame* frame, uint32_t width, uint32_t height,
                                             vistok_frame** out);

/* ------------------------------------------------------------------------ */
/* Image tiling                                                             */

typedef struct vistok_tiling_config {
    uint32_t tile_side;            /* 512 */
    uint32_t patch_size;           /* 16 */
    uint32_t max_tiles;            /* 12 */
    uint32_t pixel_shuffle_factor; /* 2 */
    int include_thumbnail;         /* 1 */
} vistok_tiling_config;

typedef struct vistok_tile_layout {
    uint32_t grid_rows;
    uint32_t grid_cols;
    uint32_t resized_width;
    uint32_t resized_height;
    int has_thumbnail;
    uint32_t tokens_per_tile;
    uint32_t total_tiles;
    uint64_t total_tokens;
} vistok_tile_layout;

VISTOK_API void vistok_tiling_config_default(vistok_tiling_config* cfg);
/* cfg may be NULL for defaults in all tiling calls. */
VISTOK_API vistok_status vistok_select_grid(uint32_t width, uint32_t height, const vistok_tiling_config* cfg,
                                            uint32_t* rows, uint32_t* cols);
VISTOK_API vistok_status vistok_layout_image(uint32_t width, uint32_t height, const vistok_tiling_config* cfg,
                                             vistok_tile_layout* out);
/* Writes (row, col) pairs: slot k owns pairs [k*f*f, (k+1)*f*f). Capacity
 * and *written count uint32 elements (2 per coordinate). */
VISTOK_API vistok_status vistok_pixel_shuffle_map(uint32_t grid_side, uint32_t factor, uint32_t* coords,
                                                  size_t capacity, size_t* written);

typedef struct vistok_tile_set vistok_tile_set;

/* frame must already have the layout's resized size. */
VISTOK_API vistok_status vistok_slice_tiles(const vistok_frame* frame, const vistok_tile_layout* layout,
                                            vistok_tile_set** out);
/* Resize to the layout target of cfg, then slice; layout_out may be NULL. */
VISTOK_API vistok_status vistok_tile_frame(const vistok_frame* frame, const vistok_tiling_config* cfg,
                                           vistok_tile_layout* layout_out, vistok_tile_set** out);
VISTOK_API size_t vistok_tile_set_count(const vistok_tile_set* set);
/* Borrowed pointer valid until the set is destroyed; NULL when out of range. */
VISTOK_API const vistok_frame* vistok_tile_set_get(const vistok_tile_set* set, size_t index);
VISTOK_API void vistok_tile_set_destroy(vistok_tile_set* set);

/* ------------------------------------------------------------------------ */
/* Video frame sampling                                                     */

typedef enum vistok_sampling_mode { VISTOK_SAMPLING_FIXED_RATE = 0, VISTOK_SAMPLING_UNIFORM = 1 } vistok_sampling_mode;

typedef struct vistok_frame_plan vistok_frame_plan;

/* frame_count 0 derives round(duration * native_fps). rate <= 0 or cap == 0
 * is an invalid config; pass 2.0 and 128 for the standard policy. */
VISTOK_API vistok_status vistok_plan_frames(double duration, double native_fps, uint64_t frame_count, double rate,
                                            uint32_t cap, vistok_frame_plan** out);
VISTOK_API size_t vistok_frame_plan_size(const vistok_frame_plan* plan);
VISTOK_API vistok_sampling_mode vistok_frame_plan_mode(const vistok_frame_plan* plan);
VISTOK_API uint64_t vistok_frame_plan_index(const vistok_frame_plan* plan, size_t i);
VISTOK_API double vistok_frame_plan_timestamp(const vistok_frame_plan* plan, size_t i);
VISTOK_API uint64_t vistok_frame_token_count(const vistok_frame_plan* plan, uint32_t tokens_per_tile);
VISTOK_API void vistok_frame_plan_destroy(vistok_frame_plan* plan);

/* ------------------------------------------------------------------------ */
/* Temporal patch pruning                                                   */

typedef enum vistok_change_metric { VISTOK_METRIC_MAD = 0, VISTOK_METRIC_COSINE = 1 } vistok_change_metric;

typedef struct vistok_patch_pos {
    uint32_t frame;
    uint32_t row;
    uint32_t col;
} vistok_patch_pos;

typedef struct vistok_patch_grid vistok_patch_grid;
typedef struct vistok_prune_mask vistok_prune_mask;

/* values holds frames*rows*cols*dim floats, (frame, row, col, dim) order. */
VISTOK_API vistok_status vistok_patch_grid_create(uint32_t frames, uint32_t rows, uint32_t cols, uint32_t dim,
                                                  const float* values, vistok_patch_grid** out);
VISTOK_API vistok_status vistok_patch_grid_from_frames(const vistok_frame* const* frames, size_t count,
                                                       uint32_t patch, vistok_patch_grid** out);
VISTOK_API void vistok_patch_grid_destroy(vistok_patch_grid* grid);
VISTOK_API uint32_t vistok_patch_grid_frames(const vistok_patch_grid* grid);
VISTOK_API uint32_t vistok_patch_grid_rows(const vistok_patch_grid* grid);
VISTOK_API uint32_t vistok_patch_grid_cols(const vistok_patch_grid* grid);

/* (frames-1)*rows*cols scores, index ((f-1)*rows + r)*cols + c. */
VISTOK_API vistok_status vistok_change_scores(const vistok_patch_grid* grid, vistok_change_metric metric,
                                              double* scores, size_t capacity, size_t* written);
VISTOK_API vistok_status vistok_prune(const vistok_patch_grid* grid, double ratio, vistok_change_metric metric,
                                      vistok_prune_mask** out);
VISTOK_API vistok_status vistok_prune_by_scores(uint32_t frames, uint32_t rows, uint32_t cols, const double* scores,
                                                size_t count, double ratio, vistok_prune_mask** out);
VISTOK_API void vistok_prune_mask_destroy(vistok_prune_mask* mask);
VISTOK_API uint64_t vistok_prune_mask_kept(const vistok_prune_mask* mask);
VISTOK_API uint64_t vistok_prune_mask_dropped(const vistok_prune_mask* mask);
VISTOK_API uint64_t vistok_prune_mask_kept_in_frame(const vistok_prune_mask* mask, uint32_t frame);
/* 1 kept, 0 dropped, -1 out of range. */
VISTOK_API int vistok_prune_mask_keep(const vistok_prune_mask* mask, uint32_t frame, uint32_t row, uint32_t col);
VISTOK_API vistok_status vistok_prune_mask_kept_positions(const vistok_prune_mask* mask, vistok_patch_pos* out,
                                                          size_t capacity, size_t* written);
/* Frame-major, row-major bits, LSB first; 1 = kept. */
VISTOK_API vistok_status vistok_prune_mask_bitpack(const vistok_prune_mask* mask, uint8_t* out, size_t capacity,
                                                   size_t* written);
VISTOK_API vistok_status vistok_apply_mask(const vistok_prune_mask* mask, const vistok_patch_pos* tokens,
                                           size_t count, vistok_patch_pos* out, size_t capacity, size_t* written);
VISTOK_API vistok_status vistok_prune_count(double ratio, uint64_t prunable, uint64_t* out);

/* ------------------------------------------------------------------------ */
/* Sequence packing                                                         */

typedef struct vistok_packer vistok_packer;

typedef struct vistok_pack_info {
    uint64_t used_tokens;
    uint64_t padding_tokens;
    uint64_t vision_tokens;
    size_t sample_count;
} vistok_pack_info;

/* buffer_size 0 selects the default (4096). */
VISTOK_API vistok_status vistok_packer_create(uint64_t capacity, size_t buffer_size, vistok_packer** out);
VISTOK_API void vistok_packer_destroy(vistok_packer* packer);
VISTOK_API vistok_status vistok_packer_submit(vistok_packer* packer, const char* sample_id, uint64_t total_tokens,
                                              uint64_t vision_tokens, uint64_t loss_tokens);
VISTOK_API vistok_status vistok_packer_finish(vistok_packer* packer);
/* Refreshes the snapshot read by the accessors below. */
VISTOK_API vistok_status vistok_packer_snapshot(vistok_packer* packer);
VISTOK_API size_t vistok_packer_pack_count(const vistok_packer* packer);
VISTOK_API vistok_status vistok_packer_pack_info(const vistok_packer* packer, size_t pack, vistok_pack_info* out);
/* Borrowed until the next snapshot; NULL when out of range. */
VISTOK_API const char* vistok_packer_pack_sample(const vistok_packer* packer, size_t pack, size_t member);
VISTOK_API size_t vistok_packer_leftover_count(const vistok_packer* packer);
VISTOK_API const char* vistok_packer_leftover(const vistok_packer* packer, size_t index);
VISTOK_API double vistok_packer_padding_fraction(const vistok_packer* packer);

/* Sequential next-fit baseline on the same samples, for comparisons. */
VISTOK_API vistok_status vistok_pack_fifo_padding(const uint64_t* total_tokens, size_t count, uint64_t capacity,
                                                  double* padding_fraction, size_t* pack_count);

VISTOK_API vistok_status vistok_square_average_weights(const uint64_t* loss_tokens, size_t count, double* weights,
                                                       double* normalizer);

/* ------------------------------------------------------------------------ */
/* Reasoning budget control                                                 */

typedef enum vistok_budget_phase {
    VISTOK_PHASE_PRE_THINK = 0,
    VISTOK_PHASE_THINKING = 1,
    VISTOK_PHASE_CLOSING = 2,
    VISTOK_PHASE_ANSWER = 3,
    VISTOK_PHASE_DONE = 4
} vistok_budget_phase;

typedef enum vistok_budget_action {
    VISTOK_ACTION_PASS = 0,
    VISTOK_ACTION_REQUEST_SOFT_CLOSE = 1,
    VISTOK_ACTION_FORCE_INJECT_CLOSE = 2
} vistok_budget_action;

typedef struct vistok_budget_config {
    uint64_t budget; /* 0 = reasoning off */
    uint64_t grace;  /* 500 */
    int64_t think_open;
    int64_t think_close;
    int has_end_of_stream;
    int64_t end_of_stream;
} vistok_budget_config;

typedef struct vistok_budget_summary {
    uint64_t budget;
    int unrestricted;
    int forced;
    int soft_close_requested;
    uint64_t thinking_total;
    uint64_t thinking_kept;
    int64_t answer_offset;
    uint64_t output_length;
} vistok_budget_summary;

typedef struct vistok_budget_controller vistok_budget_controller;

VISTOK_API void vistok_budget_config_default(vistok_budget_config* cfg);
VISTOK_API vistok_status vistok_budget_controller_create(const vistok_budget_config* cfg,
                                                         vistok_budget_controller** out);
VISTOK_API void vistok_budget_controller_destroy(vistok_budget_controller* ctl);
VISTOK_API vistok_status vistok_budget_on_token(vistok_budget_controller* ctl, int64_t token,
                                                vistok_budget_action* action);
VISTOK_API void vistok_budget_finish(vistok_budget_controller* ctl);
VISTOK_API vistok_budget_phase vistok_budget_phase_of(const vistok_budget_controller* ctl);
VISTOK_API uint64_t vistok_budget_thinking_used(const vistok_budget_controller* ctl);
VISTOK_API int vistok_budget_forced_close(const vistok_budget_controller* ctl);

/* Replays a recorded decode; output may be NULL to only fill the summary. */
VISTOK_API vistok_status vistok_budget_replay(const vistok_budget_config* cfg, const int64_t* trace, size_t count,
                                              int64_t* output, size_t capacity, size_t* written,
                                              vistok_budget_summary* summary);
/* summaries holds budget_count entries. */
VISTOK_API vistok_status vistok_budget_sweep(const int64_t* trace, size_t count, int64_t think_open,
                                             int64_t think_close, uint64_t grace, const uint64_t* budgets,
                                             size_t budget_count, vistok_budget_summary* summaries);

/* ------------------------------------------------------------------------ */
/* Quantization simulation                                                  */

typedef enum vistok_quant_format { VISTOK_FORMAT_E4M3 = 0, VISTOK_FORMAT_NVFP4 = 1 } vistok_quant_format;

typedef struct vistok_quant_spec {
    vistok_quant_format format;
    double per_tensor_scale;
    uint32_t block_size; /* NVFP4 only; 16 */
} vistok_quant_spec;

typedef struct vistok_quant_report {
    uint64_t count;
    double max_abs_err;
    double mse;
    uint64_t saturation_count;
} vistok_quant_report;

VISTOK_API uint8_t vistok_e4m3_encode(double value);
VISTOK_API double vistok_e4m3_decode(uint8_t code);
VISTOK_API vistok_status vistok_e4m3_quantize(double x, double scale, uint8_t* code);
VISTOK_API vistok_status vistok_e4m3_dequantize(uint8_t code, double scale, double* x);
VISTOK_API uint8_t vistok_e2m1_encode(double value);
VISTOK_API double vistok_e2m1_decode(uint8_t code);
VISTOK_API double vistok_format_max(vistok_quant_format format);

typedef struct vistok_calibrator vistok_calibrator;

VISTOK_API vistok_status vistok_calibrator_create(vistok_calibrator** out);
VISTOK_API void vistok_calibrator_destroy(vistok_calibrator* cal);
VISTOK_API vistok_status vistok_calibrator_observe(vistok_calibrator* cal, const float* values, size_t count);
VISTOK_API vistok_status vistok_calibrator_merge(vistok_calibrator* dst, const vistok_calibrator* src);
VISTOK_API double vistok_calibrator_amax(const vistok_calibrator* cal);
VISTOK_API uint64_t vistok_calibrator_samples(const vistok_calibrator* cal);
VISTOK_API vistok_status vistok_calibrator_finalize_scale(const vistok_calibrator* cal, vistok_quant_format format,
                                                          double* scale);

/* xs holds exactly block_size values; codes receives block_size codes. */
VISTOK_API vistok_status vistok_nvfp4_quantize_block(const double* xs, size_t block_size, double per_tensor_scale,
                                                     uint8_t* scale_code, uint8_t* codes);
VISTOK_API vistok_status vistok_nvfp4_dequantize_block(uint8_t scale_code, const uint8_t* codes, size_t block_size,
                                                       double per_tensor_scale, double* out);

VISTOK_API vistok_status vistok_quant_error_report(const float* values, size_t count, const vistok_quant_spec* spec,
                                                   vistok_quant_report* out);

/* MMTQ tensor files: one or more records of f32 values. */
typedef struct vistok_tensor_set vistok_tensor_set;

VISTOK_API vistok_status vistok_tensor_set_load(const char* path, vistok_tensor_set** out);
VISTOK_API size_t vistok_tensor_set_count(const vistok_tensor_set* set);
VISTOK_API size_t vistok_tensor_set_length(const vistok_tensor_set* set, size_t index);
VISTOK_API const float* vistok_tensor_set_data(const vistok_tensor_set* set, size_t index);
VISTOK_API void vistok_tensor_set_destroy(vistok_tensor_set* set);

/* ------------------------------------------------------------------------ */
/* Prompt planning                                                          */

typedef struct vistok_image_size {
    uint32_t width;
    uint32_t height;
} vistok_image_size;

typedef struct vistok_video_input {
    int present;
    double duration;
    double native_fps;
    uint64_t frame_count; /* 0 derives it */
    double evs_ratio;
} vistok_video_input;

typedef struct vistok_prompt {
    uint64_t text_tokens;
    const vistok_image_size* images;
    size_t image_count;
    vistok_video_input video;
} vistok_prompt;

typedef struct vistok_token_account {
    uint64_t text_tokens;
    uint64_t image_tokens;
    uint64_t image_tiles;
    uint64_t video_frames;
    uint64_t video_tokens_before_evs;
    uint64_t evs_dropped_tokens;
    uint64_t video_tokens;
    uint64_t total;
} vistok_token_account;

typedef struct vistok_shard_plan vistok_shard_plan;

VISTOK_API vistok_status vistok_account_tokens(const vistok_prompt* prompt, const vistok_tiling_config* cfg,
                                               vistok_token_account* out);
/* Stages 0-4; returns 0 for an unknown stage. */
VISTOK_API uint64_t vistok_stage_max_length(int stage);
VISTOK_API void vistok_fits_stage(uint64_t total, uint64_t stage_max, int* fits, int64_t* headroom);

VISTOK_API vistok_status vistok_plan_shards(uint64_t seq_len, uint64_t tiles, uint32_t ways, vistok_shard_plan** out);
VISTOK_API void vistok_shard_plan_destroy(vistok_shard_plan* plan);
VISTOK_API uint32_t vistok_shard_plan_ways(const vistok_shard_plan* plan);
VISTOK_API vistok_status vistok_shard_plan_range(const vistok_shard_plan* plan, uint32_t rank, uint64_t* start,
                                                 uint64_t* end);
VISTOK_API size_t vistok_shard_plan_shard_size(const vistok_shard_plan* plan, uint32_t rank);
VISTOK_API vistok_status vistok_shard_plan_shard_tiles(const vistok_shard_plan* plan, uint32_t rank, uint64_t* out,
                                                       size_t capacity, size_t* written);
VISTOK_API vistok_status vistok_shard_plan_gather_order(const vistok_shard_plan* plan, uint64_t* out,
                                                        size_t capacity, size_t* written);

#ifdef __cplusplus
}
#endif

#endif /* VISTOK_VISTOK_H */
