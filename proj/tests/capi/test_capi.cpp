// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the exported C interface only; links against the shared library.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "vistok/vistok.h"

TEST_CASE("library info and status names") {
    CHECK(std::string(vistok_version()) == "0.1.0");
    CHECK(std::string(vistok_status_name(VISTOK_OK)) == "ok");
    CHECK(std::string(vistok_status_name(VISTOK_ERR_OVERSIZE_SAMPLE)) == "oversize_sample");
    CHECK(std::string(vistok_status_name(VISTOK_ERR_BUFFER_TOO_SMALL)) == "buffer_too_small");
}

TEST_CASE("errors set the thread-local message and success clears it") {
    vistok_tile_layout layout{};
    CHECK(vistok_layout_image(0, 10, nullptr, &layout) == VISTOK_ERR_INPUT_SHAPE);
    CHECK(std::strlen(vistok_last_error()) > 0);
    CHECK(vistok_layout_image(10, 10, nullptr, &layout) == VISTOK_OK);
    CHECK(std::string(vistok_last_error()).empty());
    CHECK(vistok_layout_image(10, 10, nullptr, nullptr) == VISTOK_ERR_NULL_ARGUMENT);
}

TEST_CASE("tiling through the C interface") {
    vistok_tiling_config cfg;
    vistok_tiling_config_default(&cfg);
    CHECK(cfg.tile_side == 512);
    CHECK(cfg.max_tiles == 12);

    vistok_tile_layout layout{};
    REQUIRE(vistok_layout_image(1024, 512, &cfg, &layout) == VISTOK_OK);
    CHECK(layout.grid_rows == 1);
    CHECK(layout.grid_cols == 2);
    CHECK(layout.total_tokens == 768);

    uint32_t rows = 0, cols = 0;
    REQUIRE(vistok_select_grid(512, 512, nullptr, &rows, &cols) == VISTOK_OK);
    CHECK(rows * cols == 1);

    cfg.tile_side = 500;
    CHECK(vistok_layout_image(10, 10, &cfg, &layout) == VISTOK_ERR_INVALID_CONFIG);

    size_t n = 0;
    REQUIRE(vistok_pixel_shuffle_map(32, 2, nullptr, 0, &n) == VISTOK_OK);
    CHECK(n == 2 * 32 * 32);
    std::vector<uint32_t> small(4);
    CHECK(vistok_pixel_shuffle_map(32, 2, small.data(), small.size(), &n) == VISTOK_ERR_BUFFER_TOO_SMALL);
    CHECK(n == 2 * 32 * 32);
}

TEST_CASE("frames and tile sets") {
    std::vector<uint8_t> rgb(40 * 20 * 3);
    for (size_t i = 0; i < rgb.size(); ++i) rgb[i] = static_cast<uint8_t>(i % 251);
    vistok_frame* frame = nullptr;
    REQUIRE(vistok_frame_create(40, 20, rgb.data(), &frame) == VISTOK_OK);
    CHECK(vistok_frame_width(frame) == 40);
    CHECK(vistok_frame_size_bytes(frame) == rgb.size());
    CHECK(std::memcmp(vistok_frame_data(frame), rgb.data(), rgb.size()) == 0);

    vistok_tiling_config cfg;
    vistok_tiling_config_default(&cfg);
    cfg.tile_side = 32;
    cfg.patch_size = 8;
    vistok_tile_layout layout{};
    vistok_tile_set* set = nullptr;
    REQUIRE(vistok_tile_frame(frame, &cfg, &layout, &set) == VISTOK_OK);
    CHECK(vistok_tile_set_count(set) == layout.total_tiles);
    for (size_t i = 0; i < vistok_tile_set_count(set); ++i) {
        CHECK(vistok_frame_width(vistok_tile_set_get(set, i)) == 32);
    }
    CHECK(vistok_tile_set_get(set, 99) == nullptr);

    vistok_frame* resized = nullptr;
    REQUIRE(vistok_frame_resize(frame, layout.resized_width, layout.resized_height, &resized) == VISTOK_OK);
    vistok_tile_set* direct = nullptr;
    REQUIRE(vistok_slice_tiles(resized, &layout, &direct) == VISTOK_OK);
    REQUIRE(vistok_tile_set_count(direct) == vistok_tile_set_count(set));
    const vistok_frame* a = vistok_tile_set_get(set, 0);
    const vistok_frame* b = vistok_tile_set_get(direct, 0);
    CHECK(std::memcmp(vistok_frame_data(a), vistok_frame_data(b), vistok_frame_size_bytes(a)) == 0);

    vistok_tile_set_destroy(direct);
    vistok_tile_set_destroy(set);
    vistok_frame_destroy(resized);
    vistok_frame_destroy(frame);
    vistok_frame_destroy(nullptr);

    vistok_frame* missing = nullptr;
    CHECK(vistok_frame_load("/nonexistent/frame.mmtf", &missing) == VISTOK_ERR_IO);
    CHECK(missing == nullptr);
}

TEST_CASE("frame plans") {
    vistok_frame_plan* plan = nullptr;
    REQUIRE(vistok_plan_frames(100, 30, 0, 2.0, 128, &plan) == VISTOK_OK);
    CHECK(vistok_frame_plan_size(plan) == 128);
    CHECK(vistok_frame_plan_mode(plan) == VISTOK_SAMPLING_UNIFORM);
    CHECK(vistok_frame_token_count(plan, 256) == 32768);
    vistok_frame_plan_destroy(plan);

    REQUIRE(vistok_plan_frames(30, 30, 0, 2.0, 128, &plan) == VISTOK_OK);
    CHECK(vistok_frame_plan_size(plan) == 60);
    CHECK(vistok_frame_plan_timestamp(plan, 1) == 0.5);
    CHECK(vistok_frame_plan_index(plan, 1) == 15);
    vistok_frame_plan_destroy(plan);

    CHECK(vistok_plan_frames(10, 30, 0, 0.0, 128, &plan) == VISTOK_ERR_INVALID_CONFIG);
}

TEST_CASE("pruning masks") {
    const uint32_t F = 3, R = 2, C = 2;
    std::vector<double> scores = {0.5, 0.1, 0.9, 0.2, 0.3, 0.8, 0.7, 0.05};
    vistok_prune_mask* mask = nullptr;
    REQUIRE(vistok_prune_by_scores(F, R, C, scores.data(), scores.size(), 0.5, &mask) == VISTOK_OK);
    CHECK(vistok_prune_mask_dropped(mask) == 4);
    CHECK(vistok_prune_mask_kept_in_frame(mask, 0) == 4);
    CHECK(vistok_prune_mask_keep(mask, 1, 0, 1) == 0);  // score 0.1
    CHECK(vistok_prune_mask_keep(mask, 1, 1, 0) == 1);  // score 0.9
    CHECK(vistok_prune_mask_keep(mask, 9, 0, 0) == -1);

    size_t n = 0;
    uint8_t bits[2] = {0, 0};
    REQUIRE(vistok_prune_mask_bitpack(mask, bits, 2, &n) == VISTOK_OK);
    CHECK(n == 2);
    CHECK(bits[0] == 0x0F + (0x1 << 4) + (0x4 << 4));  // frame 0 all, frame 1 keeps (0,0),(1,0)
    CHECK(bits[1] == 0x06);                              // frame 2 keeps (0,1),(1,0)

    std::vector<vistok_patch_pos> kept(8);
    REQUIRE(vistok_prune_mask_kept_positions(mask, kept.data(), kept.size(), &n) == VISTOK_OK);
    CHECK(n == 8);

    std::vector<vistok_patch_pos> all;
    for (uint32_t f = 0; f < F; ++f)
        for (uint32_t r = 0; r < R; ++r)
            for (uint32_t c = 0; c < C; ++c) all.push_back({f, r, c});
    std::vector<vistok_patch_pos> out(all.size());
    REQUIRE(vistok_apply_mask(mask, all.data(), all.size(), out.data(), out.size(), &n) == VISTOK_OK);
    CHECK(n == 8);
    CHECK(vistok_apply_mask(mask, all.data(), 3, out.data(), out.size(), &n) != VISTOK_OK);
    vistok_prune_mask_destroy(mask);

    std::vector<float> payload(F * R * C * 2, 1.0f);
    payload[(2 * R * C + 3) * 2] = 5.0f;
    vistok_patch_grid* grid = nullptr;
    REQUIRE(vistok_patch_grid_create(F, R, C, 2, payload.data(), &grid) == VISTOK_OK);
    std::vector<double> s(8);
    REQUIRE(vistok_change_scores(grid, VISTOK_METRIC_MAD, s.data(), s.size(), &n) == VISTOK_OK);
    CHECK(s[7] == 2.0);
    REQUIRE(vistok_prune(grid, 1.0, VISTOK_METRIC_MAD, &mask) == VISTOK_OK);
    CHECK(vistok_prune_mask_kept(mask) == R * C);
    vistok_prune_mask_destroy(mask);
    vistok_patch_grid_destroy(grid);

    uint64_t dropped = 0;
    REQUIRE(vistok_prune_count(0.7, 127 * 256, &dropped) == VISTOK_OK);
    CHECK(dropped == 22758);
}

TEST_CASE("packer") {
    vistok_packer* p = nullptr;
    REQUIRE(vistok_packer_create(16384, 0, &p) == VISTOK_OK);
    REQUIRE(vistok_packer_submit(p, "a", 8000, 100, 10) == VISTOK_OK);
    REQUIRE(vistok_packer_submit(p, "b", 8000, 100, 10) == VISTOK_OK);
    REQUIRE(vistok_packer_submit(p, "c", 384, 0, 10) == VISTOK_OK);
    REQUIRE(vistok_packer_snapshot(p) == VISTOK_OK);
    CHECK(vistok_packer_pack_count(p) == 0);
    CHECK(vistok_packer_leftover_count(p) == 3);
    REQUIRE(vistok_packer_finish(p) == VISTOK_OK);
    REQUIRE(vistok_packer_snapshot(p) == VISTOK_OK);
    REQUIRE(vistok_packer_pack_count(p) == 1);
    vistok_pack_info info{};
    REQUIRE(vistok_packer_pack_info(p, 0, &info) == VISTOK_OK);
    CHECK(info.used_tokens == 16384);
    CHECK(info.sample_count == 3);
    CHECK(std::string(vistok_packer_pack_sample(p, 0, 0)) == "a");
    CHECK(vistok_packer_padding_fraction(p) == 0.0);
    CHECK(vistok_packer_pack_info(p, 5, &info) == VISTOK_ERR_OUT_OF_RANGE);

    CHECK(vistok_packer_submit(p, "huge", 20000, 0, 1) == VISTOK_ERR_OVERSIZE_SAMPLE);
    CHECK(std::string(vistok_last_error()).find("huge") != std::string::npos);
    CHECK(vistok_packer_submit(p, "bad", 10, 11, 1) == VISTOK_ERR_INVALID_SAMPLE);
    vistok_packer_destroy(p);

    const uint64_t lens[] = {9000, 9000, 9000};
    double pad = 0;
    size_t packs = 0;
    REQUIRE(vistok_pack_fifo_padding(lens, 3, 16384, &pad, &packs) == VISTOK_OK);
    CHECK(packs == 3);

    const uint64_t loss[] = {1, 4};
    double w[2], norm = 0;
    REQUIRE(vistok_square_average_weights(loss, 2, w, &norm) == VISTOK_OK);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 0.5);
    CHECK(norm == 3.0);
}

TEST_CASE("budget controller and replay") {
    vistok_budget_config cfg;
    vistok_budget_config_default(&cfg);
    cfg.budget = 2048;
    cfg.grace = 500;
    cfg.think_open = 7;
    cfg.think_close = 8;
    cfg.has_end_of_stream = 1;
    cfg.end_of_stream = 9;
    vistok_budget_controller* ctl = nullptr;
    REQUIRE(vistok_budget_controller_create(&cfg, &ctl) == VISTOK_OK);
    vistok_budget_action act = VISTOK_ACTION_PASS;
    REQUIRE(vistok_budget_on_token(ctl, 7, &act) == VISTOK_OK);
    CHECK(vistok_budget_phase_of(ctl) == VISTOK_PHASE_THINKING);
    int forced_at = 0;
    for (int i = 1; i <= 3000 && forced_at == 0; ++i) {
        REQUIRE(vistok_budget_on_token(ctl, 1, &act) == VISTOK_OK);
        if (act == VISTOK_ACTION_FORCE_INJECT_CLOSE) forced_at = i;
    }
    CHECK(forced_at == 2548);
    CHECK(vistok_budget_forced_close(ctl) == 1);
    CHECK(vistok_budget_thinking_used(ctl) == 2548);
    REQUIRE(vistok_budget_on_token(ctl, 9, &act) == VISTOK_OK);
    CHECK(vistok_budget_phase_of(ctl) == VISTOK_PHASE_DONE);
    CHECK(vistok_budget_on_token(ctl, 1, &act) == VISTOK_ERR_PROTOCOL);
    vistok_budget_controller_destroy(ctl);

    std::vector<int64_t> trace = {7};
    for (int i = 0; i < 3000; ++i) trace.push_back(1);
    trace.push_back(8);
    trace.push_back(2);
    cfg.has_end_of_stream = 0;
    size_t n = 0;
    vistok_budget_summary sum{};
    REQUIRE(vistok_budget_replay(&cfg, trace.data(), trace.size(), nullptr, 0, &n, &sum) == VISTOK_OK);
    CHECK(n == 1 + 2548 + 1 + 1);
    CHECK(sum.thinking_kept == 2548);
    std::vector<int64_t> out(n);
    REQUIRE(vistok_budget_replay(&cfg, trace.data(), trace.size(), out.data(), out.size(), &n, nullptr) == VISTOK_OK);
    CHECK(out[2549] == 8);

    const uint64_t budgets[] = {0, 2048, 4096, 16384};
    vistok_budget_summary rows[4];
    REQUIRE(vistok_budget_sweep(trace.data(), trace.size(), 7, 8, 500, budgets, 4, rows) == VISTOK_OK);
    CHECK(rows[0].output_length == trace.size());
    CHECK(rows[1].forced == 1);
    CHECK(rows[2].forced == 0);
    CHECK(rows[3].unrestricted == 1);
}

TEST_CASE("quantization") {
    for (int c = 0; c < 256; ++c) {
        const auto code = static_cast<uint8_t>(c);
        if ((code & 0x7F) == 0x7F) {
            CHECK(std::isnan(vistok_e4m3_decode(code)));
            continue;
        }
        CHECK(vistok_e4m3_encode(vistok_e4m3_decode(code)) == code);
    }
    CHECK(vistok_e4m3_encode(1e6) == 0x7E);
    CHECK(vistok_format_max(VISTOK_FORMAT_E4M3) == 448.0);
    CHECK(vistok_format_max(VISTOK_FORMAT_NVFP4) == 2688.0);
    uint8_t code = 0;
    CHECK(vistok_e4m3_quantize(1.0, 0.0, &code) == VISTOK_ERR_INVALID_CONFIG);
    double x = 0;
    REQUIRE(vistok_e4m3_dequantize(0x7E, 2.0, &x) == VISTOK_OK);
    CHECK(x == 896.0);
    CHECK(vistok_e2m1_decode(vistok_e2m1_encode(5.0)) == 4.0);

    vistok_calibrator* a = nullptr;
    vistok_calibrator* b = nullptr;
    REQUIRE(vistok_calibrator_create(&a) == VISTOK_OK);
    REQUIRE(vistok_calibrator_create(&b) == VISTOK_OK);
    double scale = 0;
    CHECK(vistok_calibrator_finalize_scale(a, VISTOK_FORMAT_E4M3, &scale) == VISTOK_ERR_DEGENERATE_TENSOR);
    const float t1[] = {1.0f, -224.0f};
    const float t2[] = {896.0f};
    const float bad[] = {NAN};
    REQUIRE(vistok_calibrator_observe(a, t1, 2) == VISTOK_OK);
    REQUIRE(vistok_calibrator_observe(b, t2, 1) == VISTOK_OK);
    CHECK(vistok_calibrator_observe(b, bad, 1) == VISTOK_ERR_CALIBRATION_DATA);
    REQUIRE(vistok_calibrator_merge(a, b) == VISTOK_OK);
    CHECK(vistok_calibrator_amax(a) == 896.0);
    REQUIRE(vistok_calibrator_finalize_scale(a, VISTOK_FORMAT_E4M3, &scale) == VISTOK_OK);
    CHECK(scale == 2.0);
    vistok_calibrator_destroy(a);
    vistok_calibrator_destroy(b);

    double zeros[16] = {};
    uint8_t sc = 0, codes[16];
    REQUIRE(vistok_nvfp4_quantize_block(zeros, 16, 1.0, &sc, codes) == VISTOK_OK);
    double back[16];
    REQUIRE(vistok_nvfp4_dequantize_block(sc, codes, 16, 1.0, back) == VISTOK_OK);
    for (double v : back) CHECK(v == 0.0);

    const float vals[] = {500.0f, -449.0f, 448.0f};
    vistok_quant_spec spec{VISTOK_FORMAT_E4M3, 1.0, 16};
    vistok_quant_report rep{};
    REQUIRE(vistok_quant_error_report(vals, 3, &spec, &rep) == VISTOK_OK);
    CHECK(rep.saturation_count == 2);
    CHECK(rep.max_abs_err == 52.0);

    vistok_tensor_set* ts = nullptr;
    CHECK(vistok_tensor_set_load("/nonexistent.bin", &ts) == VISTOK_ERR_IO);
}

TEST_CASE("planning") {
    vistok_image_size img{1024, 512};
    vistok_prompt prompt{};
    prompt.text_tokens = 100;
    prompt.images = &img;
    prompt.image_count = 1;
    vistok_token_account acc{};
    REQUIRE(vistok_account_tokens(&prompt, nullptr, &acc) == VISTOK_OK);
    CHECK(acc.total == 868);

    vistok_prompt video{};
    video.text_tokens = 500;
    video.video = {1, 100.0, 30.0, 0, 0.5};
    REQUIRE(vistok_account_tokens(&video, nullptr, &acc) == VISTOK_OK);
    CHECK(acc.total == 17012);

    CHECK(vistok_stage_max_length(4) == 311296);
    CHECK(vistok_stage_max_length(9) == 0);
    int fits = 0;
    int64_t headroom = 0;
    vistok_fits_stage(33268, 49152, &fits, &headroom);
    CHECK(fits == 1);
    CHECK(headroom == 15884);

    vistok_shard_plan* plan = nullptr;
    REQUIRE(vistok_plan_shards(10, 7, 2, &plan) == VISTOK_OK);
    uint64_t s = 0, e = 0;
    REQUIRE(vistok_shard_plan_range(plan, 1, &s, &e) == VISTOK_OK);
    CHECK(s == 5);
    CHECK(e == 10);
    CHECK(vistok_shard_plan_shard_size(plan, 0) == 4);
    std::vector<uint64_t> order(7);
    size_t n = 0;
    REQUIRE(vistok_shard_plan_gather_order(plan, order.data(), order.size(), &n) == VISTOK_OK);
    for (size_t i = 0; i < n; ++i) CHECK(order[i] == i);
    vistok_shard_plan_destroy(plan);
    CHECK(vistok_plan_shards(3, 1, 8, &plan) == VISTOK_ERR_INVALID_CONFIG);
}
