// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <set>
#include <sstream>

namespace cli {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

// FNV-1a, used as a content fingerprint for tiles in reports.
std::uint64_t fnv1a(const std::uint8_t* p, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c == ' ' || c == '\t'; });
}

Json layout_json(const vistok_tile_layout& l, const vistok_tiling_config& cfg) {
    const std::uint64_t raw_side = cfg.patch_size == 0 ? 0 : cfg.tile_side / cfg.patch_size;
    Json j;
    j["grid_rows"] = l.grid_rows;
    j["grid_cols"] = l.grid_cols;
    j["resized_width"] = l.resized_width;
    j["resized_height"] = l.resized_height;
    j["has_thumbnail"] = l.has_thumbnail != 0;
    j["tokens_per_tile_before_shuffle"] = raw_side * raw_side;
    j["tokens_per_tile"] = l.tokens_per_tile;
    j["total_tiles"] = l.total_tiles;
    j["total_tokens"] = l.total_tokens;
    return j;
}

Json quant_report_json(const vistok_quant_report& r) {
    Json j;
    j["count"] = r.count;
    j["max_abs_err"] = r.max_abs_err;
    j["mse"] = r.mse;
    j["saturation_count"] = r.saturation_count;
    return j;
}

vistok_quant_format parse_format(const std::string& name) {
    if (name == "e4m3") return VISTOK_FORMAT_E4M3;
    if (name == "nvfp4") return VISTOK_FORMAT_NVFP4;
    throw CliError("invalid_config", kExitInvalidConfig, "unknown quantization format '" + name + "'");
}

TensorSetHandle load_tensors(const std::string& path) {
    TensorSetHandle set;
    check(vistok_tensor_set_load(path.c_str(), set.out()));
    return set;
}

// Error report per record plus their count-weighted combination.
Json quant_reports(const vistok_tensor_set* set, const vistok_quant_spec& spec) {
    vistok_quant_report total{};
    double sq = 0.0;
    Json per_record = Json::array();
    for (std::size_t i = 0; i < vistok_tensor_set_count(set); ++i) {
        vistok_quant_report r{};
        check(vistok_quant_error_report(vistok_tensor_set_data(set, i), vistok_tensor_set_length(set, i), &spec, &r));
        per_record.push_back(quant_report_json(r));
        total.count += r.count;
        total.max_abs_err = std::max(total.max_abs_err, r.max_abs_err);
        total.saturation_count += r.saturation_count;
        sq += r.mse * static_cast<double>(r.count);
    }
    if (total.count != 0) total.mse = sq / static_cast<double>(total.count);
    Json j;
    j["report"] = quant_report_json(total);
    j["per_record"] = std::move(per_record);
    return j;
}

}  // namespace

// ---------------------------------------------------------------------------

Report run_tile(const TileArgs& a) {
    vistok_tiling_config cfg;
    vistok_tiling_config_default(&cfg);
    cfg.tile_side = a.tile_side;
    cfg.patch_size = a.patch_size;
    cfg.max_tiles = a.max_tiles;
    cfg.pixel_shuffle_factor = a.shuffle;
    cfg.include_thumbnail = a.no_thumbnail ? 0 : 1;

    Report rep;
    Json input;
    vistok_tile_layout layout{};
    Json tiles = nullptr;
    if (!a.frame.empty()) {
        FrameHandle frame;
        check(vistok_frame_load(a.frame.c_str(), frame.out()));
        input["source"] = "frame";
        input["frame"] = a.frame;
        input["width"] = vistok_frame_width(frame.get());
        input["height"] = vistok_frame_height(frame.get());
        TileSetHandle set;
        check(vistok_tile_frame(frame.get(), &cfg, &layout, set.out()));
        tiles = Json::array();
        const std::uint32_t grid = layout.grid_rows * layout.grid_cols;
        for (std::size_t i = 0; i < vistok_tile_set_count(set.get()); ++i) {
            const vistok_frame* t = vistok_tile_set_get(set.get(), i);
            Json tj;
            tj["index"] = i;
            const bool thumb = i >= grid;
            tj["kind"] = thumb ? "thumbnail" : "grid";
            tj["row"] = thumb ? 0 : static_cast<std::uint32_t>(i) / layout.grid_cols;
            tj["col"] = thumb ? 0 : static_cast<std::uint32_t>(i) % layout.grid_cols;
            tj["width"] = vistok_frame_width(t);
            tj["height"] = vistok_frame_height(t);
            tj["fnv1a64"] = hex64(fnv1a(vistok_frame_data(t), vistok_frame_size_bytes(t)));
            tiles.push_back(std::move(tj));
        }
    } else {
        if (!a.width || !a.height) usage_error("tile needs --width and --height, or --frame");
        input["source"] = "dimensions";
        input["width"] = *a.width;
        input["height"] = *a.height;
        check(vistok_layout_image(*a.width, *a.height, &cfg, &layout));
    }

    rep.body["input"] = std::move(input);
    Json c;
    c["tile_side"] = cfg.tile_side;
    c["patch_size"] = cfg.patch_size;
    c["max_tiles"] = cfg.max_tiles;
    c["pixel_shuffle_factor"] = cfg.pixel_shuffle_factor;
    c["include_thumbnail"] = cfg.include_thumbnail != 0;
    rep.body["config"] = std::move(c);
    rep.body["layout"] = layout_json(layout, cfg);
    rep.body["tiles"] = std::move(tiles);
    return rep;
}

Report run_sample_frames(const SampleFramesArgs& a) {
    FramePlanHandle plan;
    check(vistok_plan_frames(a.duration, a.fps, a.frame_count, a.rate, a.cap, plan.out()));
    Report rep;
    Json video;
    video["duration"] = a.duration;
    video["native_fps"] = a.fps;
    video["frame_count"] = a.frame_count == 0 ? Json(nullptr) : Json(a.frame_count);
    rep.body["video"] = std::move(video);
    Json policy;
    policy["rate"] = a.rate;
    policy["cap"] = a.cap;
    policy["tokens_per_frame"] = a.tokens_per_frame;
    rep.body["policy"] = std::move(policy);
    rep.body["mode"] = vistok_frame_plan_mode(plan.get()) == VISTOK_SAMPLING_UNIFORM ? "UNIFORM" : "FIXED_RATE";
    const std::size_t n = vistok_frame_plan_size(plan.get());
    rep.body["frames"] = n;
    rep.body["tokens"] = vistok_frame_token_count(plan.get(), a.tokens_per_frame);
    Json indices = Json::array(), stamps = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        indices.push_back(vistok_frame_plan_index(plan.get(), i));
        stamps.push_back(vistok_frame_plan_timestamp(plan.get(), i));
    }
    rep.body["indices"] = std::move(indices);
    rep.body["timestamps"] = std::move(stamps);
    return rep;
}

Report run_evs(const EvsArgs& a) {
    std::vector<FrameHandle> frames;
    std::vector<const vistok_frame*> ptrs;
    for (const auto& path : a.frames) {
        FrameHandle f;
        check(vistok_frame_load(path.c_str(), f.out()));
        ptrs.push_back(f.get());
        frames.push_back(std::move(f));
    }
    PatchGridHandle grid;
    check(vistok_patch_grid_from_frames(ptrs.data(), ptrs.size(), a.patch, grid.out()));
    const vistok_change_metric metric = a.metric == "cosine" ? VISTOK_METRIC_COSINE : VISTOK_METRIC_MAD;
    PruneMaskHandle mask;
    check(vistok_prune(grid.get(), a.ratio, metric, mask.out()));

    const std::uint32_t nf = vistok_patch_grid_frames(grid.get());
    const std::uint32_t rows = vistok_patch_grid_rows(grid.get());
    const std::uint32_t cols = vistok_patch_grid_cols(grid.get());
    const std::uint64_t total = static_cast<std::uint64_t>(nf) * rows * cols;
    const std::uint64_t dropped = vistok_prune_mask_dropped(mask.get());

    Report rep;
    rep.body["frames"] = a.frames;
    rep.body["patch"] = a.patch;
    rep.body["metric"] = a.metric;
    rep.body["ratio"] = a.ratio;
    Json g;
    g["frames"] = nf;
    g["rows"] = rows;
    g["cols"] = cols;
    rep.body["grid"] = std::move(g);
    rep.body["total_tokens"] = total;
    rep.body["prunable_tokens"] = total - static_cast<std::uint64_t>(rows) * cols;
    rep.body["dropped"] = dropped;
    rep.body["kept"] = vistok_prune_mask_kept(mask.get());
    rep.body["reduction"] = total == 0 ? 0.0 : static_cast<double>(dropped) / static_cast<double>(total);
    Json per_frame = Json::array();
    for (std::uint32_t f = 0; f < nf; ++f) per_frame.push_back(vistok_prune_mask_kept_in_frame(mask.get(), f));
    rep.body["kept_per_frame"] = std::move(per_frame);

    if (!a.mask_out.empty()) {
        std::size_t n = 0;
        check(vistok_prune_mask_bitpack(mask.get(), nullptr, 0, &n));
        std::vector<std::uint8_t> bits(n);
        check(vistok_prune_mask_bitpack(mask.get(), bits.data(), bits.size(), &n));
        write_bytes(a.mask_out, bits);
        Json m;
        m["file"] = a.mask_out;
        m["bytes"] = n;
        m["bits"] = total;
        m["order"] = "frame-major, row-major, lsb-first; 1 = kept";
        rep.body["mask"] = std::move(m);
    } else {
        rep.body["mask"] = nullptr;
    }
    return rep;
}

Report run_pack(const PackArgs& a) {
    const auto lines = split_lines(read_text(a.input));
    PackerHandle packer;
    check(vistok_packer_create(a.capacity, a.buffer, packer.out()));
    std::set<std::string> ids;
    std::vector<std::uint64_t> totals;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const std::string where = a.input + ":" + std::to_string(i + 1);
        const Json rec = parse_json(lines[i], where);
        const std::string id = get_string(rec, "sample_id", where);
        const std::uint64_t total = get_count(rec, "total_tokens", where);
        const std::uint64_t vision = get_count(rec, "vision_tokens", where);
        const std::uint64_t loss = get_count(rec, "loss_tokens", where);
        if (!ids.insert(id).second) {
            throw CliError("invalid_sample", kExitInvalidSample, where + ": duplicate sample_id '" + id + "'");
        }
        check(vistok_packer_submit(packer.get(), id.c_str(), total, vision, loss));
        totals.push_back(total);
    }
    check(vistok_packer_finish(packer.get()));
    check(vistok_packer_snapshot(packer.get()));

    Report rep;
    rep.body["input"] = a.input;
    rep.body["capacity"] = a.capacity;
    rep.body["buffer_size"] = a.buffer;
    rep.body["samples"] = totals.size();
    Json packs = Json::array();
    for (std::size_t p = 0; p < vistok_packer_pack_count(packer.get()); ++p) {
        vistok_pack_info info{};
        check(vistok_packer_pack_info(packer.get(), p, &info));
        Json pj;
        pj["index"] = p;
        Json members = Json::array();
        for (std::size_t m = 0; m < info.sample_count; ++m) members.push_back(vistok_packer_pack_sample(packer.get(), p, m));
        pj["sample_ids"] = std::move(members);
        pj["used_tokens"] = info.used_tokens;
        pj["padding_tokens"] = info.padding_tokens;
        pj["vision_tokens"] = info.vision_tokens;
        packs.push_back(std::move(pj));
    }
    rep.body["pack_count"] = packs.size();
    rep.body["padding_report"] = vistok_packer_padding_fraction(packer.get());
    rep.body["packs"] = std::move(packs);
    Json leftover = Json::array();
    for (std::size_t i = 0; i < vistok_packer_leftover_count(packer.get()); ++i) {
        leftover.push_back(vistok_packer_leftover(packer.get(), i));
    }
    rep.body["leftover"] = std::move(leftover);

    double fifo_padding = 0.0;
    std::size_t fifo_packs = 0;
    check(vistok_pack_fifo_padding(totals.data(), totals.size(), a.capacity, &fifo_padding, &fifo_packs));
    Json fifo;
    fifo["pack_count"] = fifo_packs;
    fifo["padding_report"] = fifo_padding;
    rep.body["fifo_baseline"] = std::move(fifo);
    return rep;
}

Report run_budget(const BudgetArgs& a) {
    const auto lines = split_lines(read_text(a.trace));
    std::vector<std::int64_t> tokens;
    std::optional<std::int64_t> open_id, close_id;
    std::set<std::int64_t> plain_ids;
    std::uint64_t blocks = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const std::string where = a.trace + ":" + std::to_string(i + 1);
        const Json rec = parse_json(lines[i], where);
        const std::uint64_t pos = get_count(rec, "pos", where);
        if (pos != tokens.size()) {
            schema_error(where + ": pos " + std::to_string(pos) + " out of sequence, expected " +
                         std::to_string(tokens.size()));
        }
        const auto tit = rec.find("token_id");
        if (tit == rec.end() || !tit->is_number_integer()) schema_error(where + ": field 'token_id' must be an integer");
        const std::int64_t id = tit->get<std::int64_t>();
        const std::string marker = get_string(rec, "marker", where);
        auto bind = [&](std::optional<std::int64_t>& slot, const char* name) {
            if (slot && *slot != id) {
                schema_error(where + ": " + name + " marker uses token " + std::to_string(id) + " but earlier lines use " +
                             std::to_string(*slot));
            }
            slot = id;
        };
        if (marker == "open") {
            bind(open_id, "open");
            ++blocks;
        } else if (marker == "close") {
            bind(close_id, "close");
        } else if (marker == "none") {
            plain_ids.insert(id);
        } else {
            schema_error(where + ": marker must be none, open or close");
        }
        tokens.push_back(id);
    }
    if (open_id && close_id && *open_id == *close_id) schema_error(a.trace + ": open and close markers share a token id");
    for (const auto* m : {&open_id, &close_id}) {
        if (*m && plain_ids.count(**m)) {
            schema_error(a.trace + ": token " + std::to_string(**m) + " appears both as a marker and as plain text");
        }
    }
    // A marker missing from the trace gets an id no token in the trace uses.
    auto unused_id = [&](std::optional<std::int64_t> avoid) {
        std::int64_t id = -1;
        while (plain_ids.count(id) || id == avoid || id == open_id || id == close_id) --id;
        return id;
    };
    const std::int64_t think_open = open_id ? *open_id : unused_id(std::nullopt);
    const std::int64_t think_close = close_id ? *close_id : unused_id(think_open);

    std::vector<vistok_budget_summary> rows(a.budgets.size());
    check(vistok_budget_sweep(tokens.data(), tokens.size(), think_open, think_close, a.grace, a.budgets.data(),
                              a.budgets.size(), rows.data()));

    Report rep;
    Json trace;
    trace["file"] = a.trace;
    trace["tokens"] = tokens.size();
    trace["think_open"] = open_id ? Json(*open_id) : Json(nullptr);
    trace["think_close"] = close_id ? Json(*close_id) : Json(nullptr);
    trace["blocks"] = blocks;
    rep.body["trace"] = std::move(trace);
    rep.body["grace"] = a.grace;
    Json out = Json::array();
    std::vector<std::vector<std::string>> table;
    for (const auto& s : rows) {
        Json r;
        r["budget"] = s.budget;
        r["unrestricted"] = s.unrestricted != 0;
        r["forced"] = s.forced != 0;
        r["soft_close_requested"] = s.soft_close_requested != 0;
        r["thinking_total"] = s.thinking_total;
        r["thinking_kept"] = s.thinking_kept;
        r["answer_offset"] = s.answer_offset;
        r["output_length"] = s.output_length;
        out.push_back(std::move(r));
        table.push_back({std::to_string(s.budget), s.unrestricted ? "unrestricted" : "capped",
                         std::to_string(s.thinking_total), std::to_string(s.thinking_kept), s.forced ? "yes" : "no",
                         s.soft_close_requested ? "yes" : "no", std::to_string(s.answer_offset),
                         std::to_string(s.output_length)});
    }
    rep.body["rows"] = std::move(out);
    rep.text = render_table({"budget", "mode", "thinking", "kept", "forced", "soft_close", "answer_at", "output"}, table);
    return rep;
}

Report run_quant_calibrate(const QuantCalibrateArgs& a) {
    const vistok_quant_format format = parse_format(a.format);
    const TensorSetHandle set = load_tensors(a.input);
    CalibratorHandle cal;
    check(vistok_calibrator_create(cal.out()));
    for (std::size_t i = 0; i < vistok_tensor_set_count(set.get()); ++i) {
        check(vistok_calibrator_observe(cal.get(), vistok_tensor_set_data(set.get(), i),
                                        vistok_tensor_set_length(set.get(), i)));
    }
    double scale = 0.0;
    check(vistok_calibrator_finalize_scale(cal.get(), format, &scale));
    const vistok_quant_spec spec{format, scale, 16};
    Json reports = quant_reports(set.get(), spec);

    Report rep;
    rep.body["input"] = a.input;
    rep.body["format"] = a.format;
    rep.body["records"] = vistok_tensor_set_count(set.get());
    rep.body["samples_seen"] = vistok_calibrator_samples(cal.get());
    rep.body["amax"] = vistok_calibrator_amax(cal.get());
    rep.body["format_max"] = vistok_format_max(format);
    rep.body["scale"] = scale;
    rep.body["report"] = std::move(reports["report"]);
    return rep;
}

Report run_quant_roundtrip(const QuantRoundtripArgs& a) {
    const Json spec_json = parse_json(read_text(a.spec), a.spec);
    const std::string format_name = get_string(spec_json, "format", a.spec);
    const vistok_quant_format format = parse_format(format_name);
    std::uint64_t block = 16;
    if (spec_json.contains("block_size")) block = get_count(spec_json, "block_size", a.spec);

    const TensorSetHandle set = load_tensors(a.input);
    double scale = 1.0;
    std::string source = "spec";
    if (spec_json.contains("per_tensor_scale") && !spec_json["per_tensor_scale"].is_null()) {
        scale = get_number(spec_json, "per_tensor_scale", a.spec);
    } else {
        CalibratorHandle cal;
        check(vistok_calibrator_create(cal.out()));
        for (std::size_t i = 0; i < vistok_tensor_set_count(set.get()); ++i) {
            check(vistok_calibrator_observe(cal.get(), vistok_tensor_set_data(set.get(), i),
                                            vistok_tensor_set_length(set.get(), i)));
        }
        check(vistok_calibrator_finalize_scale(cal.get(), format, &scale));
        source = "calibrated";
    }
    const vistok_quant_spec spec{format, scale, static_cast<std::uint32_t>(block)};
    Json reports = quant_reports(set.get(), spec);

    Report rep;
    rep.body["input"] = a.input;
    Json s;
    s["format"] = format_name;
    s["per_tensor_scale"] = scale;
    s["scale_source"] = source;
    s["block_size"] = format == VISTOK_FORMAT_NVFP4 ? Json(block) : Json(nullptr);
    rep.body["spec"] = std::move(s);
    rep.body["records"] = vistok_tensor_set_count(set.get());
    rep.body["report"] = std::move(reports["report"]);
    rep.body["per_record"] = std::move(reports["per_record"]);
    return rep;
}

Report run_plan(const PlanArgs& a) {
    const Json pj = parse_json(read_text(a.prompt), a.prompt);
    if (!pj.is_object()) schema_error(a.prompt + ": expected an object");
    vistok_prompt prompt{};
    prompt.text_tokens = pj.contains("text_tokens") ? get_count(pj, "text_tokens", a.prompt) : 0;
    std::vector<vistok_image_size> images;
    if (pj.contains("images")) {
        const Json& arr = pj["images"];
        if (!arr.is_array()) schema_error(a.prompt + ": field 'images' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = a.prompt + ": images[" + std::to_string(i) + "]";
            const std::uint64_t w = get_count(arr[i], "width", where), h = get_count(arr[i], "height", where);
            if (w > UINT32_MAX || h > UINT32_MAX) schema_error(where + ": dimension too large");
            images.push_back({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)});
        }
    }
    prompt.images = images.data();
    prompt.image_count = images.size();
    if (pj.contains("video") && !pj["video"].is_null()) {
        const Json& v = pj["video"];
        const std::string where = a.prompt + ": video";
        prompt.video.present = 1;
        prompt.video.duration = get_number(v, "duration", where);
        prompt.video.native_fps = get_number(v, "fps", where);
        prompt.video.frame_count = v.contains("frame_count") ? get_count(v, "frame_count", where) : 0;
        prompt.video.evs_ratio = v.contains("evs_ratio") ? get_number(v, "evs_ratio", where) : 0.0;
    }

    vistok_token_account acc{};
    check(vistok_account_tokens(&prompt, nullptr, &acc));

    Report rep;
    Json summary;
    summary["file"] = a.prompt;
    summary["text_tokens"] = prompt.text_tokens;
    summary["images"] = images.size();
    summary["video"] = prompt.video.present != 0;
    rep.body["prompt"] = std::move(summary);

    vistok_tiling_config cfg;
    vistok_tiling_config_default(&cfg);
    Json account;
    account["text_tokens"] = acc.text_tokens;
    Json layouts = Json::array();
    for (const auto& img : images) {
        vistok_tile_layout l{};
        check(vistok_layout_image(img.width, img.height, &cfg, &l));
        Json lj;
        lj["width"] = img.width;
        lj["height"] = img.height;
        lj["grid_rows"] = l.grid_rows;
        lj["grid_cols"] = l.grid_cols;
        lj["has_thumbnail"] = l.has_thumbnail != 0;
        lj["total_tiles"] = l.total_tiles;
        lj["total_tokens"] = l.total_tokens;
        layouts.push_back(std::move(lj));
    }
    account["images"] = std::move(layouts);
    account["image_tokens"] = acc.image_tokens;
    account["image_tiles"] = acc.image_tiles;
    account["video_frames"] = acc.video_frames;
    account["video_tokens_before_evs"] = acc.video_tokens_before_evs;
    account["evs_dropped_tokens"] = acc.evs_dropped_tokens;
    account["video_tokens"] = acc.video_tokens;
    account["vision_tiles"] = acc.image_tiles + acc.video_frames;
    account["total"] = acc.total;
    rep.body["account"] = std::move(account);

    std::vector<int> stages = {1, 2, 4};
    if (a.stage) stages = {*a.stage};
    Json fits = Json::array();
    for (int s : stages) {
        const std::uint64_t max_len = vistok_stage_max_length(s);
        if (max_len == 0) {
            throw CliError("invalid_config", kExitInvalidConfig, "unknown training stage " + std::to_string(s));
        }
        int ok = 0;
        std::int64_t headroom = 0;
        vistok_fits_stage(acc.total, max_len, &ok, &headroom);
        Json f;
        f["stage"] = s;
        f["max_length"] = max_len;
        f["fits"] = ok != 0;
        f["headroom"] = headroom;
        fits.push_back(std::move(f));
    }
    rep.body["stages"] = std::move(fits);

    // An empty or very short prompt has nothing to split across ranks.
    if (a.cp == 0 || acc.total >= a.cp) {
        ShardPlanHandle plan;
        check(vistok_plan_shards(acc.total, acc.image_tiles + acc.video_frames, a.cp, plan.out()));
        Json sp;
        sp["ways"] = vistok_shard_plan_ways(plan.get());
        Json ranges = Json::array(), shards = Json::array();
        for (std::uint32_t r = 0; r < a.cp; ++r) {
            std::uint64_t s = 0, e = 0;
            check(vistok_shard_plan_range(plan.get(), r, &s, &e));
            ranges.push_back(Json::array({s, e}));
            std::vector<std::uint64_t> tiles(vistok_shard_plan_shard_size(plan.get(), r));
            std::size_t n = 0;
            check(vistok_shard_plan_shard_tiles(plan.get(), r, tiles.data(), tiles.size(), &n));
            shards.push_back(tiles);
        }
        sp["sequence_ranges"] = std::move(ranges);
        sp["vision_shards"] = std::move(shards);
        std::size_t n = 0;
        check(vistok_shard_plan_gather_order(plan.get(), nullptr, 0, &n));
        std::vector<std::uint64_t> order(n);
        check(vistok_shard_plan_gather_order(plan.get(), order.data(), order.size(), &n));
        sp["gather_order"] = order;
        rep.body["shard_plan"] = std::move(sp);
    } else {
        rep.body["shard_plan"] = nullptr;
    }
    return rep;
}

}  // namespace cli
