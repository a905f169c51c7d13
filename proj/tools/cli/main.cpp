// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//
// vistok: command-line front end over the vistok C API.

#include <CLI11.hpp>

#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "common.hpp"

namespace {

using cli::Json;

const char* const kCommands[] = {"tile", "sample-frames", "evs", "pack", "budget", "quant", "plan"};

// Best-effort view of argv used only when parsing itself fails.
struct RawArgs {
    bool text = false;
    std::string command;
    std::string first_positional;
};

RawArgs scan(int argc, char** argv) {
    RawArgs r;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (r.first_positional.empty() && !a.empty() && a[0] != '-' &&
            !(i > 1 && (std::strcmp(argv[i - 1], "--format") == 0 || std::strcmp(argv[i - 1], "-o") == 0 ||
                        std::strcmp(argv[i - 1], "--output") == 0))) {
            r.first_positional = a;
        }
        if (a == "--format=text" || (a == "--format" && i + 1 < argc && std::strcmp(argv[i + 1], "text") == 0)) {
            r.text = true;
        }
        if (r.command.empty()) {
            for (const char* c : kCommands) {
                if (a == c) r.command = c;
            }
            if (r.command == "quant" && i + 1 < argc) {
                const std::string sub = argv[i + 1];
                if (sub == "calibrate" || sub == "roundtrip") r.command += " " + sub;
            }
        }
    }
    return r;
}

Json envelope(const std::string& command) {
    Json j;
    j["tool_version"] = vistok_version();
    j["schema_version"] = cli::kSchemaVersion;
    j["command"] = command.empty() ? Json(nullptr) : Json(command);
    return j;
}

int report_error(bool text, const std::string& command, const std::string& kind, int exit_code,
                 const std::string& message) {
    if (text) {
        std::cerr << "vistok: " << kind << ": " << message << "\n";
    } else {
        Json j = envelope(command);
        Json e;
        e["kind"] = kind;
        e["exit_code"] = exit_code;
        e["message"] = message;
        j["error"] = std::move(e);
        std::cerr << j.dump(2) << "\n";
    }
    return exit_code;
}

void emit(const cli::Report& rep, const std::string& command, bool text, const std::string& output) {
    Json doc = envelope(command);
    for (auto it = rep.body.begin(); it != rep.body.end(); ++it) doc[it.key()] = it.value();
    std::string rendered;
    if (!text) {
        rendered = doc.dump(2) + "\n";
    } else if (rep.text.empty()) {
        rendered = cli::render_text(doc);
    } else {
        rendered = cli::render_text(envelope(command)) + "\n" + rep.text;
    }
    if (output.empty()) {
        std::cout << rendered;
        std::cout.flush();
        if (!std::cout) throw cli::CliError("io", cli::kExitIo, "failed writing standard output");
        return;
    }
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw cli::CliError("io", cli::kExitIo, "cannot create " + output);
    out << rendered;
    if (!out) throw cli::CliError("io", cli::kExitIo, "failed writing " + output);
}

}  // namespace

int main(int argc, char** argv) {
    const RawArgs raw = scan(argc, argv);

    CLI::App app{"Visual-token accounting, packing, budget control and quantization tools", "vistok"};
    app.set_version_flag("--version", std::string(vistok_version()));
    app.require_subcommand(1, 1);
    // Global options may also follow the subcommand.
    app.fallthrough();

    std::string format = "json";
    std::string output;
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_option("-o,--output", output, "Write the report to this file instead of standard output");

    cli::TileArgs tile;
    auto* tile_cmd = app.add_subcommand("tile", "Tile layout and token count for an image");
    auto* w_opt = tile_cmd->add_option("--width", tile.width, "Image width in pixels");
    auto* h_opt = tile_cmd->add_option("--height", tile.height, "Image height in pixels");
    auto* f_opt = tile_cmd->add_option("--frame", tile.frame, "MMTF frame to resize and slice");
    f_opt->excludes(w_opt)->excludes(h_opt);
    tile_cmd->add_option("--max-tiles", tile.max_tiles, "Tile cap for the grid")->capture_default_str();
    tile_cmd->add_option("--tile-side", tile.tile_side, "Tile side in pixels")->capture_default_str();
    tile_cmd->add_option("--patch-size", tile.patch_size, "Encoder patch side in pixels")->capture_default_str();
    tile_cmd->add_option("--shuffle", tile.shuffle, "Pixel shuffle factor")->capture_default_str();
    tile_cmd->add_flag("--no-thumbnail", tile.no_thumbnail, "Do not add a thumbnail tile");

    cli::SampleFramesArgs frames;
    auto* sf_cmd = app.add_subcommand("sample-frames", "Frame sampling plan for a video");
    sf_cmd->add_option("--duration", frames.duration, "Duration in seconds")->required();
    sf_cmd->add_option("--fps", frames.fps, "Native frame rate")->required();
    sf_cmd->add_option("--frame-count", frames.frame_count, "Native frame count (default: derived)");
    sf_cmd->add_option("--rate", frames.rate, "Sampling rate in frames per second")->capture_default_str();
    sf_cmd->add_option("--cap", frames.cap, "Maximum sampled frames")->capture_default_str();
    sf_cmd->add_option("--tokens-per-frame", frames.tokens_per_frame, "Tokens per sampled frame")->capture_default_str();

    cli::EvsArgs evs;
    auto* evs_cmd = app.add_subcommand("evs", "Temporal patch pruning over a frame sequence");
    evs_cmd->add_option("--frames", evs.frames, "MMTF frames in temporal order")->required();
    evs_cmd->add_option("--ratio", evs.ratio, "Fraction of prunable patches to drop")->required();
    evs_cmd->add_option("--metric", evs.metric, "Change metric")
        ->check(CLI::IsMember({"mad", "cosine"}))
        ->capture_default_str();
    evs_cmd->add_option("--patch", evs.patch, "Patch side in pixels")->capture_default_str();
    evs_cmd->add_option("--mask-out", evs.mask_out, "Write the bit-packed keep mask here");

    cli::PackArgs pack;
    auto* pack_cmd = app.add_subcommand("pack", "Pack samples into fixed-capacity sequences");
    pack_cmd->add_option("--input", pack.input, "JSONL sample records")->required();
    pack_cmd->add_option("--capacity", pack.capacity, "Sequence capacity in tokens")->required();
    pack_cmd->add_option("--buffer", pack.buffer, "Samples buffered per flush")->capture_default_str();

    cli::BudgetArgs budget;
    auto* budget_cmd = app.add_subcommand("budget", "Replay a decode trace under thinking budgets");
    budget_cmd->add_option("--trace", budget.trace, "JSONL decode trace")->required();
    budget_cmd->add_option("--budgets", budget.budgets, "Comma-separated budgets")
        ->delimiter(',')
        ->capture_default_str();
    budget_cmd->add_option("--grace", budget.grace, "Grace tokens after the budget")->capture_default_str();

    auto* quant_cmd = app.add_subcommand("quant", "Quantization simulation");
    quant_cmd->require_subcommand(1, 1);
    cli::QuantCalibrateArgs calib;
    auto* calib_cmd = quant_cmd->add_subcommand("calibrate", "Per-tensor scale and error at that scale");
    calib_cmd->add_option("--input", calib.input, "MMTQ tensor file")->required();
    calib_cmd->add_option("--format", calib.format, "Target format")
        ->check(CLI::IsMember({"e4m3", "nvfp4"}))
        ->capture_default_str();
    cli::QuantRoundtripArgs roundtrip;
    auto* rt_cmd = quant_cmd->add_subcommand("roundtrip", "Fake-quantize tensors and report the error");
    rt_cmd->add_option("--input", roundtrip.input, "MMTQ tensor file")->required();
    rt_cmd->add_option("--spec", roundtrip.spec, "JSON quantization spec")->required();

    cli::PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "Token accounting and context-parallel plan for a prompt");
    plan_cmd->add_option("--prompt", plan.prompt, "JSON prompt description")->required();
    plan_cmd->add_option("--stage", plan.stage, "Training stage to check")->check(CLI::Range(0, 4));
    plan_cmd->add_option("--cp", plan.cp, "Context-parallel ways")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        if (raw.command.empty() && !raw.first_positional.empty()) {
            return report_error(raw.text, "", "unknown_command", cli::kExitUnknownCommand,
                                "unknown command '" + raw.first_positional + "'");
        }
        return report_error(raw.text, raw.command, "usage", cli::kExitUsage, e.what());
    }

    const bool text = format == "text";
    std::string command;
    try {
        cli::Report rep;
        if (*tile_cmd) {
            command = "tile";
            rep = cli::run_tile(tile);
        } else if (*sf_cmd) {
            command = "sample-frames";
            rep = cli::run_sample_frames(frames);
        } else if (*evs_cmd) {
            command = "evs";
            rep = cli::run_evs(evs);
        } else if (*pack_cmd) {
            command = "pack";
            rep = cli::run_pack(pack);
        } else if (*budget_cmd) {
            command = "budget";
            rep = cli::run_budget(budget);
        } else if (*calib_cmd) {
            command = "quant calibrate";
            rep = cli::run_quant_calibrate(calib);
        } else if (*rt_cmd) {
            command = "quant roundtrip";
            rep = cli::run_quant_roundtrip(roundtrip);
        } else if (*plan_cmd) {
            command = "plan";
            rep = cli::run_plan(plan);
        }
        emit(rep, command, text, output);
    } catch (const cli::CliError& e) {
        return report_error(text, command, e.kind(), e.exit_code(), e.what());
    } catch (const std::exception& e) {
        return report_error(text, command, "internal", cli::kExitInternal, e.what());
    }
    return cli::kExitOk;
}
