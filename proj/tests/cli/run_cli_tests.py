#!/usr/bin/env python3
# Copyright (C) 2026 The vistok Authors
# SPDX-License-Identifier: Apache-2.0
#
# End-to-end checks for the vistok CLI: every documented command runs twice
# with byte-identical output, reports validate against the shipped schemas,
# and each error class exits with its own code and a structured error.
#
# usage: run_cli_tests.py VISTOK_BINARY FIXTURE_DIR SCHEMA_DIR WORK_DIR

import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema

BIN, FIX, SCHEMAS, WORK = (Path(a).resolve() for a in sys.argv[1:5])
WORK.mkdir(parents=True, exist_ok=True)

failures = []


def run(args, env_extra=None):
    env = dict(os.environ)
    env.update(env_extra or {})
    p = subprocess.run([str(BIN)] + args, cwd=FIX, capture_output=True, env=env)
    return p.returncode, p.stdout, p.stderr


def schema(name):
    return json.loads((SCHEMAS / (name + ".schema.json")).read_text())


def record(name, ok, detail=""):
    print("%s %s%s" % ("PASS" if ok else "FAIL", name, (" -- " + detail) if detail and not ok else ""))
    if not ok:
        failures.append(name)


def check_command(name, args, schema_name, expect=None, env_extra=None):
    rc1, out1, err1 = run(args, env_extra)
    rc2, out2, _ = run(args, env_extra)
    if rc1 != 0:
        record(name, False, "exit %d: %s" % (rc1, err1.decode(errors="replace")))
        return None
    if out1 != out2 or rc2 != 0:
        record(name, False, "output differs between runs")
        return None
    doc = json.loads(out1)
    try:
        jsonschema.validate(doc, schema(schema_name))
    except jsonschema.ValidationError as e:
        record(name, False, "schema: " + e.message)
        return None
    if expect is not None:
        problem = expect(doc)
        if problem:
            record(name, False, problem)
            return None
    text1 = run(["--format", "text"] + args, env_extra)
    text2 = run(["--format", "text"] + args, env_extra)
    if text1[0] != 0 or text1[1] != text2[1] or not text1[1]:
        record(name, False, "text output missing or not deterministic")
        return None
    record(name, True)
    return doc


def check_error(name, args, exit_code, kind):
    rc, out, err = run(args)
    if rc != exit_code:
        record(name, False, "exit %d, expected %d" % (rc, exit_code))
        return
    if out:
        record(name, False, "unexpected stdout on failure")
        return
    try:
        doc = json.loads(err)
        jsonschema.validate(doc, schema("error"))
    except (ValueError, jsonschema.ValidationError) as e:
        record(name, False, "stderr is not a valid error object: %s" % e)
        return
    if doc["error"]["kind"] != kind or doc["error"]["exit_code"] != exit_code:
        record(name, False, "got kind %s" % doc["error"]["kind"])
        return
    record(name, True)


def expect_eq(path, value):
    def check(doc):
        cur = doc
        for key in path:
            cur = cur[key]
        return None if cur == value else "%s = %r, expected %r" % ("/".join(map(str, path)), cur, value)
    return check


def all_of(*checks):
    def check(doc):
        for c in checks:
            problem = c(doc)
            if problem:
                return problem
        return None
    return check


EVS_FRAMES = ["evs_%d.mmtf" % i for i in range(4)]
mask_path = str(WORK / "mask.bin")

check_command("tile dimensions", ["tile", "--width", "1024", "--height", "512"], "tile",
              all_of(expect_eq(["layout", "total_tokens"], 768), expect_eq(["layout", "tokens_per_tile"], 256)))
check_command("tile options", ["tile", "--width", "3000", "--height", "1000", "--max-tiles", "6", "--tile-side", "448"],
              "tile", expect_eq(["config", "max_tiles"], 6))
check_command("tile frame", ["tile", "--frame", "frame.mmtf"], "tile",
              lambda d: None if len(d["tiles"]) == d["layout"]["total_tiles"] else "tile list does not match layout")
check_command("sample-frames fixed", ["sample-frames", "--duration", "30", "--fps", "30"], "sample-frames",
              all_of(expect_eq(["frames"], 60), expect_eq(["mode"], "FIXED_RATE")))
check_command("sample-frames uniform", ["sample-frames", "--duration", "100", "--fps", "30"], "sample-frames",
              all_of(expect_eq(["frames"], 128), expect_eq(["mode"], "UNIFORM"), expect_eq(["tokens"], 32768)))
check_command("evs mad", ["evs", "--frames"] + EVS_FRAMES + ["--ratio", "0.5", "--mask-out", mask_path], "evs",
              all_of(expect_eq(["dropped"], 24), expect_eq(["kept_per_frame", 0], 16)))
mask_a = Path(mask_path).read_bytes()
check_command("evs cosine", ["evs", "--frames"] + EVS_FRAMES + ["--ratio", "0.75", "--metric", "cosine"], "evs",
              expect_eq(["dropped"], 36))
one = run(["evs", "--frames"] + EVS_FRAMES + ["--ratio", "0.5", "--mask-out", mask_path], {"MMTF_THREADS": "1"})
many = run(["evs", "--frames"] + EVS_FRAMES + ["--ratio", "0.5", "--mask-out", mask_path], {"MMTF_THREADS": "8"})
record("evs thread count does not change output",
       one[0] == 0 and one[1] == many[1] and Path(mask_path).read_bytes() == mask_a and len(mask_a) == 8)
check_command("pack", ["pack", "--input", "samples.jsonl", "--capacity", "4096"], "pack",
              lambda d: None if d["padding_report"] <= d["fifo_baseline"]["padding_report"] else "worse than FIFO")
check_command("pack small buffer", ["pack", "--input", "samples.jsonl", "--capacity", "4096", "--buffer", "5"], "pack")
check_command("budget", ["budget", "--trace", "trace.jsonl", "--budgets", "2048,4096,8192,12288", "--grace", "500"],
              "budget", all_of(expect_eq(["rows", 0, "thinking_kept"], 2548), expect_eq(["rows", 3, "forced"], False)))
check_command("budget unrestricted", ["budget", "--trace", "trace.jsonl", "--budgets", "0,16384"], "budget",
              all_of(expect_eq(["rows", 0, "output_length"], 9042), expect_eq(["rows", 1, "unrestricted"], True)))
check_command("quant calibrate e4m3", ["quant", "calibrate", "--input", "tensors.bin", "--format", "e4m3"],
              "quant-calibrate", expect_eq(["scale"], 37.5 / 448))
check_command("quant calibrate nvfp4", ["quant", "calibrate", "--input", "tensors.bin", "--format", "nvfp4"],
              "quant-calibrate", expect_eq(["format_max"], 6 * 448))
check_command("quant roundtrip codebook", ["quant", "roundtrip", "--input", "e4m3_codes.bin", "--spec", "spec_e4m3.json"],
              "quant-roundtrip", all_of(expect_eq(["report", "max_abs_err"], 0.0), expect_eq(["report", "count"], 254)))
check_command("quant roundtrip nvfp4", ["quant", "roundtrip", "--input", "tensors.bin", "--spec", "spec_nvfp4.json"],
              "quant-roundtrip", expect_eq(["spec", "scale_source"], "calibrated"))
check_command("plan empty", ["plan", "--prompt", "empty.json"], "plan",
              all_of(expect_eq(["account", "total"], 0),
                     lambda d: None if all(s["fits"] for s in d["stages"]) else "empty prompt must fit every stage"))
check_command("plan mixed", ["plan", "--prompt", "prompt.json", "--stage", "2", "--cp", "8"], "plan",
              all_of(expect_eq(["account", "total"], 500 + 768 + 16512), expect_eq(["shard_plan", "ways"], 8)))

out_file = WORK / "report.json"
rc, out, _ = run(["--output", str(out_file), "tile", "--width", "10", "--height", "10"])
record("output file", rc == 0 and out == b"" and json.loads(out_file.read_text())["command"] == "tile")

check_error("error unknown command", ["transmogrify"], 13, "unknown_command")
check_error("error usage", ["tile", "--width", "abc"], 2, "usage")
check_error("error missing file", ["pack", "--input", "no_such_file.jsonl", "--capacity", "10"], 10, "io")
check_error("error malformed sample", ["pack", "--input", "samples_malformed.jsonl", "--capacity", "100"], 12, "schema")
check_error("error malformed trace", ["budget", "--trace", "trace_malformed.jsonl"], 12, "schema")
check_error("error oversize sample", ["pack", "--input", "samples_oversize.jsonl", "--capacity", "4096"], 5,
            "oversize_sample")
check_error("error bad frame", ["tile", "--frame", "prompt.json"], 11, "format")
check_error("error invalid config", ["tile", "--width", "10", "--height", "10", "--tile-side", "500"], 3,
            "invalid_config")
check_error("error input shape", ["tile", "--width", "0", "--height", "10"], 4, "input_shape")
check_error("error degenerate tensor", ["quant", "calibrate", "--input", "zeros.bin"], 9, "degenerate_tensor")
check_error("error shards", ["plan", "--prompt", "prompt.json", "--cp", "0"], 3, "invalid_config")

rc, _, err = run(["tile", "--width", "0", "--height", "1", "--format", "text"])
record("text errors are plain", rc == 4 and err.decode().startswith("vistok: input_shape:"))

print("%d failure(s)" % len(failures))
sys.exit(1 if failures else 0)
