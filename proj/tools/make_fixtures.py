#!/usr/bin/env python3
# Copyright (C) 2026 The vistok Authors
# SPDX-License-Identifier: Apache-2.0
#
# Regenerates the committed CLI fixtures in tests/fixtures. Output is fully
# determined by the fixed seeds below.

import json
import math
import random
import struct
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "fixtures"

THINK_OPEN = 151667
THINK_CLOSE = 151668


def write_mmtf(path, width, height, pixel):
    body = bytearray()
    for y in range(height):
        for x in range(width):
            body.extend(pixel(x, y))
    path.write_bytes(b"MMTF" + struct.pack("<III", width, height, 3) + bytes(body))


def write_mmtq(path, records):
    data = bytearray()
    for values in records:
        data += b"MMTQ" + struct.pack("<I", len(values))
        data += struct.pack("<%df" % len(values), *values)
    path.write_bytes(bytes(data))


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows))


def write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2) + "\n")


def e4m3_value(code):
    sign = -1.0 if code & 0x80 else 1.0
    exp = (code >> 3) & 0xF
    man = code & 0x7
    if exp == 0:
        return sign * man * 2.0 ** -9
    return sign * (1 + man / 8) * 2.0 ** (exp - 7)


def frames():
    # Gradient photo-like frame for raw tiling.
    write_mmtf(OUT / "frame.mmtf", 200, 120, lambda x, y: ((x * 255) // 199, (y * 255) // 119, (x + y) % 256))

    # Four 64x64 frames: static textured background with a 16x16 square
    # moving one patch to the right per frame.
    for f in range(4):
        def px(x, y, f=f):
            if 16 <= y < 32 and f * 16 <= x < f * 16 + 16:
                return (250, 20, 20)
            v = (x * 3 + y * 5) % 64 + 64
            return (v, v, v)

        write_mmtf(OUT / ("evs_%d.mmtf" % f), 64, 64, px)


def samples():
    rng = random.Random(0)
    rows = []
    for i in range(48):
        total = int(math.exp(rng.uniform(math.log(16), math.log(4096))))
        vision = rng.randint(0, total)
        loss = rng.randint(1, total)
        rows.append({"sample_id": "s%03d" % i, "total_tokens": total, "vision_tokens": vision, "loss_tokens": loss})
    write_jsonl(OUT / "samples.jsonl", rows)
    write_jsonl(OUT / "samples_oversize.jsonl", [{"sample_id": "big", "total_tokens": 5000, "vision_tokens": 0, "loss_tokens": 1}])
    (OUT / "samples_malformed.jsonl").write_text('{"sample_id":"a","total_tokens":10}\n')


def traces():
    rng = random.Random(1)
    tokens = [(THINK_OPEN, "open")]
    tokens += [(rng.randint(0, 150000), "none") for _ in range(9000)]
    tokens += [(THINK_CLOSE, "close")]
    tokens += [(rng.randint(0, 150000), "none") for _ in range(40)]
    write_jsonl(OUT / "trace.jsonl", [{"pos": i, "token_id": t, "marker": m} for i, (t, m) in enumerate(tokens)])
    bad = [{"pos": 0, "token_id": 5, "marker": "none"}, {"pos": 2, "token_id": 6, "marker": "none"}]
    write_jsonl(OUT / "trace_malformed.jsonl", bad)


def tensors():
    rng = random.Random(2)
    records = [[rng.gauss(0.0, 2.0) for _ in range(1024)] for _ in range(3)]
    records[1][17] = 37.5
    write_mmtq(OUT / "tensors.bin", records)
    # Every finite E4M3 code (the two NaN encodings are excluded).
    codes = [e4m3_value(c) for c in range(256) if c & 0x7F != 0x7F]
    write_mmtq(OUT / "e4m3_codes.bin", [codes])
    write_mmtq(OUT / "zeros.bin", [[0.0] * 32])
    write_json(OUT / "spec_e4m3.json", {"format": "e4m3", "per_tensor_scale": 1.0})
    write_json(OUT / "spec_nvfp4.json", {"format": "nvfp4", "block_size": 16})


def prompts():
    write_json(OUT / "prompt.json", {
        "text_tokens": 500,
        "images": [{"width": 1024, "height": 512}],
        "video": {"duration": 100.0, "fps": 30.0, "evs_ratio": 0.5},
    })
    write_json(OUT / "empty.json", {"text_tokens": 0, "images": [], "video": None})


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    frames()
    samples()
    traces()
    tensors()
    prompts()


if __name__ == "__main__":
    main()
