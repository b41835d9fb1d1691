#!/usr/bin/env python3
"""Generate fixtures/gdrts_delay.csv, a synthetic 100 000-sample loop-delay log.

The log is built bin by bin so its 100-bin histogram over [12.18, 13.20] ms
has fixed, known counts:

  * first bin: 1 sample (the minimum, 12.18 ms exactly)
  * last bin: 3 samples (one of them the maximum, 13.20 ms exactly)
  * mode: bin 41 ([12.5982, 12.6084) ms, the bin overlapping most of
    12.60-12.61 ms), with 6 460 samples

The remaining counts follow a two-component mixture (a narrow main peak near
12.61 ms and a broad right shoulder), scaled and rounded so that they sum to
exactly 100 000 and stay below the mode. Inside each bin, samples are drawn
uniformly away from the bin edges (a quarter bin width of margin), so
floating-point edge placement cannot move a sample between bins. Output is
deterministic (fixed seed) and written with 6 decimals.
"""
import math
import random

N = 100_000
BINS = 100
LO, HI = 12.18, 13.20
MODE_BIN, MODE_COUNT = 41, 6_460
FIRST_COUNT, LAST_COUNT = 1, 3


def shape(i):
    main = math.exp(-0.5 * ((i - 42.0) / 4.0) ** 2)
    shoulder = 0.35 * math.exp(-0.5 * ((i - 58.0) / 12.0) ** 2)
    tail = 0.004
    return main + shoulder + tail


def counts():
    inner = [i for i in range(1, BINS - 1) if i != MODE_BIN]
    budget = N - MODE_COUNT - FIRST_COUNT - LAST_COUNT
    weights = {i: shape(i) for i in inner}
    total = sum(weights.values())
    raw = {i: budget * w / total for i, w in weights.items()}
    c = {i: int(math.floor(v)) for i, v in raw.items()}
    # Hand out the rounding remainder by largest fractional part.
    rest = budget - sum(c.values())
    for i in sorted(inner, key=lambda k: (raw[k] - c[k], -k), reverse=True)[:rest]:
        c[i] += 1
    c[0] = FIRST_COUNT
    c[BINS - 1] = LAST_COUNT
    c[MODE_BIN] = MODE_COUNT
    out = [c[i] for i in range(BINS)]
    assert sum(out) == N
    assert max(out) == MODE_COUNT and out.index(MODE_COUNT) == MODE_BIN
    assert all(v < MODE_COUNT for i, v in enumerate(out) if i != MODE_BIN)
    assert all(v >= 1 for v in out)
    return out


def main():
    rng = random.Random(20240415)
    width = (HI - LO) / BINS
    samples = []
    for i, n in enumerate(counts()):
        left = LO + i * width
        for k in range(n):
            if i == 0 and k == 0:
                samples.append(LO)
            elif i == BINS - 1 and k == 0:
                samples.append(HI)
            else:
                samples.append(left + width * rng.uniform(0.25, 0.75))
    rng.shuffle(samples)
    with open("fixtures/gdrts_delay.csv", "w") as f:
        f.write("delay_ms\n")
        for v in samples:
            f.write(f"{v:.6f}\n")


if __name__ == "__main__":
    main()
