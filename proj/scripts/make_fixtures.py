#!/usr/bin/env python3
"""Generate the vendored case-study ARFF fixtures under data/.

Each dataset reproduces the instance/feature/class-count shape of its
published counterpart but is fully synthetic. Three of the four (diabetes,
heart, breast) draw instances from five generic strata engineered to yield
distinct IRT profiles once a model zoo answers them:

  easy        far from the class boundary               -> low difficulty
  moderate    near the boundary but clearly labeled     -> mid difficulty
  blob        both classes drawn from one shared cloud  -> flat ICC, high guessing
  hard        weak margin, solvable by strong models    -> high difficulty, low guessing
  exception   feature vector from the opposite class's
              easy shell, label kept                    -> answered by (almost) nobody

The ilpd stand-in uses a finer-grained profile (see ILPD_PROFILE) because it
is the dataset the guessing-extreme partitions are stress-tested on: most of
the positive class is placed on or beyond the class boundary so that the
bottom of the guessing order is almost entirely positive, while the negative
class stays broadly answerable. Stratum entries there carry an optional
rejection window on signed boundary depth, and instance ids are assigned
segment-by-segment so that tie-breaking on id inside the partition sort has a
controlled composition.
"""

import argparse
from pathlib import Path

import numpy as np

DATASETS = {
    # name: (n_neg, n_pos, n_features, informative, per-stratum fractions)
    "diabetes": (500, 268, 8, 4,
                 {"easy": 0.40, "moderate": 0.275, "blob": 0.10, "hard": 0.125, "exception": 0.10}),
    "heart": (150, 120, 13, 5,
              {"easy": 0.35, "moderate": 0.25, "blob": 0.10, "hard": 0.15, "exception": 0.15}),
    "breast": (458, 241, 9, 4,
               {"easy": 0.45, "moderate": 0.25, "blob": 0.10, "hard": 0.10, "exception": 0.10}),
}

SEEDS = {"diabetes": 20240501, "heart": 20240502, "ilpd": 20240503, "breast": 20240504}

# ilpd profile. Per stratum: (fraction, scale, sd, side, depth_window)
#   side: +1 keeps the stratum on its own class's side of the boundary,
#         -1 pushes it across, 0 centers it on the boundary.
#   depth_window: optional [lo, hi] acceptance window on signed depth
#         (mean of informative dims times the direction pattern; positive
#         values point into positive-class territory).
ILPD_PROFILE = {
    "d": 10,
    "k": 3,
    "noise_sd": 3.0,
    "neg": [
        ("easy",           0.3005, 1.00, 0.90,  1, (-2.4, -0.55)),
        ("moderate",       0.2212, 0.25, 0.50,  1, (-0.45, -0.05)),
        ("rim",            0.2788, 0.18, 0.38, -1, None),
        ("diffuse",        0.1995, 0.00, 0.60,  0, (-0.35, None)),
    ],
    "pos": [
        ("deep_exception", 0.3114, 1.00, 0.75, -1, (-2.4, -0.55)),
        ("near_exception", 0.2874, 0.22, 0.30, -1, (-0.40, -0.05)),
        ("gradient",       0.1198, 0.55, 0.50,  1, (0.20, 0.90)),
        ("shelf",          0.2814, 0.95, 0.45,  1, None),
    ],
    # id-order segments; rows are emitted segment by segment, shuffled within
    "segments": [
        ["deep_exception"],
        ["near_exception"],
        ["easy", "moderate", "rim", "diffuse"],
        ["gradient", "shelf"],
    ],
}


def largest_remainder(fracs, total):
    """Integer stratum counts summing exactly to total."""
    raw = {k: v * total for k, v in fracs.items()}
    counts = {k: int(np.floor(v)) for k, v in raw.items()}
    short = total - sum(counts.values())
    order = sorted(raw, key=lambda k: raw[k] - counts[k], reverse=True)
    for k in order[:short]:
        counts[k] += 1
    return counts


def sample_row(rng, stratum, sign, direction, d, k):
    x = rng.normal(0.0, 1.0, d)
    if stratum == "easy":
        x[:k] = sign * 2.0 * direction + rng.normal(0.0, 0.6, k)
    elif stratum == "moderate":
        x[:k] = sign * 1.1 * direction + rng.normal(0.0, 0.8, k)
    elif stratum == "hard":
        x[:k] = sign * 0.45 * direction + rng.normal(0.0, 1.0, k)
    elif stratum == "blob":
        x[:k] = rng.normal(0.0, 0.5, k)
    elif stratum == "exception":
        x[:k] = -sign * 2.0 * direction + rng.normal(0.0, 0.5, k)
    else:
        raise ValueError(stratum)
    return x


def make_dataset(name, n_neg, n_pos, d, k, fracs, seed):
    rng = np.random.default_rng(seed)
    direction = np.array([1.0 if i % 2 == 0 else -1.0 for i in range(k)])
    rows = []
    for label, count, sign in (("neg", n_neg, -1.0), ("pos", n_pos, 1.0)):
        counts = largest_remainder(fracs, count)
        for stratum, c in counts.items():
            for _ in range(c):
                rows.append((sample_row(rng, stratum, sign, direction, d, k), label))
    rng.shuffle(rows)
    return rows


def make_profiled(profile, n_neg, n_pos, seed):
    rng = np.random.default_rng(seed)
    d, k = profile["d"], profile["k"]
    noise_sd = profile["noise_sd"]
    direction = np.array([1.0 if i % 2 == 0 else -1.0 for i in range(k)])
    made = {}
    for label, count, sign in (("neg", n_neg, -1.0), ("pos", n_pos, 1.0)):
        fracs = {name: frac for name, frac, *_ in profile[label]}
        counts = largest_remainder(fracs, count)
        for name, _frac, scale, sd, side, window in profile[label]:
            batch = []
            for _ in range(counts[name]):
                x = rng.normal(0.0, noise_sd, d)
                while True:
                    x[:k] = side * sign * scale * direction + rng.normal(0.0, sd, k)
                    if window is None:
                        break
                    depth = float(np.mean(x[:k] * direction))
                    lo, hi = window
                    if (lo is None or depth >= lo) and (hi is None or depth <= hi):
                        break
                batch.append((x, label))
            made[name] = batch
    rows = []
    for segment in profile["segments"]:
        block = []
        for name in segment:
            block.extend(made.pop(name))
        rng.shuffle(block)
        rows.extend(block)
    assert not made, f"strata not emitted: {list(made)}"
    return rows


def write_arff(path, name, rows, d):
    lines = [f"% synthetic stand-in shaped like the {name} case study", f"@relation {name}_synthetic", ""]
    for i in range(d):
        lines.append(f"@attribute f{i + 1} numeric")
    lines.append("@attribute class {neg,pos}")
    lines.append("")
    lines.append("@data")
    for x, label in rows:
        lines.append(",".join(f"{v:.6f}" for v in x) + "," + label)
    path.write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=Path(__file__).resolve().parent.parent / "data", type=Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, (n_neg, n_pos, d, k, fracs) in DATASETS.items():
        rows = make_dataset(name, n_neg, n_pos, d, k, fracs, SEEDS[name])
        write_arff(args.out / f"{name}.arff", name, rows, d)
        print(f"{name}: {len(rows)} rows ({n_neg} neg / {n_pos} pos), {d} features")
    rows = make_profiled(ILPD_PROFILE, 416, 167, SEEDS["ilpd"])
    write_arff(args.out / "ilpd.arff", "ilpd", rows, ILPD_PROFILE["d"])
    print(f"ilpd: {len(rows)} rows (416 neg / 167 pos), {ILPD_PROFILE['d']} features")


if __name__ == "__main__":
    main()
