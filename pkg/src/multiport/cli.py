"""Command-line front end.

Subcommands reproduce the package's headline computations as delimited data
tables (CSV or JSON) with optional rendered figures:

  hom        coincidence dip on the balanced beamsplitter
  dist-scan  transition probabilities vs wave-packet delay
  scatter    (NM, CV) statistics of Haar-random interferometers
  suppress   suppression-law certification sweep for a mode permutation
  validate   classify a sample batch (or a generated one) against the
             random-matrix predictions

Exit codes: 0 success, 1 usage error, 2 numerical-consistency failure,
3 certification failure (a predicted-suppressed event with probability
>= 1e-10).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from itertools import combinations

import numpy as np

from .correlations import rmt_prediction, summary
from .errors import MultiportError, NumericalConsistencyError
from .interference import (
    ParticleClass,
    WavePacketTrain,
    gram_from_wave_packets,
    hom_dip_curve,
    transition_probability_partial,
)
from .sampling import (
    SampleBatch,
    classify,
    enumerate_distribution,
    estimate_correlations,
    sample_distinguishable_direct,
    sample_exact,
)
from .suppression import SUPPRESSION_TOL, certify
from .unitaries import (
    UNITARITY_TOL,
    ModePermutation,
    Unitary,
    haar_random_unitary,
)

CERTIFICATION_THRESHOLD = 1e-10

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_CERTIFICATION = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; the contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def parse_grid(spec: str) -> np.ndarray:
    """Parse "start:stop:steps" into a linspace; all values must be >= 0."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:steps, got {spec!r}")
    start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1:
        raise ValueError(f"grid needs at least 1 step, got {steps}")
    grid = np.linspace(start, stop, steps)
    if np.any(grid < 0):
        raise ValueError("grid values must be >= 0")
    return grid


def parse_ports(spec: str) -> list:
    return [int(tok) for tok in spec.split(",") if tok.strip()]


def parse_permutation(spec: str, m: int) -> ModePermutation:
    """Cycle-notation string like "(1 2)(3 4)"; fixed points may be omitted."""
    body = spec.strip()
    if body and not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", body):
        raise ValueError(f"cannot parse permutation {spec!r}")
    cycles = [tuple(int(t) for t in re.split(r"[\s,]+", grp.strip()) if t)
              for grp in re.findall(r"\(([^()]*)\)", body)]
    return ModePermutation.from_cycles(m, cycles)


def _write_table(rows: list, header: list, fmt: str, out_path: str | None) -> None:
    """Emit a table as CSV (with header row) or JSON (list of objects)."""
    if fmt == "json":
        text = json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["%.17g" % v if isinstance(v, float) else v for v in row])
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_json(payload, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_unitary(args, m: int | None = None) -> Unitary:
    if args.unitary:
        with open(args.unitary) as fh:
            u = Unitary.from_json(fh.read(), tol=args.tol_unitary)
        if m is not None and u.m != m:
            raise ValueError(f"unitary is {u.m}x{u.m} but --modes is {m}")
        return u
    if m is None:
        raise ValueError("need --modes or --unitary")
    return haar_random_unitary(m, seed=args.seed)


def cmd_hom(args) -> int:
    grid = parse_grid(args.grid)
    pb = hom_dip_curve(grid, ParticleClass.BOSON)
    pf = hom_dip_curve(grid, ParticleClass.FERMION)
    rows = [(float(x), float(b), float(f)) for x, b, f in zip(grid, pb, pf)]
    _write_table(rows, ["delay", "p_boson", "p_fermion"], args.format, args.out)
    if args.plot:
        from .plots import render_hom

        render_hom(grid, pb, pf, args.plot)
    return EXIT_OK


def cmd_dist_scan(args) -> int:
    grid = parse_grid(args.grid)
    inputs = parse_ports(args.inputs) if args.inputs else list(range(1, args.particles + 1))
    n = len(inputs)
    u = _load_unitary(args, args.modes)
    output_sets = [parse_ports(s) for s in args.outputs] or [list(range(1, n + 1))]
    header = ["delay"]
    for outs in output_sets:
        tag = ",".join(str(o) for o in outs)
        header += [f"p_boson[{tag}]", f"p_fermion[{tag}]"]
    rows = []
    curves = {f"{','.join(str(o) for o in outs)} {pc}": []
              for outs in output_sets for pc in ("boson", "fermion")}
    for x in grid:
        train = WavePacketTrain.equidistant(n, float(x))
        gram = gram_from_wave_packets(train)
        row = [float(x)]
        for outs in output_sets:
            tag = ",".join(str(o) for o in outs)
            for pc, name in ((ParticleClass.BOSON, "boson"), (ParticleClass.FERMION, "fermion")):
                p = transition_probability_partial(u, inputs, outs, gram, pc)
                row.append(p)
                curves[f"{tag} {name}"].append(p)
        rows.append(tuple(row))
    _write_table(rows, header, args.format, args.out)
    if args.plot:
        from .plots import render_dist_scan

        render_dist_scan(grid, curves, args.plot)
    return EXIT_OK


def cmd_scatter(args) -> int:
    from .correlations import correlation_dataset

    classes = ([ParticleClass.parse(args.particle_class)] if args.particle_class
               else [ParticleClass.BOSON, ParticleClass.THERMAL,
                     ParticleClass.FERMION, ParticleClass.DISTINGUISHABLE])
    inputs = parse_ports(args.inputs) if args.inputs else list(range(1, args.particles + 1))
    n = len(inputs)
    rows, points = [], {pc.value: [] for pc in classes}
    for trial in range(args.trials):
        u = haar_random_unitary(args.modes, seed=args.seed + trial)
        for pc in classes:
            stats = summary(correlation_dataset(u, inputs, pc))
            cv = stats.cv if stats.cv is not None else float("nan")
            rows.append(("sample", pc.value, args.seed + trial, stats.nm, cv))
            points[pc.value].append((stats.nm, cv))
    predictions = {}
    for pc in classes:
        pred = rmt_prediction(args.modes, n, pc)
        cv = pred.cv if pred.cv is not None else float("nan")
        rows.append(("prediction", pc.value, -1, pred.nm, cv))
        predictions[pc.value] = (pred.nm, cv)
    _write_table(rows, ["kind", "class", "seed", "NM", "CV"], args.format, args.out)
    if args.plot:
        from .plots import render_scatter

        render_scatter(points, predictions, args.plot)
    return EXIT_OK


def cmd_suppress(args) -> int:
    p = parse_permutation(args.permutation, args.modes)
    inputs = parse_ports(args.inputs)
    pc = ParticleClass.parse(args.particle_class)
    n = len(inputs)
    records, failed = [], False
    for outputs in combinations(range(1, args.modes + 1), n):
        flagged, prob = certify(p, inputs, list(outputs), pc,
                                extended=args.extended, tol=args.tol_suppression)
        law = ("extended-fermionic" if args.extended
               else ("bosonic" if pc is ParticleClass.BOSON else "fermionic"))
        records.append({
            "permutation": args.permutation,
            "inputs": inputs,
            "outputs": list(outputs),
            "law": law,
            "predicted": flagged,
            "probability": prob,
        })
        if flagged and prob >= CERTIFICATION_THRESHOLD:
            failed = True
    _write_json(records, args.out)
    return EXIT_CERTIFICATION if failed else EXIT_OK


def cmd_validate(args) -> int:
    inputs = parse_ports(args.inputs) if args.inputs else list(range(1, args.particles + 1))
    n = len(inputs)
    if args.samples:
        with open(args.samples) as fh:
            batch = SampleBatch.from_csv(fh.read(), m=args.modes, n=n)
    else:
        pc = ParticleClass.parse(args.particle_class)
        u = _load_unitary(args, args.modes)
        if pc is ParticleClass.DISTINGUISHABLE:
            batch = sample_distinguishable_direct(u, inputs, seed=args.seed,
                                                  count=args.trials)
        else:
            dist = enumerate_distribution(u, inputs, pc)
            batch = sample_exact(dist, seed=args.seed, count=args.trials)
    est = estimate_correlations(batch)
    stats = summary(est)
    label, distances = classify(stats, args.modes, n)
    report = {
        "m": args.modes,
        "n": n,
        "count": batch.count,
        "label": label.value,
        "m1": stats.m1,
        "m2": stats.m2,
        "NM": stats.nm,
        "CV": stats.cv,
        "distances": {pc.value: d for pc, d in distances.items()},
        "standard_error_scale": 1.0 / np.sqrt(batch.count),
    }
    _write_json(report, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multiport",
                     description="Many-particle interference computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modes=True, particles=True):
        if modes:
            p.add_argument("--modes", "-m", type=int, help="number of modes")
        if particles:
            p.add_argument("--particles", "-n", type=int, default=2,
                           help="number of particles")
        p.add_argument("--inputs", help="comma-separated input ports")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--plot", help="render a figure to this file")
        p.add_argument("--unitary", help="load the interferometer from a JSON file")
        p.add_argument("--tol-unitary", type=float, default=UNITARITY_TOL)

    p_hom = sub.add_parser("hom", help="balanced-beamsplitter coincidence dip")
    common(p_hom, modes=False, particles=False)
    p_hom.add_argument("--grid", default="0:3:50", help="start:stop:steps")
    p_hom.set_defaults(func=cmd_hom)

    p_scan = sub.add_parser("dist-scan", help="transition probability vs delay")
    common(p_scan)
    p_scan.add_argument("--grid", default="0:3:25", help="start:stop:steps")
    p_scan.add_argument("--outputs", action="append", default=[],
                        help="comma-separated output ports (repeatable)")
    p_scan.set_defaults(func=cmd_dist_scan)

    p_scatter = sub.add_parser("scatter", help="(NM, CV) over Haar unitaries")
    common(p_scatter)
    p_scatter.add_argument("--trials", type=int, default=20,
                           help="number of Haar unitaries")
    p_scatter.add_argument("--class", dest="particle_class",
                           choices=("boson", "fermion", "dist", "thermal"),
                           help="restrict to one class (default: all)")
    p_scatter.set_defaults(func=cmd_scatter)

    p_sup = sub.add_parser("suppress", help="suppression-law certification sweep")
    common(p_sup, particles=False)
    p_sup.add_argument("--permutation", required=True,
                       help='cycle notation, e.g. "(1 2)(3 4)"')
    p_sup.add_argument("--class", dest="particle_class", required=True,
                       choices=("boson", "fermion"))
    p_sup.add_argument("--extended", action="store_true",
                       help="use the extended fermionic law")
    p_sup.add_argument("--tol-suppression", type=float, default=SUPPRESSION_TOL)
    p_sup.set_defaults(func=cmd_suppress)

    p_val = sub.add_parser("validate", help="classify sample statistics")
    common(p_val)
    p_val.add_argument("--samples", help="CSV file of occupation-count rows")
    p_val.add_argument("--class", dest="particle_class", default="dist",
                       choices=("boson", "fermion", "dist", "thermal"),
                       help="generator class when no --samples file is given")
    p_val.add_argument("--trials", type=int, default=10000,
                       help="generated sample count")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalConsistencyError as exc:
        sys.stderr.write(f"numerical-consistency failure: {exc}\n")
        return EXIT_NUMERICAL
    except (MultiportError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
