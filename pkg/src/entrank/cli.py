"""Command-line surface: analyze, factorize, check-partition, ppt, gen, bench.

Exit codes: 0 when the requested analysis completed (whatever the verdict),
2 for input errors, 3 for size or enumeration limits, 4 for internal
inconsistencies. Particle indices are 1-based in every file, flag, and
report; the library uses 0-based indices internally.

Machine-readable reports (--json) are deterministic: identical inputs and
flags yield byte-identical output except for the timing_seconds field.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import catalog, criteria, factorize as factorize_mod, statefile
from .errors import EntrankError, InputError, PartitionError
from .linalg import (
    DEFAULT_ATOL,
    DEFAULT_MAX_DIM,
    DEFAULT_RTOL,
    RankTolerance,
    hermitian_eigenvalues,
    numerical_rank,
)
from .states import (
    DensityMatrix,
    PureState,
    State,
    normalize_subset,
    partial_transpose,
    subset_rank,
)

PPT_NEG_TOL = 1e-9
PPT_ENTANGLED = "ENTANGLED"
PPT_NOT_DETECTED = "NOT-DETECTED"

BENCH_CSV_HEADER = ["kind", "dims", "seed", "rank_detect", "ppt_detect", "both", "neither"]
BENCH_KINDS = ("product_mixture", "werner", "haar_pure")
GEN_NAMES = ("ghz", "w", "bell", "werner", "paper6", "random")


def _fmt_subset(subset: Sequence[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in subset) + "}"


def _one_based(subset: Sequence[int]) -> list[int]:
    return [i + 1 for i in subset]


def _parse_indices(text: str, n: int, what: str) -> tuple[int, ...]:
    try:
        raw = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise PartitionError(f"cannot parse {what} {text!r}: {exc}") from exc
    if not raw:
        raise PartitionError(f"{what} {text!r} names no particles")
    if any(i < 1 or i > n for i in raw):
        raise PartitionError(f"{what} {text!r} uses indices outside 1..{n}")
    return normalize_subset([i - 1 for i in raw], n)


def _parse_partition(text: str, n: int) -> list[tuple[int, ...]]:
    parts = [p for p in text.split("|")]
    if any(p.strip() == "" for p in parts):
        raise PartitionError(f"malformed partition expression {text!r}")
    return [_parse_indices(p, n, "part") for p in parts]


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise InputError(f"cannot parse dims {text!r}: {exc}") from exc
    if not dims:
        raise InputError(f"dims {text!r} lists no particles")
    return dims


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _tolerance(args: argparse.Namespace) -> RankTolerance:
    return RankTolerance(rtol=args.rtol, atol=args.atol)


def _as_pure(state: State, tol: RankTolerance) -> PureState:
    """Pure input passes through; a rank-1 density matrix is converted."""
    if isinstance(state, PureState):
        return state
    rank = numerical_rank(state.matrix, tol)
    if rank != 1:
        raise InputError(
            f"factorization handles pure states only; this density matrix has rank {rank}"
        )
    sym = (state.matrix + state.matrix.conj().T) / 2
    _, vectors = np.linalg.eigh(sym)
    vec = vectors[:, -1]
    k = int(np.argmax(np.abs(vec)))
    vec = vec * np.conj(vec[k] / abs(vec[k]))
    return PureState(dims=state.dims, amplitudes=vec / np.linalg.norm(vec))


def _print_report(report: dict, as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(human, end="")


def _ppt_min_eigenvalue(rho: DensityMatrix, part: Sequence[int]) -> float:
    transposed = partial_transpose(rho, part)
    return float(hermitian_eigenvalues(transposed)[-1])


def _to_density(state: State) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    from .states import density_from_pure

    return density_from_pure(state)


# ---------------------------------------------------------------- analyze


def cmd_analyze(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    state = statefile.load_state(args.file, max_dim=args.max_dim)
    n = state.n
    started = time.perf_counter()

    if n == 1:
        depth = 0
        lattice = criteria.RankLattice(
            state_rank=1 if isinstance(state, PureState) else numerical_rank(state.matrix, tol),
            entries={},
            max_depth=0,
        )
    else:
        depth = args.depth if args.depth is not None else criteria.default_depth(n)
        lattice = criteria.rank_lattice(state, depth, tol)
    violations = criteria.check_rank_monotonicity(lattice)
    if violations:
        verdict = criteria.ENTANGLED
    elif lattice.state_rank == 1:
        verdict = criteria.SEPARABLE_PURE_PRODUCT
    else:
        verdict = criteria.INCONCLUSIVE

    ppt_rows = []
    if args.ppt and n >= 2:
        rho = _to_density(state)
        for i in range(n):
            value = _ppt_min_eigenvalue(rho, (i,))
            ppt_rows.append(
                {
                    "part": [i + 1],
                    "min_eigenvalue": value,
                    "flag": PPT_ENTANGLED if value < -PPT_NEG_TOL else PPT_NOT_DETECTED,
                }
            )
    elapsed = time.perf_counter() - started

    report = {
        "format_version": "1",
        "command": "analyze",
        "input": {"path": str(args.file), "sha256": _digest(args.file)},
        "dims": list(state.dims),
        "tolerance": {"rtol": tol.rtol, "atol": tol.atol},
        "depth": depth,
        "state_rank": lattice.state_rank,
        "lattice": [
            {"traced_out": _one_based(traced), "rank": rank}
            for traced, rank in sorted(lattice.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ],
        "violations": [
            {
                "child": _one_based(v.child),
                "parent": None if v.parent is None else _one_based(v.parent),
                "child_rank": v.child_rank,
                "parent_rank": v.parent_rank,
            }
            for v in violations
        ],
        "verdict": verdict,
        "timing_seconds": elapsed,
    }
    if args.ppt:
        report["ppt"] = ppt_rows

    lines = [
        f"input: {args.file}",
        f"dims: {'x'.join(str(d) for d in state.dims)}   particles: {n}",
        f"state rank: {lattice.state_rank}",
    ]
    if lattice.entries:
        lines.append(f"rank lattice to depth {depth} (rank after tracing out the listed set):")
        by_size: dict[int, list[str]] = {}
        for traced, rank in sorted(lattice.entries.items(), key=lambda kv: (len(kv[0]), kv[0])):
            by_size.setdefault(len(traced), []).append(f"{_fmt_subset(traced)}={rank}")
        for size in sorted(by_size):
            lines.append(f"  size {size}:  " + "  ".join(by_size[size]))
    if violations:
        lines.append("violations:")
        for v in violations:
            parent = "full state" if v.parent is None else f"traced {_fmt_subset(v.parent)}"
            lines.append(
                f"  traced {_fmt_subset(v.child)} has rank {v.child_rank}"
                f" > {v.parent_rank} ({parent})"
            )
    if ppt_rows:
        lines.append("partial transpose minimum eigenvalues:")
        for row in ppt_rows:
            part = "{" + ",".join(str(i) for i in row["part"]) + "}"
            lines.append(f"  part {part}: {row['min_eigenvalue']:+.6e}  {row['flag']}")
    lines.append(f"verdict: {verdict}")
    _print_report(report, args.json, "\n".join(lines) + "\n")
    return 0


# --------------------------------------------------------------- factorize


def cmd_factorize(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    state = statefile.load_state(args.file, max_dim=args.max_dim)
    psi = _as_pure(state, tol)
    started = time.perf_counter()
    result = factorize_mod.factorize_pure(psi, tol)
    elapsed = time.perf_counter() - started

    if args.factors_out:
        out_dir = Path(args.factors_out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for idx, (part, factor) in enumerate(zip(result.partition, result.factors), start=1):
            payload = statefile.pure_payload(
                factor, metadata={"factor_of": str(args.file), "part": _one_based(part)}
            )
            statefile.write_state_file(out_dir / f"factor_{idx:02d}.json", payload)

    report = {
        "format_version": "1",
        "command": "factorize",
        "input": {"path": str(args.file), "sha256": _digest(args.file)},
        "dims": list(psi.dims),
        "tolerance": {"rtol": tol.rtol, "atol": tol.atol},
        "partition": [_one_based(p) for p in result.partition],
        "fully_entangled_parts": [_one_based(p) for p in result.fully_entangled_parts],
        "residual": result.residual,
        "trace_log": [
            {
                "step": rec.step,
                "remainder": _one_based(rec.remainder),
                "verify": rec.verify,
                "tested": [
                    {"subset": _one_based(subset), "rank": rank} for subset, rank in rec.tested
                ],
                "accepted": [_one_based(subset) for subset in rec.accepted],
            }
            for rec in result.trace_log
        ],
        "timing_seconds": elapsed,
    }

    partition_text = " | ".join(_fmt_subset(p) for p in result.partition)
    lines = [
        f"input: {args.file}",
        f"partition: {partition_text}",
    ]
    for part in result.partition:
        flag = "fully entangled" if part in result.fully_entangled_parts else "single particle"
        lines.append(f"  {_fmt_subset(part)}: {flag}")
    lines.append(f"residual: {result.residual:.3e}")
    for rec in result.trace_log:
        kind = "verify" if rec.verify else "search"
        accepted = " ".join(_fmt_subset(s) for s in rec.accepted) or "none"
        lines.append(
            f"  step {rec.step} ({kind}): tested {len(rec.tested)} subsets of"
            f" {_fmt_subset(rec.remainder)}, accepted {accepted}"
        )
    _print_report(report, args.json, "\n".join(lines) + "\n")
    return 0


# --------------------------------------------------------- check-partition


def cmd_check_partition(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    state = statefile.load_state(args.file, max_dim=args.max_dim)
    parts = _parse_partition(args.partition, state.n)
    pair_verdicts = criteria.check_partition(state, parts, tol)
    overall = criteria.overall_verdict(pair_verdicts)

    pair_rows = []
    for (u, v), verdict in pair_verdicts.items():
        composite = tuple(sorted(u + v))
        pair_rows.append(
            {
                "u": _one_based(u),
                "v": _one_based(v),
                "rank_u": subset_rank(state, u, tol),
                "rank_v": subset_rank(state, v, tol),
                "rank_composite": subset_rank(state, composite, tol),
                "verdict": verdict.tag,
            }
        )

    report = {
        "format_version": "1",
        "command": "check-partition",
        "input": {"path": str(args.file), "sha256": _digest(args.file)},
        "dims": list(state.dims),
        "tolerance": {"rtol": tol.rtol, "atol": tol.atol},
        "partition": [_one_based(p) for p in parts],
        "pairs": pair_rows,
        "overall": overall.tag,
    }

    lines = [f"input: {args.file}", "pair checks (rank_u, rank_v vs rank of the pair together):"]
    for row in pair_rows:
        u = "{" + ",".join(map(str, row["u"])) + "}"
        v = "{" + ",".join(map(str, row["v"])) + "}"
        lines.append(
            f"  {u} vs {v}: ranks ({row['rank_u']}, {row['rank_v']},"
            f" {row['rank_composite']}) -> {row['verdict']}"
        )
    lines.append(f"overall: {overall.tag}")
    _print_report(report, args.json, "\n".join(lines) + "\n")
    return 0


# --------------------------------------------------------------------- ppt


def cmd_ppt(args: argparse.Namespace) -> int:
    state = statefile.load_state(args.file, max_dim=args.max_dim)
    if state.n < 2:
        raise InputError("the partial-transpose check needs at least two particles")
    part = _parse_indices(args.part, state.n, "part")
    if len(part) == state.n:
        raise PartitionError("part must leave at least one particle untransposed")
    rho = _to_density(state)
    value = _ppt_min_eigenvalue(rho, part)
    flag = PPT_ENTANGLED if value < -PPT_NEG_TOL else PPT_NOT_DETECTED

    report = {
        "format_version": "1",
        "command": "ppt",
        "input": {"path": str(args.file), "sha256": _digest(args.file)},
        "dims": list(state.dims),
        "part": _one_based(part),
        "min_eigenvalue": value,
        "flag": flag,
    }
    human = (
        f"input: {args.file}\n"
        f"part: {_fmt_subset(part)}\n"
        f"minimum eigenvalue of the partial transpose: {value:+.9e}\n"
        f"flag: {flag}\n"
    )
    _print_report(report, args.json, human)
    return 0


# --------------------------------------------------------------------- gen


def cmd_gen(args: argparse.Namespace) -> int:
    name = args.name
    metadata: dict = {"name": name}
    if name == "ghz":
        state: State = catalog.ghz(args.n, args.d, max_dim=args.max_dim)
        metadata["params"] = {"n": args.n, "d": args.d}
    elif name == "w":
        state = catalog.w(args.n, max_dim=args.max_dim)
        metadata["params"] = {"n": args.n}
    elif name == "bell":
        state = catalog.bell()
    elif name == "werner":
        if args.p is None:
            raise InputError("werner needs --p (mixing weight in [0, 1])")
        spec = catalog.WernerSpec(args.p)
        state = catalog.werner(spec)
        metadata["params"] = {"p": args.p, "fidelity": spec.fidelity}
    elif name == "paper6":
        state = catalog.six_qubit_benchmark()
    elif name == "random":
        if args.dims is None:
            raise InputError("random needs --dims, e.g. --dims 2,2,2")
        dims = _parse_dims(args.dims)
        spec = catalog.RandomSpec(dims=dims, seed=args.seed, kind=args.kind, rank=args.rank)
        state = catalog.random_state(spec, max_dim=args.max_dim)
        metadata["params"] = {"dims": list(dims), "kind": args.kind, "rank": args.rank}
        metadata["seed"] = args.seed
        metadata["generator"] = "philox"
    else:
        raise InputError(f"unknown state name {name!r}; choose from {GEN_NAMES}")

    if isinstance(state, PureState):
        payload = statefile.pure_payload(state, metadata=metadata)
    else:
        payload = statefile.density_payload(state, metadata=metadata)
    statefile.write_state_file(args.out, payload)
    kind = payload["kind"]
    dims_text = "x".join(str(d) for d in state.dims)
    print(f"wrote {args.out} (kind={kind}, dims={dims_text})")
    return 0


# ------------------------------------------------------------------- bench


def _bench_member(kind: str, dims: tuple[int, ...], seed: int, index: int, args) -> State:
    if kind == "product_mixture":
        return catalog.separable_mixture(dims, seed=seed + index, max_terms=args.max_terms)
    if kind == "haar_pure":
        return catalog.haar_pure(dims, seed=seed + index)
    raise InputError(f"unknown bench kind {kind!r}")


def cmd_bench(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    if args.kind not in BENCH_KINDS:
        raise InputError(f"unknown bench kind {args.kind!r}; choose from {BENCH_KINDS}")
    if args.count < 1:
        raise InputError(f"count must be >= 1, got {args.count}")

    if args.kind == "werner":
        dims = (2, 2)
        members: list[State] = [
            catalog.werner(float(p)) for p in np.linspace(args.p_start, args.p_stop, args.count)
        ]
    else:
        if args.dims is None:
            raise InputError(f"bench kind {args.kind!r} needs --dims")
        dims = _parse_dims(args.dims)
        members = [
            _bench_member(args.kind, dims, args.seed, index, args)
            for index in range(args.count)
        ]

    rank_hits = 0
    ppt_hits = 0
    both = 0
    for state in members:
        n = state.n
        depth = args.depth if args.depth is not None else criteria.default_depth(n)
        verdict = criteria.entanglement_verdict(state, depth, tol)
        rank_detected = verdict.tag == criteria.ENTANGLED
        rho = _to_density(state)
        ppt_detected = any(
            _ppt_min_eigenvalue(rho, (i,)) < -PPT_NEG_TOL for i in range(n)
        )
        rank_hits += rank_detected
        ppt_hits += ppt_detected
        both += rank_detected and ppt_detected

    neither = args.count - rank_hits - ppt_hits + both
    row = [
        args.kind,
        "x".join(str(d) for d in dims),
        str(args.seed),
        str(rank_hits),
        str(ppt_hits),
        str(both),
        str(neither),
    ]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(BENCH_CSV_HEADER)
    writer.writerow(row)
    text = buffer.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rtol", type=float, default=DEFAULT_RTOL,
                        help="relative singular-value threshold for ranks")
    common.add_argument("--atol", type=float, default=DEFAULT_ATOL,
                        help="absolute singular-value floor for ranks")
    common.add_argument("--depth", type=int, default=None,
                        help="largest traced-out set size (default: half the particles)")
    common.add_argument("--json", action="store_true",
                        help="emit a machine-readable JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for random generation")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                        help="maximum joint dimension")

    parser = argparse.ArgumentParser(
        prog="entrank",
        description="Entanglement detection and pure-state factorization"
        " from reduced-density-matrix ranks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="rank lattice, violations, and verdict for a state file")
    p.add_argument("file", help="state file (pure, mixture, or dense)")
    p.add_argument("--ppt", action="store_true",
                   help="also report single-particle partial-transpose minima")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("factorize", parents=[common],
                       help="finest tensor-product partition of a pure state")
    p.add_argument("file", help="state file containing a pure state")
    p.add_argument("--factors-out", default=None,
                   help="directory for per-part factor state files")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("check-partition", parents=[common],
                       help="pairwise rank checks for a user partition")
    p.add_argument("file", help="state file")
    p.add_argument("partition",
                   help="parts separated by '|', indices by ',', e.g. 1|2,3|4,5,6")
    p.set_defaults(func=cmd_check_partition)

    p = sub.add_parser("ppt", parents=[common],
                       help="minimum eigenvalue of the partial transpose")
    p.add_argument("file", help="state file")
    p.add_argument("part", help="particles to transpose, e.g. 1 or 1,3")
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("gen", parents=[common], help="write a catalog state to a file")
    p.add_argument("name", choices=GEN_NAMES, help="state name")
    p.add_argument("--out", required=True, help="output state file path")
    p.add_argument("--n", type=int, default=3, help="particle count (ghz, w)")
    p.add_argument("--d", type=int, default=2, help="local dimension (ghz)")
    p.add_argument("--p", type=float, default=None, help="werner mixing weight")
    p.add_argument("--dims", default=None, help="local dimensions, e.g. 2,2,3 (random)")
    p.add_argument("--kind", default="haar_pure", choices=catalog.RANDOM_KINDS,
                   help="random state kind")
    p.add_argument("--rank", type=int, default=1, help="component count for mixed_of_rank_r")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", parents=[common],
                       help="compare rank detection against the PPT baseline over an ensemble")
    p.add_argument("--kind", required=True, choices=BENCH_KINDS, help="ensemble kind")
    p.add_argument("--count", type=int, required=True, help="ensemble size")
    p.add_argument("--dims", default=None, help="local dimensions, e.g. 2,2")
    p.add_argument("--max-terms", type=int, default=4,
                   help="mixture terms per member (product_mixture)")
    p.add_argument("--p-start", type=float, default=0.0, help="first werner weight")
    p.add_argument("--p-stop", type=float, default=1.0, help="last werner weight")
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EntrankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
