"""Batch command-line surface.

Seven subcommands bind the pipeline together: reduce (source system to
subspace instance file), verify (membership and honest completeness),
minrank (exhaustive oracle), decode (member to satisfying assignment),
decompose (symmetric rank-one split), descend (extension field to GF(2)),
isolate (point-isolating polynomial).

Reports are JSON with sorted keys and no timestamps, so a rerun on the
same inputs is byte-identical; a short plain-text summary goes to
standard output first.  Environment variables with the RANKGAP_ prefix
(RANKGAP_FIELD, RANKGAP_K, RANKGAP_C, RANKGAP_DEGREE, RANKGAP_BUDGET,
RANKGAP_WORKERS) supply defaults for the flags of the same name; an
explicit flag always wins.

Exit codes: 0 success, 2 bad input or violated precondition, 3 refused
budget, 4 internal consistency violation (always a bug).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from math import comb
from pathlib import Path

from .boolalg import basis_make, format_poly, indices_of
from .decoder import decode_assignment
from .errors import (
    BudgetExceededError,
    InternalConsistencyError,
    PreconditionError,
)
from .frontends import parse_dimacs, parse_quadeq
from .gfarith import format_field, make_field, parse_field_descriptor
from .gflinalg import FFMatrix, rank_descent, symmetric_rank_one_decomposition
from .moment import build_moment_subspace, localizing_row_count
from .oracles import PointSet, check_membership, minrank_bruteforce, point_isolator
from .subspace import PseudoMomentVector, SubspaceSpec, honest_moment_vector
from .superposition import (
    build_constant_free_system,
    build_matrix_subspace,
    build_monomial_quad_system,
    choose_degree,
    degree_regime,
    expected_equation_count,
)

_ENV_PREFIX = "RANKGAP_"


def _env_raw(name: str) -> str | None:
    return os.environ.get(_ENV_PREFIX + name)


def _env_str(name: str, fallback: str | None) -> str | None:
    raw = _env_raw(name)
    return fallback if raw is None else raw


def _env_int(name: str, fallback: int | None) -> int | None:
    raw = _env_raw(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError as exc:
        raise PreconditionError(
            f"{_ENV_PREFIX}{name} must be an integer, got {raw!r}"
        ) from exc


def _env_float(name: str, fallback: float) -> float:
    raw = _env_raw(name)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError as exc:
        raise PreconditionError(
            f"{_ENV_PREFIX}{name} must be a number, got {raw!r}"
        ) from exc


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on; echoed into provenance."""

    command: str
    input_path: str | None = None
    output_path: str | None = None
    field: str | None = None
    k: int = 1
    r: int = 1
    c: float = 4.0
    degree: int | None = None
    relaxed: bool = False
    budget: int = 1 << 20
    workers: int = 1

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            input_path=getattr(args, "input", None),
            output_path=getattr(args, "output", None),
            field=getattr(args, "field", None),
            k=getattr(args, "k", 1),
            c=getattr(args, "c", 4.0),
            degree=getattr(args, "degree", None),
            relaxed=getattr(args, "relaxed", False),
            budget=getattr(args, "budget", 1 << 20),
            workers=getattr(args, "workers", 1),
        )


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc}") from exc


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _parse_csv_ints(text: str, what: str) -> tuple[int, ...]:
    toks = [t for t in text.replace(",", " ").split() if t]
    if not toks:
        raise PreconditionError(f"empty {what}")
    out = []
    for t in toks:
        try:
            out.append(int(t))
        except ValueError as exc:
            raise PreconditionError(f"bad {what} entry {t!r}") from exc
    return tuple(out)


def _emit(args: argparse.Namespace, summary: list[str], doc: dict) -> None:
    for line in summary:
        print(line)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(text, end="")


# -- reduce -------------------------------------------------------------------


def _reduce_superposition(config: RunConfig, text: str) -> tuple[SubspaceSpec, int]:
    cnf = parse_dimacs(text)
    field = parse_field_descriptor(config.field) if config.field else make_field(2)
    if field.p != 2:
        raise PreconditionError(
            f"the CNF construction needs characteristic two, not {format_field(field)}"
        )
    r = field.e
    if config.degree is None:
        choice = choose_degree(config.k, r, config.c)
        d, regime = choice.d, choice.regime
    else:
        d = config.degree
        regime = degree_regime(d, r * config.k)
    if regime == "relaxed" and not config.relaxed:
        raise PreconditionError(
            f"degree {d} lands in the relaxed regime for k={config.k}, r={r}; "
            "pass --relaxed to build anyway"
        )
    n = cnf.n
    coords = sum(comb(n + 1, j) for j in range(1, min(2 * d, n + 1) + 1))
    estimate = max(coords, expected_equation_count(n, cnf.m, d))
    if estimate > config.budget:
        raise BudgetExceededError(
            f"instance needs about {estimate} coordinates or constraints, "
            f"budget allows {config.budget}"
        )
    quad = build_monomial_quad_system(build_constant_free_system(cnf, d))
    provenance = {
        "source_sha256": cnf.source_hash(),
        "field": format_field(field),
        "k": config.k,
        "r": r,
        "c": config.c,
        "regime": regime,
    }
    return build_matrix_subspace(quad, field=field, provenance=provenance), d


def _reduce_direct(config: RunConfig, text: str) -> tuple[SubspaceSpec, int]:
    src = parse_quadeq(text)
    if config.field is not None:
        asked = parse_field_descriptor(config.field)
        if asked != src.field:
            raise PreconditionError(
                f"--field {format_field(asked)} disagrees with the source "
                f"field {format_field(src.field)}"
            )
    if config.k < 1:
        raise PreconditionError("rank gap target must be at least 1")
    d = config.k if config.degree is None else config.degree
    if d < 1:
        raise PreconditionError("matrix degree must be at least 1")
    coords = sum(comb(src.n, j) for j in range(0, min(2 * d, src.n) + 1))
    estimate = max(coords, localizing_row_count(src.n, len(src.equations), d))
    if estimate > config.budget:
        raise BudgetExceededError(
            f"instance needs about {estimate} coordinates or constraints, "
            f"budget allows {config.budget}"
        )
    provenance = {
        "source_sha256": src.source_hash(),
        "field": format_field(src.field),
        "k": config.k,
    }
    space = build_moment_subspace(src, config.k, degree=config.degree, provenance=provenance)
    return space, d


def cmd_reduce(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    text = _read(args.input)
    if args.mode == "superposition":
        space, d = _reduce_superposition(config, text)
    else:
        space, d = _reduce_direct(config, text)
    Path(args.output).write_text(space.to_text(), encoding="utf-8")
    print(f"coordinates: {space.coord_count}")
    print(f"constraints: {len(space.rows)}")
    print(f"d: {d}")
    return 0


# -- verify -------------------------------------------------------------------


def _honest_for_instance(space: SubspaceSpec, bits: tuple[int, ...]) -> PseudoMomentVector:
    if len(bits) != space.n:
        raise PreconditionError(f"assignment needs {space.n} bits, got {len(bits)}")
    if space.variant == "U":
        point: tuple[int, ...] = (1, *bits)
    else:
        point = bits
    return honest_moment_vector(space.field, point, space.n, 2 * space.d, space.variant)


def cmd_verify(args: argparse.Namespace) -> int:
    text = _read(args.input)
    space = SubspaceSpec.from_text(text)
    if (args.assignment is None) == (args.vector is None):
        raise PreconditionError("verify needs exactly one of --assignment or --vector")
    provenance = {"command": "verify", "instance_sha256": _sha(text)}
    doc: dict = {"provenance": provenance}
    if args.assignment is not None:
        bits = _parse_csv_ints(args.assignment, "assignment")
        values = _honest_for_instance(space, bits).values
        doc["honest_assignment"] = list(bits)
    else:
        values = _parse_csv_ints(_read(args.vector), "vector")
    report = check_membership(values, space)
    zero = not any(values)
    rank = space.expand(values).rank() if report.ok else None
    doc.update({"ok": report.ok, "violated_row": report.violated_row, "rank": rank, "zero": zero})
    if not report.ok:
        summary = f"not a member: constraint {report.violated_row} violated"
    elif zero:
        summary = "member (trivially), excluded from minrank"
    else:
        summary = f"member, rank {rank}"
    _emit(args, [summary], doc)
    return 0


# -- oracle bindings ----------------------------------------------------------


def cmd_minrank(args: argparse.Namespace) -> int:
    text = _read(args.input)
    space = SubspaceSpec.from_text(text)
    report = minrank_bruteforce(
        space, level=args.level, budget=args.budget, workers=args.workers
    )
    if report.status == "budget_exceeded":
        raise BudgetExceededError(
            f"kernel dimension {report.kernel_dimension} means {report.required} "
            f"members, budget allows {args.budget}"
        )
    doc = report.to_json()
    doc["provenance"] = {
        "command": "minrank",
        "instance_sha256": _sha(text),
        "level": space.d if args.level is None else args.level,
    }
    if report.status == "empty":
        summary = "empty subspace"
    else:
        summary = f"minrank {report.minrank} over {report.enumerated} members"
    _emit(args, [summary], doc)
    return 0


def _infer_matrix_degree(n: int, count: int) -> int:
    d = 0
    size = 0
    while size < count:
        d += 1
        size = sum(comb(n, j) for j in range(0, min(2 * d, n) + 1))
        if size == count:
            return d
        if 2 * d >= n:
            break
    raise PreconditionError(
        f"no matrix degree gives {count} coordinates over {n} variables"
    )


def cmd_decode(args: argparse.Namespace) -> int:
    source_text = _read(args.source)
    src = parse_quadeq(source_text)
    values = _parse_csv_ints(_read(args.vector), "vector")
    d = args.degree if args.degree is not None else _infer_matrix_degree(src.n, len(values))
    basis = basis_make(src.n, 2 * d, "V")
    if len(values) != len(basis):
        raise PreconditionError(
            f"vector has {len(values)} coordinates, degree {d} needs {len(basis)}"
        )
    vector = PseudoMomentVector(src.field, basis, tuple(src.field.validate(v) for v in values))
    report = decode_assignment(vector, src, d)
    doc = report.to_json()
    doc["provenance"] = {
        "command": "decode",
        "source_sha256": src.source_hash(),
        "vector_sha256": _sha(",".join(str(v) for v in values)),
        "degree": d,
    }
    if report.ok:
        summary = "assignment: " + ",".join(str(v) for v in report.assignment)
    else:
        summary = f"decoding failed: {report.failure}"
    _emit(args, [summary], doc)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    text = _read(args.input)
    matrix = FFMatrix.from_text(text)
    decomposition = symmetric_rank_one_decomposition(matrix)
    rank = matrix.rank()
    doc = {
        "size": decomposition.size,
        "rank": rank,
        "terms": len(decomposition),
        "vectors": [list(v) for v in decomposition.vectors],
        "provenance": {"command": "decompose", "matrix_sha256": _sha(text)},
    }
    _emit(args, [f"{len(decomposition)} rank-one terms for a rank-{rank} matrix"], doc)
    return 0


def cmd_descend(args: argparse.Namespace) -> int:
    text = _read(args.input)
    matrix = FFMatrix.from_text(text)
    if args.field:
        target = parse_field_descriptor(args.field)
        if matrix.field != target:
            if matrix.field.q == 2 and target.p == 2:
                matrix = matrix.lifted(target)
            else:
                raise PreconditionError(
                    f"matrix is over {format_field(matrix.field)}, "
                    f"cannot reinterpret as {format_field(target)}"
                )
    provenance = {"command": "descend", "matrix_sha256": _sha(text)}
    if args.instance:
        instance_text = _read(args.instance)
        constraints: object = SubspaceSpec.from_text(instance_text)
        provenance["instance_sha256"] = _sha(instance_text)
    else:
        constraints = []
    descended = rank_descent(matrix, constraints)
    doc = {
        "field": format_field(matrix.field),
        "rank_extension": matrix.rank(),
        "rank_gf2": descended.rank(),
        "rows": [list(row) for row in descended.rows],
        "provenance": provenance,
    }
    summary = (
        f"rank {doc['rank_extension']} over {doc['field']} descends to "
        f"rank {doc['rank_gf2']} over GF(2)"
    )
    _emit(args, [summary], doc)
    return 0


def cmd_isolate(args: argparse.Namespace) -> int:
    text = _read(args.points)
    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not rows:
        raise PreconditionError("the point file is empty")
    parsed = [_parse_csv_ints(ln, "point") for ln in rows]
    n = len(parsed[0]) - 1
    points = PointSet(n, tuple(parsed))
    target = _parse_csv_ints(args.target, "target")
    isolator = point_isolator(points, target, args.rho)
    doc = {
        "polynomial": format_poly(isolator),
        "degree": isolator.degree,
        "support": [list(indices_of(mask)) for mask in isolator.support()],
        "provenance": {
            "command": "isolate",
            "points_sha256": _sha(text),
            "target": list(target),
            "rho": args.rho,
        },
    }
    _emit(args, [format_poly(isolator)], doc)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankgap",
        description="Compile Boolean source systems into rank-gap matrix "
        "subspaces and verify them with brute-force oracles.",
        epilog=f"Flags read defaults from {_ENV_PREFIX}FIELD, {_ENV_PREFIX}K, "
        f"{_ENV_PREFIX}C, {_ENV_PREFIX}DEGREE, {_ENV_PREFIX}BUDGET and "
        f"{_ENV_PREFIX}WORKERS; an explicit flag wins.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="compile a source system to a subspace instance")
    p.add_argument("--mode", choices=("superposition", "direct"), required=True,
                   help="superposition reads DIMACS CNF, direct reads quadratic systems")
    p.add_argument("--input", required=True, help="source file")
    p.add_argument("--output", required=True, help="instance file to write")
    p.add_argument("--field", default=_env_str("FIELD", None),
                   help="field descriptor such as GF(2) or GF(2^3)")
    p.add_argument("--k", type=int, default=_env_int("K", 1), help="rank gap target")
    p.add_argument("--c", type=float, default=_env_float("C", 4.0),
                   help="soundness constant in the degree rule (superposition)")
    p.add_argument("--degree", type=int, default=_env_int("DEGREE", None),
                   help="override the chosen degree d")
    p.add_argument("--relaxed", action="store_true",
                   help="permit degrees below the faithful floor")
    p.add_argument("--budget", type=int, default=_env_int("BUDGET", 1 << 20),
                   help="refuse instances whose size estimate exceeds this")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="membership and honest completeness checks")
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument("--assignment", help="comma separated bits; checks the honest vector")
    p.add_argument("--vector", help="file of comma separated coordinates to check")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("minrank", help="exhaustive minimum rank over the subspace")
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument("--budget", type=int, default=_env_int("BUDGET", 1 << 20),
                   help="refuse kernels with more members than this")
    p.add_argument("--level", type=int, default=None, help="expansion level (default d)")
    p.add_argument("--workers", type=int, default=_env_int("WORKERS", 1),
                   help="shard the enumeration; the answer does not depend on it")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_minrank)

    p = sub.add_parser("decode", help="round a low-rank member to a satisfying assignment")
    p.add_argument("--source", required=True, help="quadratic system file")
    p.add_argument("--vector", required=True, help="file of member coordinates")
    p.add_argument("--degree", type=int, default=_env_int("DEGREE", None),
                   help="matrix degree (default: inferred from the vector length)")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("decompose", help="symmetric GF(2) matrix as a sum of rank-one terms")
    p.add_argument("--input", required=True, help="matrix file")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("descend", help="map an extension-field member to GF(2)")
    p.add_argument("--input", required=True, help="matrix file")
    p.add_argument("--field", default=_env_str("FIELD", None),
                   help="extension field, e.g. GF(2^2); lifts a GF(2) matrix file")
    p.add_argument("--instance", help="instance file whose constraints the matrix satisfies")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("isolate", help="low-degree polynomial isolating one point of a set")
    p.add_argument("--points", required=True, help="file with one bit point per line")
    p.add_argument("--target", required=True, help="the point to isolate, comma separated")
    p.add_argument("--rho", type=int, required=True, help="degree bound")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_isolate)

    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
