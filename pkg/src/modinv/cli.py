"""Command-line interface.

Three subcommands:

  construct   build the invariant suite for p and a block list
  verify      re-check a suite by exhaustive enumeration over F_{p^k}
  export      dump the suite plus the construction's linear algebra as JSON

Exit codes: 0 success, 1 configuration error, 2 separation witnesses found
under --strict, 3 enumeration budget exceeded.  All output is byte
deterministic for a fixed command line.
"""

import argparse
import json
import sys
from dataclasses import dataclass

from .action import BlockExceedsP, RepresentationSpec
from .builder import build_suite, suite_construction_steps
from .oracle import (DEFAULT_BUDGET, BudgetExceeded, separation_report,
                     verify_lifting, verify_orbit_constancy)
from .rings import GF


@dataclass(frozen=True)
class RunConfig:
    p: int
    blocks: tuple
    ring: str = "fp"
    k: int = 1
    fmt: str = "text"
    strict: bool = False
    budget: int = DEFAULT_BUDGET
    out: str = None


class ConfigError(Exception):
    pass


def _parse_blocks(text: str) -> tuple:
    try:
        blocks = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"blocks must be comma-separated integers, got {text!r}")
    return blocks


def _spec_for(config: RunConfig) -> RepresentationSpec:
    try:
        return RepresentationSpec(config.p, config.blocks)
    except (BlockExceedsP, ValueError) as exc:
        raise ConfigError(str(exc))


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _cmd_construct(config: RunConfig) -> int:
    spec = _spec_for(config)
    suite = build_suite(spec, config.ring)
    if config.fmt == "json":
        _emit(_json_text(suite.to_json_dict()), config.out)
    else:
        lines = [f"{e.name} = {e.polynomial.render_text()}" for e in suite.entries]
        _emit("\n".join(lines) + "\n", config.out)
    return 0


def _point_text(ring, coords) -> str:
    texts = [ring.render(c) for c in coords]
    if any("," in t for t in texts):
        texts = [f"({t})" for t in texts]
    return "(" + ",".join(texts) + ")"


def _cmd_verify(config: RunConfig) -> int:
    spec = _spec_for(config)
    if config.strict and len(spec.blocks) != 1:
        raise ConfigError("--strict requires a single block")
    if config.k < 1:
        raise ConfigError("k must be at least 1")
    field = GF(spec.p, config.k)
    suite = build_suite(spec, "fp")
    constancy = verify_orbit_constancy(suite, field, config.budget)
    report = separation_report(suite, field, config.budget)
    lift_sizes = sorted({s for s in spec.blocks if s >= 3})
    lifting = [(n, verify_lifting(n, field, config.budget)) for n in lift_sizes]
    failed = (constancy is not None or not report.separated
              or any(w is not None for _, w in lifting))
    if config.fmt == "json":
        data = {
            "constancy": {
                "ok": constancy is None,
                "witness": None if constancy is None else {
                    "entry": constancy[0],
                    "point": [field.render(c) for c in constancy[1]],
                },
            },
            "separation": report.to_json_dict(),
            "lifting": [
                {
                    "n": n,
                    "ok": w is None,
                    "witness": None if w is None else [
                        [field.render(c) for c in w[0]],
                        [field.render(c) for c in w[1]],
                    ],
                }
                for n, w in lifting
            ],
            "strict": config.strict,
        }
        _emit(_json_text(data), config.out)
    else:
        lines = [report.render()]
        if constancy is None:
            lines.append("constancy   ok")
        else:
            lines.append(f"constancy   FAILED: {constancy[0]} at "
                         f"{_point_text(field, constancy[1])}")
        lines.append(f"separation  {report.fiber_count}/{report.orbit_count_in_b}"
                     " orbits separated")
        for n, w in lifting:
            if w is None:
                lines.append(f"lifting     n={n} ok")
            else:
                lines.append(f"lifting     n={n} FAILED: "
                             f"{_point_text(field, w[0])} ~ {_point_text(field, w[1])}")
        _emit("\n".join(lines) + "\n", config.out)
    if config.strict and failed:
        return 2
    return 0


def _cmd_export(config: RunConfig) -> int:
    spec = _spec_for(config)
    suite = build_suite(spec, config.ring)
    construction = []
    for item in suite_construction_steps(spec):
        construction.append({
            "blockIndex": item["blockIndex"],
            "name": item["name"],
            "n": item["n"],
            "degree": item["degree"],
            "steps": [
                {
                    "weight": s.weight,
                    "family": s.family,
                    "source": list(s.source),
                    "target": list(s.target),
                    "matrix": [list(row) for row in s.matrix],
                    "det": s.det,
                    "solution": list(s.solution),
                }
                for s in item["steps"]
            ],
        })
    bundle = {
        "config": {"p": spec.p, "blocks": list(spec.blocks), "ring": config.ring},
        "suite": suite.to_json_dict(),
        "construction": construction,
    }
    _emit(_json_text(bundle), config.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modinv",
        description="Construct and verify separating invariant suites for "
                    "unipotent Jordan-block actions in prime characteristic.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--p", type=int, required=True, help="prime characteristic")
        p.add_argument("--blocks", type=str, required=True,
                       help="comma-separated Jordan block sizes, e.g. 3 or 2,2")
        p.add_argument("--out", type=str, default=None,
                       help="write output to this file instead of stdout")

    c = sub.add_parser("construct", help="build the invariant suite")
    common(c)
    c.add_argument("--ring", choices=("q", "z", "fp"), default="fp",
                   help="coefficient ring of the output")
    c.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="brute-force check over F_{p^k}")
    common(v)
    v.add_argument("--k", type=int, default=1, help="field extension degree")
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum number of field points to enumerate")
    v.add_argument("--strict", action="store_true",
                   help="exit 2 when the suite fails to separate (single block only)")
    v.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")

    e = sub.add_parser("export", help="dump suite and construction data as JSON")
    common(e)
    e.add_argument("--ring", choices=("q", "z", "fp"), default="fp",
                   help="coefficient ring of the exported suite")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    handler = {"construct": _cmd_construct, "verify": _cmd_verify,
               "export": _cmd_export}[ns.command]
    try:
        config = RunConfig(
            p=ns.p,
            blocks=_parse_blocks(ns.blocks),
            ring=getattr(ns, "ring", "fp"),
            k=getattr(ns, "k", 1),
            fmt=getattr(ns, "fmt", "text"),
            strict=getattr(ns, "strict", False),
            budget=getattr(ns, "budget", DEFAULT_BUDGET),
            out=ns.out,
        )
        return handler(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
