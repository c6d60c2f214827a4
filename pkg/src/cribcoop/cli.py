"""Command-line entry point: ``cribcoop <command> --input spec.json --out DIR``.

All numeric configuration lives in the JSON input file. Only the seed and
the output format can be overridden from the command line.

Exit codes: 0 success, 1 property-suite failure, 2 parse or validation
failure, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .coding import SimConfig, estimate_error
from .errors import ResourceCapError, ValidationError
from .fixtures import (
    FIXTURE_LINKS,
    binary_families,
    clean_parallel_dist,
    interior_sim_dist,
)
from .gaussian import GaussianConfig, gaussian_sweep, inner_bound, outer_bound
from .info import DeterministicMap, JointPmf, Pmf, validate_pmf
from .regions import (
    DUALITY_MAP,
    LinkCapacities,
    SRSpec,
    bounds_to_polytope,
    check_duality_corners,
    eval_action_case2,
    eval_theorem1,
    eval_theorem2,
    eval_theorem3,
    eval_theorem4,
    eval_theorem5,
    theorem1_via_common_message,
)
from .search import FactorizedDist, SearchConfig, achievable_frontier, assemble, make_family
from .svg import frontier_svg
from .verify import run_all

COMMANDS = ("region", "frontier", "gaussian", "simulate", "duality", "verify")
FORMATS = ("json", "csv", "svg")


class FieldError(ValidationError):
    pass


def field(doc: Mapping, key: str, path: str = "", default: Any = ...) -> Any:
    """``doc[key]``, or a diagnostic naming the missing field."""
    if not isinstance(doc, Mapping):
        raise FieldError(f"field '{path or '<root>'}' must be an object")
    if key in doc:
        return doc[key]
    if default is not ...:
        return default
    raise FieldError(f"missing field '{path + '.' if path else ''}{key}'")


def read_spec(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise FieldError(f"input file {path} does not exist")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise FieldError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FieldError(f"{path}: top level must be a JSON object")
    return doc


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_links(doc: Mapping) -> LinkCapacities:
    d = field(doc, "links", default={})
    return LinkCapacities(float(field(d, "c12", "links", 0.0)), float(field(d, "c21", "links", 0.0)))


# ---------------------------------------------------------------------------
# region

REGION_FIXTURES = {"clean-parallel": lambda: assemble(clean_parallel_dist()),
                   "interior-sim": lambda: assemble(interior_sim_dist())}


def region_joint(doc: Mapping) -> JointPmf:
    if "fixture" in doc:
        name = doc["fixture"]
        if name not in REGION_FIXTURES:
            raise FieldError(f"field 'fixture': unknown fixture {name!r}")
        return REGION_FIXTURES[name]()
    if "distribution" in doc:
        return assemble(FactorizedDist.from_dict(doc["distribution"]))
    p = JointPmf.from_dict(field(doc, "joint"))
    validate_pmf(p)
    return p


def parse_sr_spec(d: Mapping) -> SRSpec:
    src = Pmf(np.asarray(field(d, "source", "source_spec"), dtype=float))
    k = src.alphabet_size
    hamming = 1.0 - np.eye(k)
    return SRSpec(src, np.asarray(d.get("distortion1", hamming), dtype=float),
                  np.asarray(d.get("distortion2", hamming), dtype=float),
                  float(d.get("d1", 0.0)), float(d.get("d2", 0.0)))


def cmd_region(doc: Mapping, args) -> int:
    theorem = field(doc, "theorem")
    p = region_joint(doc)
    links = parse_links(doc)
    c12 = float(doc.get("c12", links.c12))
    case = doc.get("case")
    if theorem == "thm1":
        b = eval_theorem1(p, links, case or "A")
    elif theorem == "thm1-common":
        b = theorem1_via_common_message(p, links)
    elif theorem == "thm2":
        b = eval_theorem2(p, c12)
    elif theorem == "thm3":
        b = eval_theorem3(parse_sr_spec(field(doc, "source_spec")), p, c12)
    elif theorem == "thm4":
        b = eval_theorem4(p, links, case or "sc")
    elif theorem == "thm5":
        b = eval_theorem5(p, c12, case or "sc")
    elif theorem == "action-case2":
        b = eval_action_case2(p)
    else:
        raise FieldError(f"field 'theorem': unknown value {theorem!r}")
    write(args, "region.json", dump_json(b.to_dict()))
    return 0


# ---------------------------------------------------------------------------
# frontier

def parse_family(doc: Mapping):
    pattern = field(doc, "pattern")
    if "fixture" in doc:
        name = doc["fixture"]
        fams = binary_families(pattern)
        if name not in fams:
            raise FieldError(f"field 'fixture': unknown fixture {name!r}")
        return fams[name], FIXTURE_LINKS[name]
    maps = {k: DeterministicMap.from_dict(v) for k, v in doc.get("crib_maps", {}).items()}
    fam = make_family(pattern, channel=doc.get("channel"), crib_maps=maps,
                      state=doc.get("state"), source=doc.get("source"), cards=doc.get("cards"))
    return fam, None


def cmd_frontier(doc: Mapping, args) -> int:
    fam, default_links = parse_family(doc)
    links = parse_links(doc) if "links" in doc or default_links is None else default_links
    cfg_doc = dict(doc.get("search", {}))
    if args.seed is not None:
        cfg_doc["seed"] = args.seed
    front = achievable_frontier(fam, links, SearchConfig.from_dict(cfg_doc))
    fmt = args.format or "csv"
    if fmt == "csv":
        write(args, "frontier.csv", front.to_csv())
    elif fmt == "json":
        write(args, "frontier.json", dump_json(front.to_dict()))
    else:
        svg = frontier_svg([("achievable", front.points)], f"{front.axes[0]} [bits]",
                           f"{front.axes[1]} [bits]", args.reproducible)
        write(args, "frontier.svg", svg)
    return 0


# ---------------------------------------------------------------------------
# gaussian

def cmd_gaussian(doc: Mapping, args) -> int:
    base_doc = dict(field(doc, "base", default={}))
    if args.seed is not None:
        base_doc["seed"] = args.seed
    try:
        base = GaussianConfig(**base_doc)
    except TypeError as exc:
        raise FieldError(f"field 'base': {exc}") from None
    sweep = gaussian_sweep(base, field(doc, "beta1"), field(doc, "beta2"), field(doc, "rho"))
    rows = sweep.rows()
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(float(v)) for k, v in r.items()})
    write(args, "sweep.csv", buf.getvalue())
    write(args, "frontier.csv", sweep.frontier.to_csv())
    rho_outer = doc.get("outer_rho", np.linspace(0.0, 1.0, 101).tolist())
    inner = bounds_to_polytope(inner_bound(base.p1, base.p2, base.noise_n))
    outer = outer_bound(base.p1, base.p2, base.noise_n, rho_outer)
    series = [("inner", inner.points), ("achievable", sweep.frontier.points), ("outer", outer.points)]
    write(args, "frontier.svg", frontier_svg(series, reproducible=args.reproducible))
    return 0


# ---------------------------------------------------------------------------
# simulate

SIM_FIXTURES = {"interior": interior_sim_dist, "clean-parallel": clean_parallel_dist}


def cmd_simulate(doc: Mapping, args) -> int:
    if "fixture" in doc:
        name = doc["fixture"]
        if name not in SIM_FIXTURES:
            raise FieldError(f"field 'fixture': unknown fixture {name!r}")
        dist = SIM_FIXTURES[name]()
    else:
        dist = FactorizedDist.from_dict(field(doc, "distribution"))
    sim_doc = dict(field(doc, "sim"))
    if args.seed is not None:
        sim_doc["seed"] = args.seed
    for key in ("n", "b_blocks", "trials", "epsilon", "rates"):
        field(sim_doc, key, "sim")
    est = estimate_error(dist, SimConfig.from_dict(sim_doc))
    write(args, "error.json", dump_json(est.to_dict()))
    return 0


# ---------------------------------------------------------------------------
# duality

def cmd_duality(doc: Mapping, args) -> int:
    p_mac = JointPmf.from_dict(field(doc, "joint"))
    validate_pmf(p_mac)
    p_sr = JointPmf.from_dict(doc["joint_sr"]) if "joint_sr" in doc else p_mac.rename(DUALITY_MAP)
    rep = check_duality_corners(p_mac, p_sr, float(doc.get("c12", 0.0)))
    write(args, "duality.json", dump_json(rep.to_dict()))
    return 0


# ---------------------------------------------------------------------------
# verify

def cmd_verify(doc: Mapping, args) -> int:
    results = run_all(args.seed if args.seed is not None else int(doc.get("seed", 0)))
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name}  ({detail})")
    return 0 if all(passed for _, passed, _ in results) else 1


HANDLERS = {"region": cmd_region, "frontier": cmd_frontier, "gaussian": cmd_gaussian,
            "simulate": cmd_simulate, "duality": cmd_duality, "verify": cmd_verify}


def write(args, name: str, text: str) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)
    print(out / name)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cribcoop", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="JSON run specification")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--format", choices=FORMATS, help="frontier output format (default csv)")
    ap.add_argument("--seed", type=int, help="override the seed in the input file")
    ap.add_argument("--reproducible", action="store_true",
                    help="omit the timestamp comment from SVG output")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is not None and not -(2 ** 63) <= args.seed < 2 ** 64:
        print("error: --seed must fit in 64 bits", file=sys.stderr)
        return 2
    try:
        if args.input is None and args.command != "verify":
            raise FieldError("--input is required for this command")
        return HANDLERS[args.command](read_spec(args.input), args)
    except ResourceCapError as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
