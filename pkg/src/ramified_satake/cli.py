"""Command-line front end.

Weights may be ambient ("x1,...,xn") or normalized ("a,b;t").  Output is
deterministic for fixed arguments.  Exit codes: 2 for rejected input,
3 for failed internal checks.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Callable

from . import __version__
from .echelon_rep import branch, irreducible_character
from .errors import ComputationError, NotDiagramAutomorphism, SatakeError, SpecError
from .galois_fold import (
    CoinvariantLattice,
    EchelonData,
    PinnedAutomorphism,
    coweight_coinvariants,
    fold_fixed_group,
    pinned_action,
    reversal,
)
from .kato_lusztig import bk_filtration_oracle, ic_stalk_table, kato_lusztig_poly, matrix_model
from .local_model import build_gu_data, nearby_cycle_decomposition
from .root_datum import RootDatum, build_root_datum
from .satake_hecke import SatakeParameter, eval_character, ic_function, normalize_parameter

CACHE_ENV = "RAMIFIED_SATAKE_CACHE"
FORMATS = ("json", "tsv", "pretty")


@dataclass(frozen=True)
class RunConfig:
    command: str
    datum: str | None
    auto: str | None
    params: tuple[tuple[str, object], ...]
    fmt: str
    cache_dir: str | None


@dataclass(frozen=True)
class FoldSetup:
    datum: RootDatum
    auto: PinnedAutomorphism
    cl: CoinvariantLattice
    ech: EchelonData


def diagram_involution(rd: RootDatum) -> tuple[int, ...]:
    """Reversal for type A, otherwise the first nontrivial order-two diagram symmetry."""
    if rd.type_label().startswith("A_") and "x" not in rd.type_label():
        return reversal(rd)
    c = rd.cartan
    k = len(c)
    if k > 8:
        raise NotDiagramAutomorphism("diagram search limited to rank 8")
    ident = tuple(range(k))
    for p in permutations(range(k)):
        if p == ident or any(p[p[i]] != i for i in range(k)):
            continue
        if all(c[p[i]][p[j]] == c[i][j] for i in range(k) for j in range(k)):
            return p
    raise NotDiagramAutomorphism(f"{rd.name} has no nontrivial diagram involution")


def make_setup(datum: str, auto: str) -> FoldSetup:
    rd = build_root_datum(datum)
    auto = auto.strip()
    if auto == "id":
        psi = pinned_action(rd)
    elif auto == "reverse":
        psi = pinned_action(rd, diagram_involution(rd), center="inverse")
    elif auto == "gu":
        psi = pinned_action(rd, similitude_recipe="GU")
    elif auto.startswith("perm:"):
        try:
            perm = tuple(int(x) for x in auto[5:].split(","))
        except ValueError:
            raise NotDiagramAutomorphism(f"cannot parse permutation {auto!r}") from None
        psi = pinned_action(rd, perm)
    else:
        raise NotDiagramAutomorphism(f"unknown automorphism {auto!r}; use id, reverse, gu or perm:...")
    cl = coweight_coinvariants(rd, psi)
    return FoldSetup(rd, psi, cl, fold_fixed_group(rd, psi, cl))


def _weight(s: FoldSetup, text: str):
    try:
        return s.cl.parse(text)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


# --------------------------------------------------------------------------
# commands; each returns a JSON-ready dict

def cmd_dualgroup(args) -> dict:
    s = make_setup(args.datum, args.auto)
    label = s.ech.folded_type + (" (dual)" if s.auto.is_trivial else "")
    return {
        "datum": s.datum.name,
        "automorphism": args.auto,
        "folded_type": label,
        "pi0": s.ech.pi0_label,
        "pi0_orders": list(s.ech.pi0),
        "coinvariants": s.cl.group.describe(),
        "normal_form_map": [list(r) for r in s.cl.group.normal_form_map],
        "coroot_classes": [s.cl.format(c) for c in s.cl.orbit_classes],
    }


def cmd_branch(args) -> dict:
    s = make_setup(args.datum, args.auto)
    hw = tuple(int(x) for x in args.hw.split(","))
    res = branch(s.ech, s.cl, s.datum, hw)
    return {
        "datum": s.datum.name,
        "highest_weight": list(hw),
        "top": s.cl.format(res.top),
        "summands": [{"weight": s.cl.format(w), "multiplicity": c,
                      "dim": irreducible_character(s.ech, s.cl, w).dimension}
                     for w, c in res.summands],
    }


def cmd_kato(args) -> dict:
    if args.model:
        m = matrix_model(args.model)
        wt = tuple(int(x) for x in args.wt.split(","))
        return {"model": m.name, "weight": list(wt),
                "polynomial": str(bk_filtration_oracle(m, wt))}
    s = make_setup(args.datum, args.auto)
    hw, wt = _weight(s, args.hw), _weight(s, args.wt)
    fd = s.ech.folded_datum
    return {"datum": s.datum.name, "highest_weight": s.cl.format(hw), "weight": s.cl.format(wt),
            "polynomial": str(kato_lusztig_poly(fd, s.cl.free_part(hw), s.cl.free_part(wt)))}


def cmd_stalks(args) -> dict:
    s = make_setup(args.datum, args.auto)
    mu = _weight(s, args.hw)
    table = ic_stalk_table(s.ech, s.cl, mu)
    raw = ic_function(table)
    norm = ic_function(table, normalized=True)
    rows = []
    for lam, d, entries in table.rows:
        rows.append({"stratum": s.cl.format(lam), "dim": d,
                     "stalk": {str(deg): dim for deg, dim in entries},
                     "polynomial": str(table.polynomial(lam)),
                     "ic_value": str(raw[lam]), "ic_normalized": str(norm[lam])})
    return {"datum": s.datum.name, "label": s.cl.format(mu), "label_dim": table.label_dim,
            "rows": rows}


def cmd_localmodel(args) -> dict:
    setup = build_gu_data(args.n)
    return nearby_cycle_decomposition(setup, args.r, args.s).to_json()


def cmd_satake_eval(args) -> dict:
    s = make_setup(args.datum, args.auto)
    mu = _weight(s, args.hw)
    free = [x for x in args.free.split(",") if x.strip()] if args.free else []
    tors = [int(x) for x in args.torsion.split(",")] if args.torsion else []
    param = SatakeParameter.from_values(s.cl, free, tors, sigma_twisted=args.twisted)
    if args.normalize:
        q = None if args.q in (None, "q") else args.q
        param = normalize_parameter(param, s.cl, q, args.normalize)
    ch = irreducible_character(s.ech, s.cl, mu)
    return {"datum": s.datum.name, "highest_weight": s.cl.format(mu),
            "parameter": [str(v) for v in param.free_values],
            "torsion": list(param.torsion_exponents),
            "value": str(eval_character(ch, param))}


COMMANDS: dict[str, Callable] = {
    "dualgroup": cmd_dualgroup,
    "branch": cmd_branch,
    "kato": cmd_kato,
    "stalks": cmd_stalks,
    "localmodel": cmd_localmodel,
    "satake_eval": cmd_satake_eval,
}


# --------------------------------------------------------------------------
# rendering

def _tsv(report: dict) -> str:
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, list) and val and isinstance(val[0], dict):
            cols = list(val[0])
            lines.append(key)
            lines.append("\t".join(cols))
            for row in val:
                lines.append("\t".join(_cell(row[c]) for c in cols))
        else:
            lines.append(f"{key}\t{_cell(val)}")
    return "\n".join(lines)


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def _pretty(command: str, r: dict) -> str:
    if command == "dualgroup":
        return (f"{r['folded_type']}, π₀ = {r['pi0']}\n"
                f"X_*(T)_I = {r['coinvariants']}\n"
                f"coroot classes: {', '.join(r['coroot_classes'])}")
    if command == "kato":
        return r["polynomial"]
    if command == "branch":
        return "\n".join(f"{x['weight']}\tx{x['multiplicity']}\tdim {x['dim']}" for x in r["summands"])
    if command == "stalks":
        out = [f"IC_{r['label']} (dim {r['label_dim']})"]
        for row in r["rows"]:
            degs = ", ".join(f"H^{d}: {m}" for d, m in row["stalk"].items())
            out.append(f"{row['stratum']}\t{degs}\tnormalized {row['ic_normalized']}")
        return "\n".join(out)
    if command == "localmodel":
        out = [f"GU({r['r']},{r['s']}), n = {r['n']}, monodromy trivial: {r['monodromy_trivial']}"]
        out += [f"  {x['weight']}\tdim {x['dim']}\t{x['inertia']}" for x in r["summands"]]
        out += [f"  z[{x['weight']}] = {x['z_value']}  (normalized {x['z_normalized']})"
                for x in r["strata"]]
        return "\n".join(out)
    if command == "satake_eval":
        return r["value"]
    return json.dumps(r, sort_keys=True, indent=2)


def render(command: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    if fmt == "tsv":
        return _tsv(report)
    return _pretty(command, report)


# --------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ramified-satake",
                                description="Exact combinatorics of ramified Satake.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, datum=True):
        sp.add_argument("--format", choices=FORMATS, default="pretty")
        sp.add_argument("--no-cache", action="store_true", help=f"ignore ${CACHE_ENV}")
        if datum:
            sp.add_argument("--datum", required=True, help='e.g. GL5, Sp4, D4, "GL3xGL1"')
            sp.add_argument("--auto", default="reverse", help="id | reverse | gu | perm:i,j,...")

    common(sub.add_parser("dualgroup", help="fixed dual group and coinvariants"))
    sp = sub.add_parser("branch", help="restrict an irreducible of the dual group")
    common(sp)
    sp.add_argument("--hw", required=True, help="dominant ambient weight")
    sp = sub.add_parser("kato", help="Lusztig-Kato polynomial")
    common(sp, datum=False)
    sp.add_argument("--datum")
    sp.add_argument("--auto", default="reverse")
    sp.add_argument("--hw")
    sp.add_argument("--wt", required=True)
    sp.add_argument("--model", help="use the filtration oracle on a built-in matrix model")
    sp = sub.add_parser("stalks", help="IC stalk table")
    common(sp)
    sp.add_argument("--hw", required=True)
    sp = sub.add_parser("localmodel", help="unitary nearby-cycle decomposition")
    common(sp, datum=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp = sub.add_parser("satake_eval", help="evaluate a character at a Satake parameter")
    common(sp)
    sp.add_argument("--hw", required=True)
    sp.add_argument("--free", default="", help="values of the free generators, e.g. 2,1/3")
    sp.add_argument("--torsion", default="", help="exponents k of zeta_d^k per torsion generator")
    sp.add_argument("--normalize", choices=("geom_to_alg", "alg_to_geom"))
    sp.add_argument("--q", help="exact square value of q, or 'q' for formal")
    sp.add_argument("--twisted", action="store_true")
    return p


def parse_config(argv) -> tuple[RunConfig, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    if args.command == "kato" and not args.model and not (args.datum and args.hw):
        raise SpecError("kato needs --datum and --hw, or --model")
    params = tuple(sorted((k, v) for k, v in vars(args).items()
                          if k not in ("command", "datum", "auto", "format", "no_cache")))
    cache = None if args.no_cache else os.environ.get(CACHE_ENV)
    cfg = RunConfig(args.command, getattr(args, "datum", None), getattr(args, "auto", None),
                    params, args.format, cache)
    return cfg, args


def _cache_path(cfg: RunConfig) -> Path | None:
    if not cfg.cache_dir:
        return None
    key = json.dumps([__version__, cfg.command, cfg.datum, cfg.auto,
                      [[k, str(v)] for k, v in cfg.params]])
    return Path(cfg.cache_dir) / (hashlib.sha256(key.encode()).hexdigest() + ".json")


def run(argv=None) -> tuple[int, str]:
    try:
        cfg, args = parse_config(argv)
    except SpecError as exc:
        return 2, f"error: {exc}"
    path = _cache_path(cfg)
    try:
        report = None
        if path is not None and path.exists():
            report = json.loads(path.read_text())
        if report is None:
            report = COMMANDS[cfg.command](args)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(json.dumps(report, sort_keys=True))
    except SpecError as exc:
        return 2, f"error ({type(exc).__name__}): {exc}"
    except ComputationError as exc:
        return 3, f"computation failed ({type(exc).__name__}): {exc}"
    except SatakeError as exc:
        return 3, f"error ({type(exc).__name__}): {exc}"
    return 0, render(cfg.command, report, cfg.fmt)


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stdout if code == 0 else sys.stderr
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
