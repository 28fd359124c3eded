"""Command-line front end: JSON Lines in, JSON Lines out.

Exit codes: 0 completed, 1 a reproduced criterion failed, 2 invalid input,
3 a budget or subgroup cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Iterable

from . import canonical, characters, constructions, windows
from .config import RunConfig, load_config
from .errors import BudgetExceeded, CapExceeded, TSeqError
from .group_core import DirectSumContext, PruferGroup

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_LIMIT = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _plain(x):
    return windows._jsonish(x)


class Emitter:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def __call__(self, record: dict) -> None:
        record = _plain(record)
        if self.fmt == "table":
            cells = []
            for k in sorted(record):
                v = record[k]
                cells.append(f"{k}={v if isinstance(v, str) else json.dumps(v, sort_keys=True)}")
            self.out.write("  ".join(cells) + "\n")
        else:
            self.out.write(json.dumps(record, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _window(s: str) -> windows.Window:
    m, sep, K = s.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"window must look like m..K, got {s!r}")
    return windows.Window(int(m), int(K))


def _int_range(s: str) -> range:
    w = _window(s)
    return range(w.m, w.K + 1)


def _int_list(s: str) -> list[int]:
    return [int(v) for v in s.replace(";", ",").split(",") if v.strip()]


def _element(seq: windows.SequenceHandle, s: str):
    if isinstance(seq.ctx, PruferGroup):
        return constructions.parse_prufer(s, seq.ctx.p)
    return constructions.parse_ds_element(json.loads(s) if s.strip().startswith("{") else s, seq.ctx)


def _prufer_char(p: int, digits: str | None, m: int | None, N: int) -> characters.TruncatedPAdic:
    if digits:
        return characters.TruncatedPAdic(p, tuple(_int_list(digits)))
    return characters.TruncatedPAdic.from_int(p, 1 if m is None else m, N)


def _ds_char(ctx: DirectSumContext, coeffs: str) -> characters.DsCharacter:
    if coeffs.strip().startswith("{"):
        data = {int(k): int(v) for k, v in json.loads(coeffs).items()}
    else:
        data = {}
        for part in filter(None, coeffs.replace(";", ",").split(",")):
            i, _, c = part.partition(":")
            data[int(i)] = int(c)
    return characters.DsCharacter.make(ctx, data)


def _tol(args, cfg: RunConfig, n_checkpoints: int) -> Fraction | None:
    if getattr(args, "tol", None):
        return Fraction(args.tol)
    return cfg.tol(n_checkpoints)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_canon(args, cfg, emit) -> int:
    inputs: list[dict] = []
    if args.terms is not None:
        inputs.append({"p": args.p, "terms": json.loads(args.terms)})
    else:
        for line in sys.stdin:
            if line.strip():
                inputs.append(json.loads(line))
    for item in inputs:
        rep = canonical.CoeffRep.from_pairs(int(item["p"]), item["terms"])
        c = canonical.canonicalize(rep)
        emit({
            "input": rep.to_json(),
            "canonical": [[n, s] for n, s in c.terms],
            "support": sorted(c.support),
            "lambda": c.lam,
            "value": str(canonical.eval_coeffs(rep)),
        })
    return EXIT_OK


def cmd_aset(args, cfg, emit) -> int:
    seq = constructions.make_sequence(args.seq)
    found = windows.enum_Alm(seq, args.l, args.window, budget=cfg.budget)
    for elem in sorted(found, key=lambda e: e.sort_key()):
        wit = found[elem]
        emit({"element": str(elem), "witness": wit.to_json(), "witness_str": str(wit), "window": args.window, "l": args.l})
    return EXIT_OK


def cmd_member(args, cfg, emit) -> int:
    seq = constructions.make_sequence(args.seq)
    g = _element(seq, args.g)
    res = windows.member_Alm(g, seq, args.l, args.window, budget=cfg.budget)
    rec = {"g": str(g), "l": args.l, "window": args.window}
    if res.found:
        rec.update(result="Member", witness=res.witness.to_json(), witness_str=str(res.witness))
    else:
        rec.update(result="NotInWindow", note="silent about indices beyond the window")
    emit(rec)
    return EXIT_OK


def cmd_zpscan(args, cfg, emit) -> int:
    seq = constructions.make_sequence(args.seq)
    g = _element(seq, args.g)
    verdict = windows.zp_scan(g, seq, args.l, args.m, args.width, budget=cfg.budget)
    emit({"g": str(g), "l": args.l, **verdict.to_json()})
    return EXIT_OK


def cmd_criteria(args, cfg, emit) -> int:
    seq = None
    if args.orders:
        orders = _int_list(args.orders)
        horizon = len(orders)
    else:
        seq = constructions.make_sequence(args.seq)
        horizon = args.horizon or cfg.horizon
        orders = [seq(k).order() for k in range(1, horizon + 1)]
    ratios = windows.cond_i_values(orders)
    emit({
        "check": "order_ratio_growth",
        **windows.EvidenceUpToHorizon(horizon, tuple(ratios), "order_ratio_growth", windows.growth_flag(ratios)).to_json(),
    })
    for name, verdict in sorted(windows.cor24_check(orders).items()):
        emit({"check": name, **verdict.to_json()})
    if seq is not None and hasattr(seq, "exponents"):
        ns = [seq.exponents(k) for k in range(1, horizon + 1)]
        emit({"check": "gap_growth", **windows.gap_verdict(ns).to_json()})
    if args.l and args.window:
        w = args.window
        emit({"check": "ratio_inf", "l": args.l, "window": w, "value": windows.cond_ii_inf(orders, args.l, w, cfg.budget),
              "verdict": "EvidenceUpToHorizon", "condition": "ratio_inf", "horizon": w.K})
        if seq is not None:
            emit({"check": "quotient_order_inf", "l": args.l, "window": w,
                  "value": windows.cond_iii_inf(seq, args.l, w, cfg.cap, cfg.budget),
                  "verdict": "EvidenceUpToHorizon", "condition": "quotient_order_inf", "horizon": w.K})
            if args.n:
                res = windows.cond_iv_check(seq, args.l, args.n, w, cfg.budget)
                rec = {"check": "torsion_free_window", "l": args.l, "n": args.n, "window": w, "horizon": w.K,
                       "condition": "torsion_free_window"}
                if res.holds:
                    rec.update(verdict="EvidenceUpToHorizon", result="Holds")
                else:
                    rec.update(verdict="Refuted", result="Violation", element=str(res.element), witness=res.witness.to_json())
                emit(rec)
    return EXIT_OK


def cmd_char(args, cfg, emit) -> int:
    action = args.action
    if action == "eval":
        chi = _prufer_char(args.p, args.digits, args.m, args.N)
        y = constructions.parse_prufer(args.y, args.p)
        emit({"chi": chi.to_json(), "y": str(y), "value": str(characters.eval_char(chi, y))})
    elif action == "rk":
        chi = _prufer_char(args.p, args.digits, args.m, args.N)
        emit({"chi": chi.to_json(), "n_k": args.nk, "n_k+1": args.nk1, "r_k": str(characters.r_block(chi, args.nk, args.nk1))})
    elif action == "report":
        seq = constructions.make_sequence(args.seq)
        if isinstance(seq.ctx, PruferGroup):
            chi = _prufer_char(seq.ctx.p, args.digits, args.m, args.N)
        else:
            chi = _ds_char(seq.ctx, args.coeffs or "")
        cps = _int_list(args.checkpoints) if args.checkpoints else None
        horizon = args.horizon or cfg.horizon
        n_cp = len(cps) if cps else len(characters.default_checkpoints(horizon))
        rep = characters.continuity_report(chi, seq, horizon, cps, _tol(args, cfg, n_cp))
        emit({"chi": chi.to_json(), **rep.to_json()})
    elif action == "classify":
        seq = constructions.make_sequence(args.seq)
        horizon = args.horizon or cfg.horizon
        tol = _tol(args, cfg, 3) or Fraction(1, seq.ctx.p**6)
        residues = characters.classify_mchi1(seq, args.mod, horizon, tol, truncation=args.truncation)
        scope = (
            "complete classification: the sequence contains a tail of e_n, so every continuous character is some m*chi_1"
            if seq.contains_e_tail
            else "partial: only the family m*chi_1 was searched"
        )
        emit({"modulus": args.mod, "residues": sorted(residues), "horizon_rounds": horizon, "tol": tol, "scope": scope,
              "verdict": "EvidenceUpToHorizon", "condition": "character_continuity"})
    elif action == "witness":
        x = constructions.parse_prufer(args.x, args.p)
        rule = constructions.exponent_rule(args.n)
        chi = characters.build_faithful_witness(x, rule, args.N)
        blocks = characters.complete_blocks(rule, args.N)
        emit({
            "chi": chi.to_json(),
            "x": str(x),
            "blocks": [[a, b] for a, b in blocks],
            "r_blocks": [str(characters.r_block(chi, a, b)) for a, b in blocks],
            "chi(x)": str(chi(x)),
            "free_positions": characters.witness_free_positions(x, rule, args.N),
        })
    elif action == "radical":
        _char_radical(args, cfg, emit)
    return EXIT_OK


def _char_radical(args, cfg, emit) -> None:
    label = f"common kernel of the classified continuous characters at truncation {args.depth}"
    if args.seq:
        seq = constructions.make_sequence(args.seq)
        horizon = args.horizon or cfg.horizon
        tol = _tol(args, cfg, 3) or Fraction(1, seq.ctx.p**6)
        residues = characters.classify_mchi1(seq, args.mod, horizon, tol, truncation=args.truncation)
        family = [characters.TruncatedPAdic.from_int(seq.ctx.p, m, args.depth) for m in sorted(residues)]
        if not family:
            raise ValueError("no continuous character found")
    elif args.p:
        family = [characters.TruncatedPAdic.from_int(args.p, m, args.depth) for m in _int_list(args.family)]
    else:
        ctx = DirectSumContext(args.orders)
        family = [_ds_char(ctx, part) for part in json.loads(args.family)] if args.family.strip().startswith("[") \
            else [_ds_char(ctx, part) for part in args.family.split("|")]
    kernel = characters.radical_from_kernels(family, args.depth, cap=cfg.cap)
    emit({"label": label, "size": len(kernel), "elements": [str(y) for y in kernel], "family_size": len(family)})


def cmd_gallery(args, cfg, emit) -> int:
    if args.spec:
        seq = constructions.make_sequence(args.spec)
        for k in range(1, args.K + 1):
            emit({"k": k, "term": str(seq(k)), "order": seq(k).order()})
        return EXIT_OK
    for kind in constructions.KINDS:
        emit({"kind": kind, "parameters": constructions.GALLERY[kind]})
    return EXIT_OK


def cmd_reproduce(args, cfg, emit) -> int:
    from .reproduce import CRITERIA, run_criterion

    ids = sorted(CRITERIA) if args.id == "all" else [int(args.id)]
    status = EXIT_OK
    for cid in ids:
        if cid not in CRITERIA:
            raise ValueError(f"unknown criterion {cid}")
        res = run_criterion(cid, seed=cfg.seed)
        sys.stderr.write(res.line() + "\n")
        emit(res.to_json())
        if not res.passed:
            status = EXIT_FAIL
    return status


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def common(default):
        # global options are accepted before or after the subcommand
        parent = argparse.ArgumentParser(add_help=False)
        parent.add_argument("--config", default=default, help="flat JSON config file (default: $TSEQ_CONFIG)")
        parent.add_argument("--format", choices=("json", "table"), default=default)
        parent.add_argument("--budget", type=int, default=default)
        parent.add_argument("--cap", type=int, default=default)
        parent.add_argument("--seed", type=int, default=default)
        return parent

    ap = argparse.ArgumentParser(prog="tseq", description="Exact T-sequence and character computations.",
                                 parents=[common(None)])
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common(argparse.SUPPRESS)], **kw)

    p = sub.add_parser("canon", help="canonical forms; reads JSON lines from stdin without --terms")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--terms")
    p.set_defaults(func=cmd_canon)

    for name, func in (("aset", cmd_aset), ("member", cmd_member)):
        p = sub.add_parser(name)
        p.add_argument("--seq", required=True)
        p.add_argument("--l", type=int, required=True)
        p.add_argument("--window", type=_window, required=True)
        if name == "member":
            p.add_argument("--g", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("zpscan")
    p.add_argument("--seq", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=_int_range, required=True, help="range of starting indices, e.g. 1..10")
    p.add_argument("--width", type=int, default=2)
    p.set_defaults(func=cmd_zpscan)

    p = sub.add_parser("criteria")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--seq")
    src.add_argument("--orders", help="comma-separated element orders")
    p.add_argument("--horizon", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--window", type=_window)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_criteria)

    p = sub.add_parser("char")
    p.add_argument("action", choices=("eval", "rk", "report", "classify", "witness", "radical"))
    p.add_argument("--p", type=int)
    p.add_argument("--digits")
    p.add_argument("--m", type=int, help="use m*chi_1")
    p.add_argument("--N", type=int, default=64, help="truncation level")
    p.add_argument("--y")
    p.add_argument("--nk", type=int)
    p.add_argument("--nk1", type=int)
    p.add_argument("--seq")
    p.add_argument("--coeffs", help="direct-sum character, e.g. 2:1,3:2")
    p.add_argument("--horizon", type=int)
    p.add_argument("--checkpoints")
    p.add_argument("--tol")
    p.add_argument("--mod", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--x")
    p.add_argument("--n", default="square", help="exponent rule for witness")
    p.add_argument("--family", help="multipliers of chi_1, or direct-sum characters separated by |")
    p.add_argument("--orders")
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_char)

    p = sub.add_parser("gallery")
    p.add_argument("--spec")
    p.add_argument("--K", type=int, default=8)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("reproduce")
    p.add_argument("id", help="criterion number or 'all'")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: Iterable[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config, format=args.format, budget=args.budget, cap=args.cap, seed=args.seed)
        return args.func(args, cfg, Emitter(cfg.format))
    except (BudgetExceeded, CapExceeded) as exc:
        sys.stderr.write(f"limit exceeded: {exc}\n")
        return EXIT_LIMIT
    except (TSeqError, ValueError, KeyError, IndexError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
