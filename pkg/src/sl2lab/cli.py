"""Experiment runner: every laboratory operation bound to a named,
reproducible command with CSV/JSON output.

Exit codes: 0 success, 2 validation error, 3 work budget exceeded,
4 regression drift (suite mode).  Identical invocations produce
byte-identical output files; timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import cayley, incidence, markov, qrgap, subgroups, words
from .errors import BudgetExceeded, Sl2LabError
from .field import FieldCtx, FqElem, GaussInt
from .incidence import PointSet, SFamily
from .sl2 import Mat2, u, weyl

EXPERIMENTS = {}


def experiment(name, help_text):
    def deco(fn):
        EXPERIMENTS[name] = (fn, help_text)
        return fn
    return deco


# ---------------------------------------------------------------- parsing

def parse_matrix(ctx: FieldCtx, text: str) -> Mat2:
    if text == "w":
        return weyl(ctx)
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"matrix must be 'w' or 'a,b,c,d', got {text!r}")
    return Mat2(ctx, *(int(x) for x in parts))


def parse_set(ctx: FieldCtx, spec: str, rng: np.random.Generator) -> PointSet:
    """Set constructors: qr | full | interval:a..b | subgroup:d |
    list:x,y,z | random:m."""
    if spec == "qr":
        return PointSet.residues(ctx)
    if spec == "full":
        return PointSet.full(ctx)
    kind, _, arg = spec.partition(":")
    if kind == "interval":
        lo, _, hi = arg.partition("..")
        return PointSet.interval(ctx, int(lo), int(hi))
    if kind == "subgroup":
        sub = subgroups.enumerate_subgroup(ctx, int(arg))
        return PointSet.from_iterable(ctx, sub.elements)
    if kind == "list":
        return PointSet.from_iterable(ctx, (int(x) for x in arg.split(",")))
    if kind == "random":
        m = int(arg)
        picks = rng.choice(ctx.p, size=m, replace=False)
        return PointSet.from_iterable(ctx, (int(x) for x in picks))
    raise ValueError(f"unknown set constructor {spec!r}")


def parse_gauss(text: str) -> GaussInt:
    """Gaussian integer literal: '2', '-3', '2+1i', '2-3i', '1i'."""
    t = text.replace(" ", "")
    if not t.endswith("i"):
        return GaussInt(int(t), 0)
    t = t[:-1]
    for pos in range(len(t) - 1, 0, -1):
        if t[pos] in "+-":
            return GaussInt(int(t[:pos]), int(t[pos:] or "1"))
    if t in ("", "+", "-"):
        t += "1"
    return GaussInt(0, int(t))


def format_word(word) -> str:
    if not word:
        return "e"
    return " ".join(f"{letter}^{exp}" for letter, exp in word)


def parse_word(text: str):
    if text == "e":
        return ()
    out = []
    for block in text.split():
        letter, _, exp = block.partition("^")
        out.append((letter, int(exp or "1")))
    return tuple(out)


# ---------------------------------------------------------------- output

def format_value(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return v


def write_rows(rows, fmt: str, out_path):
    if fmt == "json":
        text = json.dumps(
            [{k: format_value(v) for k, v in row.items()} for row in rows],
            indent=2) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()),
                                    lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: format_value(v) for k, v in row.items()})
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def count_report_row(name, report):
    row = {"experiment": name}
    row.update(report.params)
    row["exact_count"] = report.exact_count
    row["main_term"] = report.main_term
    row["normalized_error"] = report.normalized_error
    return row


def budget_from_env() -> int:
    raw = os.environ.get("LAB_BUDGET")
    return int(raw) if raw else incidence.PRODUCT_BUDGET


# ---------------------------------------------------------------- commands

@experiment("expander", "girth and second eigenvalue of a conjugated-unipotent Cayley graph")
def run_expander(args, rng):
    ctx = FieldCtx(args.prime)
    g = parse_matrix(ctx, args.g)
    gens = cayley.build_generator_set_bg(ctx, g, args.n, stride=args.stride)
    if args.symmetrize:
        gens = cayley.symmetrize(gens)
    graph = cayley.cayley_sl2(ctx, gens)
    rep = cayley.second_eigenvalue(graph, tol=args.tol, seed=args.seed)
    gi = cayley.girth(graph, symmetric=args.symmetrize)
    return [{"experiment": "expander", "p": ctx.p, "g": args.g, "N": args.n,
             "stride": args.stride, "symmetrized": args.symmetrize,
             "degree": graph.degree, "vertices": graph.n_vertices,
             "lambda2": rep.lambda2, "lambda_min": rep.lambda_min,
             "lambda2_abs": rep.lambda2_abs, "residual": rep.residual,
             "girth": gi}]


@experiment("girth", "girth of a cyclic or SL2 Cayley graph")
def run_girth(args, rng):
    if args.cyclic:
        graph = cayley.cayley_cyclic(args.cyclic,
                                     [int(s) for s in args.steps.split(",")])
        return [{"experiment": "girth", "graph": f"cyclic:{args.cyclic}",
                 "steps": args.steps, "girth": cayley.girth(graph)}]
    ctx = FieldCtx(args.prime)
    if args.unipotents:
        gens = [u(ctx, 1), u(ctx, -1), Mat2(ctx, 1, 0, 1, 1), Mat2(ctx, 1, 0, -1, 1)]
    else:
        g = parse_matrix(ctx, args.g)
        gens = cayley.symmetrize(
            cayley.build_generator_set_bg(ctx, g, args.n, stride=args.stride))
    graph = cayley.cayley_sl2(ctx, gens)
    return [{"experiment": "girth", "graph": f"sl2:{ctx.p}",
             "degree": graph.degree, "girth": cayley.girth(graph)}]


@experiment("count-bg", "solutions of g(alpha+a) = beta+b against the main term")
def run_count_bg(args, rng):
    ctx = FieldCtx(args.prime)
    g = parse_matrix(ctx, args.g)
    a_set = parse_set(ctx, args.a_set, rng)
    b_set = parse_set(ctx, args.b_set, rng)
    if args.s_family == "diag":
        rep = incidence.count_bg_prime(ctx, g, args.n, a_set, b_set,
                                       stride=args.stride)
    else:
        if args.s_family == "grid":
            fam = SFamily.grid(args.n, k=1, stride=args.stride)
        else:
            pairs = [tuple(int(x) for x in t.split(","))
                     for t in args.s_family.split(";")]
            fam = SFamily.from_pairs(pairs, args.n, stride=args.stride)
        rep = incidence.count_bg_general(ctx, g, fam, a_set, b_set)
    return [count_report_row("count-bg", rep)]


@experiment("count-words", "solutions of the k-fold unipotent word equation")
def run_count_words(args, rng):
    ctx = FieldCtx(args.prime)
    gs = [parse_matrix(ctx, t) for t in args.gs.split(";")]
    tuples = [tuple(int(x) for x in t.split(",")) for t in args.s_tuples.split(";")]
    fam = SFamily(tuple(tuples), args.n, len(gs), stride=args.stride)
    rep = incidence.count_bg_words(ctx, gs, fam,
                                   parse_set(ctx, args.a_set, rng),
                                   parse_set(ctx, args.b_set, rng))
    return [count_report_row("count-words", rep)]


@experiment("count-union", "count over a union of shifted blocks plus extra pairs")
def run_count_union(args, rng):
    ctx = FieldCtx(args.prime)
    g = parse_matrix(ctx, args.g)
    blocks = []
    if args.blocks:
        for blk in args.blocks.split(";"):
            head, _, n_txt = blk.partition(":")
            da, db = (int(x) for x in head.split(","))
            blocks.append(((da, db), SFamily.grid(int(n_txt), k=1)))
    omega = []
    if args.omega:
        omega = [tuple(int(x) for x in t.split(",")) for t in args.omega.split(";")]
    rep = incidence.count_union_structured(ctx, g, blocks, omega,
                                           parse_set(ctx, args.a_set, rng),
                                           parse_set(ctx, args.b_set, rng))
    return [count_report_row("count-union", rep)]


@experiment("product-stats", "multiplicity statistics of the alternating H-set product")
def run_product_stats(args, rng):
    ctx = FieldCtx(args.prime)
    g = parse_matrix(ctx, args.g)
    fam = SFamily.grid(args.n, k=1, stride=args.stride)
    h_set = incidence.build_h_set(ctx, g, fam)
    linf, l2 = incidence.product_multiplicity(ctx, h_set, args.l,
                                              budget=budget_from_env())
    return [{"experiment": "product-stats", "p": ctx.p, "g": args.g,
             "N": args.n, "l": args.l, "h_size": len(h_set),
             "linf": linf, "l2": l2}]


@experiment("subgroup-mass", "mass of the H-set product on a Borel or dihedral coset")
def run_subgroup_mass(args, rng):
    ctx = FieldCtx(args.prime)
    g = parse_matrix(ctx, args.g)
    fam = SFamily.grid(args.n, k=1, stride=args.stride)
    h_set = incidence.build_h_set(ctx, g, fam)
    if args.coset == "borel":
        ident = Mat2(ctx, 1, 0, 0, 1)
        coset = incidence.BorelCoset(ident, ident)
    else:
        coset = incidence.DihedralCoset(ctx.nonresidue(), Mat2(ctx, 1, 0, 0, 1))
    mass, implied_k = incidence.subgroup_mass(ctx, h_set, args.l, coset,
                                              budget=budget_from_env())
    return [{"experiment": "subgroup-mass", "p": ctx.p, "g": args.g,
             "N": args.n, "l": args.l, "coset": args.coset, "mass": mass,
             "implied_k": implied_k}]


@experiment("cont2", "energy and image size of 1/(a+b)+c")
def run_cont2(args, rng):
    ctx = FieldCtx(args.prime)
    a_set = parse_set(ctx, args.a_set, rng)
    energy = incidence.count_cont2_energy(ctx, a_set, a_set, a_set)
    image = incidence.image_size_cont2(ctx, a_set)
    return [{"experiment": "cont2", "p": ctx.p, "set": args.a_set,
             "set_size": len(a_set), "energy": energy, "image_size": image}]


@experiment("mobius-inc", "incidences between A x B and a set of Mobius maps")
def run_mobius_inc(args, rng):
    ctx = FieldCtx(args.prime)
    a_set = parse_set(ctx, args.a_set, rng)
    b_set = parse_set(ctx, args.b_set, rng)
    transforms = []
    while len(transforms) < args.count:
        a, b, c = (int(x) for x in rng.integers(0, ctx.p, size=3))
        if a == 0:
            continue
        d = ((1 + b * c) * ctx.inv(a)) % ctx.p
        transforms.append(Mat2(ctx, a, b, c, d))
    n_inc = incidence.count_mobius_incidences(ctx, a_set, b_set, transforms)
    return [{"experiment": "mobius-inc", "p": ctx.p, "A": args.a_set,
             "B": args.b_set, "transforms": args.count, "incidences": n_inc}]


@experiment("fq-system", "count of (a+b)(c+d) = lambda over F_p[i]")
def run_fq_system(args, rng):
    ctx = FieldCtx(args.prime)
    re, _, im = args.lam.partition(",")
    lam = FqElem(ctx, int(re), int(im or "0"))

    def sample():
        pts = rng.integers(0, ctx.p, size=(args.size, 2))
        return list({(int(x), int(y)) for x, y in pts})

    fams = [sample() for _ in range(4)]
    rep = incidence.count_fq_system(ctx, *fams, lam)
    return [count_report_row("fq-system", rep)]


@experiment("markov", "total-variation mixing profile of the lazy Mobius chain")
def run_markov(args, rng):
    ctx = FieldCtx(args.prime)
    g = parse_matrix(ctx, args.g)
    spec = markov.ChainSpec(ctx, g, args.gamma, laziness=args.laziness)
    rows, slope = markov.mix_profile(spec, args.nmax)
    out = [{"experiment": "markov", "p": ctx.p, "g": args.g,
            "gamma": args.gamma, "laziness": args.laziness, "n": n,
            "tv_p1": tv1, "tv_fpstar": tv2}
           for n, tv1, tv2 in rows]
    out.append({"experiment": "markov", "p": ctx.p, "g": args.g,
                "gamma": args.gamma, "laziness": args.laziness, "n": -1,
                "tv_p1": slope, "tv_fpstar": slope})
    return out


@experiment("shift-intersect", "elements of a shifted-intersection of a subgroup")
def run_shift_intersect(args, rng):
    ctx = FieldCtx(args.prime)
    gamma = subgroups.enumerate_subgroup(ctx, args.order)
    spec = subgroups.ShiftSpec(
        tuple(int(x) for x in args.alphas.split(",")),
        tuple(int(x) for x in args.betas.split(",")))
    elems = sorted(subgroups.shifted_intersection(ctx, gamma, spec))
    return [{"experiment": "shift-intersect", "p": ctx.p, "order": args.order,
             "alphas": args.alphas, "betas": args.betas, "size": len(elems),
             "elements": ",".join(str(x) for x in elems)}]


@experiment("transport-verify", "exact transport of a shifted intersection through g")
def run_transport_verify(args, rng):
    ctx = FieldCtx(args.prime)
    gamma = subgroups.enumerate_subgroup(ctx, args.order)
    g = parse_matrix(ctx, args.g)
    spec = subgroups.ShiftSpec(
        tuple(int(x) for x in args.alphas.split(",")),
        tuple(int(x) for x in args.betas.split(",")))
    out = subgroups.transport(ctx, g, gamma, spec, debug=True)
    return [{"experiment": "transport-verify", "p": ctx.p, "order": args.order,
             "g": args.g, "alphas": args.alphas, "betas": args.betas,
             "out_alphas": ",".join(str(x) for x in out.alphas),
             "out_betas": ",".join(str(x) for x in out.betas),
             "verified": True}]


@experiment("weil-check", "shifted residue intersection against p/2^(k+1) + k sqrt(p)")
def run_weil_check(args, rng):
    ctx = FieldCtx(args.prime)
    shifts = [int(x) for x in args.shifts.split(",")]
    size, bound, ok = subgroups.weil_bound_check(ctx, shifts)
    return [{"experiment": "weil-check", "p": ctx.p, "shifts": args.shifts,
             "size": size, "bound": bound, "ok": ok}]


@experiment("shrink", "constructive shrinking of a shifted subgroup intersection")
def run_shrink(args, rng):
    ctx = FieldCtx(args.prime)
    gamma = subgroups.enumerate_subgroup(ctx, args.order)
    shifts = [int(x) for x in args.shifts.split(",")]
    trace = subgroups.constructive_shrink(
        ctx, gamma, shifts, args.n,
        require_symmetry=not args.allow_asymmetric)
    rows = [{"experiment": "shrink", "p": ctx.p, "order": args.order,
             "step": 0, "move": "init", "x": 0, "size": trace.initial_size,
             "ratio": 1.0, "t_size": len(trace.s_shifts),
             "t_bound": len(trace.s_shifts)}]
    for st in trace.steps:
        rows.append({"experiment": "shrink", "p": ctx.p, "order": args.order,
                     "step": st.index, "move": st.move, "x": st.x,
                     "size": st.size, "ratio": st.ratio,
                     "t_size": st.t_size, "t_bound": st.t_bound})
    return rows


@experiment("qr-gap", "extremal quadratic-residue gap statistics")
def run_qr_gap(args, rng):
    if args.limit:
        _, _, records = qrgap.scan_primes(args.limit, lo=args.lo)
        return [{"experiment": "qr-gap", "p": p, "d": d, "ratio": ratio,
                 "gap_start": -1} for p, d, ratio in records]
    rep = qrgap.qr_gap(FieldCtx(args.prime))
    return [{"experiment": "qr-gap", "p": rep.p, "d": rep.d,
             "ratio": rep.ratio, "gap_start": rep.location}]


@experiment("ratio-set", "cardinality of { y/(a+x) } for interval parameters")
def run_ratio_set(args, rng):
    ctx = FieldCtx(args.prime)
    count, benchmark = qrgap.ratio_set_count(ctx, args.a, args.big_h, args.h_star)
    return [{"experiment": "ratio-set", "p": ctx.p, "a": args.a,
             "H": args.big_h, "H_star": args.h_star, "count": count,
             "benchmark": benchmark, "quotient": count / benchmark}]


@experiment("pingpong", "exhaustive scalar-word search for two unipotent generators")
def run_pingpong(args, rng):
    s = parse_gauss(args.s)
    t = parse_gauss(args.t)
    rep = words.verify_ping_pong(s, t, args.max_blocks, args.max_exp)
    return [{"experiment": "pingpong", "s": args.s, "t": args.t,
             "max_blocks": args.max_blocks, "max_exp": args.max_exp,
             "words_checked": rep.words_checked,
             "scalar_words": len(rep.scalar_words),
             "collisions": rep.collisions, "min_offdiag": rep.min_offdiag}]


@experiment("reconstruct", "recover a generator word from its matrix second column")
def run_reconstruct(args, rng):
    s = parse_gauss(args.s)
    t = parse_gauss(args.t)
    b = parse_gauss(args.b)
    d = parse_gauss(args.d)
    word = words.reconstruct_from_column(b, d, s, t, args.max_blocks,
                                         check_unique=args.check_unique)
    return [{"experiment": "reconstruct", "s": args.s, "t": args.t,
             "b": args.b, "d": args.d, "word": format_word(word)}]


# ---------------------------------------------------------------- plumbing

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="sl2lab",
        description="exact-arithmetic SL2(F_p) experiment runner")
    top.add_argument("--list", action="store_true",
                     help="list all experiments and exit")
    sub = top.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="accepted for interface compatibility; results "
                            "are deterministic regardless")

    p = sub.add_parser("expander", help=EXPERIMENTS["expander"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--n", "--N", dest="n", type=int, required=True)
    p.add_argument("--stride", type=int, default=2)
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)

    p = sub.add_parser("girth", help=EXPERIMENTS["girth"][1])
    p.add_argument("--cyclic", type=int, default=0)
    p.add_argument("--steps", default="1,-1")
    p.add_argument("--prime", type=int, default=0)
    p.add_argument("--unipotents", action="store_true")
    p.add_argument("--g", default="w")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--stride", type=int, default=2)
    common(p)

    p = sub.add_parser("count-bg", help=EXPERIMENTS["count-bg"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--n", "--N", dest="n", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--s-family", default="diag",
                   help="diag | grid | semicolon-separated alpha,beta pairs")
    p.add_argument("--a-set", default="qr")
    p.add_argument("--b-set", default="qr")
    common(p)

    p = sub.add_parser("count-words", help=EXPERIMENTS["count-words"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--gs", required=True, help="semicolon-separated matrices")
    p.add_argument("--s-tuples", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--a-set", default="qr")
    p.add_argument("--b-set", default="qr")
    common(p)

    p = sub.add_parser("count-union", help=EXPERIMENTS["count-union"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--blocks", default="", help="da,db:N;da,db:N;...")
    p.add_argument("--omega", default="", help="a,b;a,b;...")
    p.add_argument("--a-set", default="qr")
    p.add_argument("--b-set", default="qr")
    common(p)

    p = sub.add_parser("product-stats", help=EXPERIMENTS["product-stats"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    common(p)

    p = sub.add_parser("subgroup-mass", help=EXPERIMENTS["subgroup-mass"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--coset", choices=("borel", "dihedral"), default="borel")
    common(p)

    p = sub.add_parser("cont2", help=EXPERIMENTS["cont2"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--a-set", default="qr")
    common(p)

    p = sub.add_parser("mobius-inc", help=EXPERIMENTS["mobius-inc"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--a-set", default="qr")
    p.add_argument("--b-set", default="qr")
    p.add_argument("--count", type=int, default=10)
    common(p)

    p = sub.add_parser("fq-system", help=EXPERIMENTS["fq-system"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--size", type=int, default=10)
    p.add_argument("--lam", "--lambda", dest="lam", default="1,1")
    common(p)

    p = sub.add_parser("markov", help=EXPERIMENTS["markov"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--laziness", choices=(markov.HALF_LAZY, markov.THREE_POINT),
                   default=markov.HALF_LAZY)
    common(p)

    p = sub.add_parser("shift-intersect", help=EXPERIMENTS["shift-intersect"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--alphas", required=True)
    p.add_argument("--betas", required=True)
    common(p)

    p = sub.add_parser("transport-verify", help=EXPERIMENTS["transport-verify"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--g", default="w")
    p.add_argument("--alphas", required=True)
    p.add_argument("--betas", required=True)
    common(p)

    p = sub.add_parser("weil-check", help=EXPERIMENTS["weil-check"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--shifts", required=True)
    common(p)

    p = sub.add_parser("shrink", help=EXPERIMENTS["shrink"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--shifts", default="1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--allow-asymmetric", action="store_true",
                   help="run even when -1 is outside the subgroup")
    common(p)

    p = sub.add_parser("qr-gap", help=EXPERIMENTS["qr-gap"][1])
    p.add_argument("--prime", type=int, default=0)
    p.add_argument("--limit", type=int, default=0,
                   help="scan all primes up to this bound instead")
    p.add_argument("--lo", type=int, default=3)
    common(p)

    p = sub.add_parser("ratio-set", help=EXPERIMENTS["ratio-set"][1])
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--H", dest="big_h", type=int, required=True)
    p.add_argument("--Hstar", dest="h_star", type=int, required=True)
    common(p)

    p = sub.add_parser("pingpong", help=EXPERIMENTS["pingpong"][1])
    p.add_argument("--s", default="2")
    p.add_argument("--t", default="2")
    p.add_argument("--max-blocks", type=int, default=4)
    p.add_argument("--max-exp", type=int, default=3)
    common(p)

    p = sub.add_parser("reconstruct", help=EXPERIMENTS["reconstruct"][1])
    p.add_argument("--s", default="2")
    p.add_argument("--t", default="2")
    p.add_argument("--b", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--max-blocks", type=int, default=8)
    p.add_argument("--check-unique", action="store_true")
    common(p)

    p = sub.add_parser("suite", help="run a manifest of experiments with "
                                     "optional regression baseline")
    p.add_argument("manifest")
    p.add_argument("--baseline", default=None,
                   help="frozen report to compare against (written if absent)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="relative drift tolerance for float fields")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    return top


def run_experiment(args) -> list[dict]:
    rng = np.random.default_rng(args.seed)
    fn, _ = EXPERIMENTS[args.command]
    return fn(args, rng)


def _drift(a, b, tol):
    if isinstance(a, float) or isinstance(b, float):
        fa, fb = float(a), float(b)
        return abs(fa - fb) > tol * max(1.0, abs(fa), abs(fb))
    return a != b


def run_suite(args) -> int:
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    report = {}
    parser = build_parser()
    for entry in manifest:
        sub_args = parser.parse_args(entry["argv"])
        rows = run_experiment(sub_args)
        report[entry["id"]] = [
            {k: format_value(v) for k, v in row.items()} for row in rows]
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.baseline:
        if not os.path.exists(args.baseline):
            with open(args.baseline, "w") as fh:
                fh.write(text)
            print(f"baseline frozen at {args.baseline}", file=sys.stderr)
            return 0
        with open(args.baseline) as fh:
            base = json.load(fh)
        drifts = []
        for key, rows in report.items():
            if key not in base:
                drifts.append(f"{key}: missing from baseline")
                continue
            if len(base[key]) != len(rows):
                drifts.append(f"{key}: row count changed")
                continue
            for i, (row, brow) in enumerate(zip(rows, base[key])):
                for field in row:
                    if field not in brow or _drift(row[field], brow[field], args.tol):
                        drifts.append(f"{key}[{i}].{field}: "
                                      f"{brow.get(field)!r} -> {row[field]!r}")
        if drifts:
            for d in drifts:
                print(f"drift: {d}", file=sys.stderr)
            return 4
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for name in sorted(EXPERIMENTS):
            print(f"{name}: {EXPERIMENTS[name][1]}")
        return 0
    if not args.command:
        parser.print_usage()
        return 2
    t0 = time.monotonic()
    try:
        if args.command == "suite":
            return run_suite(args)
        rows = run_experiment(args)
        write_rows(rows, args.format, args.out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (Sl2LabError, ValueError, AssertionError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    print(f"done in {time.monotonic() - t0:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
