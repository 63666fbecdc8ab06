"""Command-line front end: ``qinv <command> ...``.

Exit codes: 0 when every reported property holds, 1 when a mathematical
property fails, 2 for usage or input errors, 3 for internal assertion failures.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arrangement import (
    WeightedArrangement,
    ba_residues,
    is_baker_akhiezer,
    omega,
    preset,
    PRESETS,
)
from .kernel import Poly, parse_poly, parse_rational
from .quasiinv import GradedSubspace, graded_basis_A, conductor_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Poly):
        return x.to_str()
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return _fmt(x)


class Output:
    """Collects one report, printed once as text or JSON."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.data: dict = {}
        self.lines: list[str] = []

    def put(self, key: str, value, text: str | None = None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)
        elif value is not None:
            self.lines.append(f"{key}: {_fmt(value)}")

    def note(self, text: str):
        self.lines.append(text)

    def emit(self, stream):
        if self.fmt == "json":
            stream.write(json.dumps(_jsonable(self.data), indent=2) + "\n")
        else:
            stream.write("\n".join(self.lines) + "\n")


def _verdict(ok: bool) -> str:
    return "OK" if ok else "FAIL"


# ---------------------------------------------------------------------------
# argument parsing helpers


def _arrangement(args, mult_default: int = 1) -> WeightedArrangement:
    if getattr(args, "arr", None):
        try:
            return WeightedArrangement.from_json(Path(args.arr).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.arr}: {exc}") from exc
    name = getattr(args, "preset", None) or "lambda2"
    if name not in PRESETS:
        raise UsageError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    mult = getattr(args, "mult", None)
    if mult is None:
        return preset(name, mult_default)
    mults = [int(s) for s in mult.split(",")]
    return preset(name, mults[0] if len(mults) == 1 else mults)


def _point(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected a point a,b; got {text!r}")
    return parse_rational(parts[0]), parse_rational(parts[1])


def _gamma(text: str | None, arr: WeightedArrangement, nu=None):
    from .cmpic import GammaParam

    if text is None:
        lengths = [m - n for m, n in zip(arr.mults(), nu or [0] * len(arr))]
        return GammaParam.zero(lengths)
    if Path(text).is_file():
        text = Path(text).read_text()
    g = GammaParam.from_json(text)
    g.check_shape(arr, nu)
    return g


def _cusp_gamma(text: str | None, m: int) -> list[Fraction]:
    if text is None:
        return [Fraction(0)] * m
    text = text.strip()
    if text.startswith("["):
        vals = json.loads(text)
    else:
        vals = text.split(",")
    vals = [parse_rational(str(v)) for v in vals]
    if len(vals) == 1 and m > 1:
        vals += [Fraction(0)] * (m - 1)
    return vals


def _print_space(out: Output, space, show_basis: bool = True):
    table = space.hilbert_table() if isinstance(space, GradedSubspace) else [
        space.hilbert(k) for k in range(space.D + 1)
    ]
    out.put("hilbert", table, "Hilbert: " + ",".join(str(v) for v in table))
    out.put("degree_dims", space.degree_dims(), "dims:    " + ",".join(str(v) for v in space.degree_dims()))
    if show_basis:
        basis = [p.to_str() if isinstance(p, Poly) else p.to_str() for p in space.basis]
        out.put("basis", basis, "basis:")
        out.lines.extend(f"  {b}" for b in basis)


# ---------------------------------------------------------------------------
# commands


def cmd_check_ba(args, out: Output) -> int:
    arr = _arrangement(args)
    ok = is_baker_akhiezer(arr)
    out.put("arrangement", str(arr))
    out.put("ba", ok, f"BA: {'true' if ok else 'false'}")
    rows = ba_residues(arr)
    if not ok or args.verbose:
        out.note("line   k  first  second")
        for r in rows:
            out.note(f"{r['line']!s:6} {r['k']:2}  {r['first']}  {r['second']}")
    out.data["residues"] = [
        {"line": str(r["line"]), "k": r["k"], "first": str(r["first"]), "second": str(r["second"])}
        for r in rows
    ]
    return EXIT_OK if ok else EXIT_FAIL


def cmd_basis(args, out: Output) -> int:
    from . import cmpic

    D = args.deg
    kind = args.kind
    if kind == "cusp":
        if args.m is None or args.m < 1:
            raise UsageError("basis cusp needs --m >= 1")
        gamma = _cusp_gamma(args.gamma, args.m)
        space = cmpic.cusp_module_basis(args.m, gamma, D)
        out.put("kind", "cusp")
        out.put("gamma", [_fmt(g) for g in gamma])
        _print_space(out, space)
        return EXIT_OK
    arr = _arrangement(args)
    out.put("arrangement", str(arr))
    if kind == "A":
        space = graded_basis_A(arr, D, jobs=args.jobs)
    elif kind == "B":
        g = _gamma(args.gamma, arr)
        out.put("gamma", str(g))
        space = cmpic.graded_basis_B(arr, g, D)
    elif kind == "M":
        nu = [int(s) for s in args.nu.split(",")] if args.nu else [0] * len(arr)
        if len(nu) != len(arr):
            raise UsageError("--nu needs one entry per line")
        g = _gamma(args.gamma, arr, nu)
        out.put("nu", nu)
        out.put("gamma", str(g))
        space = cmpic.graded_basis_M(arr, nu, g, D)
    elif kind == "Omega":
        space = cmpic.dualizing_basis(arr, D)
    elif kind == "P":
        if not args.h:
            raise UsageError("basis P needs --h")
        h = parse_poly(args.h)
        out.put("h", h)
        out.put("upsilon", str(cmpic.upsilon(h, arr)))
        space = cmpic.graded_basis_P(h, arr, D)
    else:
        raise UsageError(f"unknown basis kind {kind}")
    out.put("kind", kind)
    _print_space(out, space)
    return EXIT_OK


def _admissible_xi(args, arr, rng=None) -> tuple[Fraction, Fraction]:
    from .bakhiezer import check_admissible

    if args.xi:
        xi = _point(args.xi)
        check_admissible(arr, xi, spectral=True)
        return xi
    rng = rng or random.Random(args.seed)
    while True:
        xi = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        try:
            check_admissible(arr, xi, spectral=True)
            return xi
        except ValueError:
            continue


def cmd_spectral(args, out: Output) -> int:
    from .bakhiezer import berest_psi, cm_hamiltonian, eigen_check, spectral_space
    from .cmpic import graded_basis_P
    from .satoengine import grassmannian_check

    arr = _arrangement(args)
    if not is_baker_akhiezer(arr):
        raise UsageError(f"arrangement {arr} is not of Baker-Akhiezer type")
    xi = _admissible_xi(args, arr)
    D = args.deg
    out.put("arrangement", str(arr))
    out.put("xi", list(xi))
    psi = berest_psi(arr, xi)
    out.put("psi", str(psi))
    W = spectral_space(arr, xi, D)
    hilb = grassmannian_check(W, arr.mu)
    h = Poly({(1, 0): -xi[0], (0, 1): -xi[1]})
    same = W.same_as(graded_basis_P(h, arr, D))
    eig = eigen_check(cm_hamiltonian(arr, xi), psi, omega())
    _print_space(out, W, show_basis=args.verbose)
    out.put("hilbert_ok", hilb, None)
    out.put("module_ok", same, None)
    out.put("eigen_ok", eig, None)
    out.note(f"Hilbert {_verdict(hilb)}; W = P(-u) {_verdict(same)}; eigen {_verdict(eig)}")
    return EXIT_OK if hilb and same and eig else EXIT_FAIL


def cmd_sato(args, out: Output) -> int:
    from . import satoengine as se
    from .bakhiezer import berest_psi, cm_hamiltonian, spectral_basis_all, spectral_space
    from .cmpic import graded_basis_B

    arr = _arrangement(args)
    fns = [parse_poly(f) for f in (args.fn or ["z1^2+z2^2"])]
    nmax = max(max(f.degree(), 0) for f in fns)
    DS = args.deg + nmax
    mu = arr.mu
    out.put("arrangement", str(arr))
    xi = None
    if args.gamma:
        g = _gamma(args.gamma, arr)
        W = graded_basis_B(arr, g, mu + DS)
        out.put("gamma", str(g))
    else:
        if not is_baker_akhiezer(arr):
            raise UsageError(f"arrangement {arr} is not of Baker-Akhiezer type")
        xi = _admissible_xi(args, arr)
        out.put("xi", list(xi))
        W = spectral_space(arr, xi, mu + DS)
    if not se.grassmannian_check(W, mu):
        out.put("grassmannian", False, "Grassmannian: FAIL")
        return EXIT_FAIL
    out.put("grassmannian", True, "Grassmannian: OK")
    S = se.sato_operator(W, DS)
    convention = "canonical"
    if xi is not None and args.convention == "berest":
        psi = berest_psi(arr, xi)
        T = se.sato_from_basis(spectral_basis_all(psi, DS), mu, DS)
        U = se.sato_unit_between(S, T)
        unit_ok = se.multiply(U, T).agrees(S)
        out.put("unit_ok", unit_ok, f"canonical = U * berest with unit U: {_verdict(unit_ok)}")
        S, convention = T, "berest"
    out.put("convention", convention)
    rep = se.check_sato(S, W)
    out.put("sato", rep, f"Sato operator ({convention}): order {rep['order']}, regular {rep['regular']}, F*S = W {_verdict(rep['inside'] and rep['spans'])}")
    ok = rep["ok"]
    if args.verbose:
        out.note("S slices:")
        out.lines.extend(f"  {k}: {v}" for k, v in S.to_dict()["slices"].items())
    out.data["S"] = S
    ops = {}
    for f in fns:
        try:
            L = se.conjugate(S, f)
        except ValueError as exc:
            out.put(f"L({f})", None, f"L({f}): {exc}")
            ok = False
            continue
        ops[str(f)] = L
        out.note(f"L({f}): order {se.order(L) if not L.is_zero() else '-'}, validity {L.D}")
        out.lines.extend(f"  {k}: {v}" for k, v in L.to_dict()["slices"].items())
        if xi is not None and f == omega() and convention == "berest":
            match = L.agrees(se.from_diffop(cm_hamiltonian(arr, xi), L.D))
            out.put("hamiltonian_ok", match, f"matches CM Hamiltonian expansion: {_verdict(match)}")
            ok = ok and match
    out.data["L"] = ops
    keys = list(ops)
    comm = True
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            comm = comm and se.commutator(ops[a], ops[b]).is_zero()
    if len(keys) > 1:
        out.put("commute", comm, f"pairwise commutators vanish: {_verdict(comm)}")
        ok = ok and comm
    return EXIT_OK if ok else EXIT_FAIL


def cmd_deform(args, out: Output) -> int:
    from .satoengine import deformed_example

    beta = parse_rational(args.beta)
    xi = _point(args.xi) if args.xi else (Fraction(1), Fraction(1))
    rep = deformed_example(beta, xi, args.deg)
    out.put("beta", beta)
    out.put("xi", list(rep["xi"]))
    out.put("grassmannian", rep["grassmannian"], f"(i)   Grassmannian: {_verdict(rep['grassmannian'])}")
    out.put("regular", rep["regular"], f"(ii)  regular: {_verdict(rep['regular'])}")
    out.put(
        "symbol_ok",
        rep["symbol_ok"],
        f"(iii) symbol at slice (0,0): {rep['symbol00'].to_str(('d1', 'd2'))}: {_verdict(rep['symbol_ok'])}",
    )
    out.put("H0_is_CM", rep["H0_is_CM"], f"      H_0 equals the CM operator: {_verdict(rep['H0_is_CM'])}")
    out.put(
        "residual_ok",
        rep["residual_ok"],
        f"(iv)  H_beta - H_0 - beta Z has order <= -1: {_verdict(rep['residual_ok'])}"
        + (f" (H_beta - H_0 has order {rep['diff_order']})" if rep["diff_order"] is not None else ""),
    )
    out.put("displayed_S_in_W", rep["displayed_S_in_W"], f"(v)   displayed S_0 + beta T is a Sato operator of W_beta: {_verdict(rep['displayed_S_in_W'])}")
    if rep["displayed_Z_match"] is not None:
        out.put("displayed_Z_match", rep["displayed_Z_match"], f"      displayed Z equals the order >= 0 part from S_0 + beta T: {_verdict(rep['displayed_Z_match'])}")
        out.put("aligned_Z_match", rep["aligned_Z_match"], f"      displayed Z equals Z from the aligned canonical operator: {rep['aligned_Z_match']} (differs by a unit conjugation)")
    else:
        out.put("displayed_Z_match", None, "      displayed Z: only available at xi = (1,1) with beta != 0, 1")
    out.put("displayed_w", rep["displayed_w"], f"      displayed w = {rep['displayed_w']}: in W_beta {rep['displayed_w_in_W']}")
    out.put("derived_w", rep["derived_w"], f"      derived w   = {rep['derived_w']}")
    out.put(
        "displayed_w_beta0_matches_berest",
        rep["displayed_w_beta0_matches_berest"],
        f"      displayed w at beta = 0 matches Berest's w: {rep['displayed_w_beta0_matches_berest']}",
    )
    if not rep["displayed_w_in_W"]:
        out.note("      note: the displayed w is not in W_beta; the derived w replaces it")
    if args.verbose:
        out.note("Z (derived):")
        if rep["Z_derived"] is not None:
            out.lines.extend(f"  {k}: {v}" for k, v in rep["Z_derived"].to_dict()["slices"].items())
    out.data["H_beta"] = rep["H_beta"]
    out.data["Z_derived"] = rep["Z_derived"]
    out.data["ok"] = rep["ok"]
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_conductor(args, out: Output) -> int:
    arr = _arrangement(args)
    rep = conductor_check(arr, args.deg)
    out.put("arrangement", str(arr))
    out.put("inclusion", rep["inclusion"], f"delta^2 * R in A through degree {args.deg}: {_verdict(rep['inclusion'])}")
    for d, w in rep["witnesses"].items():
        out.note(f"  sharpness at {d}: witness {w}")
    out.data["witnesses"] = {str(d): w for d, w in rep["witnesses"].items()}
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_props(args, out: Output) -> int:
    """A quick randomized property run, reproducible from --seed."""
    from .cmpic import group_op
    from .quasiinv import is_quasi_invariant_der, is_quasi_invariant_div
    from .satoengine import TruncSeries, constant_op, coefficient_op, left_action, multiply

    rng = random.Random(args.seed)
    n = args.count
    arrs = [preset("lambda1", 2), preset("lambda2", 1), preset("lambda4", 1)]
    agree = 0
    for _ in range(n):
        arr = rng.choice(arrs)
        f = Poly({(rng.randint(0, 4), rng.randint(0, 4)): rng.randint(-3, 3) for _ in range(3)})
        agree += is_quasi_invariant_div(f, arr) == is_quasi_invariant_der(f, arr)
    out.put("definitions_agree", f"{agree}/{n}")
    assoc = 0
    for _ in range(n):
        m = rng.randint(1, 4)
        g = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(m)] for _ in range(3)]
        lhs = group_op(group_op(g[0], g[1]), g[2])
        rhs = group_op(g[0], group_op(g[1], g[2]))
        assoc += lhs == rhs
    out.put("group_associative", f"{assoc}/{n}")
    act = 0
    for _ in range(n):
        D = 6
        P = coefficient_op(Poly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(1, 3)}), D) * constant_op(
            Poly({(rng.randint(0, 2), rng.randint(0, 2)): 1}), D
        )
        Qo = constant_op(Poly({(rng.randint(0, 1), rng.randint(0, 1)): 1}), D)
        g = TruncSeries(Poly({(rng.randint(0, 3), rng.randint(0, 3)): 1}), 8)
        a = left_action(multiply(P, Qo), g)
        b = left_action(P, left_action(Qo, g))
        act += a.agrees(b, min(a.D, b.D))
    out.put("action_compatible", f"{act}/{n}")
    ok = agree == assoc == act == n
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help=f"arrangement preset ({', '.join(sorted(PRESETS))})")
    common.add_argument("--arr", help="arrangement JSON file")
    common.add_argument("--mult", help="multiplicity, or comma-separated per-line multiplicities")
    common.add_argument("--deg", type=int, default=6, help="degree bound D")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized choices")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for graded solves")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qinv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-ba", parents=[common], help="Baker-Akhiezer residue test")
    p.set_defaults(func=cmd_check_ba)

    p = sub.add_parser("basis", parents=[common], help="graded bases of A, B, M, Omega, P, cusp")
    p.add_argument("kind", choices=("A", "B", "M", "Omega", "P", "cusp"))
    p.add_argument("--gamma", help="gamma parameters (JSON, or comma list for cusp)")
    p.add_argument("--nu", help="comma-separated nu vector for M")
    p.add_argument("--h", help="polynomial h for P(h)")
    p.add_argument("--m", type=int, help="cusp parameter m")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("spectral", parents=[common], help="Berest function and spectral module")
    p.add_argument("--xi", help="shift point a,b (random admissible if omitted)")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("sato", parents=[common], help="Sato operator and conjugated operators")
    p.add_argument("--xi", help="shift point a,b for the spectral module")
    p.add_argument("--gamma", help="use B(gamma) instead of the spectral module")
    p.add_argument("--fn", action="append", help="polynomial f in z1, z2 (repeatable)")
    p.add_argument("--convention", choices=("berest", "canonical"), default="berest")
    p.set_defaults(func=cmd_sato)

    p = sub.add_parser("deform", parents=[common], help="the deformed Schur pair W_beta")
    p.add_argument("--beta", required=True)
    p.add_argument("--xi", help="point a,b (default 1,1)")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("conductor", parents=[common], help="conductor inclusion and sharpness")
    p.set_defaults(func=cmd_conductor)

    p = sub.add_parser("props", parents=[common], help="randomized property run")
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_props)
    return parser


VALUE_FLAGS = ("--h", "--fn", "--gamma", "--beta", "--xi")


def _glue_values(argv: list[str]) -> list[str]:
    """Join value flags to their values so "-(z1+z2)" is not read as an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a in VALUE_FLAGS:
            v = next(it, None)
            out.append(a if v is None else f"{a}={v}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    if args.deg < 0:
        parser.error("--deg must be nonnegative")
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except (UsageError, ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        print(f"qinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"qinv: internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out.emit(sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
