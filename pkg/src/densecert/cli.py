"""Command-line front end producing certification reports."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import density, hondatate, quaternion, stabilizer
from .localunits import unit_quotient
from .quadfield import Ideal, QuadElt, QuadField, make_field, splitting_type, unit_group

SCHEMA = 1
EXIT_USAGE = 64
VERDICTS = ("dense", "not-dense", "inconclusive", "accepted", "rejected", "found", "exhausted",
            "verified", "failed")
_EXIT = {"dense": 0, "accepted": 0, "found": 0, "verified": 0,
         "not-dense": 1, "rejected": 1, "exhausted": 1, "failed": 1,
         "inconclusive": 2}


class UsageError(Exception):
    pass


def _plain(x: Any) -> Any:
    """JSON-ready copy with exact integers as decimal strings."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (str, float)):
        return x
    if isinstance(x, (Fraction, QuadElt, Ideal, QuadField)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


@dataclass
class Report:
    command: str
    inputs: dict
    verdict: str
    certificate: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict}")
        self.inputs = _plain(self.inputs)
        self.certificate = _plain(self.certificate)

    @property
    def exit_code(self) -> int:
        return _EXIT[self.verdict]


def emit(report: Report, fmt: str = "json", timing: bool = True) -> str:
    if fmt == "json":
        obj = {"schema": str(SCHEMA), "command": report.command, "inputs": report.inputs,
               "verdict": report.verdict, "certificate": report.certificate}
        if timing:
            obj["elapsed_ms"] = str(report.elapsed_ms)
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    lines = [f"{'command':<24} {report.command}", f"{'verdict':<24} {report.verdict}"]
    for k, v in sorted(report.inputs.items()):
        lines.append(f"{'input.' + k:<24} {_text(v)}")
    for k, v in sorted(report.certificate.items()):
        lines.append(f"{k:<24} {_text(v)}")
    if timing:
        lines.append(f"{'elapsed_ms':<24} {report.elapsed_ms}")
    return "\n".join(lines)


def _text(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def parse(text: str) -> Report:
    obj = json.loads(text)
    if obj.get("schema") != str(SCHEMA):
        raise ValueError(f"unsupported schema {obj.get('schema')}")
    return Report(obj["command"], obj["inputs"], obj["verdict"], obj["certificate"],
                  int(obj.get("elapsed_ms", "0")))


# --- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_list(s: str) -> list[int]:
    if not s:
        return []
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {s!r}")


def _prime_list(s: str) -> list:
    """Comma list of primes l (smallest prime above l) or l:b (the ideal [l, b + w])."""
    out = []
    for item in filter(None, (x.strip() for x in s.split(","))):
        try:
            if ":" in item:
                l, b = item.split(":")
                out.append((int(l), int(b)))
            else:
                out.append(int(item))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad prime spec {item!r}; use l or l:b")
    return out


def _ideal_spec(P: Ideal) -> str:
    return f"{P.a}:{P.b}" if P.c == 1 else str(P.a)


def _resolve_S(F: QuadField, S: list) -> list:
    out = []
    for item in S:
        if isinstance(item, tuple):
            l, b = item
            P = next((Q for Q in splitting_type(F, l).ideals if (Q.a, Q.b, Q.c) == (l, b, 1)), None)
            if P is None:
                raise ValueError(f"[{l}, {b}+w] is not a degree-one prime of {F}")
            out.append(P)
        else:
            out.append(item)
    return out


def _sigma(s: str):
    if s in ("none", "all"):
        return s
    places = _int_list(s)
    if any(v not in (0, 1) for v in places):
        raise argparse.ArgumentTypeError("places are 0 (sqrt d > 0) and 1 (sqrt d < 0)")
    return places


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="densecert", description="Density certificates for S-units and stabilizer groups.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        return sp

    sp = cmd("g-invariant", "g(P, Sigma) for a prime above p")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--sigma", type=_sigma, default="none")

    sp = cmd("density-check", "is the Sigma-positive S-unit group dense at P?")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-S", type=_prime_list, default=[])
    sp.add_argument("--sigma", type=_sigma, default="none")

    sp = cmd("witness", "search primes realizing g(P, Sigma)")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--sigma", type=_sigma, default="none")
    sp.add_argument("--bound", type=int, default=density.DEFAULT_BOUND)
    sp.add_argument("--exclude", type=_int_list, default=[])

    sp = cmd("weil", "analyse x^2 - t x + p^a (or x^2 - p^a with --real)")
    sp.add_argument("-t", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-a", type=int, default=1)
    sp.add_argument("--real", action="store_true")

    sp = cmd("isogclass", "the class of x^2 - p x + p^n")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)

    sp = cmd("modular1", "finite-level density certificate for the stabilizer group")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-l", type=int)
    sp.add_argument("-m", "--m-max", dest="m", type=int, default=5)

    sp = cmd("topgen", "test or find a topological generator of Z_p^*")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-l", type=int)
    sp.add_argument("--exclude", type=_int_list, default=[])

    sp = cmd("torus-search", "search l with pi/conj(pi) generating the local quotient")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--bound", type=int, default=stabilizer.DEFAULT_BOUND)

    sp = cmd("unitary-index", "index of <pi/conj(pi)> in (Z/p^m)^*")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-l", type=int, required=True)
    sp.add_argument("-m", "--m-max", dest="m", type=int, default=2)

    sp = cmd("fiber", "special fiber of the norm-one torus at p")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)

    sp = cmd("quaternion-verify", "closure check in (O/p^m O)^* for B_{p,inf}")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-l", type=int, required=True)
    sp.add_argument("-m", "--m-max", dest="m", type=int, default=2)
    sp.add_argument("--kmax", type=int, default=3)
    return ap


# --- commands ---------------------------------------------------------------


def _field(d: int) -> QuadField:
    return make_field(d)


def _density_cert(r: density.DensityReport) -> dict:
    cert = {
        "g": r.g,
        "quotient_order": r.quotient_order,
        "residual_order": r.residual_order,
        "residual_invariants": r.residual_invariants,
        "generator_images": [list(x) for x in r.generator_images],
        "complete": r.complete,
    }
    if r.basis is not None:
        cert["generators"] = [str(x) for x in r.basis.generators]
        cert["S"] = [str(P) for P in r.basis.S]
        cert["S_spec"] = [_ideal_spec(P) for P in r.basis.S]
        cert["S_powers"] = r.basis.powers
    if r.note:
        cert["note"] = r.note
    return cert


def _quotient_cert(F: QuadField, p: int) -> dict:
    Q = unit_quotient(F, p)
    return {"prime": str(Q.P), "level": Q.level, "mu_p": Q.mu_p,
            "local_degree": Q.prime.local_degree, "splitting": Q.prime.kind.value}


def _cmd_g_invariant(a) -> tuple[str, dict]:
    F = _field(a.d)
    r = density.g_invariant(F, a.p, a.sigma)
    cert = _density_cert(r) | _quotient_cert(F, a.p)
    cert["g_bound"] = density.g_bound(F, a.p)
    return "verified", cert


def _cmd_density_check(a) -> tuple[str, dict]:
    F = _field(a.d)
    r = density.is_dense(F, _resolve_S(F, a.S), a.sigma, a.p)
    return r.status, _density_cert(r) | _quotient_cert(F, a.p)


def _cmd_witness(a) -> tuple[str, dict]:
    F = _field(a.d)
    w = density.witness_primes(F, a.p, a.sigma, a.bound, a.exclude)
    cert = {"g": w.g, "bound": w.bound, "targets": [list(x) for x in w.targets],
            "S": [None if P is None else str(P) for P in w.S],
            "S_spec": [None if P is None else _ideal_spec(P) for P in w.S],
            "generators": [None if x is None else str(x) for x in w.generators],
            "unmatched": w.unmatched} | _quotient_cert(F, a.p)
    if w.report is not None:
        cert["density"] = w.report.status
    return ("found" if w.found else "exhausted"), cert


def _weil_cert(W: hondatate.WeilClass) -> dict:
    return {"field_d": W.field.d, "disc": W.field.disc, "pi": str(W.pi),
            "poly": {"t": W.t, "n0": W.n0},
            "finite_invariants": [[str(P), str(inv)] for P, inv in W.finite_invariants],
            "real_invariants": [[place, str(inv)] for place, inv in W.real_invariants],
            "slopes": [str(s) for s in W.slopes], "e": W.e, "dim": W.dim,
            "geom_simple": W.geom_simple,
            "splitting": splitting_type(W.field, W.p).kind.value}


def _cmd_weil(a) -> tuple[str, dict]:
    try:
        W = hondatate.weil_class(a.t, a.p, a.a, real=a.real)
    except hondatate.NotQuadraticWeil as exc:
        return "failed", {"error": str(exc)}
    return "verified", _weil_cert(W)


def _cmd_isogclass(a) -> tuple[str, dict]:
    try:
        W = hondatate.isogclass(a.p, a.n)
    except AssertionError as exc:
        return "failed", {"error": str(exc)}
    return "verified", _weil_cert(W)


def _cmd_modular1(a) -> tuple[str, dict]:
    c = stabilizer.modular1_certificate(a.p, a.n, a.l, a.m)
    cert = {"l": c.l, "prime": str(c.prime), "field_d": c.weil.field.d,
            "generators": [str(x) for x in c.generators], "levels": list(c.levels),
            "subgroup_orders": [list(t) for t in c.subgroup_orders],
            "topgen": _topgen_cert(c.topgen), "m_max": a.m}
    if not c.accepted:
        return "rejected", cert
    return ("verified" if c.full else "failed"), cert


def _topgen_cert(c: stabilizer.TopGenCertificate) -> dict:
    return {"l": c.l, "p": c.p, "checks": [list(t) for t in c.checks], "accepted": c.accepted,
            "p2_rule": c.p2_rule}


def _cmd_topgen(a) -> tuple[str, dict]:
    if a.l is None:
        l = stabilizer.find_topgen(a.p, a.exclude)
        return "found", _topgen_cert(stabilizer.is_topological_generator(l, a.p))
    c = stabilizer.is_topological_generator(a.l, a.p)
    return ("accepted" if c.accepted else "rejected"), _topgen_cert(c)


def _cmd_torus_search(a) -> tuple[str, dict]:
    F = _field(a.d)
    try:
        c = stabilizer.approxtorus_search(F, a.p, a.bound)
    except stabilizer.SearchExhausted as exc:
        return "exhausted", {"bound": a.bound, "error": str(exc)}
    return "found", {"bound": c.bound, "l": c.l, "pi": str(c.pi), "beta": str(c.beta),
                     "prime": str(c.prime), "quotient_order": c.quotient_order,
                     "images": [list(x) for x in c.images], "tried": list(c.tried)}


def _cmd_unitary_index(a) -> tuple[str, dict]:
    F = _field(a.d)
    w = unit_group(F).w
    idx = [stabilizer.unitary_index(F, a.p, a.l, m) for m in range(1, a.m + 1)]
    ok = all(i <= w for i in idx)
    return ("verified" if ok else "failed"), {"index_by_level": idx, "index": idx[-1],
                                               "mu": w, "m_max": a.m}


def _cmd_fiber(a) -> tuple[str, dict]:
    F = _field(a.d)
    kind = stabilizer.torus_fiber(F, a.p)
    return "verified", {"kind": kind.value, "splitting": splitting_type(F, a.p).kind.value}


def _cmd_quaternion_verify(a) -> tuple[str, dict]:
    r = quaternion.closure_check(a.p, a.l, a.m, a.kmax)
    cert = {"unit_order": r.unit_order, "target_order": r.target_order,
            "closure_order": r.closure_order, "index": r.index, "target_index": r.target_index,
            "growth": list(r.growth), "stabilized_at": r.stabilized_at, "contained": r.contained,
            "equal": r.equal, "norm_image": list(r.norm_image), "kmax": r.k_max}
    if not r.contained:
        return "failed", cert
    if r.equal:
        return "verified", cert
    return ("inconclusive" if r.stabilized_at is None else "failed"), cert


_COMMANDS = {
    "g-invariant": _cmd_g_invariant,
    "density-check": _cmd_density_check,
    "witness": _cmd_witness,
    "weil": _cmd_weil,
    "isogclass": _cmd_isogclass,
    "modular1": _cmd_modular1,
    "topgen": _cmd_topgen,
    "torus-search": _cmd_torus_search,
    "unitary-index": _cmd_unitary_index,
    "fiber": _cmd_fiber,
    "quaternion-verify": _cmd_quaternion_verify,
}


def dispatch(argv: Sequence[str]) -> tuple[int, Optional[Report], str]:
    """Run one subcommand: (exit code, report or None on usage error, format)."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        return EXIT_USAGE, None, str(exc)
    inputs = {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(args).items()
              if k not in ("command", "format")}
    start = time.perf_counter()
    try:
        verdict, cert = _COMMANDS[args.command](args)
    except UsageError as exc:
        return EXIT_USAGE, None, str(exc)
    except ValueError as exc:
        return EXIT_USAGE, None, f"{args.command}: error: {exc}"
    elapsed = int((time.perf_counter() - start) * 1000)
    report = Report(args.command, inputs, verdict, cert, elapsed)
    return report.exit_code, report, args.format


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, report, info = dispatch(sys.argv[1:] if argv is None else argv)
    if report is None:
        print(info, file=sys.stderr)
        return code
    print(emit(report, info))
    return code


if __name__ == "__main__":
    sys.exit(main())
