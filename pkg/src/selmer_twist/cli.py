"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 no positive-proportion hypothesis,
3 a sampled global ratio is not 1, 4 twist outside Sigma, 5 malformed
scenario file, 6 an oracle reported mismatches.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import oracle as oracles
from .arith import factorize
from .congruence import Density, density, empirical_density, enumerate_set, explicit_T_prop510, t_prime_set
from .correlation import analyze, verify_samples
from .curve import CurveEab
from .errors import (
    HypothesisNoneError,
    NotInSigmaError,
    RatioNotOneError,
    ScenarioError,
    SelmerTwistError,
)
from .prym import PrymFamily, parse_scenario_file, scenario_analysis
from .report import ReportDocument, approx, error_document, exact, render_text
from .selmer import FOUR, INF, IsogenyId, eta_exponent_bound, global_ratio, local_ratio, places

EXIT_CODES = [
    (HypothesisNoneError, 2),
    (RatioNotOneError, 3),
    (NotInSigmaError, 4),
    (ScenarioError, 5),
    (SelmerTwistError, 1),
    (ValueError, 1),
    (OSError, 1),
]

CITATIONS = {
    "analyze": [
        ["positive proportion of twists with new rank 0", "main positive-proportion theorem"],
        ["s0 >= 1/(2*3^m)", "explicit form of the correlation bound"],
        ["1/18 for y^2 + 2xy - y = x^3", "worked example with explicit congruences"],
    ],
    "ratios": [
        ["local ratios at good primes, primes dividing d, 3 and infinity", "local ratio lemmas"],
        ["bad multiplicative primes", "bad-reduction table"],
        ["psi ratios from phi ratios", "duality corollary"],
    ],
    "scan": [["twists ordered by height", "height definition"]],
    "prym": [
        ["rank A_d <= 1 for a positive proportion", "Prym rank theorem"],
        ["5/6 - 1/2 = 1/3", "Sigma' lemma"],
        ["c_infinity = 1/3 or 1", "Prym infinity lemma"],
    ],
    "oracle": [],
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_int(text: str) -> int:
    """Integers, also written as 10^4 or 1e4."""
    text = text.strip()
    m = re.fullmatch(r"([+-]?\d+)\^(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    m = re.fullmatch(r"([+-]?\d+)[eE](\d+)", text)
    if m:
        return int(m.group(1)) * 10 ** int(m.group(2))
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _density_body(d: Density) -> dict:
    return {"relative_to_ambient": exact(d.relative), "ambient": d.ambient, "estimate": approx(d.value, "local-factor product")}


def _hypothesis(case) -> dict:
    return {"tag": str(case), "kind": case.kind, "witnesses": exact(list(case.witnesses))}


def cmd_analyze(a: int, b: int, sample_height: int = 10**4) -> ReportDocument:
    c = CurveEab(a, b)
    r = analyze(c, sample_height)
    cert = r.certificate
    body = {
        "curve": exact([a, b]),
        "hypothesis": _hypothesis(r.hypothesis),
        "t_prime": r.t_prime.to_text().splitlines(),
        "certificate": exact(
            {"m": cert.m, "avg_min_lb": cert.avg_min_lb, "avg_max_ub": cert.avg_max_ub, "s0_lb": cert.s0_lb}
        ),
        "m_source": r.m_source,
        "m_sampled": exact(r.m_sampled),
        "relative_proportion_lb": exact(r.relative_proportion_lb),
        "absolute_proportion_lb": approx(r.absolute_proportion_lb, "s0_lb times density(T')"),
        "t_prime_density": _density_body(density(r.t_prime)),
        "samples_checked": exact(len(r.sample_verification)),
        "sample_verification": [{"d": exact(d), "exponents": exact(e)} for d, e in r.sample_verification],
        "narrative": r.narrative,
    }
    inputs = {"a": exact(a), "b": exact(b), "sample_height": exact(sample_height)}
    return ReportDocument("analyze", inputs, body, CITATIONS["analyze"])


def _parse_place(text: str):
    if text in ("all", INF):
        return text
    return parse_int(text)


ISOGENIES = FOUR + (IsogenyId.PI,)


def cmd_ratios(a: int, b: int, d: int, place="all") -> ReportDocument:
    c = CurveEab(a, b)
    where = places(c, d) if place == "all" else [place]
    table = {}
    for iso in ISOGENIES:
        row = {}
        for v in where:
            r = local_ratio(c, iso, d, v)
            row[str(v)] = {"exponent": exact(r.exponent), "value": exact(r.value)}
        table[iso.value] = row
    body = {"d": exact(d), "places": [str(v) for v in where], "local": table}
    body["global"] = {
        iso.value: {"exponent": exact(g.exponent), "value": exact(g.value)}
        for iso in ISOGENIES
        for g in [global_ratio(c, iso, d)]
    }
    body["eta_exponent_bound"] = exact(eta_exponent_bound(c, d))
    inputs = {"a": exact(a), "b": exact(b), "d": exact(d), "place": str(place)}
    return ReportDocument("ratios", inputs, body, CITATIONS["ratios"])


def cmd_scan(a: int, b: int, height: int) -> ReportDocument:
    c = CurveEab(a, b)
    tp = t_prime_set(c)
    members = enumerate_set(tp, height)
    explicit = explicit_T_prop510() if (a, b) == (2, -1) else None
    rows = []
    count_upto = 0
    for d, totals, _, _ in verify_samples(c, members):
        count_upto += 1
        row = {
            "d": exact(d),
            "ratios_ok": all(e == 0 for e in totals.values()),
            "running_density": {"value": exact(Fraction(count_upto, 2 * abs(d))), "empirical": True},
        }
        if explicit is not None and all(e < 2 for _, e in factorize(d).factors):
            row["in_explicit_T"] = d in explicit
        rows.append(row)
    body = {
        "t_prime": tp.to_text().splitlines(),
        "members": rows,
        "count": exact(len(rows)),
        "predicted_density": _density_body(density(tp)),
    }
    if height > 0:
        body["empirical_density"] = {"value": exact(empirical_density(tp, height)), "empirical": True}
    inputs = {"a": exact(a), "b": exact(b), "height": exact(height)}
    return ReportDocument("scan", inputs, body, CITATIONS["scan"])


def cmd_prym(a: int, b: int, scenario_file=None) -> ReportDocument:
    f = PrymFamily(a, b)
    oracle_map = None
    if scenario_file is not None:
        try:
            with open(scenario_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from None
        oracle_map = parse_scenario_file(text)
    cert = scenario_analysis(f, oracle_map)
    rows = []
    for row in cert.rows:
        out = {k: (str(v) if k == "scenario" else exact(v)) for k, v in row.items()}
        rows.append(out)
    body = {
        "family": {"a": exact(a), "b": exact(b), "bad_primes": exact(list(f.bad_primes))},
        "bad_primes_over_approximated": f.default_bad_set,
        "sigma_density": approx(cert.sigma_density, "local-factor product"),
        "branch_A": exact(cert.branch_a),
        "branch_B": exact(cert.branch_b),
        "resolved_branch": cert.resolved,
        "rows": rows,
        "narrative": cert.narrative,
    }
    inputs = {"a": exact(a), "b": exact(b), "scenario_file": scenario_file}
    return ReportDocument("prym", inputs, body, CITATIONS["prym"])


class OracleFailed(Exception):
    pass


def cmd_oracle(which: str, samples: int = 1000, height: int = 10**6) -> ReportDocument:
    reports = []
    if which in ("residue", "all"):
        reports.append(oracles.residue_contract())
    if which in ("tamagawa", "all"):
        reports.append(oracles.tamagawa_table_run(samples))
    if which in ("density", "all"):
        reports.append(oracles.density_check(explicit_T_prop510(), height, 0.05))
    body = {"reports": []}
    for r in reports:
        d = r.to_dict()
        d["checked"] = exact(d["checked"])
        d["details"] = _details(d["details"])
        body["reports"].append(d)
    doc = ReportDocument("oracle", {"which": which, "samples": exact(samples), "height": exact(height)}, body)
    if not all(r.passed for r in reports):
        raise OracleFailed(doc)
    return doc


def _details(details):
    out = {}
    for k, v in details.items():
        if isinstance(v, float):
            out[k] = approx(v, k)
        elif isinstance(v, dict):
            out[k] = _details(v)
        else:
            out[k] = exact(v)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="selmer-twist", description="Selmer ratios and rank-0 proportion certificates for sextic twists.")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="flat key = value output")
    p.set_defaults(fmt="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", dest="fmt", action="store_const", const="json", default=argparse.SUPPRESS)
        g.add_argument("--text", dest="fmt", action="store_const", const="text", default=argparse.SUPPRESS)
        return sp

    sp = common(sub.add_parser("analyze", help="proportion certificate for E_{a,b}"))
    sp.add_argument("a", type=parse_int)
    sp.add_argument("b", type=parse_int)
    sp.add_argument("--sample-height", type=parse_int, default=10**4)

    sp = common(sub.add_parser("ratios", help="local and global Selmer ratios of one twist"))
    sp.add_argument("a", type=parse_int)
    sp.add_argument("b", type=parse_int)
    sp.add_argument("d", type=parse_int)
    sp.add_argument("--place", type=_parse_place, default="all", help="a prime, inf, or all")

    sp = common(sub.add_parser("scan", help="enumerate T' by height"))
    sp.add_argument("a", type=parse_int)
    sp.add_argument("b", type=parse_int)
    sp.add_argument("--height", type=parse_int, default=1000)

    sp = common(sub.add_parser("prym", help="Prym-surface case analysis"))
    sp.add_argument("a", type=parse_int)
    sp.add_argument("b", type=parse_int)
    sp.add_argument("--scenario-file")

    sp = common(sub.add_parser("oracle", help="run brute-force cross-checks"))
    sp.add_argument("which", choices=["residue", "tamagawa", "density", "all"], nargs="?", default="all")
    sp.add_argument("--samples", type=parse_int, default=1000)
    sp.add_argument("--height", type=parse_int, default=10**6)
    return p


def _dispatch(args) -> ReportDocument:
    if args.command == "analyze":
        return cmd_analyze(args.a, args.b, args.sample_height)
    if args.command == "ratios":
        return cmd_ratios(args.a, args.b, args.d, args.place)
    if args.command == "scan":
        if args.height < 0:
            raise UsageError("--height must be nonnegative")
        return cmd_scan(args.a, args.b, args.height)
    if args.command == "prym":
        return cmd_prym(args.a, args.b, args.scenario_file)
    return cmd_oracle(args.which, args.samples, args.height)


def _emit(data: dict, fmt: str, out) -> None:
    if fmt == "text":
        out.write(render_text(data))
    else:
        out.write(json.dumps(data, indent=2) + "\n")


def _argv_inputs(argv):
    return {"argv": list(argv)}


def main(argv=None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    fmt = "text" if "--text" in argv else "json"
    command = next((a for a in argv if not a.startswith("-")), "")
    try:
        args = build_parser().parse_args(argv)
        doc = _dispatch(args)
    except OracleFailed as exc:
        doc = exc.args[0]
        _emit(doc.to_dict(), fmt, out)
        return 6
    except Exception as exc:  # map to the documented exit codes
        for kind, code in EXIT_CODES:
            if isinstance(exc, kind):
                _emit(error_document(command, _argv_inputs(argv), exc, code), fmt, out)
                return code
        raise
    _emit(doc.to_dict(), args.fmt, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
