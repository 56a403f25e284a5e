"""Command-line surface: search, construct, verify, gauss, periods.

The difference-set file is a single JSON document: a header carrying enough
to rebuild the field deterministically (p, f, s, modulus, seed, orientation)
plus the index set and provenance, and a payload holding the membership
bitmask hex-encoded in little-endian bit order by element code.

Exit codes: 0 = verified / success, 1 = refuted, 2 = invalid input or usage.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .charsums import (
    compare_with_closed_form,
    gauss_sum_table,
)
from .construct import construct_case_A, construct_case_B, random_transversal
from .cyclotomy import build_scheme, union_of_classes
from .errors import (
    ClosedFormMismatch,
    ConditionViolated,
    CyclotomeError,
)
from .finite_field import DEFAULT_BUDGET, build_field, field_from_dict
from .numtheory import (
    case_a_params,
    case_b_params,
    factorize,
    search_case_A,
    search_case_B,
)
from .verify import (
    BOTH,
    BRUTE_FORCE,
    CHARACTER_SUMS,
    NEITHER,
    PALEY_PDS,
    SKEW_HDS,
    verify_by_characters,
    verify_paley_pds_brute,
    verify_skew_hds_brute,
)

FILE_VERSION = 1


# ---------------------------------------------------------------------------
# difference-set files

def save_candidate(D, path):
    fld = D.scheme.field
    prov = D.provenance
    s = int(prov.get("s", 1))
    doc = {
        "version": FILE_VERSION,
        "p": fld.p,
        "f": fld.f // s,
        "s": s,
        "N": D.scheme.N,
        "modulus": list(fld.modulus),
        "seed": fld.seed,
        "orientation_flipped": fld.orientation_flipped,
        "I": list(D.index_set),
        "provenance": prov,
        "k": D.k,
        "payload": np.packbits(D.membership, bitorder="little").tobytes().hex(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


class FileIntegrityError(CyclotomeError):
    """Payload does not reproduce the declared class union."""


def load_candidate(path, budget=None):
    """Rebuild the candidate set; raises ValueError on malformed files and
    FileIntegrityError when the payload disagrees with the header."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"unreadable difference-set file: {exc}") from exc
    for key in ("p", "f", "s", "N", "modulus", "I", "k", "payload"):
        if key not in doc:
            raise ValueError(f"missing field {key!r} in difference-set file")
    if doc.get("version") != FILE_VERSION:
        raise ValueError(f"unsupported file version {doc.get('version')!r}")

    degree = doc["f"] * doc["s"]
    if len(doc["modulus"]) != degree + 1:
        raise ValueError("modulus degree does not match f*s")
    field = field_from_dict(
        {"p": doc["p"], "f": degree, "modulus": doc["modulus"],
         "seed": doc.get("seed", 0),
         "orientation_flipped": doc.get("orientation_flipped", False)},
        budget,
    )
    scheme = build_scheme(field, doc["N"])
    D = union_of_classes(scheme, doc["I"])
    D.provenance = doc.get("provenance", {"case": "user"})

    payload = bytes.fromhex(doc["payload"])
    if len(payload) != (field.q + 7) // 8:
        raise ValueError("payload length does not match field size")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8),
                         bitorder="little")[: field.q].astype(bool)
    if int(bits.sum()) != doc["k"]:
        raise FileIntegrityError(
            f"payload popcount {int(bits.sum())} != declared k = {doc['k']}")
    if doc["k"] != D.k or not np.array_equal(bits, D.membership):
        raise FileIntegrityError("payload bitmask is not the declared class union")
    return D, doc


# ---------------------------------------------------------------------------
# helpers

def _budget(args):
    if getattr(args, "budget", None):
        return args.budget
    env = os.environ.get("CYCLOTOME_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def _emit(args, obj, human_lines):
    if getattr(args, "json", False):
        print(json.dumps(obj, indent=1))
    else:
        for line in human_lines:
            print(line)


def _cell(v):
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _format_table(rows):
    if not rows:
        return ["(empty)"]
    cols = list(rows[0])
    widths = {c: max(len(c), *(len(_cell(r[c])) for r in rows)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols).rstrip()]
    for r in rows:
        lines.append("  ".join(_cell(r[c]).ljust(widths[c]) for c in cols).rstrip())
    return lines


# ---------------------------------------------------------------------------
# subcommands

def cmd_search(args):
    if args.case == "A":
        p1_hi = args.p1 or args.p1_max
        m_hi = args.m or args.m_max
        p_hi = args.p or args.p_max
        if not (p1_hi and m_hi and p_hi):
            print("search A needs --p1/--p1-max, --m/--m-max and --p/--p-max",
                  file=sys.stderr)
            return 2
        hits = search_case_A(p1_hi, m_hi, p_hi)
        if args.p1:
            hits = [t for t in hits if t.p1 == args.p1]
        if args.m:
            hits = [t for t in hits if t.m == args.m]
        if args.p:
            hits = [t for t in hits if t.p == args.p]
        rows = [
            {"p1": t.p1, "m": t.m, "p": t.p, "f": t.f, "N": t.N,
             "kind": "PaleyPDS" if t.pds_flag else "SkewHDS"}
            for t in hits
        ]
    else:
        if not (args.p1_max and args.p_max):
            print("search B needs --p1-max and --p-max", file=sys.stderr)
            return 2
        hits = search_case_B(args.p1_max, args.p_max)
        rows = [{"p1": t.p1, "p": t.p, "h": t.h, "f": t.f, "N": t.N} for t in hits]
    _emit(args, rows, _format_table(rows))
    return 0


def cmd_construct(args):
    budget = _budget(args)
    if args.case == "A":
        params = case_a_params(args.p1, args.m, args.p)
        if args.index_set:
            I = [int(x) for x in args.index_set.split(",")]
        elif args.random_seed is not None:
            I = random_transversal(args.p1, args.m, args.random_seed)
        else:
            print("construct A needs --index-set or --random-seed", file=sys.stderr)
            return 2
        D = construct_case_A(params, args.s, I, budget=budget)
    else:
        D = construct_case_B(args.p1, args.p, budget=budget)
    save_candidate(D, args.out)
    info = {"v": D.scheme.field.q, "k": D.k, "provenance": D.provenance,
            "out": args.out}
    _emit(args, info, [f"v = {info['v']}  k = {info['k']}",
                       f"provenance: {json.dumps(D.provenance)}",
                       f"written to {args.out}"])
    return 0


def _brute_for(D, threads):
    if D.scheme.field.q % 4 == 3:
        return verify_skew_hds_brute(D, threads)
    return verify_paley_pds_brute(D, threads)


def _write_report(args, report):
    text = json.dumps(report, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if getattr(args, "json", False):
        print(text)
    else:
        print(f"verdict: {report['verdict']}")
        if report["v"] is not None:
            if report["lambda"] is None:
                print(f"parameters: v = {report['v']}, k = {report['k']}")
            else:
                params = (report["v"], report["k"], report["lambda"])
                if report["mu"] is not None:
                    params = params + (report["mu"],)
                print(f"parameters: {params}")
        print(f"method: {report['method']}")
        if report["max_abs_deviation"] is not None:
            print(f"max character deviation: {report['max_abs_deviation']:.3e}")
        if report["histogram_summary"] is not None:
            print(f"difference counts (min, max): {report['histogram_summary']}")
        for w in report["warnings"]:
            print(f"warning: {w}")


def cmd_verify(args):
    import numba

    budget = _budget(args)
    t0 = time.perf_counter()
    threads = args.threads or numba.get_num_threads()

    def finish(report_dict, code):
        report_dict.update(
            tool_version=__version__,
            wall_time_s=round(time.perf_counter() - t0, 6),
            threads=threads,
        )
        _write_report(args, report_dict)
        return code

    try:
        D, _doc = load_candidate(args.file, budget)
    except FileIntegrityError as exc:
        return finish(
            {"verdict": NEITHER, "v": None, "k": None, "lambda": None, "mu": None,
             "method": "Integrity", "max_abs_deviation": None,
             "histogram_summary": None, "sign_pattern": None,
             "warnings": [str(exc)]},
            1,
        )

    reports = []
    if args.method in ("brute", "both"):
        reports.append(_brute_for(D, args.threads))
    if args.method in ("chars", "both"):
        reports.append(verify_by_characters(D))

    verdicts = {r.verdict for r in reports}
    verdict = verdicts.copy().pop() if len(verdicts) == 1 else NEITHER
    warnings = [w for r in reports for w in r.warnings]
    if len(verdicts) > 1:
        warnings.append("brute-force and character verdicts disagree")
    brute = next((r for r in reports if r.method == BRUTE_FORCE), None)
    chars = next((r for r in reports if r.method == CHARACTER_SUMS), None)
    primary = brute or chars
    report = {
        "verdict": verdict,
        "v": primary.v,
        "k": primary.k,
        "lambda": primary.lam,
        "mu": primary.mu,
        "method": BOTH if len(reports) == 2 else reports[0].method,
        "max_abs_deviation": chars.max_abs_deviation if chars else None,
        "histogram_summary": (
            list(brute.histogram_summary)
            if brute and brute.histogram_summary else None
        ),
        "sign_pattern": chars.sign_pattern if chars else None,
        "warnings": warnings,
    }
    return finish(report, 0 if verdict in (SKEW_HDS, PALEY_PDS) else 1)


def cmd_gauss(args):
    budget = _budget(args)
    field = build_field(args.p, args.f, budget)
    scheme = build_scheme(field, args.N)
    G = gauss_sum_table(scheme)
    q = field.q

    report = None
    if args.closed_form:
        if args.closed_form == "A":
            half = args.N // 2
            fac = factorize(half)
            if len(fac) != 1:
                print(f"N/2 = {half} is not a prime power", file=sys.stderr)
                return 2
            (p1, m), = fac.items()
            params = case_a_params(p1, m, args.p)
        else:
            params = case_b_params(args.N // 2, args.p)
        if params.f != args.f:
            print(f"index-2 degree is f = {params.f}, not {args.f}", file=sys.stderr)
            return 2
        try:
            report = compare_with_closed_form(scheme, params)
        except ClosedFormMismatch as exc:
            print(f"closed-form mismatch: {exc}", file=sys.stderr)
            return 1

    by_j = {r.j: r for r in report.records} if report else {}
    rows = []
    for j in range(args.N):
        rec = by_j.get(j)
        row = {"j": j, "re": G[j].real, "im": G[j].imag, "abs2": abs(G[j]) ** 2,
               "prediction_case": rec.prediction_case if rec else "SemiNone",
               "matched": rec.matched if rec else None}
        rows.append(row)
    human = _format_table(rows)
    if report:
        human.append(
            f"# matched_c = {report.matched_c}  global_sign = {report.global_sign}"
            f"  quadratic_sign = {report.quadratic_sign}"
            f"  max_abs_deviation = {report.max_abs_deviation:.3e}")
        obj = {"rows": rows, "matched_c": report.matched_c,
               "global_sign": report.global_sign,
               "quadratic_sign": report.quadratic_sign,
               "max_abs_deviation": report.max_abs_deviation}
    else:
        obj = {"rows": rows}
    _emit(args, obj, human)
    return 0


def cmd_periods(args):
    budget = _budget(args)
    field = build_field(args.p, args.f, budget)
    scheme = build_scheme(field, args.N)
    eta = scheme.gauss_periods()
    rows = [{"i": i, "re": eta[i].real, "im": eta[i].imag} for i in range(args.N)]
    _emit(args, rows, _format_table(rows))
    return 0


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    top = argparse.ArgumentParser(prog="cyclotome",
                                  description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_budget(p):
        p.add_argument("--budget", type=int, default=None,
                       help="table budget override (else $CYCLOTOME_BUDGET, else 2^25)")

    ps = sub.add_parser("search", help="enumerate index-2 parameter tuples")
    ps.add_argument("case", choices=["A", "B"])
    ps.add_argument("--p1", type=int)
    ps.add_argument("--p1-max", type=int)
    ps.add_argument("--m", type=int)
    ps.add_argument("--m-max", type=int)
    ps.add_argument("--p", type=int)
    ps.add_argument("--p-max", type=int)
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(func=cmd_search)

    pc = sub.add_parser("construct", help="build a candidate set and write its file")
    pc.add_argument("case", choices=["A", "B"])
    pc.add_argument("--p1", type=int, required=True)
    pc.add_argument("--m", type=int, default=1)
    pc.add_argument("--p", type=int, required=True)
    pc.add_argument("--s", type=int, default=1)
    pc.add_argument("--index-set", type=str, default=None)
    pc.add_argument("--random-seed", type=int, default=None)
    pc.add_argument("--out", type=str, required=True)
    pc.add_argument("--json", action="store_true")
    add_budget(pc)
    pc.set_defaults(func=cmd_construct)

    pv = sub.add_parser("verify", help="verify a difference-set file")
    pv.add_argument("file")
    pv.add_argument("--method", choices=["brute", "chars", "both"], default="both")
    pv.add_argument("--threads", type=int, default=None)
    pv.add_argument("--out", type=str, default=None)
    pv.add_argument("--json", action="store_true")
    add_budget(pv)
    pv.set_defaults(func=cmd_verify)

    pg = sub.add_parser("gauss", help="tabulate Gauss sums, optionally vs closed forms")
    pg.add_argument("p", type=int)
    pg.add_argument("f", type=int)
    pg.add_argument("N", type=int)
    pg.add_argument("--closed-form", choices=["A", "B"], default=None)
    pg.add_argument("--json", action="store_true")
    add_budget(pg)
    pg.set_defaults(func=cmd_gauss)

    pp = sub.add_parser("periods", help="dump the Gauss periods of a scheme")
    pp.add_argument("p", type=int)
    pp.add_argument("f", type=int)
    pp.add_argument("N", type=int)
    pp.add_argument("--json", action="store_true")
    add_budget(pp)
    pp.set_defaults(func=cmd_periods)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConditionViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CyclotomeError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())
