"""Command-line front end.

    pspin one-point --p 3 --gmax 3
    pspin two-point --p 1/2 --order 12 --residue-order sum-both
    pspin open --nmax 4 --m-degree 4 --format md
    pspin verify paper-values

Exit codes: 0 success, 1 usage error, 2 computation error, 3 internal assertion.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .exact import Coefficient, GammaFactor, PoleError, Radical, format_fraction, parse_fraction
from .onepoint import (
    IntersectionRecord,
    PunctureLabel,
    admissible_components,
    euler_records,
    genus_from_sigma_exponent,
    one_point_ns,
    one_point_ns_fractional,
    one_point_r,
    riemann_roch_holds,
)
from .openkp import MPolynomial, open_one_point
from .series import GradingError, TruncationError
from .twopoint import ResidueOrder, two_point_p2, two_point_records

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_INTERNAL = 0, 1, 2, 3

# kappa in units of the reference coupling, per p; identity where none is recorded
CALIBRATION = {Fraction(3, 2): ((2, Fraction(-5, 2)), "kappa = c' 2^(-5/2)")}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- serialization --------------------------------------------------------

def _value_json(v):
    if isinstance(v, MPolynomial):
        return "m-polynomial", {str(d): format_fraction(c) for d, c in v.coefficients.items()}
    if isinstance(v, Coefficient):
        if v.is_rational() and not v.coupling_power:
            return "rational", format_fraction(v.rational)
        return "symbolic", {
            "rational": format_fraction(v.rational),
            "gamma": [[format_fraction(a), e] for a, e in v.gamma.factors],
            "radical": [[b, format_fraction(q)] for b, q in v.radical.powers],
            "coupling_power": format_fraction(v.coupling_power),
            "text": str(v),
        }
    return "rational", format_fraction(Fraction(v))


def record_to_json(r: IntersectionRecord) -> dict:
    kind, value = _value_json(r.value)
    return {
        "p": format_fraction(r.p),
        "genus": format_fraction(r.genus),
        "punctures": [
            {"n": format_fraction(x.n), "l": format_fraction(x.l), "type": x.puncture_type} for x in r.punctures
        ],
        "value_kind": kind,
        "value": value,
        "coupling_power": format_fraction(r.coupling_power),
        "metadata": r.metadata,
    }


def record_from_json(d: dict) -> IntersectionRecord:
    kind = d["value_kind"]
    if kind == "m-polynomial":
        value = MPolynomial({int(k): Fraction(v) for k, v in d["value"].items()})
    elif kind == "rational":
        value = Fraction(d["value"])
    else:
        v = d["value"]
        value = Coefficient(
            Fraction(v["rational"]),
            GammaFactor(tuple((Fraction(a), int(e)) for a, e in v["gamma"])),
            Fraction(v["coupling_power"]),
            Radical(tuple((int(b), Fraction(q)) for b, q in v["radical"])),
        )
    return IntersectionRecord(
        Fraction(d["p"]),
        Fraction(d["genus"]),
        tuple(PunctureLabel(Fraction(x["n"]), Fraction(x["l"])) for x in d["punctures"]),
        value,
        Fraction(d["coupling_power"]),
        d.get("metadata", {}),
    )


def _labels(r):
    return " ".join("tau_{%s,%s}" % (x.n, x.l) for x in r.punctures)


def _flat_value(r):
    kind, v = _value_json(r.value)
    if kind == "m-polynomial":
        return "; ".join("m^%s:%s" % kv for kv in v.items())
    if kind == "symbolic":
        return v["text"]
    return v


def render(command: str, params: dict, records, fmt: str, extra=None) -> str:
    records = sorted(records, key=IntersectionRecord.sort_key)
    if fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "parameters": params,
            "records": [record_to_json(r) for r in records],
        }
        if extra:
            payload["extra"] = extra
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    cols = ["p", "genus", "insertions", "value", "coupling_power"]
    rows = [[str(r.p), str(r.genus), _labels(r), _flat_value(r), str(r.coupling_power)] for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


# --- commands -------------------------------------------------------------

def _p(args) -> Fraction:
    if args.p is None:
        raise UsageError("--p is required")
    try:
        p = parse_fraction(args.p)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    if p == 0:
        raise UsageError("p must be non-zero")
    return p


def _calibrate(records, p, convention):
    if convention == "c" or p not in CALIBRATION:
        return records
    (base, per_power), note = CALIBRATION[p]
    out = []
    for r in records:
        k = r.coupling_power
        e = per_power * k
        if e.denominator != 1:
            raise PoleError("the calibration for p=%s gives an irrational factor at coupling power %s" % (p, k))
        meta = dict(r.metadata, calibration=note, convention=convention)
        out.append(IntersectionRecord(r.p, r.genus, r.punctures, Fraction(r.value) * Fraction(base) ** int(e), k, meta))
    return out


def _ray_records(p, order):
    series, skipped = one_point_ns_fractional(p, order)
    out = []
    for e, c in series.items():
        g = genus_from_sigma_exponent(p, e)
        lab = None
        for l in admissible_components(p):
            n = e - (l + 1) / p
            if n.denominator == 1 and n >= 0:
                lab = PunctureLabel(n, l)
                break
        if lab is None or g.denominator != 1:
            continue
        out.append(IntersectionRecord(p, g, (lab,), c, c.coupling_power, {"route": "ray", "sigma_exponent": str(e)}))
    return out, [str(s) for s in skipped]


def cmd_one_point(args):
    p = _p(args)
    extra = None
    if p == -1:
        recs = euler_records(args.gmax)
    elif p.denominator == 1:
        recs = one_point_ns(p, args.gmax)
    else:
        top = (2 * Fraction(args.gmax) - 1) * (1 + 1 / p)
        order = Fraction(args.order) if args.order is not None else max(abs(top), Fraction(1)) + 1
        _series, recs = one_point_r(p, order)
        recs = _calibrate(recs, p, args.convention)
        ray, skipped = _ray_records(p, order)
        recs = recs + ray
        extra = {"ray_ramond_slots": skipped, "order": format_fraction(order)}
    params = {"p": format_fraction(p), "gmax": args.gmax, "convention": args.convention}
    return params, recs, extra


def cmd_two_point(args):
    p = _p(args)
    order = args.order if args.order is not None else 8
    if p == 2:
        recs = two_point_p2(order)
    elif p.denominator == 2:
        recs = two_point_records(p, order, ResidueOrder(args.residue_order))
        recs = _calibrate(recs, p, args.convention)
    else:
        raise UsageError("two-point is available for p = 2 and half-integer p")
    params = {"p": format_fraction(p), "order": order, "residue_order": args.residue_order, "convention": args.convention}
    return params, recs, None


def cmd_open(args):
    n_max = parse_fraction(args.nmax)
    table = open_one_point(n_max, args.m_degree)
    recs = []
    for lab, poly in sorted(table.items()):
        g = (2 * lab.n + 1) / 3  # 3g - 3 + 2 = 2n
        recs.append(
            IntersectionRecord(Fraction(2), g, (PunctureLabel(lab.n, 0),), poly, Fraction(0),
                               {"route": "open", "boundary": lab.on_boundary, "m_degree": args.m_degree})
        )
    params = {"nmax": format_fraction(n_max), "m_degree": args.m_degree}
    return params, recs, None


def cmd_euler(args):
    return {"gmax": args.gmax}, euler_records(args.gmax), None


def cmd_check_rr(args):
    p = _p(args)
    if args.g is None or not args.labels:
        raise UsageError("check-rr needs --g and --labels n:l,n:l,...")
    labels = []
    for part in args.labels.split(","):
        try:
            n, l = part.split(":")
            labels.append(PunctureLabel(parse_fraction(n), parse_fraction(l)))
        except ValueError:
            raise UsageError("labels look like 1:0,2:-1") from None
    ok = riemann_roch_holds(p, args.g, labels)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "check-rr",
        "parameters": {"p": format_fraction(p), "g": args.g, "labels": args.labels},
        "holds": ok,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_oracle(args):
    from . import oracle

    p = _p(args)
    if p.denominator != 1:
        raise UsageError("the numeric oracle takes integer p")
    if args.sigma2 is None:
        r = oracle.one_point_numeric(int(p), args.sigma)
    else:
        r = oracle.two_point_numeric(int(p), args.sigma, args.sigma2)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "oracle",
        "parameters": {"p": format_fraction(p), "sigma": args.sigma, "sigma2": args.sigma2},
        "sample": {
            "value": [r.value.real, r.value.imag],
            "estimated_error": r.estimated_error,
            "extra": {k: v for k, v in r.extra.items() if isinstance(v, float)},
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_verify(args):
    from .verify import run_suite

    lines = []
    ok = run_suite(args.suite, echo=lines.append)
    return "\n".join(lines) + "\n", ok


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pspin", description="Intersection numbers of p-spin curves.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, p=True):
        if p:
            sp.add_argument("--p", help='spin as an exact fraction, e.g. "3", "1/2", "-3/2"')
        sp.add_argument("--format", choices=["json", "csv", "md"], default="json")
        sp.add_argument("--convention", choices=["c", "c_prime", "paper"], default="c")

    sp = sub.add_parser("one-point", help="one-point numbers <tau_{n,l}>_g")
    common(sp)
    sp.add_argument("--gmax", type=int, default=3)
    sp.add_argument("--order", type=int, help="sigma truncation for half-integer p")
    sp.add_argument("--sector", help="keep only this spin component l")

    sp = sub.add_parser("two-point", help="two-point numbers")
    common(sp)
    sp.add_argument("--order", type=int)
    sp.add_argument("--residue-order", choices=[o.value for o in ResidueOrder], default="sum-both")

    sp = sub.add_parser("open", help="open one-point numbers as polynomials in m")
    common(sp, p=False)
    sp.add_argument("--nmax", default="4")
    sp.add_argument("--m-degree", type=int, default=4)

    sp = sub.add_parser("euler", help="orbifold Euler characteristics (p = -1)")
    common(sp, p=False)
    sp.add_argument("--gmax", type=int, default=5)

    sp = sub.add_parser("check-rr", help="test the dimension constraint for given labels")
    common(sp)
    sp.add_argument("--g", type=int)
    sp.add_argument("--labels")

    sp = sub.add_parser("oracle", help="numeric sample of the one- or two-point integral")
    common(sp)
    sp.add_argument("--sigma", type=float, default=0.1)
    sp.add_argument("--sigma2", type=float)

    sp = sub.add_parser("verify", help="run an acceptance suite")
    sp.add_argument("suite", choices=["paper-values", "properties", "oracle"])
    return ap


COMMANDS = {
    "one-point": cmd_one_point,
    "two-point": cmd_two_point,
    "open": cmd_open,
    "euler": cmd_euler,
    "check-rr": cmd_check_rr,
    "oracle": cmd_oracle,
}


def _join_negative_p(argv):
    # argparse reads "-3/2" as an option flag
    out = []
    it = iter(argv)
    for a in it:
        if a == "--p":
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append("--p=" + nxt)
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(a)
    return out


def main(argv=None) -> int:
    try:
        argv = _join_negative_p(sys.argv[1:] if argv is None else list(argv))
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        for name in ("gmax", "m_degree", "order"):
            v = getattr(args, name, None)
            if v is not None and v < 0:
                raise UsageError("--%s must be non-negative" % name.replace("_", "-"))
        if args.command == "verify":
            text, ok = cmd_verify(args)
            sys.stdout.write(text)
            return EXIT_OK if ok else EXIT_COMPUTE
        if args.command in ("check-rr", "oracle"):
            sys.stdout.write(COMMANDS[args.command](args))
            return EXIT_OK
        params, recs, extra = COMMANDS[args.command](args)
        if getattr(args, "sector", None) is not None:
            sector = parse_fraction(args.sector)
            recs = [r for r in recs if r.punctures[0].l == sector]
            params["sector"] = format_fraction(sector)
        text = render(args.command, params, recs, args.format, extra)
        sys.stdout.write(text)
        return EXIT_OK
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print("internal assertion failed: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL
    except (ArithmeticError, TruncationError, GradingError) as exc:
        print("computation error: %s" % exc, file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
