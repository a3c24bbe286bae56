"""Manifest-driven command line front end.

    adelic --manifest run.json --out results/ [--format json|csv]

Every task writes one artifact ``<id>.json`` (or ``<id>.csv``) plus a shared
``summary.json``.  Exit status: 0 when every verdict is decided, 2 when some
verdict is Undecided, 1 on any error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .aqp import PAdicFactorSpec, QuasiPolynomial, aqc_certificate, verify_certificate
from .dichotomy import (UNDECIDED, BMWCurve, BMWSpec, DichotomyVerdict, ExactCoefficient, Interval,
                        PerturbedSeries, RationalWitness, TrackedFloat, classify_bmw, classify_main,
                        classify_rw, coefficients, pade_boundary_scan, step1_identity_check)
from .ecoracle import Curve, crosscheck_Nk, frobenius_spec
from .errors import AdelicError, BudgetExceeded, ManifestError, PrecisionLoss
from .lrs import ZERO, PolyExpSeq, from_xi_product, is_v_stable
from .numfield import AlgebraicNumber, NumberField, nf_create, rationals
from .places import place_from_selector
from .powerproduct import PowerProduct
from .realalg import RealAlgebraic
from .rational import RationalFunction
from .zeta import ZetaSpec, classify_zeta, fixed_point_series, zeta_coeffs

log = logging.getLogger("adelic")

TASK_KEYS = {
    "stability": {"sequence", "place"},
    "certificate": {"sequence", "place", "c", "depth", "verify_samples"},
    "classify-main": {"base", "factors", "qp", "f0", "depth"},
    "classify-rw": {"base", "u", "places", "c"},
    "classify-bmw": {"curves"},
    "zeta": {"field", "xi", "p", "r", "s", "N"},
    "ec-verify": {"curve", "k_max"},
    "series": {"source", "N", "mode"},
    "pade-scan": {"source", "N", "orders", "annulus"},
    "step1-check": {"source", "bad", "d", "N"},
}
COMMON_KEYS = {"id", "type"}


# -- parsing ---------------------------------------------------------------------------

def _fail(path: str, msg: str):
    raise ManifestError(f"{path}: {msg}", witness=path)


def _check_keys(obj, allowed, path):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    extra = sorted(set(obj) - set(allowed))
    if extra:
        _fail(path, f"unknown key(s) {extra}")


def _need(obj, key, path):
    if key not in obj:
        _fail(path, f"missing key {key!r}")
    return obj[key]


def parse_rational(x, path) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        _fail(path, "exact rationals must be strings 'num/den' or integers")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        _fail(path, f"not a rational: {x!r}")


def parse_element(K: NumberField, x, path) -> AlgebraicNumber:
    if isinstance(x, list):
        if len(x) > K.degree:
            _fail(path, f"{len(x)} coordinates for a degree-{K.degree} field")
        return K([parse_rational(c, f"{path}[{i}]") for i, c in enumerate(x)])
    return K(parse_rational(x, path))


class Context:
    def __init__(self, manifest: dict, args):
        self.args = args
        self.fields = {"Q": rationals()}
        for name, spec in manifest.get("fields", {}).items():
            path = f"fields.{name}"
            _check_keys(spec, {"min_poly"}, path)
            coeffs = [parse_rational(c, f"{path}.min_poly[{i}]")
                      for i, c in enumerate(_need(spec, "min_poly", path))]
            try:
                self.fields[name] = nf_create(tuple(coeffs))
            except AdelicError as exc:
                _fail(path, f"{type(exc).__name__}: {exc}")
        self.sequences = {}
        for name, spec in manifest.get("sequences", {}).items():
            self.sequences[name] = self._sequence(spec, f"sequences.{name}")

    def field(self, name, path) -> NumberField:
        if name not in self.fields:
            _fail(path, f"unknown field {name!r}")
        return self.fields[name]

    def _sequence(self, spec, path):
        _check_keys(spec, {"field", "terms", "xi_product"}, path)
        K = self.field(spec.get("field", "Q"), f"{path}.field")
        if "xi_product" in spec:
            if "terms" in spec:
                _fail(path, "give either terms or xi_product")
            xi = [parse_element(K, x, f"{path}.xi_product[{i}]") for i, x in enumerate(spec["xi_product"])]
            return from_xi_product(xi)
        terms = []
        for i, t in enumerate(_need(spec, "terms", path)):
            tp = f"{path}.terms[{i}]"
            _check_keys(t, {"poly", "root"}, tp)
            poly = [parse_element(K, c, f"{tp}.poly[{j}]") for j, c in enumerate(_need(t, "poly", tp))]
            terms.append((poly, parse_element(K, _need(t, "root", tp), f"{tp}.root")))
        seq = PolyExpSeq.make(K, terms)
        if seq is ZERO:
            _fail(path, "the sequence is identically zero")
        return seq

    def sequence(self, name, path):
        if name not in self.sequences:
            _fail(path, f"unknown sequence {name!r}")
        return self.sequences[name]

    def place(self, seq, selector, path):
        if not isinstance(selector, str):
            _fail(path, "place selectors are strings like '2:0' or 'inf:0'")
        try:
            return place_from_selector(seq.field, selector)
        except (ValueError, AdelicError) as exc:
            _fail(path, str(exc))

    def factors(self, specs, path):
        out = []
        for i, f in enumerate(specs):
            fp = f"{path}[{i}]"
            _check_keys(f, {"sequence", "place", "c"}, fp)
            u = self.sequence(_need(f, "sequence", fp), f"{fp}.sequence")
            w = self.place(u, _need(f, "place", fp), f"{fp}.place")
            c = parse_rational(f.get("c", "1"), f"{fp}.c")
            out.append(PAdicFactorSpec.create(u, w, c))
        return out

    def qp(self, spec, path):
        _check_keys(spec, {"d", "polys", "threshold"}, path)
        polys = tuple(tuple(parse_rational(c, f"{path}.polys[{i}][{j}]") for j, c in enumerate(pl))
                      for i, pl in enumerate(_need(spec, "polys", path)))
        return QuasiPolynomial(int(_need(spec, "d", path)), polys, int(spec.get("threshold", 0)))

    def perturbed(self, task, path):
        base = self.sequence(_need(task, "base", path), f"{path}.base")
        factors = self.factors(task.get("factors", []), f"{path}.factors")
        qp = self.qp(task["qp"], f"{path}.qp") if "qp" in task else None
        f0 = parse_rational(task["f0"], f"{path}.f0") if "f0" in task else None
        return PerturbedSeries(base, tuple(factors), qp, f0)

    def bmw(self, curves, path):
        out = []
        for i, c in enumerate(curves):
            cp = f"{path}[{i}]"
            _check_keys(c, {"field", "xi", "S"}, cp)
            K = self.field(c.get("field", "Q"), f"{cp}.field")
            xi = parse_element(K, _need(c, "xi", cp), f"{cp}.xi")
            S = []
            for j, sel in enumerate(c.get("S", [])):
                try:
                    S.append(place_from_selector(K, sel))
                except (ValueError, AdelicError) as exc:
                    _fail(f"{cp}.S[{j}]", str(exc))
            out.append(BMWCurve(xi, tuple(S)))
        return BMWSpec(tuple(out))

    def source(self, spec, path):
        _check_keys(spec, {"kind", "base", "factors", "qp", "f0", "curves"}, path)
        kind = spec.get("kind", "main")
        if kind == "main":
            return self.perturbed(spec, path)
        if kind == "bmw":
            return self.bmw(_need(spec, "curves", path), f"{path}.curves")
        _fail(f"{path}.kind", f"unknown source kind {kind!r}")


# -- serialisation -----------------------------------------------------------------------------

def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, Fraction):
        return _q(obj)
    if isinstance(obj, AlgebraicNumber):
        return _q(obj.coords[0]) if obj.is_rational() else [_q(c) for c in obj.coords]
    if isinstance(obj, PowerProduct):
        pp = obj.as_prime_power()
        if pp is not None:
            return {"p": pp[0] if pp[0] is not None else 1, "exp": _q(pp[1])}
        return {"rational": _q(obj.rational),
                "radical": [{"p": p, "exp": _q(e)} for p, e in obj.radical]}
    if isinstance(obj, RealAlgebraic):
        return {"approx": repr(float(obj)), "exact": repr(obj)}
    if isinstance(obj, Interval):
        return obj.to_json()
    if isinstance(obj, RationalFunction):
        return {"num": [jsonable(c) for c in obj.num], "den": [jsonable(c) for c in obj.den]}
    if isinstance(obj, RationalWitness):
        return {"scale": jsonable(obj.scale),
                "components": [{"radical": jsonable(r), "function": jsonable(f)} for r, f in obj.components]}
    if isinstance(obj, ExactCoefficient):
        return {"scalar": jsonable(obj.scalar), "radical": jsonable(obj.radical)}
    if isinstance(obj, TrackedFloat):
        return {"re": repr(obj.value.real), "im": repr(obj.value.imag), "error": repr(obj.error)}
    if isinstance(obj, complex):
        return {"re": repr(obj.real), "im": repr(obj.imag)}
    if isinstance(obj, DichotomyVerdict):
        return {"kind": obj.kind, "radius": jsonable(obj.radius), "witness": jsonable(obj.witness),
                "diagnostics": jsonable(obj.diagnostics)}
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [jsonable(v) for v in obj]
    return str(obj)


# -- tasks ---------------------------------------------------------------------------------------

def _task_stability(ctx, t, path):
    seq = ctx.sequence(_need(t, "sequence", path), f"{path}.sequence")
    w = ctx.place(seq, _need(t, "place", path), f"{path}.place")
    v = is_v_stable(seq, w)
    out = {"kind": "Stable" if v.stable else "Unstable", "stable": v.stable, "L": v.L,
           "witness": v.witness, "M": v.essential.M, "essential_roots": v.essential.roots}
    if v.stable:
        try:
            out["section_coefficients"] = {str(b): c for b, c in v.normalized_section_coefficients().items()}
        except ValueError:
            pass
    return out, True


def _task_certificate(ctx, t, path):
    seq = ctx.sequence(_need(t, "sequence", path), f"{path}.sequence")
    w = ctx.place(seq, _need(t, "place", path), f"{path}.place")
    spec = PAdicFactorSpec.create(seq, w, parse_rational(t.get("c", "1"), f"{path}.c"))
    cert = aqc_certificate(spec, int(_need(t, "depth", path)), precision=ctx.args.budget_precision,
                           jobs=ctx.args.jobs)
    out = {"kind": "Certificate", "certificate": cert.to_json(), "L": cert.L,
           "warnings": cert.warnings}
    samples = int(t.get("verify_samples", 0))
    if samples:
        rep = verify_certificate(cert, spec, samples)
        out["verification"] = {"checked": rep.checked, "ok": rep.ok, "mismatches": rep.mismatches[:10]}
    return out, True


def _verdict(v: DichotomyVerdict):
    return jsonable(v), v.kind != UNDECIDED


def _task_classify_main(ctx, t, path):
    s = ctx.perturbed(t, path)
    return _verdict(classify_main(s, depth=int(t.get("depth", 1)), precision=ctx.args.budget_precision))


def _task_classify_rw(ctx, t, path):
    a = ctx.sequence(_need(t, "base", path), f"{path}.base")
    u = ctx.sequence(_need(t, "u", path), f"{path}.u")
    S = [ctx.place(u, sel, f"{path}.places[{i}]") for i, sel in enumerate(_need(t, "places", path))]
    c = [parse_rational(x, f"{path}.c[{i}]") for i, x in enumerate(_need(t, "c", path))]
    if len(c) != len(S):
        _fail(f"{path}.c", "needs one exponent per place")
    return _verdict(classify_rw(a, u, S, c, precision=ctx.args.budget_precision))


def _task_classify_bmw(ctx, t, path):
    return _verdict(classify_bmw(ctx.bmw(_need(t, "curves", path), f"{path}.curves")))


def _task_zeta(ctx, t, path):
    K = ctx.field(t.get("field", "Q"), f"{path}.field")
    xi = [parse_element(K, x, f"{path}.xi[{i}]") for i, x in enumerate(_need(t, "xi", path))]
    r = [parse_rational(x, f"{path}.r[{i}]") for i, x in enumerate(t.get("r", ["1"]))]
    s = [int(parse_rational(x, f"{path}.s[{i}]")) for i, x in enumerate(t.get("s", ["0"]))]
    spec = ZetaSpec(tuple(xi), int(_need(t, "p", path)), tuple(r), tuple(s))
    out = jsonable(classify_zeta(spec))
    N = int(t.get("N", 0))
    if N:
        out["fixed_points"] = jsonable(fixed_point_series(spec, N)[1:])
        out["zeta_coefficients"] = jsonable(zeta_coeffs(spec, N))
    return out, out["kind"] != UNDECIDED


def _task_ec_verify(ctx, t, path):
    c = _need(t, "curve", path)
    _check_keys(c, {"p", "a4", "a6"}, f"{path}.curve")
    curve = Curve(int(_need(c, "p", path)), int(_need(c, "a4", path)), int(_need(c, "a6", path)))
    rep = crosscheck_Nk(curve, int(_need(t, "k_max", path)), budget=ctx.args.budget_enum)
    spec = frobenius_spec(curve)
    return {"kind": "Verified" if rep.ok else "Mismatch", "trace": spec.xi[0] + spec.xi[1],
            "min_poly": list(spec.xi[0].field.min_poly),
            "rows": [{"k": k, "points": n, "deg_k": d} for k, n, d in rep.rows]}, True


def _task_series(ctx, t, path):
    src = ctx.source(_need(t, "source", path), f"{path}.source")
    mode = t.get("mode", "exact")
    if mode not in ("exact", "float"):
        _fail(f"{path}.mode", "mode must be exact or float")
    cs = coefficients(src, int(_need(t, "N", path)), mode)
    start = 1 if isinstance(src, BMWSpec) else 0
    return {"kind": "Series", "start": start, "mode": mode, "coefficients": cs}, True


def _float_coeffs(src, N):
    cs = coefficients(src, N, "float")
    vals = [float(c) for c in cs]
    return ([0.0] + vals) if isinstance(src, BMWSpec) else vals


def _task_pade(ctx, t, path):
    src = ctx.source(_need(t, "source", path), f"{path}.source")
    N = int(_need(t, "N", path))
    orders = [tuple(int(x) for x in o) for o in _need(t, "orders", path)]
    tab = pade_boundary_scan(_float_coeffs(src, N), orders)
    out = {"kind": "PadeScan", "scale": tab.scale, "seed": ctx.args.seed,
           "orders": [{"L": o.L, "M": o.M, "skipped": o.skipped, "reduced": o.reduced,
                       "effective_M": o.effective_M, "condition": o.condition,
                       "poles": [complex(round(z.real, 12), round(z.imag, 12)) for z in o.poles]}
                      for o in tab.orders]}
    if "annulus" in t:
        lo, hi = (float(parse_rational(x, f"{path}.annulus")) for x in t["annulus"])
        out["annulus"] = {"lo": lo, "hi": hi, "counts": tab.count_in_annulus(lo, hi)}
    return out, True


def _task_step1(ctx, t, path):
    src = ctx.source(_need(t, "source", path), f"{path}.source")
    if isinstance(src, BMWSpec):
        _fail(f"{path}.source", "step1-check needs a perturbed series")
    rep = step1_identity_check(src, [int(b) for b in _need(t, "bad", path)], int(_need(t, "d", path)),
                               int(_need(t, "N", path)))
    return {"kind": "Step1", "vanishing_ok": rep.vanishing_ok, "nonvanishing_bad": rep.nonvanishing_bad,
            "rank_profile": rep.rank_profile, "rank": rep.rank, "stabilized": rep.stabilized}, True


HANDLERS = {
    "stability": _task_stability,
    "certificate": _task_certificate,
    "classify-main": _task_classify_main,
    "classify-rw": _task_classify_rw,
    "classify-bmw": _task_classify_bmw,
    "zeta": _task_zeta,
    "ec-verify": _task_ec_verify,
    "series": _task_series,
    "pade-scan": _task_pade,
    "step1-check": _task_step1,
}


def validate(manifest) -> list:
    """Structural checks; returns the task list."""
    _check_keys(manifest, {"version", "fields", "sequences", "tasks"}, "manifest")
    if "version" not in manifest:
        _fail("manifest", "missing key 'version'")
    tasks = _need(manifest, "tasks", "manifest")
    if not isinstance(tasks, list) or not tasks:
        _fail("manifest.tasks", "expected a nonempty list")
    seen = set()
    for i, t in enumerate(tasks):
        path = f"tasks[{i}]"
        if not isinstance(t, dict):
            _fail(path, "expected an object")
        typ = _need(t, "type", path)
        if typ not in TASK_KEYS:
            _fail(f"{path}.type", f"unknown task type {typ!r}")
        _check_keys(t, TASK_KEYS[typ] | COMMON_KEYS, path)
        tid = str(t.get("id", f"task{i}"))
        if tid in seen or not tid.replace("-", "").replace("_", "").isalnum():
            _fail(f"{path}.id", f"duplicate or unusable id {tid!r}")
        seen.add(tid)
    return tasks


def run_task(ctx, i, t):
    path = f"tasks[{i}]"
    tid = str(t.get("id", f"task{i}"))
    try:
        body, decided = HANDLERS[t["type"]](ctx, t, path)
        status = "decided" if decided else "undecided"
    except ManifestError:
        raise
    except (BudgetExceeded, PrecisionLoss) as exc:
        body = {"kind": UNDECIDED, "reason": f"{type(exc).__name__}: {exc}"}
        status = "undecided"
    except AdelicError as exc:
        body = {"kind": "Error", "error": type(exc).__name__, "message": str(exc),
                "witness": jsonable(exc.witness)}
        status = "error"
    return tid, t["type"], status, jsonable(body)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in obj:
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, "" if obj is None else obj


def _csv(typ, body) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if typ == "series" and "coefficients" in body:
        w.writerow(["n", "value"])
        for i, c in enumerate(body["coefficients"]):
            w.writerow([i + body["start"], json.dumps(c, sort_keys=True) if not isinstance(c, str) else c])
    elif typ == "pade-scan" and "orders" in body:
        w.writerow(["L", "M", "re", "im"])
        for o in body["orders"]:
            for z in o["poles"]:
                w.writerow([o["L"], o["M"], z["re"], z["im"]])
    else:
        w.writerow(["key", "value"])
        for k, v in _flatten(body):
            w.writerow([k, v])
    return buf.getvalue()


def run(manifest_path, out_dir, fmt="json", budget_precision=20, budget_enum=10 ** 6,
        jobs=1, seed=0) -> int:
    args = argparse.Namespace(budget_precision=budget_precision, budget_enum=budget_enum,
                              jobs=max(1, jobs), seed=seed)
    try:
        text = Path(manifest_path).read_text()
    except OSError as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return 1
    try:
        manifest = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"error: manifest is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}",
              file=sys.stderr)
        return 1
    try:
        tasks = validate(manifest)
        ctx = Context(manifest, args)
        if args.jobs > 1:
            with ThreadPoolExecutor(args.jobs) as ex:
                results = list(ex.map(lambda it: run_task(ctx, *it), enumerate(tasks)))
        else:
            results = [run_task(ctx, i, t) for i, t in enumerate(tasks)]
    except ManifestError as exc:
        print(f"error: invalid manifest: {exc}", file=sys.stderr)
        return 1
    except AdelicError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for tid, typ, status, body in results:
        doc = {"id": tid, "type": typ, "status": status, "version": __version__, "result": body}
        if fmt == "csv":
            (out / f"{tid}.csv").write_text(_csv(typ, body))
        else:
            (out / f"{tid}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        summary.append({"id": tid, "type": typ, "status": status, "kind": body.get("kind")})
        print(f"{tid}: {typ} -> {body.get('kind')} [{status}]")
    (out / "summary.json").write_text(json.dumps({"tasks": summary, "seed": seed, "version": __version__},
                                                 indent=2, sort_keys=True) + "\n")
    statuses = {s for _, _, s, _ in results}
    if "error" in statuses:
        return 1
    if "undecided" in statuses:
        return 2
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="adelic", description=__doc__.splitlines()[0])
    ap.add_argument("--manifest", required=True, help="JSON manifest path")
    ap.add_argument("--out", default="adelic-out", help="output directory")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--budget-precision", type=int, default=20, help="p-adic working precision")
    ap.add_argument("--budget-enum", type=int, default=10 ** 6, help="finite-field enumeration budget")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args(argv)
    level = os.environ.get("ADELIC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    return run(ns.manifest, ns.out, ns.format, ns.budget_precision, ns.budget_enum, ns.jobs, ns.seed)


if __name__ == "__main__":
    sys.exit(main())
