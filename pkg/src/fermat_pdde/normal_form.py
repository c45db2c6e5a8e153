"""Exponential-polynomial normal form and the identity-to-zero test.

Every admissible expression without opaque symbols inside transcendental
arguments equals a finite sum ``sum_k p_k(z) * exp(q_k(z))`` with polynomial
``p_k`` and pairwise distinct exponents ``q_k``.  Exponential polynomials with
distinct exponents are linearly independent over the polynomials, so the
sum vanishes identically exactly when every ``p_k`` is the zero polynomial.

Exponent constants are normalised with :func:`split_quarter_turns`: the
factor ``i**k`` moves into the coefficient and the remainder, whose
``i*pi`` coefficient lies in ``[0, 1/2)``, stays in the key.  In tolerant
mode (inexact scalars present) the whole constant is folded numerically and
keys are matched with a ``1e-12`` coefficient tolerance.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .calculus import SystemSpec, residuals
from .errors import ExactModeUnsupported, MissingSymbol
from .expr import (
    Add,
    Const,
    Cos,
    Exp,
    Expr,
    IntPow,
    Mul,
    OpaqueSymbol,
    Sin,
    Symbol,
    Var,
    add,
    evaluate,
    exp,
    free_symbols,
    from_poly,
    max_var,
    mul,
    to_poly,
)
from .poly import UNIT, Poly, format_poly, svar, zvar
from .scalar import I, ONE, ZERO, Scalar, scalar_exp, split_quarter_turns

TOLERANCE = 1e-12
NUMERIC_PASS = 1e-9
DEFAULT_RADIUS = 2.0
DEFAULT_SAMPLES = 100
CHUNK = 64

_HALF = Scalar(1, 0) / 2


class ExpPolyNF:
    """``sum_k p_k * exp(q_k)`` stored as a map exponent -> coefficient.

    ``tol == 0`` means exact arithmetic; a positive ``tol`` enables pruning
    of tiny coefficients and approximate matching of exponent keys.
    """

    __slots__ = ("_terms", "tol")

    def __init__(self, tol: float = 0.0):
        self._terms: dict[Poly, Poly] = {}
        self.tol = tol

    @property
    def terms(self) -> Mapping[Poly, Poly]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_exact(self) -> bool:
        return self.tol == 0.0

    def copy(self) -> ExpPolyNF:
        out = ExpPolyNF(self.tol)
        out._terms = dict(self._terms)
        return out

    def _match(self, key: Poly) -> Poly:
        if key in self._terms or not self.tol:
            return key
        for k in self._terms:
            if _keys_close(k, key, self.tol):
                return k
        return key

    def add_term(self, key: Poly, coeff: Poly) -> None:
        """Add ``coeff * exp(key)``; ``key`` must already be normalised."""
        if coeff.is_zero():
            return
        key = self._match(key)
        cur = self._terms.get(key)
        new = coeff if cur is None else cur + coeff
        if self.tol:
            new = Poly(dict(new.terms), self.tol)
        if new.is_zero():
            self._terms.pop(key, None)
        else:
            self._terms[key] = new

    def sorted_terms(self) -> list[tuple[Poly, Poly]]:
        return sorted(self._terms.items(), key=lambda kv: format_poly(kv[0]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpPolyNF):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        return f"ExpPolyNF({format_nf(self)})"


def _keys_close(a: Poly, b: Poly, tol: float) -> bool:
    d = a - b
    return all(abs(c.float_value) <= tol * max(1.0, abs(a.terms.get(m, ZERO).float_value)) for m, c in d.terms.items())


def _merge_tol(a: ExpPolyNF, b: ExpPolyNF) -> float:
    return max(a.tol, b.tol)


def normalize_exponent(q: Poly, tol: float) -> tuple[Poly, Scalar]:
    """Split ``exp(q)`` into ``factor * exp(key)`` per the module rules."""
    const = q.constant_term()
    if const.is_zero():
        return q, ONE
    rest = q.without_constant()
    if tol:
        return Poly(dict(rest.terms), tol), scalar_exp(const)
    if not const.is_exact:
        raise ExactModeUnsupported("inexact exponent constant")
    r, k = split_quarter_turns(const)
    return (rest + r if not r.is_zero() else rest), I ** (k % 4)


def nf_const(p: Poly, tol: float = 0.0) -> ExpPolyNF:
    nf = ExpPolyNF(tol)
    nf.add_term(Poly(tol=tol), p if not tol else Poly(dict(p.terms), tol))
    return nf


def nf_exp(q: Poly, coeff: Scalar = ONE, tol: float = 0.0) -> ExpPolyNF:
    key, factor = normalize_exponent(q, tol)
    nf = ExpPolyNF(tol)
    nf.add_term(key, Poly({UNIT: coeff * factor}, tol))
    return nf


def nf_add(a: ExpPolyNF, b: ExpPolyNF) -> ExpPolyNF:
    out = a.copy()
    out.tol = _merge_tol(a, b)
    for k, p in b.terms.items():
        out.add_term(k, p)
    return out


def nf_neg(a: ExpPolyNF) -> ExpPolyNF:
    out = ExpPolyNF(a.tol)
    out._terms = {k: -p for k, p in a.terms.items()}
    return out


def nf_sub(a: ExpPolyNF, b: ExpPolyNF) -> ExpPolyNF:
    return nf_add(a, nf_neg(b))


def nf_mul(a: ExpPolyNF, b: ExpPolyNF) -> ExpPolyNF:
    tol = _merge_tol(a, b)
    out = ExpPolyNF(tol)
    for k1, p1 in a.terms.items():
        for k2, p2 in b.terms.items():
            key, factor = normalize_exponent(k1 + k2, tol)
            coeff = p1 * p2
            if factor != ONE:
                coeff = coeff.scale(factor)
            out.add_term(key, coeff)
    return out


def nf_pow(a: ExpPolyNF, n: int) -> ExpPolyNF:
    result = nf_const(Poly.const(ONE), a.tol)
    base = a
    while n:
        if n & 1:
            result = nf_mul(result, base)
        n >>= 1
        if n:
            base = nf_mul(base, base)
    return result


def _euler(arg: Expr, tol: float, kind) -> ExpPolyNF:
    if free_symbols(arg):
        raise ExactModeUnsupported("opaque symbol inside a transcendental argument")
    q = to_poly(arg)
    if not q.is_exact() and not tol:
        raise ExactModeUnsupported("inexact transcendental argument")
    if tol:
        q = Poly(dict(q.terms), tol)
    if kind is Exp:
        return nf_exp(q, ONE, tol)
    iq = q.scale(I)
    if kind is Sin:
        # sin(u) = -i/2 e^{iu} + i/2 e^{-iu}
        return nf_add(nf_exp(iq, -I * _HALF, tol), nf_exp(-iq, I * _HALF, tol))
    return nf_add(nf_exp(iq, _HALF, tol), nf_exp(-iq, _HALF, tol))


def to_nf(e: Expr, tolerant: bool = False) -> ExpPolyNF:
    """Normal form of ``e``.

    Exact mode raises :class:`ExactModeUnsupported` for opaque symbols inside
    transcendental arguments or for inexact scalars; tolerant mode accepts
    inexact scalars but still rejects symbols inside transcendentals.
    """
    tol = TOLERANCE if tolerant else 0.0
    cache: dict[int, ExpPolyNF] = {}

    def rec(node: Expr) -> ExpPolyNF:
        hit = cache.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Const):
            if not tol and not node.value.is_exact:
                raise ExactModeUnsupported("inexact constant")
            out = nf_const(Poly.const(node.value), tol)
        elif isinstance(node, Var):
            out = nf_const(Poly.var(zvar(node.index)), tol)
        elif isinstance(node, Symbol):
            out = nf_const(Poly.var(svar(node.symbol)), tol)
        elif isinstance(node, Add):
            out = ExpPolyNF(tol)
            for c in node.children:
                out = nf_add(out, rec(c))
        elif isinstance(node, Mul):
            out = rec(node.children[0])
            for c in node.children[1:]:
                out = nf_mul(out, rec(c))
        elif isinstance(node, IntPow):
            out = nf_pow(rec(node.base), node.exponent)
        elif isinstance(node, (Exp, Sin, Cos)):
            out = _euler(node.arg, tol, type(node))
        else:
            raise TypeError(f"unknown node {node!r}")
        cache[id(node)] = out
        return out

    return rec(e)


def is_zero(nf: ExpPolyNF) -> bool:
    return nf.is_zero()


def nf_equal(a: Expr, b: Expr) -> bool:
    """Exact identity test ``a == b`` through the normal form."""
    return to_nf(add(a, mul(Const(-ONE), b))).is_zero()


def to_expr(nf: ExpPolyNF) -> Expr:
    """Reconstruct an expression from a normal form."""
    parts = []
    for key, p in nf.sorted_terms():
        coeff = from_poly(p)
        parts.append(coeff if key.is_zero() else mul(coeff, exp(from_poly(key))))
    return add(*parts)


def format_nf(nf: ExpPolyNF) -> str:
    if nf.is_zero():
        return "0"
    out = []
    for key, p in nf.sorted_terms():
        coeff = f"({format_poly(p)})"
        out.append(coeff if key.is_zero() else f"{coeff}*exp({format_poly(key)})")
    return " + ".join(out)


# ---------------------------------------------------------------------------
# reports


VERDICTS = ("identity-zero", "nonzero", "numeric-pass", "numeric-fail")


def _cjson(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


_FMAX = float(np.finfo(float).max)


def _json_safe(x):
    """Replace non-finite floats (overflowing samples) by +-float max so the
    JSON stays standard."""
    if isinstance(x, float):
        if np.isnan(x):
            return _FMAX
        return max(-_FMAX, min(_FMAX, x))
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


@dataclass
class VerificationReport:
    mode: str  # exact | numeric
    verdict: str
    max_abs_residual: float
    samples: int
    witness: dict | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "numeric"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "nonzero" and not self.witness:
            raise ValueError("a nonzero verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.verdict in ("identity-zero", "numeric-pass")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "max_abs_residual": float(self.max_abs_residual),
            "samples": int(self.samples),
            "witness": self.witness,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(_json_safe(self.to_dict()), sort_keys=True, indent=indent, allow_nan=False)

    @classmethod
    def from_dict(cls, d: Mapping) -> VerificationReport:
        return cls(d["mode"], d["verdict"], d["max_abs_residual"], d["samples"], d.get("witness"))


# ---------------------------------------------------------------------------
# numeric verification

SymbolModel = Mapping  # OpaqueSymbol | name -> Expr | callable(coords) -> array


def polydisc_points(m: int, radius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform in the closed polydisc, shape ``(m, n)``."""
    r = radius * np.sqrt(rng.random((m, n)))
    theta = 2 * np.pi * rng.random((m, n))
    return r * np.exp(1j * theta)


def _model_values(symbols, coords, model: SymbolModel | None, m: int):
    values = {}
    model = model or {}
    for sym in symbols:
        f = model.get(sym, model.get(sym.name)) if isinstance(model, Mapping) else None
        if f is None:
            raise MissingSymbol(sym.name)
        if isinstance(f, Expr):
            v = evaluate(f, coords, {})
        elif callable(f):
            v = f(coords)
        else:
            v = f
        values[sym] = np.broadcast_to(np.asarray(v, dtype=complex), np.shape(coords[0]))
    return values


def _eval_chunk(exprs, m, radius, seed, k, n, model):
    rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
    pts = polydisc_points(m, radius, n, rng)
    coords = [pts[j] for j in range(m)]
    total = np.zeros(n)
    syms = set().union(*(free_symbols(e) for e in exprs))
    sv = _model_values(syms, coords, model, m)
    with np.errstate(all="ignore"):
        for e in exprs:
            total = np.maximum(total, np.abs(np.broadcast_to(evaluate(e, coords, sv), (n,))))
    total = np.where(np.isnan(total), np.inf, total)
    j = int(np.argmax(total))
    return float(total[j]), pts[:, j]


def numeric_verify(
    e: Expr | Sequence[Expr],
    m: int,
    radius: float = DEFAULT_RADIUS,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    symbol_model: SymbolModel | None = None,
    workers: int | None = None,
    threshold: float = NUMERIC_PASS,
) -> VerificationReport:
    """Sample ``max |e|`` over the polydisc; pass iff it stays below
    ``threshold`` (1e-9 by default).

    ``e`` may be a list of expressions, in which case the pointwise maximum
    is used.  Samples are drawn in chunks of 64 with per-chunk seeds derived
    from ``(seed, chunk index)``, so the report does not depend on
    ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    exprs = [e] if isinstance(e, Expr) else list(e)
    if any(max_var(x) > m for x in exprs):
        raise ValueError("expression uses a variable beyond the dimension")
    chunks = [(k, min(CHUNK, samples - k * CHUNK)) for k in range(math.ceil(samples / CHUNK))]

    def run(kn):
        return _eval_chunk(exprs, m, radius, seed, kn[0], kn[1], symbol_model)

    if workers and workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(kn) for kn in chunks]
    best = 0
    for idx, (val, _) in enumerate(results):
        if val > results[best][0]:
            best = idx
    val, point = results[best]
    passed = val < threshold
    witness = None
    if not passed:
        at = [point[j] for j in range(m)]
        syms = set().union(*(free_symbols(x) for x in exprs))
        sv = _model_values(syms, [np.asarray(c) for c in at], symbol_model, m)
        sv = {s: complex(np.asarray(v).reshape(-1)[0]) for s, v in sv.items()}
        vals = [evaluate(x, at, sv) for x in exprs]
        witness = {
            "point": [_cjson(c) for c in at],
            "value": _cjson(max(vals, key=abs)),
        }
    return VerificationReport(
        "numeric", "numeric-pass" if passed else "numeric-fail", val, samples, witness
    )


def evaluate_at(e: Expr, point: Sequence[complex], symbol_model: SymbolModel | None = None) -> complex:
    """Value of ``e`` at one point, evaluating symbols through their models."""
    coords = [np.asarray([complex(x)]) for x in point]
    sv = _model_values(free_symbols(e), coords, symbol_model, len(point))
    return complex(np.asarray(evaluate(e, coords, sv)).reshape(-1)[0])


# ---------------------------------------------------------------------------
# system verification


def _exact_witness(nfs: Sequence[ExpPolyNF]) -> dict:
    for idx, nf in enumerate(nfs, start=1):
        if not nf.is_zero():
            key, p = nf.sorted_terms()[0]
            return {"residual": idx, "exponent": format_poly(key), "coefficient": format_poly(p)}
    raise ValueError("no surviving term")


def _stricter(a: VerificationReport, b: VerificationReport) -> VerificationReport:
    rank = {"identity-zero": 0, "numeric-pass": 1, "numeric-fail": 2, "nonzero": 3}
    worst = a if rank[a.verdict] >= rank[b.verdict] else b
    return VerificationReport(
        "exact" if a.mode == b.mode == "exact" else "numeric",
        worst.verdict,
        max(a.max_abs_residual, b.max_abs_residual),
        max(a.samples, b.samples),
        worst.witness or (a.witness or b.witness),
    )


def verify_residuals(
    exprs: Sequence[Expr],
    m: int,
    symbol_model: SymbolModel | None = None,
    samples: int = DEFAULT_SAMPLES,
    radius: float = DEFAULT_RADIUS,
    seed: int = 0,
    workers: int | None = None,
    threshold: float = NUMERIC_PASS,
) -> VerificationReport:
    """Decide whether every expression in ``exprs`` vanishes identically.

    ``threshold`` only applies to numeric sampling; exact verdicts ignore it.

    Exact normal form first; on :class:`ExactModeUnsupported`, the tolerant
    normal form (when no symbol sits inside a transcendental) and/or numeric
    sampling with ``symbol_model``, reporting the stricter verdict.
    """
    try:
        nfs = [to_nf(x) for x in exprs]
    except ExactModeUnsupported:
        nfs = None
    if nfs is not None:
        if all(nf.is_zero() for nf in nfs):
            return VerificationReport("exact", "identity-zero", 0.0, 0, None)
        witness = _exact_witness(nfs)
        size = max(max((p.max_abs_coeff() for p in nf.terms.values()), default=0.0) for nf in nfs)
        try:
            num = numeric_verify(exprs, m, radius, samples, seed, symbol_model, workers)
            if num.witness:
                witness.update(num.witness)
            size = num.max_abs_residual
        except MissingSymbol:
            pass
        return VerificationReport("exact", "nonzero", size, 0, witness)

    reports = []
    try:
        tnfs = [to_nf(x, tolerant=True) for x in exprs]
    except ExactModeUnsupported:
        tnfs = None
    if tnfs is not None:
        size = max(max((p.max_abs_coeff() for p in nf.terms.values()), default=0.0) for nf in tnfs)
        ok = all(nf.is_zero() for nf in tnfs)
        witness = None if ok else _exact_witness(tnfs)
        reports.append(VerificationReport("numeric", "numeric-pass" if ok else "numeric-fail", size, 0, witness))
    symbols = set().union(*(free_symbols(x) for x in exprs))
    if tnfs is None or not symbols or symbol_model:
        reports.append(numeric_verify(exprs, m, radius, samples, seed, symbol_model, workers, threshold))
    out = reports[0]
    for r in reports[1:]:
        out = _stricter(out, r)
    return out


def verify_system(
    spec: SystemSpec,
    f1: Expr,
    f2: Expr,
    symbol_model: SymbolModel | None = None,
    samples: int = DEFAULT_SAMPLES,
    radius: float = DEFAULT_RADIUS,
    seed: int = 0,
    workers: int | None = None,
    threshold: float = NUMERIC_PASS,
) -> VerificationReport:
    """Verify that ``(f1, f2)`` solves the system described by ``spec``."""
    r1, r2 = residuals(spec, f1, f2)
    return verify_residuals([r1, r2], spec.m, symbol_model, samples, radius, seed, workers, threshold)
