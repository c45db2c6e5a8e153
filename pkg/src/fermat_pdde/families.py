"""Solution families of the system, their constraint validators and the
feasibility classifier.

Sine family, exponents (2, 2, 2, 2)::

    f1 = sin(A z1 + A12 z2 + ... + A1m zm + Q1(z2..zm))
    f2 = sin(B z1 + B12 z2 + ... + B1m zm + Q2(z2..zm))

Quadratic family, exponents (n1, m1, n2, m2) = (2, 1, 2, 1)::

    fi = 1 + (Ki/4) z1^2 + z1 gi - Ki^2 gi^2

with ``gi`` an opaque entire function of ``z2..zm``.

Validators return one :class:`ConstraintCheck` per constraint.  Scalars are
compared exactly when they are exact and to within 1e-10 otherwise.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .calculus import ShiftVector, SystemSpec, shift, single_residual
from .errors import InvalidFamily, UnknownSymbolShift
from .expr import (
    Const,
    Expr,
    OpaqueSymbol,
    SymbolRegistry,
    Var,
    add,
    as_expr,
    free_symbols,
    has_transcendental,
    mul,
    power,
    sin,
    to_poly,
)
from .poly import format_poly, zvar
from .scalar import I, ONE, PI, ZERO, Scalar, ScalarLike, format_scalar, scalar_exp

NUMERIC_TOL = 1e-10

# ---------------------------------------------------------------------------
# classifier


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of :func:`classify`.

    ``tag`` is one of SineFamily, QuadraticFamily, NonExistence, Unknown,
    ExcludedTrivial; ``branch`` names the firing non-existence condition
    (2i, 2ii, 2iii, 2iv or exponent); ``clause`` is a stable text key.
    """

    tag: str
    branch: str | None = None
    clause: str = ""

    def __str__(self) -> str:
        return f"{self.tag}({self.branch})" if self.branch else self.tag

    def to_dict(self) -> dict:
        return {"tag": self.tag, "branch": self.branch, "clause": self.clause, "verdict": str(self)}


CLAUSES = {
    "ExcludedTrivial": "standing-hypothesis:n_i+m_i>2",
    "2i": "nonexistence:m1*m2>n1*n2",
    "2ii": "nonexistence:n_i=m_i,n_j>m_j",
    "2iii": "nonexistence:n_i>m_i(both),n1*n2-n_i>2(each)",
    "2iv": "nonexistence:n_i>m_i,m_j>n_j,n_i>=3,m_j>n_i/(n_i-2)",
    "exponent": "nonexistence:1/n_i+1/m_i<1",
    "SineFamily": "sine-family:n1=m1=n2=m2=2",
    "QuadraticFamily": "quadratic-family:m_i=1,n_i=2",
    "Unknown": "open:n_i>m_i,m_j>n_j,(n_i<3 or m_j<=n_i/(n_i-2))",
}


def _nonexistence_branch(n1: int, m1: int, n2: int, m2: int) -> str | None:
    n, mm = (n1, n2), (m1, m2)
    if m1 * m2 > n1 * n2:
        return "2i"
    for i, j in ((0, 1), (1, 0)):
        if n[i] == mm[i] and n[j] > mm[j]:
            return "2ii"
    if n1 > m1 and n2 > m2 and all(n1 * n2 - n[i] > 2 for i in (0, 1)):
        return "2iii"
    for i, j in ((0, 1), (1, 0)):
        # m_j > n_i / (n_i - 2) in integer arithmetic
        if n[i] > mm[i] and mm[j] > n[j] and n[i] >= 3 and mm[j] * (n[i] - 2) > n[i]:
            return "2iv"
    return None


def classify(n1: int, m1: int, n2: int, m2: int) -> FeasibilityVerdict:
    """Feasibility of the exponent quadruple ``(n1, m1, n2, m2)``.

    Order: trivial exclusion, non-existence branches 2i..2iv (first hit
    wins), the per-equation exponent inequality ``1/n + 1/m >= 1``, the two
    families, and finally Unknown.
    """
    q = (n1, m1, n2, m2)
    if any(not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in q):
        raise ValueError(f"exponents must be positive integers, got {q}")
    if n1 + m1 <= 2 or n2 + m2 <= 2:
        return FeasibilityVerdict("ExcludedTrivial", None, CLAUSES["ExcludedTrivial"])
    branch = _nonexistence_branch(*q)
    if branch:
        return FeasibilityVerdict("NonExistence", branch, CLAUSES[branch])
    if any(Fraction(1, n) + Fraction(1, m) < 1 for n, m in ((n1, m1), (n2, m2))):
        return FeasibilityVerdict("NonExistence", "exponent", CLAUSES["exponent"])
    if q == (2, 2, 2, 2):
        return FeasibilityVerdict("SineFamily", None, CLAUSES["SineFamily"])
    if q == (2, 1, 2, 1):
        return FeasibilityVerdict("QuadraticFamily", None, CLAUSES["QuadraticFamily"])
    return FeasibilityVerdict("Unknown", None, CLAUSES["Unknown"])


# ---------------------------------------------------------------------------
# constraint checks


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    passed: bool
    lhs: str
    rhs: str
    exact: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "lhs": self.lhs, "rhs": self.rhs, "exact": self.exact}


def _eq_check(name: str, lhs: Scalar, rhs: Scalar) -> ConstraintCheck:
    if lhs.is_exact and rhs.is_exact:
        return ConstraintCheck(name, lhs == rhs, format_scalar(lhs), format_scalar(rhs), True)
    ok = abs(lhs.float_value - rhs.float_value) <= NUMERIC_TOL
    return ConstraintCheck(name, ok, format_scalar(lhs), format_scalar(rhs), False)


def _in_pi_integers(d: Scalar) -> bool:
    if d.is_exact:
        if d.is_zero():
            return True
        c = d.coeffs
        return len(c) == 2 and c[0] == (0, 0) and c[1][1] == 0 and c[1][0].denominator == 1
    k = d.float_value / PI.float_value
    return abs(k.imag) <= NUMERIC_TOL and abs(k.real - round(k.real)) <= NUMERIC_TOL


def _linear(lead: Scalar, coeffs: Sequence[Scalar]) -> Expr:
    terms = [mul(Const(lead), Var(1))]
    terms += [mul(Const(a), Var(j)) for j, a in enumerate(coeffs, start=2)]
    return add(*terms)


def _linear_at(lead: Scalar, coeffs: Sequence[Scalar], c: ShiftVector) -> Scalar:
    total = lead * c[0]
    for a, cj in zip(coeffs, c.components[1:]):
        total = total + a * cj
    return total


def _poly_checks(name: str, q: Expr, m: int, period: ShiftVector) -> list[ConstraintCheck]:
    out = []
    bad = has_transcendental(q) or bool(free_symbols(q))
    p = None if bad else to_poly(q)
    free = p is not None and all(v != zvar(1) for v in p.variables()) and all(
        v[0] == 0 and v[1] <= m for v in p.variables()
    )
    out.append(ConstraintCheck(f"{name} is a polynomial in z2..z{m}", free, format_poly(p) if p else str(q), "-"))
    if not free:
        out.append(ConstraintCheck(f"{name} periodic", False, "not a polynomial in z2..zm", "0"))
        return out
    diff = to_poly(shift(q, period)) - p
    out.append(ConstraintCheck(f"{name}(z+{period}) - {name}(z) = 0", diff.is_zero(), format_poly(diff), "0", diff.is_exact()))
    return out


def _failures(checks: Iterable[ConstraintCheck]) -> list[ConstraintCheck]:
    return [c for c in checks if not c.passed]


# ---------------------------------------------------------------------------
# sine family


@dataclass(frozen=True)
class SineFamilySpec:
    """Parameters of the sine family; ``a_coeffs``/``b_coeffs`` hold the
    coefficients of ``z2..zm`` and ``Q1``/``Q2`` are polynomials in ``z2..zm``."""

    m: int
    A: Scalar
    B: Scalar
    a_coeffs: tuple
    b_coeffs: tuple
    Q1: Expr
    Q2: Expr
    c: ShiftVector
    variant: str = "i"

    def __post_init__(self):
        object.__setattr__(self, "A", Scalar.of(self.A))
        object.__setattr__(self, "B", Scalar.of(self.B))
        object.__setattr__(self, "a_coeffs", tuple(Scalar.of(x) for x in self.a_coeffs))
        object.__setattr__(self, "b_coeffs", tuple(Scalar.of(x) for x in self.b_coeffs))
        object.__setattr__(self, "Q1", as_expr(self.Q1))
        object.__setattr__(self, "Q2", as_expr(self.Q2))
        if not isinstance(self.c, ShiftVector):
            object.__setattr__(self, "c", ShiftVector(self.c))
        if self.variant not in ("i", "ii"):
            raise ValueError(f"variant must be 'i' or 'ii', got {self.variant!r}")
        if len(self.a_coeffs) != self.m - 1 or len(self.b_coeffs) != self.m - 1:
            raise ValueError(f"coefficient vectors need {self.m - 1} entries")
        if len(self.c) != self.m:
            raise ValueError(f"shift needs {self.m} components")

    @property
    def family(self) -> str:
        return "sine"

    def system(self) -> SystemSpec:
        return SystemSpec(self.m, 2, 2, 2, 2, self.c)

    def phases(self) -> tuple[Expr, Expr]:
        return (
            add(_linear(self.A, self.a_coeffs), self.Q1),
            add(_linear(self.B, self.b_coeffs), self.Q2),
        )


def _variant_checks(variant, A, B, L1c, L2c) -> list[ConstraintCheck]:
    e1 = scalar_exp(2 * I * L1c)
    e2 = scalar_exp(2 * I * L2c)
    if variant == "i":
        return [
            _eq_check("B*exp(2i*L1(c)) = A", B * e1, A),
            _eq_check("A*exp(2i*L2(c)) = B", A * e2, B),
        ]
    return [
        _eq_check("A*B*exp(2i*L1(c)) = 1", A * B * e1, ONE),
        _eq_check("A*B*exp(2i*L2(c)) = 1", A * B * e2, ONE),
    ]


def _coupling_check(name: str, shifted: Expr, eps: Scalar, other: Expr) -> ConstraintCheck:
    d = to_poly(shifted) - to_poly(other).scale(eps)
    const = d.is_constant()
    ok = const and _in_pi_integers(d.constant_term())
    return ConstraintCheck(name, ok, format_poly(d), "k*pi", d.is_exact())


def validate_sine(spec: SineFamilySpec) -> list[ConstraintCheck]:
    """Check every sine-family constraint and report each one.

    Beyond ``A^2 = B^2 = 1``, periodicity of ``Q1, Q2`` over ``2c`` and the
    variant's two exponential conditions, the phases ``u1, u2`` must satisfy
    ``u2(z+c) - AB*u1(z)`` and ``u1(z+c) - AB*u2(z)`` in ``pi*Z``; without
    those couplings the residuals do not vanish.
    """
    A, B, c = spec.A, spec.B, spec.c
    checks = [_eq_check("A^2 = 1", A * A, ONE), _eq_check("B^2 = 1", B * B, ONE)]
    two_c = c.scaled(2)
    checks += _poly_checks("Q1", spec.Q1, spec.m, two_c)
    checks += _poly_checks("Q2", spec.Q2, spec.m, two_c)
    L1c = _linear_at(A, spec.a_coeffs, c)
    L2c = _linear_at(B, spec.b_coeffs, c)
    checks += _variant_checks(spec.variant, A, B, L1c, L2c)
    if all(ch.passed for ch in checks[:2]) and all(
        ch.passed for ch in checks if ch.name.startswith(("Q1 is", "Q2 is"))
    ):
        u1, u2 = spec.phases()
        eps = A * B
        checks.append(_coupling_check("u2(z+c) - A*B*u1(z) in pi*Z", shift(u2, c), eps, u1))
        checks.append(_coupling_check("u1(z+c) - A*B*u2(z) in pi*Z", shift(u1, c), eps, u2))
    else:
        checks.append(ConstraintCheck("phase coupling", False, "not evaluated", "k*pi"))
    return checks


def sine_pair(spec: SineFamilySpec) -> tuple[Expr, Expr]:
    """The pair without validation (used for negative controls)."""
    u1, u2 = spec.phases()
    return sin(u1), sin(u2)


def build_sine_pair(spec: SineFamilySpec) -> tuple[Expr, Expr]:
    failures = _failures(validate_sine(spec))
    if failures:
        raise InvalidFamily(failures)
    return sine_pair(spec)


def solve_admissible_AB(
    m: int,
    a_coeffs: Sequence[ScalarLike],
    b_coeffs: Sequence[ScalarLike],
    c: ShiftVector | Sequence[ScalarLike],
    variant: str = "i",
) -> set[tuple[int, int]]:
    """Sign pairs ``(A, B)`` satisfying the variant's two exponential conditions."""
    c = c if isinstance(c, ShiftVector) else ShiftVector(c)
    if len(c) != m or len(a_coeffs) != m - 1 or len(b_coeffs) != m - 1:
        raise ValueError("inconsistent dimensions")
    a = [Scalar.of(x) for x in a_coeffs]
    b = [Scalar.of(x) for x in b_coeffs]
    out = set()
    for sa in (1, -1):
        for sb in (1, -1):
            A, B = Scalar(sa), Scalar(sb)
            checks = _variant_checks(variant, A, B, _linear_at(A, a, c), _linear_at(B, b, c))
            if all(ch.passed for ch in checks):
                out.add((sa, sb))
    return out


# ---------------------------------------------------------------------------
# quadratic family


@dataclass(frozen=True)
class QuadraticFamilySpec:
    m: int
    K1: Scalar
    K2: Scalar
    g1: OpaqueSymbol
    g2: OpaqueSymbol
    c: ShiftVector

    def __post_init__(self):
        object.__setattr__(self, "K1", Scalar.of(self.K1))
        object.__setattr__(self, "K2", Scalar.of(self.K2))
        if not isinstance(self.c, ShiftVector):
            object.__setattr__(self, "c", ShiftVector(self.c))
        if len(self.c) != self.m:
            raise ValueError(f"shift needs {self.m} components")

    @property
    def family(self) -> str:
        return "quadratic"

    def system(self) -> SystemSpec:
        return SystemSpec(self.m, 2, 2, 1, 1, self.c)


def quadratic_expr(K: Scalar, g: OpaqueSymbol) -> Expr:
    """``1 + (K/4) z1^2 + z1 g - K^2 g^2``."""
    z1 = Var(1)
    return add(
        Const(ONE),
        mul(Const(K / 4), power(z1, 2)),
        mul(z1, g),
        mul(Const(-(K * K)), power(as_expr(g), 2)),
    )


def _increment_check(name: str, g: OpaqueSymbol, d: ShiftVector, required: Scalar) -> ConstraintCheck:
    try:
        s = g.shift_constant(d)
    except UnknownSymbolShift:
        return ConstraintCheck(name, False, "not derivable", format_scalar(required), required.is_exact)
    return _eq_check(name, s, required)


def validate_quadratic(spec: QuadraticFamilySpec) -> list[ConstraintCheck]:
    """Check the quadratic-family constraints.

    Over ``2c`` each symbol must increase by ``-K_i*c1`` (which is ``c1``
    for ``K = -1``), the constants must satisfy ``K2 = -K1^2`` and
    ``K1 = -K2^2``, and, since opaque symbols carry no relations between
    each other, both functions must use one shared symbol, which in turn
    forces ``K1 = K2 = -1``.  Building additionally needs the increment
    over ``c`` itself (``c1/2``) to be derivable.
    """
    K1, K2, c = spec.K1, spec.K2, spec.c
    c1 = c[0]
    checks = [_eq_check("K1^3 = -1", K1 ** 3, -ONE), _eq_check("K2^3 = -1", K2 ** 3, -ONE)]
    two_c = c.scaled(2)
    checks.append(_increment_check("g1(z+2c) - g1(z) = -K1*c1", spec.g1, two_c, -K1 * c1))
    checks.append(_increment_check("g2(z+2c) - g2(z) = -K2*c1", spec.g2, two_c, -K2 * c1))
    checks.append(_eq_check("K2 = -K1^2", K2, -(K1 * K1)))
    checks.append(_eq_check("K1 = -K2^2", K1, -(K2 * K2)))
    same = spec.g1 == spec.g2
    checks.append(ConstraintCheck("g1 and g2 are one shared symbol", same, spec.g1.name, spec.g2.name))
    checks.append(_eq_check("shared symbol requires K1 = -1", K1, -ONE))
    half = c1 / 2
    checks.append(_increment_check("g1(z+c) - g1(z) = c1/2", spec.g1, c, half))
    return checks


def quadratic_pair(spec: QuadraticFamilySpec) -> tuple[Expr, Expr]:
    return quadratic_expr(spec.K1, spec.g1), quadratic_expr(spec.K2, spec.g2)


def build_quadratic_pair(spec: QuadraticFamilySpec) -> tuple[Expr, Expr]:
    failures = _failures(validate_quadratic(spec))
    if failures:
        raise InvalidFamily(failures)
    return quadratic_pair(spec)


# ---------------------------------------------------------------------------
# single-equation reductions (f1 = f2)


@dataclass(frozen=True)
class SingleSineSpec:
    """``f = sin(A z1 + A2 z2 + ... + Am zm + P)`` for ``(f_z1)^2 + f(z+c)^2 = 1``."""

    m: int
    A: Scalar
    coeffs: tuple
    P: Expr
    c: ShiftVector

    def __post_init__(self):
        object.__setattr__(self, "A", Scalar.of(self.A))
        object.__setattr__(self, "coeffs", tuple(Scalar.of(x) for x in self.coeffs))
        object.__setattr__(self, "P", as_expr(self.P))
        if not isinstance(self.c, ShiftVector):
            object.__setattr__(self, "c", ShiftVector(self.c))
        if len(self.coeffs) != self.m - 1 or len(self.c) != self.m:
            raise ValueError("inconsistent dimensions")

    @property
    def family(self) -> str:
        return "single-sine"

    def system(self) -> SystemSpec:
        return SystemSpec(self.m, 2, 2, 2, 2, self.c)


def validate_single_sine(spec: SingleSineSpec) -> list[ConstraintCheck]:
    A = spec.A
    checks = [_eq_check("A^2 = 1", A * A, ONE)]
    Lc = _linear_at(A, spec.coeffs, spec.c)
    checks.append(_eq_check("A*exp(i*L(c)) = 1", A * scalar_exp(I * Lc), ONE))
    checks += _poly_checks("P", spec.P, spec.m, spec.c)
    return checks


def build_single_eq_sine(spec: SingleSineSpec) -> Expr:
    failures = _failures(validate_single_sine(spec))
    if failures:
        raise InvalidFamily(failures)
    return sin(add(_linear(spec.A, spec.coeffs), spec.P))


@dataclass(frozen=True)
class SingleQuadraticSpec:
    """``f = 1 + (K/4) z1^2 + z1 g - K^2 g^2`` for ``(f_z1)^2 + f(z+c) = 1``."""

    m: int
    K: Scalar
    g: OpaqueSymbol
    c: ShiftVector

    def __post_init__(self):
        object.__setattr__(self, "K", Scalar.of(self.K))
        if not isinstance(self.c, ShiftVector):
            object.__setattr__(self, "c", ShiftVector(self.c))
        if len(self.c) != self.m:
            raise ValueError(f"shift needs {self.m} components")

    @property
    def family(self) -> str:
        return "single-quadratic"

    def system(self) -> SystemSpec:
        return SystemSpec(self.m, 2, 2, 1, 1, self.c)


def validate_single_quadratic(spec: SingleQuadraticSpec) -> list[ConstraintCheck]:
    K, c = spec.K, spec.c
    return [
        _eq_check("K^3 = -1", K ** 3, -ONE),
        _eq_check("K = -K^2", K, -(K * K)),
        _increment_check("g(z+c) - g(z) = c1/2", spec.g, c, c[0] / 2),
    ]


def build_single_eq_quadratic(spec: SingleQuadraticSpec) -> Expr:
    failures = _failures(validate_single_quadratic(spec))
    if failures:
        raise InvalidFamily(failures)
    return quadratic_expr(spec.K, spec.g)


def validate(spec) -> list[ConstraintCheck]:
    return {
        "sine": validate_sine,
        "quadratic": validate_quadratic,
        "single-sine": validate_single_sine,
        "single-quadratic": validate_single_quadratic,
    }[spec.family](spec)


def build(spec) -> tuple[Expr, Expr]:
    """Build any family; single-equation specs return ``(f, f)``."""
    if spec.family == "sine":
        return build_sine_pair(spec)
    if spec.family == "quadratic":
        return build_quadratic_pair(spec)
    if spec.family == "single-sine":
        f = build_single_eq_sine(spec)
    else:
        f = build_single_eq_quadratic(spec)
    return f, f


# ---------------------------------------------------------------------------
# random valid specs and perturbations

_SHIFT_CHOICES = (ZERO, PI / 2, PI, 2 * PI, ONE)


def _invariant_forms(c: Sequence[Scalar]) -> list[Expr]:
    """Linear forms in ``z2..zm`` left unchanged by the shift ``c``."""
    forms: list[Expr] = []
    moving = [j for j in range(2, len(c) + 1) if not c[j - 1].is_zero()]
    for j in range(2, len(c) + 1):
        if c[j - 1].is_zero():
            forms.append(Var(j))
    for a in range(len(moving)):
        for b in range(a + 1, len(moving)):
            j, k = moving[a], moving[b]
            forms.append(add(mul(Const(c[k - 1]), Var(j)), mul(Const(-c[j - 1]), Var(k))))
    return forms


def _random_periodic_poly(rng: random.Random, c: Sequence[Scalar]) -> Expr:
    forms = _invariant_forms(c)
    terms: list[Expr] = [Const(Scalar(rng.randint(-2, 2)))]
    for _ in range(rng.randint(0, 3)):
        if not forms:
            break
        factors = [rng.choice(forms) for _ in range(rng.randint(1, 3))]
        terms.append(mul(Const(Scalar(rng.choice((-2, -1, 1, 2, 3)))), *factors))
    return add(*terms)


def random_sine_spec(rng: random.Random, m: int | None = None) -> SineFamilySpec:
    """A random sine-family spec satisfying every constraint of :func:`validate_sine`."""
    m = m or rng.choice((2, 3, 4))
    A = rng.choice((1, -1))
    eps = rng.choice((1, -1))
    B = eps * A
    a = [Scalar(rng.randint(-2, 2)) for _ in range(m - 1)]
    b = [x * eps for x in a]
    tail = [rng.choice(_SHIFT_CHOICES) for _ in range(m - 1)]
    k = rng.randint(-2, 2)
    target = PI * k + (ZERO if eps == 1 else PI / 2)
    acc = target
    for aj, cj in zip(a, tail):
        acc = acc - aj * cj
    c = ShiftVector([acc * A] + tail)
    Q1 = _random_periodic_poly(rng, c.components)
    kappa = PI * rng.randint(-1, 1) - target * eps
    Q2 = add(mul(Const(Scalar(eps)), Q1), Const(kappa))
    return SineFamilySpec(m, Scalar(A), Scalar(B), tuple(a), tuple(b), Q1, Q2, c, rng.choice(("i", "ii")))


def perturb_sine(spec: SineFamilySpec, rng: random.Random, kind: int | None = None) -> SineFamilySpec:
    """Break exactly one sine-family constraint."""
    kind = rng.randrange(4) if kind is None else kind
    if kind == 0:
        j = rng.randint(2, spec.m)
        return replace(spec, Q2=add(spec.Q2, Var(j)))
    if kind == 1:
        return replace(spec, Q2=add(spec.Q2, Const(PI / 2)))
    if kind == 2:
        comps = list(spec.c.components)
        comps[0] = comps[0] + PI / 4
        return replace(spec, c=ShiftVector(comps))
    j = rng.randrange(spec.m - 1)
    b = list(spec.b_coeffs)
    b[j] = b[j] + 1
    return replace(spec, b_coeffs=tuple(b))


def random_quadratic_spec(rng: random.Random, m: int | None = None, name: str = "g") -> QuadraticFamilySpec:
    """A random valid quadratic-family spec (``K1 = K2 = -1``, one shared symbol)."""
    m = m or rng.choice((2, 3, 4))
    deps = [j for j in range(2, m + 1) if rng.random() < 0.7] or [rng.randint(2, m)]
    tail = [rng.choice(_SHIFT_CHOICES) for _ in range(m - 1)]
    if all(tail[j - 2].is_zero() for j in deps):
        tail[deps[0] - 2] = PI
    c1 = rng.choice((ZERO, ONE, Scalar(2), PI, 2 * PI, Scalar(Fraction(1, 2)), I))
    c = ShiftVector([c1] + tail)
    g = OpaqueSymbol(name, deps)
    g.add_rule(c.components, c1 / 2)
    return QuadraticFamilySpec(m, -ONE, -ONE, g, g, c)


def perturb_quadratic(spec: QuadraticFamilySpec, rng: random.Random, kind: int | None = None) -> QuadraticFamilySpec:
    """Break one quadratic-family constraint while keeping the shift derivable."""
    kind = rng.randrange(2) if kind is None else kind
    c1 = spec.c[0]
    if kind == 0:
        g = OpaqueSymbol(spec.g1.name, spec.g1.depends_on)
        g.add_rule(spec.c.components, c1 / 2 + 1)
        return replace(spec, g1=g, g2=g)
    comps = list(spec.c.components)
    comps[0] = c1 + 1
    return replace(spec, c=ShiftVector(comps))


# ---------------------------------------------------------------------------
# config documents

def _scalar_text(s: Scalar) -> str:
    return format_scalar(s)


def dump_family(spec) -> dict:
    """Flat config mapping (TOML-ready) describing ``spec``."""
    from .parser import format_declarations, print_expr

    base = {"family": spec.family, "m": spec.m, "c": [_scalar_text(x) for x in spec.c]}
    if spec.family == "sine":
        base.update(
            A=_scalar_text(spec.A),
            B=_scalar_text(spec.B),
            a_coeffs=[_scalar_text(x) for x in spec.a_coeffs],
            b_coeffs=[_scalar_text(x) for x in spec.b_coeffs],
            Q1=print_expr(spec.Q1),
            Q2=print_expr(spec.Q2),
            variant=spec.variant,
        )
    elif spec.family == "single-sine":
        base.update(A=_scalar_text(spec.A), coeffs=[_scalar_text(x) for x in spec.coeffs], P=print_expr(spec.P))
    else:
        reg = SymbolRegistry(spec.m)
        if spec.family == "quadratic":
            reg.add(spec.g1)
            if spec.g2 is not spec.g1:
                reg.add(spec.g2)
            base.update(K1=_scalar_text(spec.K1), K2=_scalar_text(spec.K2), g1=spec.g1.name, g2=spec.g2.name)
        else:
            reg.add(spec.g)
            base.update(K=_scalar_text(spec.K), g=spec.g.name)
        base["symbols"] = format_declarations(reg)
    return base


def load_family(doc: Mapping):
    """Inverse of :func:`dump_family`; scalars may be numbers or expression strings."""
    from .parser import parse_constant, parse_declarations, parse_expr

    family = doc["family"]
    m = int(doc["m"])

    def sc(x) -> Scalar:
        return parse_constant(x, m) if isinstance(x, str) else Scalar.of(x)

    c = ShiftVector([sc(x) for x in doc["c"]])
    if family == "sine":
        return SineFamilySpec(
            m,
            sc(doc["A"]),
            sc(doc["B"]),
            tuple(sc(x) for x in doc["a_coeffs"]),
            tuple(sc(x) for x in doc["b_coeffs"]),
            parse_expr(str(doc.get("Q1", "0")), m),
            parse_expr(str(doc.get("Q2", "0")), m),
            c,
            str(doc.get("variant", "i")),
        )
    if family == "single-sine":
        return SingleSineSpec(m, sc(doc["A"]), tuple(sc(x) for x in doc["coeffs"]), parse_expr(str(doc.get("P", "0")), m), c)
    symbols = doc.get("symbols", [])
    reg = parse_declarations("\n".join(symbols) if not isinstance(symbols, str) else symbols, m)
    if family == "quadratic":
        return QuadraticFamilySpec(m, sc(doc["K1"]), sc(doc["K2"]), reg[doc["g1"]], reg[doc["g2"]], c)
    if family == "single-quadratic":
        return SingleQuadraticSpec(m, sc(doc["K"]), reg[doc["g"]], c)
    raise ValueError(f"unknown family {family!r}")
