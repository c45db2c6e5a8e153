"""Bounded numerical searches over exponential-polynomial ansätze.

Each unknown function is modelled as

    f(z) = sum_{w in W} sum_{|alpha| <= D} a_{w,alpha} z^alpha exp(w . z)

where ``W = {k * lam_t : k = -bound..bound}`` for a few base directions
``lam_t`` with entries in ``{0, 1, -1, i, -i}``.  Directions are discrete and
fixed per restart; only the complex coefficients are optimised, as real
``(re, im)`` pairs.

Parameter ordering: ``[f1 block, f2 block]``; inside a block, frequencies in
the order of :meth:`AnsatzSpec.frequencies` (zero frequency first, then each
direction with ``k = -bound..-1, 1..bound``), and inside a frequency the
monomials in graded order (``1, z1, z2, ..., z1^2, z1 z2, ...``).  Each
complex coefficient contributes ``re`` then ``im``.

Every system has the constant solutions ``f1, f2 = +-1``, and an ansatz this
rich can imitate a constant on a finite grid (the polynomial block cancels
the Taylor expansion of the exponentials; a real shift damps ``exp(-z2)`` by
``exp(-2pi)``).  To keep these out of reach, all coefficients other than the
constant one are lifted as ``t = v * sqrt(1 + tau^2 / q(v))`` with
``q = qz*qs/(qz + qs)``, where ``qz`` and ``qs`` are the mean squared
deviations from the mean of ``f(z)`` and of ``f(z + c)`` over the grid.  Every candidate therefore varies by at
least ``tau`` in RMS over the grid, both at ``z`` and at ``z + c``.

The optimiser is a Levenberg-Marquardt loop on the stacked real and
imaginary parts of ``R1, R2`` over the grid, followed by max-norm
re-scoring.  Along a ladder of ansätze, restart 0 of each rung continues
from the best point of the previous rung; probes and controls are treated
identically.  This is evidence gathering, never proof: on a bounded grid a
rich ansatz can approximate a solution that does not exist globally.
"""
from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .calculus import ShiftVector, SystemSpec
from .errors import ClassifierMismatch, ParamShape
from .families import classify
from .scalar import PI, ZERO, Scalar

GRID_POINTS = 256
GRID_RADIUS = 1.5
TAU = 0.25
NEGATIVE_THRESHOLD = 1e-3
POSITIVE_THRESHOLD = 1e-6
DEFAULT_RESTARTS = 50
DEFAULT_MAX_ITER = 200
DEFAULT_LADDER = ((1, 1), (2, 2), (3, 2))

_UNITS = (0, 1, -1, 1j, -1j)


def base_directions(m: int) -> list[tuple[complex, ...]]:
    """Nonzero vectors over ``{0, +-1, +-i}`` up to sign, in a fixed order."""
    out, seen = [], set()
    for v in itertools.product(_UNITS, repeat=m):
        if all(x == 0 for x in v):
            continue
        neg = tuple(-x for x in v)
        if neg in seen:
            continue
        seen.add(v)
        out.append(tuple(complex(x) for x in v))
    return out


@dataclass(frozen=True)
class AnsatzSpec:
    """Shape of the search space.

    ``directions`` fixes the base directions explicitly; when empty, every
    direction of :func:`base_directions` is used, ``terms_per_function`` at
    a time, cycling with the restart index.
    """

    m: int
    max_poly_degree: int
    freq_bound: int
    terms_per_function: int = 1
    directions: tuple = ()

    def __post_init__(self):
        if self.max_poly_degree < 0 or self.freq_bound < 0 or self.terms_per_function < 1:
            raise ValueError("invalid ansatz sizes")
        dirs = tuple(tuple(complex(x) for x in d) for d in self.directions)
        if any(len(d) != self.m for d in dirs):
            raise ValueError("direction length must equal m")
        object.__setattr__(self, "directions", dirs)

    def monomials(self) -> list[tuple[int, ...]]:
        out = []
        for deg in range(self.max_poly_degree + 1):
            for alpha in itertools.product(range(deg + 1), repeat=self.m):
                if sum(alpha) == deg:
                    out.append(alpha)
        # graded order with z1 varying slowest: 1, z1, z2, ..., z1^2, z1 z2, ...
        return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))

    def candidate_directions(self) -> list[tuple[complex, ...]]:
        return list(self.directions) if self.directions else base_directions(self.m)

    def directions_for(self, restart: int) -> tuple[tuple[complex, ...], ...]:
        cands = self.candidate_directions()
        t = min(self.terms_per_function, len(cands))
        start = (restart * t) % len(cands)
        return tuple(cands[(start + j) % len(cands)] for j in range(t))

    def frequencies(self, directions) -> list[np.ndarray]:
        freqs = [np.zeros(self.m, dtype=complex)]
        if self.freq_bound:
            for d in directions:
                for k in list(range(-self.freq_bound, 0)) + list(range(1, self.freq_bound + 1)):
                    freqs.append(k * np.asarray(d, dtype=complex))
        return freqs

    @property
    def n_frequencies(self) -> int:
        t = min(self.terms_per_function, len(self.candidate_directions()))
        return 1 + 2 * self.freq_bound * t if self.freq_bound else 1

    @property
    def block_size(self) -> int:
        """Complex coefficients per function."""
        return self.n_frequencies * len(self.monomials())

    @property
    def n_params(self) -> int:
        return 4 * self.block_size

    @property
    def frequency_lattice(self) -> list[tuple[complex, ...]]:
        lat = {tuple(f) for d in self.candidate_directions() for f in self.frequencies([d])}
        return sorted(lat, key=lambda v: tuple((x.real, x.imag) for x in v))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "max_poly_degree": self.max_poly_degree,
            "freq_bound": self.freq_bound,
            "terms_per_function": self.terms_per_function,
            "directions": [[[x.real, x.imag] for x in d] for d in self.directions],
        }


def sample_grid(m: int, n: int = GRID_POINTS, radius: float = GRID_RADIUS, seed: int = 0) -> np.ndarray:
    """``n`` scrambled-Sobol points in the polydisc of ``radius``, shape ``(n, m)``."""
    u = qmc.Sobol(d=2 * m, scramble=True, seed=np.random.default_rng([seed, 0x5EED])).random(n)
    r = radius * np.sqrt(u[:, :m])
    theta = 2 * np.pi * u[:, m:]
    return r * np.exp(1j * theta)


def _features(ansatz: AnsatzSpec, directions, pts: np.ndarray):
    """Values and d/dz1 of every basis function at ``pts``, shape ``(n, block)``."""
    monos = ansatz.monomials()
    freqs = ansatz.frequencies(directions)
    n = pts.shape[0]
    val = np.empty((n, len(freqs) * len(monos)), dtype=complex)
    der = np.empty_like(val)
    powers = [[pts[:, j] ** k for k in range(ansatz.max_poly_degree + 1)] for j in range(ansatz.m)]
    col = 0
    for w in freqs:
        e = np.exp(pts @ w)
        for alpha in monos:
            mono = np.ones(n, dtype=complex)
            for j, a in enumerate(alpha):
                if a:
                    mono = mono * powers[j][a]
            val[:, col] = mono * e
            d = w[0] * mono
            if alpha[0]:
                lower = np.ones(n, dtype=complex)
                for j, a in enumerate(alpha):
                    b = a - 1 if j == 0 else a
                    if b:
                        lower = lower * powers[j][b]
                d = d + alpha[0] * lower
            der[:, col] = d * e
            col += 1
    return val, der


class _Problem:
    """Residuals of one system on one grid for one choice of directions.

    Internally the optimiser works on column-normalised coefficients, and
    every coefficient except the constant one passes through the
    non-triviality lift described in the module docstring.
    """

    def __init__(self, spec: SystemSpec, ansatz: AnsatzSpec, grid: np.ndarray, directions):
        if ansatz.m != spec.m:
            raise ValueError("ansatz and system dimensions differ")
        self.spec = spec
        self.ansatz = ansatz
        c = np.asarray(spec.c.as_complex())
        self.val, self.der = _features(ansatz, directions, grid)
        self.sft, _ = _features(ansatz, directions, grid + c)
        self.nb = ansatz.block_size
        n = grid.shape[0]
        scale = np.sqrt(np.mean(np.abs(self.val) ** 2 + np.abs(self.sft) ** 2, axis=0) / 2)
        self.scale = np.where(scale > 0, scale, 1.0)
        self.der_s = self.der / self.scale
        self.sft_s = self.sft / self.scale
        # Gram matrices of the centred variation of f(z) and of f(z + c)
        rest = slice(1, self.nb)
        cv = self.val[:, rest] / self.scale[rest]
        cs = self.sft_s[:, rest]
        cv = cv - cv.mean(axis=0)
        cs = cs - cs.mean(axis=0)
        self.gram_z = cv.conj().T @ cv / n
        self.gram_s = cs.conj().T @ cs / n

    def split(self, params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        params = np.asarray(params, dtype=float)
        if params.shape != (4 * self.nb,):
            raise ParamShape(f"expected {4 * self.nb} parameters, got {params.shape}")
        z = params[0::2] + 1j * params[1::2]
        return z[: self.nb], z[self.nb:]

    def _residuals(self, der, sft, a1, a2):
        s = self.spec
        d1, d2 = der @ a1, der @ a2
        s1, s2 = sft @ a1, sft @ a2
        r1 = d1 ** s.n1 + s2 ** s.m1 - 1
        r2 = d2 ** s.n2 + s1 ** s.m2 - 1
        return r1, r2, (d1, d2, s1, s2)

    def objective(self, params) -> float:
        """``max |R1| + |R2|`` for raw coefficients."""
        a1, a2 = self.split(params)
        with np.errstate(all="ignore"):
            r1, r2, _ = self._residuals(self.der, self.sft, a1, a2)
            v = np.max(np.abs(r1) + np.abs(r2))
        return float(v) if np.isfinite(v) else float("inf")

    # -- lifted least squares ------------------------------------------------

    def _lift(self, x: np.ndarray):
        """Free variables -> normalised coefficients, with the complex
        Jacobians d(coeff)/d(re), d(coeff)/d(im) of the lifted part."""
        nb = self.nb
        z = x[0::2] + 1j * x[1::2]
        coeffs, jacs = [], []
        for blk in (z[:nb], z[nb:]):
            a = blk.copy()
            v = blk[1:]
            gz, gs = self.gram_z @ v, self.gram_s @ v
            qz, qs = float(np.vdot(v, gz).real), float(np.vdot(v, gs).real)
            if qz > 0 and qs > 0:
                # q = qz*qs/(qz+qs) is quadratic in v and below both variations
                q = qz * qs / (qz + qs)
                s = np.sqrt(1 + TAU ** 2 / q)
                a[1:] = v * s
                ds = -TAU ** 2 / (2 * s * q ** 2)
                wz, ws = (qs / (qz + qs)) ** 2, (qz / (qz + qs)) ** 2
                dq = 2 * (wz * gz + ws * gs)
                jre = s * np.eye(v.size) + np.outer(v, dq.real * ds)
                jim = 1j * s * np.eye(v.size) + np.outer(v, dq.imag * ds)
            else:
                jre = np.eye(v.size, dtype=complex)
                jim = 1j * np.eye(v.size)
            coeffs.append(a)
            jacs.append((jre, jim))
        return coeffs, jacs

    def raw_params(self, x: np.ndarray) -> np.ndarray:
        """Raw coefficients (documented ordering) for free variables ``x``."""
        (a1, a2), _ = self._lift(x)
        z = np.concatenate([a1, a2]) / np.concatenate([self.scale, self.scale])
        out = np.empty(2 * z.size)
        out[0::2], out[1::2] = z.real, z.imag
        return out

    def free_params(self, params) -> np.ndarray:
        """Inverse of :meth:`raw_params`: free variables reproducing ``params``.

        Blocks whose variation is at most ``tau`` are not in the image of
        the lift; their varying part is shrunk so the lift lands near them.
        """
        a1, a2 = self.split(params)
        out = []
        for blk in (a1, a2):
            t = blk * self.scale
            v = t[1:]
            qz = float(np.vdot(v, self.gram_z @ v).real)
            qs = float(np.vdot(v, self.gram_s @ v).real)
            q = qz * qs / (qz + qs) if qz > 0 and qs > 0 else 0.0
            if q > TAU ** 2 * (1 + 1e-9):
                t[1:] = v / np.sqrt(q / (q - TAU ** 2))
            else:
                t[1:] = v * 1e-3
            out.append(t)
        z = np.concatenate(out)
        x = np.empty(2 * z.size)
        x[0::2], x[1::2] = z.real, z.imag
        return x

    def ls_residual(self, x: np.ndarray) -> np.ndarray:
        (a1, a2), _ = self._lift(x)
        with np.errstate(all="ignore"):
            r1, r2, _ = self._residuals(self.der_s, self.sft_s, a1, a2)
        r = np.concatenate([r1, r2])
        out = np.concatenate([r.real, r.imag])
        return np.nan_to_num(out, nan=1e150, posinf=1e150, neginf=-1e150)

    def ls_jacobian(self, x: np.ndarray) -> np.ndarray:
        s = self.spec
        (a1, a2), jacs = self._lift(x)
        nb = self.nb
        with np.errstate(all="ignore"):
            _, _, (d1, d2, s1, s2) = self._residuals(self.der_s, self.sft_s, a1, a2)
            # holomorphic derivatives of R1, R2 with respect to a1 and a2
            g11 = (s.n1 * d1 ** (s.n1 - 1))[:, None] * self.der_s
            g12 = (s.m1 * s2 ** (s.m1 - 1))[:, None] * self.sft_s
            g21 = (s.m2 * s1 ** (s.m2 - 1))[:, None] * self.sft_s
            g22 = (s.n2 * d2 ** (s.n2 - 1))[:, None] * self.der_s
        n = self.val.shape[0]
        jac = np.zeros((2 * n, 4 * nb), dtype=complex)
        for f, (gA, gB) in enumerate(((g11, g21), (g12, g22))):
            jre, jim = jacs[f]
            base = 2 * f * nb
            for rows, g in ((slice(0, n), gA), (slice(n, 2 * n), gB)):
                jac[rows, base] = g[:, 0]
                jac[rows, base + 1] = 1j * g[:, 0]
                gt = g[:, 1:]
                jac[rows, base + 2: base + 2 * nb: 2] = gt @ jre
                jac[rows, base + 3: base + 2 * nb: 2] = gt @ jim
        out = np.concatenate([jac.real, jac.imag])
        return np.nan_to_num(out, nan=0.0, posinf=1e150, neginf=-1e150)


@dataclass
class SearchReport:
    spec: SystemSpec
    ansatz: AnsatzSpec
    restarts: int
    best_residual: float
    best_params: list
    seed: int
    wall_time: float
    best_restart: int = -1
    best_directions: tuple = ()
    scores: list = field(default_factory=list)

    def to_dict(self, include_time: bool = True) -> dict:
        d = {
            "spec": {
                "m": self.spec.m,
                "n1": self.spec.n1,
                "n2": self.spec.n2,
                "m1": self.spec.m1,
                "m2": self.spec.m2,
                "c": [[z.real, z.imag] for z in self.spec.c.as_complex()],
            },
            "ansatz": self.ansatz.to_dict(),
            "restarts": self.restarts,
            "best_residual": _finite(self.best_residual),
            "best_params": [float(x) for x in self.best_params],
            "best_restart": self.best_restart,
            "best_directions": [[[x.real, x.imag] for x in d] for d in self.best_directions],
            "seed": self.seed,
            "scores": [_finite(s) for s in self.scores],
        }
        if include_time:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_time: bool = True, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(include_time), sort_keys=True, indent=indent)


def _finite(x: float) -> float:
    return float(min(x, np.finfo(float).max)) if not np.isnan(x) else float(np.finfo(float).max)


def residual_objective(spec: SystemSpec, ansatz: AnsatzSpec, params, grid: np.ndarray, directions=None) -> float:
    """``max over grid of |R1| + |R2|`` for the functions encoded by ``params``.

    ``params`` are raw coefficients in the documented order (no
    reparametrisation).  ``directions`` defaults to the restart-0 choice.
    """
    directions = directions if directions is not None else ansatz.directions_for(0)
    return _Problem(spec, ansatz, np.asarray(grid), directions).objective(np.asarray(params, dtype=float))


def embed_params(old: AnsatzSpec, directions, params, new: AnsatzSpec) -> np.ndarray:
    """Raw coefficients of ``old`` (with ``directions``) rewritten for the
    larger ansatz ``new`` with the same directions; new slots are zero."""
    if new.m != old.m:
        raise ValueError("ansatz dimensions differ")
    params = np.asarray(params, dtype=float)
    if params.shape != (old.n_params,):
        raise ParamShape(f"expected {old.n_params} parameters, got {params.shape}")

    def slots(a: AnsatzSpec):
        keys = []
        for w in a.frequencies(directions):
            wk = tuple(np.round(w, 12))
            keys.extend((wk, alpha) for alpha in a.monomials())
        return keys

    index = {k: i for i, k in enumerate(slots(new))}
    z = params[0::2] + 1j * params[1::2]
    out = np.zeros(2 * new.block_size, dtype=complex)
    for i, k in enumerate(slots(old)):
        if k not in index:
            raise ValueError(f"term {k} of the old ansatz is missing from the new one")
        out[index[k]] = z[i]
        out[new.block_size + index[k]] = z[old.block_size + i]
    res = np.empty(2 * out.size)
    res[0::2], res[1::2] = out.real, out.imag
    return res


def levenberg_marquardt(fun, jac, x0: np.ndarray, max_iter: int = 200, cost_tol: float = 1e-30):
    """Damped Gauss-Newton on ``0.5 * |fun(x)|^2`` with Nielsen's damping update.

    Steps solve the normal equations ``(J^T J + mu * D) dx = -J^T r`` where
    ``D`` is the diagonal of ``J^T J``; these go through BLAS, which is much
    faster than a QR of the tall Jacobian.  Returns ``(x, cost)``.
    """
    x = np.asarray(x0, dtype=float).copy()
    r = fun(x)
    cost = 0.5 * float(r @ r)
    J = jac(x)
    A, g = J.T @ J, J.T @ r
    d = np.maximum(np.diag(A), 1e-12)
    mu, nu = 1e-3, 2.0
    for _ in range(max_iter):
        if cost < cost_tol or not np.isfinite(cost):
            break
        try:
            step = -np.linalg.solve(A + mu * np.diag(d), g)
        except np.linalg.LinAlgError:
            mu, nu = mu * nu, nu * 2
            continue
        if not np.all(np.isfinite(step)):
            break
        xn = x + step
        rn = fun(xn)
        cn = 0.5 * float(rn @ rn)
        predicted = -(g @ step) - 0.5 * step @ (A @ step)
        rho = (cost - cn) / predicted if predicted > 0 else -1.0
        if rho > 0 and np.isfinite(cn):
            x, r, cost = xn, rn, cn
            J = jac(x)
            A, g = J.T @ J, J.T @ r
            d = np.maximum(d, np.diag(A))
            mu *= max(1 / 3, 1 - (2 * rho - 1) ** 3)
            nu = 2.0
            if np.linalg.norm(step) < 1e-15 * (1 + np.linalg.norm(x)):
                break
        else:
            mu, nu = mu * nu, nu * 2
            if mu > 1e20:
                break
    return x, cost


def _run_restart(spec, ansatz, grid, seed, r, max_nfev, warm=None):
    if warm is None:
        directions = ansatz.directions_for(r)
        prob = _Problem(spec, ansatz, grid, directions)
        x0 = np.random.default_rng([seed, r]).normal(scale=0.5, size=ansatz.n_params)
    else:
        old, directions, old_params = warm
        prob = _Problem(spec, ansatz, grid, directions)
        x0 = prob.free_params(embed_params(old, directions, old_params, ansatz))
    x, _ = levenberg_marquardt(prob.ls_residual, prob.ls_jacobian, x0, max_iter=max_nfev)
    params = prob.raw_params(x)
    return prob.objective(params), params, directions


def minimize(
    spec: SystemSpec,
    ansatz: AnsatzSpec,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    workers: int | None = None,
    max_nfev: int = DEFAULT_MAX_ITER,
    grid: np.ndarray | None = None,
    stop_below: float | None = None,
    warm_start: SearchReport | None = None,
) -> SearchReport:
    """Multi-start Levenberg-Marquardt on the stacked residuals.

    Restart ``r`` starts from ``default_rng([seed, r])`` with the directions
    of :meth:`AnsatzSpec.directions_for`; the best max-norm score wins, ties
    going to the lower restart index.  ``warm_start`` (a report on a smaller
    ansatz) replaces restart 0 by a continuation from that report's best
    point.  With ``stop_below`` set, restarts run in order and stop after
    the first score under that value (used for positive controls).
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    t0 = time.perf_counter()
    grid = sample_grid(spec.m, seed=seed) if grid is None else np.asarray(grid)
    warm = None
    if warm_start is not None:
        warm = (warm_start.ansatz, warm_start.best_directions, warm_start.best_params)
    jobs = [(spec, ansatz, grid, seed, r, max_nfev, warm if r == 0 else None) for r in range(restarts)]
    results = []
    if workers and workers > 1 and stop_below is None:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, *zip(*jobs)))
    else:
        for job in jobs:
            results.append(_run_restart(*job))
            if stop_below is not None and results[-1][0] < stop_below:
                break
    best = min(range(len(results)), key=lambda r: (results[r][0], r))
    score, params, dirs = results[best]
    return SearchReport(
        spec,
        ansatz,
        len(results),
        score,
        [float(x) for x in params],
        seed,
        time.perf_counter() - t0,
        best,
        dirs,
        [res[0] for res in results],
    )


# ---------------------------------------------------------------------------
# non-existence probes


def default_control(quadruple, m: int) -> tuple[tuple[int, int, int, int], ShiftVector]:
    """Solvable system paired with a probe: the quadratic family when both
    shifted terms enter linearly, the sine family otherwise."""
    n1, m1, n2, m2 = quadruple
    if m1 == 1 and m2 == 1:
        return (2, 1, 2, 1), ShiftVector([ZERO, 2 * PI] + [ZERO] * (m - 2))
    return (2, 2, 2, 2), ShiftVector([2 * PI] + [ZERO] * (m - 1))


def system_from_quadruple(quadruple, c) -> SystemSpec:
    n1, m1, n2, m2 = quadruple
    c = c if isinstance(c, ShiftVector) else ShiftVector(c)
    return SystemSpec(len(c), n1, n2, m1, m2, c)


@dataclass
class ProbeReport:
    quadruple: tuple
    branch: str
    probe: list  # SearchReport per rung
    control: list  # SearchReport per rung
    control_quadruple: tuple

    @property
    def floor(self) -> float:
        return min(r.best_residual for r in self.probe)

    @property
    def control_best(self) -> float:
        return self.control[-1].best_residual if self.control else float("nan")

    @property
    def passed(self) -> bool:
        return self.floor > NEGATIVE_THRESHOLD and self.control_best < POSITIVE_THRESHOLD

    def to_dict(self, include_time: bool = True) -> dict:
        return {
            "quadruple": list(self.quadruple),
            "branch": self.branch,
            "floor": _finite(self.floor),
            "control_quadruple": list(self.control_quadruple),
            "control_best": _finite(self.control_best),
            "passed": self.passed,
            "probe": [r.to_dict(include_time) for r in self.probe],
            "control": [r.to_dict(include_time) for r in self.control],
        }

    def to_json(self, include_time: bool = True, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(include_time), sort_keys=True, indent=indent)


def nonexistence_probe(
    quadruple: Sequence[int],
    c,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    ladder: Sequence[tuple[int, int]] = DEFAULT_LADDER,
    control: tuple | None = None,
    workers: int | None = None,
    max_nfev: int = DEFAULT_MAX_ITER,
) -> ProbeReport:
    """Search every ladder rung for the claimed-impossible system and pair it
    with a solvable control on the same ansatz.

    The probe passes when its floor (best score over all rungs) stays above
    1e-3 and the control reaches below 1e-6 on the top rung, which contains
    every lower rung.
    """
    quadruple = tuple(int(x) for x in quadruple)
    verdict = classify(*quadruple)
    if verdict.tag != "NonExistence":
        raise ClassifierMismatch(f"{quadruple} classifies as {verdict}, not NonExistence")
    spec = system_from_quadruple(quadruple, c)
    cq, cc = control or default_control(quadruple, spec.m)
    cspec = system_from_quadruple(cq, cc)
    grid = sample_grid(spec.m, seed=seed)
    probes, controls = [], []
    for deg, bound in ladder:
        ans = AnsatzSpec(spec.m, deg, bound)
        prev_p = probes[-1] if probes else None
        prev_c = controls[-1] if controls else None
        probes.append(minimize(spec, ans, restarts, seed, workers, max_nfev, grid, warm_start=prev_p))
        controls.append(
            minimize(cspec, ans, restarts, seed, workers, max_nfev, grid, POSITIVE_THRESHOLD, warm_start=prev_c)
        )
    return ProbeReport(quadruple, verdict.branch, probes, controls, cq)
