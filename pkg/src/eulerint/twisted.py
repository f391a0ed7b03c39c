"""Numerical pairing of twisted cycles and cocycles on a punctured line.

Integrals of the multivalued function f(x)^s x^nu against monomial cocycles
f^a x^(b-1) dx are computed over triangular cycles by tracking a branch of the
function along each triangle edge (Euler predictor on dy/dx = omega(x) y,
Newton corrector onto the algebraic curve y^k = f^{ks} x^{k nu}) and applying
the trapezoidal rule.  The right kernel of the resulting pairing matrix gives
linear relations among the integrals.

Only the one-variable case is implemented; callers with several variables get
a NotImplementedError.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .laurent import IntegrandSpec, omega_components

NEWTON_CORRECTIONS = 4      # fixed corrector iterations per node
DEFAULT_NODES = 1000        # quadrature nodes per triangle edge
POLE_GUARD_RADIUS = 1e-8    # minimum allowed node distance to a singularity
CLOSURE_TOL = 1e-6          # branch must return to itself within this


class SegmentError(RuntimeError):
    """A quadrature node is on or too close to a singularity."""


class CycleClosureError(RuntimeError):
    """The tracked branch does not close up: not a twisted cycle."""


def _require_univariate(spec: IntegrandSpec):
    if spec.nvars != 1:
        raise NotImplementedError(
            "twisted pairing is implemented for one variable only")


@dataclass(frozen=True)
class TwistedCycle:
    """Triangle A -> B -> C -> A with a chosen branch value at A."""

    A: complex
    B: complex
    C: complex
    phi_at_A: complex

    def __post_init__(self):
        pts = (complex(self.A), complex(self.B), complex(self.C))
        if len({pts[0], pts[1], pts[2]}) != 3:
            raise ValueError("triangle vertices must be pairwise distinct")
        object.__setattr__(self, "A", pts[0])
        object.__setattr__(self, "B", pts[1])
        object.__setattr__(self, "C", pts[2])
        object.__setattr__(self, "phi_at_A", complex(self.phi_at_A))

    @property
    def vertices(self):
        return (self.A, self.B, self.C)


@dataclass(frozen=True)
class Cocycle:
    """Exponent shifts (a, b) of the form f^a x^b dx/x."""

    a: tuple
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", int(self.b))


def _as_fraction(value, what):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, complex):
        if value.imag != 0:
            raise ValueError(f"{what} must be real rational, got {value!r}")
        value = value.real
    if isinstance(value, float):
        frac = Fraction(value)
        if frac.denominator > 10 ** 6:
            raise ValueError(
                f"{what} must be rational with a small denominator, got {value!r}")
        return frac
    raise ValueError(f"{what} must be rational, got {value!r}")


@dataclass(frozen=True)
class BranchCurve:
    """Defining data of the curve y^k = prod_j f_j(x)^{k s_j} x^{k nu}."""

    spec: IntegrandSpec
    k: int
    ks: tuple     # integer exponents k * s_j
    knu: int      # integer exponent k * nu

    @classmethod
    def from_spec(cls, spec: IntegrandSpec) -> "BranchCurve":
        _require_univariate(spec)
        s = [_as_fraction(v, "exponent s") for v in spec.s]
        nu = _as_fraction(spec.nu[0], "exponent nu")
        k = 1
        for v in list(s) + [nu]:
            k = k * v.denominator // gcd(k, v.denominator)
        return cls(spec=spec, k=k,
                   ks=tuple(int(v * k) for v in s), knu=int(nu * k))

    def rhs(self, x: complex) -> complex:
        """The single-valued side prod_j f_j(x)^{k s_j} x^{k nu}."""
        out = complex(x) ** self.knu
        for fj, e in zip(self.spec.f, self.ks):
            out *= fj.evaluate([x]) ** e
        return out

    def defining(self, x: complex, y: complex) -> complex:
        """F(x, y) = y^k - prod f^{ks} x^{k nu}; zero along any branch."""
        return y ** self.k - self.rhs(x)


def omega_scalar(spec: IntegrandSpec, x: complex) -> complex:
    """The logarithmic derivative sum_j s_j f_j'(x)/f_j(x) + nu/x."""
    return complex(omega_components(spec, [x])[0])


def principal_branch_value(spec: IntegrandSpec, x: complex) -> complex:
    """x^nu * prod_j f_j(x)^{s_j} with principal logarithms."""
    _require_univariate(spec)
    acc = complex(spec.nu[0]) * cmath.log(complex(x))
    for fj, sj in zip(spec.f, spec.s):
        acc += complex(sj) * cmath.log(fj.evaluate([x]))
    return cmath.exp(acc)


def euler_step(x: complex, y: complex, dx: complex, omega) -> tuple:
    """One explicit step of dy/dx = omega(x) y: (x+dx, (1 + omega(x) dx) y)."""
    return x + dx, (1.0 + omega(x) * dx) * y


def newton_step(y: complex, x: complex, curve: BranchCurve) -> complex:
    """One Newton iteration on y^k - prod f^{ks} x^{k nu} at fixed x."""
    k = curve.k
    if k > 1 and y == 0:
        raise ZeroDivisionError("branch collapse: y = 0 on a k-sheeted curve")
    return y - curve.defining(x, y) / (k * y ** (k - 1))


def singular_points(spec: IntegrandSpec) -> np.ndarray:
    """Roots of x * prod_j f_j in the complex plane (poles of omega)."""
    _require_univariate(spec)
    pts = [0j]
    for fj in spec.f:
        exps = sorted(e[0] for e in fj.support())
        lo, hi = exps[0], exps[-1]
        coeffs = [complex(fj.terms.get((e,), 0)) for e in range(hi, lo - 1, -1)]
        if len(coeffs) > 1:
            pts.extend(np.roots(coeffs))
    return np.array(pts, dtype=np.complex128)


def track_line_segment(Sx: complex, Sy: complex, Tx: complex, N: int,
                       spec: IntegrandSpec, curve: BranchCurve,
                       poles: np.ndarray | None = None) -> tuple:
    """Branch values at N equidistant nodes from Sx to Tx.

    The first value is Sy; each later node applies one Euler predictor step
    and a fixed number of Newton corrections onto the curve.  Returns
    (nodes, values) as complex arrays.
    """
    _require_univariate(spec)
    if N < 2:
        raise ValueError("need at least two nodes per segment")
    if poles is None:
        poles = singular_points(spec)
    nodes = Sx + (Tx - Sx) * np.arange(N) / (N - 1)
    if len(poles) and np.min(np.abs(nodes[:, None] - poles[None, :])) < POLE_GUARD_RADIUS:
        raise SegmentError(
            f"segment hits singularity: a node is within {POLE_GUARD_RADIUS} "
            "of a root of x * prod f_j")
    dx = (Tx - Sx) / (N - 1)
    values = np.empty(N, dtype=np.complex128)
    values[0] = Sy
    y = complex(Sy)
    om = lambda z: omega_scalar(spec, z)
    for i in range(1, N):
        _, y = euler_step(complex(nodes[i - 1]), y, dx, om)
        for _ in range(NEWTON_CORRECTIONS):
            y = newton_step(y, complex(nodes[i]), curve)
        values[i] = y
    return nodes, values


def integrate_trapezoidal(values, h: complex) -> complex:
    """Trapezoidal rule with constant complex step h."""
    v = np.asarray(values, dtype=np.complex128)
    if v.size < 2:
        raise ValueError("need at least two values")
    return complex(h * (v[0] / 2 + v[1:-1].sum() + v[-1] / 2))


def integrate_line_segment(A: complex, phi_at_A: complex, B: complex, N: int,
                           spec: IntegrandSpec, curve: BranchCurve, cocycles,
                           poles: np.ndarray | None = None) -> tuple:
    """Per-cocycle integrals over the segment AB plus the tracked branch values.

    Each cocycle (a, b) contributes the trapezoidal sum of
    phi(x) * prod f_j(x)^{a_j} * x^{b-1} with step (B-A)/(N-1).
    """
    if complex(A) == complex(B):
        nodes = np.full(max(N, 2), complex(A), dtype=np.complex128)
        values = np.full(max(N, 2), complex(phi_at_A), dtype=np.complex128)
        return np.zeros(len(list(cocycles)), dtype=np.complex128), values
    nodes, values = track_line_segment(A, phi_at_A, B, N, spec, curve, poles)
    h = (B - A) / (N - 1)
    fvals = np.array([[fj.evaluate([x]) for x in nodes] for fj in spec.f],
                     dtype=np.complex128)
    out = np.empty(len(cocycles), dtype=np.complex128)
    for j, coc in enumerate(cocycles):
        integrand = values * nodes ** (coc.b - 1)
        for fv, aj in zip(fvals, coc.a):
            if aj:
                integrand = integrand * fv ** aj
        out[j] = integrate_trapezoidal(integrand, h)
    return out, values


@dataclass(frozen=True)
class LoopIntegral:
    values: tuple             # one integral per cocycle
    closure_residual: float   # |tracked phi at A after the loop - phi_at_A|


def integrate_loop(cycle: TwistedCycle, N: int, spec: IntegrandSpec,
                   curve: BranchCurve, cocycles,
                   closure_tol: float = CLOSURE_TOL,
                   require_closure: bool = True) -> LoopIntegral:
    """Sum of the segment integrals AB + BC + CA with chained branch values."""
    _require_univariate(spec)
    cocycles = [c if isinstance(c, Cocycle) else Cocycle(*c) for c in cocycles]
    poles = singular_points(spec)
    for v in cycle.vertices:
        if abs(v) < POLE_GUARD_RADIUS or (
                len(poles) and np.min(np.abs(poles - v)) < POLE_GUARD_RADIUS):
            raise ValueError(f"cycle vertex {v} lies on a singularity")
    total = np.zeros(len(cocycles), dtype=np.complex128)
    y = cycle.phi_at_A
    for S, T in ((cycle.A, cycle.B), (cycle.B, cycle.C), (cycle.C, cycle.A)):
        part, values = integrate_line_segment(S, y, T, N, spec, curve,
                                              cocycles, poles)
        total += part
        y = complex(values[-1])
    closure = abs(y - cycle.phi_at_A)
    if require_closure and closure > closure_tol:
        raise CycleClosureError(
            f"not a twisted cycle / branch tracking failed: closure residual "
            f"{closure:.3e} exceeds {closure_tol:.1e}")
    return LoopIntegral(values=tuple(complex(v) for v in total),
                        closure_residual=closure)


@dataclass(frozen=True)
class PairingMatrix:
    entries: tuple            # rows: cycles, columns: cocycles
    cycles: tuple
    cocycles: tuple
    nodes: int
    closure_residuals: tuple

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.complex128)


def pairing_matrix(cycles, cocycles, N: int, spec: IntegrandSpec,
                   closure_tol: float = CLOSURE_TOL) -> PairingMatrix:
    """Matrix of integrals I_{a(j), b(j)} over cycle i."""
    _require_univariate(spec)
    cycles = tuple(cycles)
    cocycles = tuple(c if isinstance(c, Cocycle) else Cocycle(*c)
                     for c in cocycles)
    if not cycles or not cocycles:
        raise ValueError("need at least one cycle and one cocycle")
    curve = BranchCurve.from_spec(spec)
    rows = []
    residuals = []
    for cyc in cycles:
        loop = integrate_loop(cyc, N, spec, curve, cocycles,
                              closure_tol=closure_tol)
        rows.append(loop.values)
        residuals.append(loop.closure_residual)
    return PairingMatrix(entries=tuple(rows), cycles=cycles,
                         cocycles=cocycles, nodes=int(N),
                         closure_residuals=tuple(residuals))


@dataclass(frozen=True)
class KernelVector:
    vector: tuple     # complex entries, largest-magnitude entry scaled to 1
    rational: tuple | None   # (Fraction re, Fraction im) pairs when recognized


def _rationalize(vector, tol=1e-2, max_den=64):
    out = []
    for z in vector:
        re = Fraction(z.real).limit_denominator(max_den)
        im = Fraction(z.imag).limit_denominator(max_den)
        if abs(float(re) - z.real) > tol or abs(float(im) - z.imag) > tol:
            return None
        out.append((re, im))
    return tuple(out)


def nullspace(M, rel_tol: float = 1e-6):
    """Right-kernel basis of the pairing matrix via SVD.

    Singular directions with sigma <= rel_tol * sigma_max (directions beyond
    the row count count as sigma = 0) form the kernel.  Each basis vector is
    scaled so its largest-magnitude entry is exactly 1 and, when all entries
    are close to rationals with denominator at most 64, reported in exact
    rational form alongside the floats.
    """
    a = M.as_array() if isinstance(M, PairingMatrix) else np.asarray(
        M, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    m, n = a.shape
    _, sing, vh = np.linalg.svd(a)
    smax = sing[0] if len(sing) else 0.0
    out = []
    for i in range(n):
        sigma = sing[i] if i < len(sing) else 0.0
        if sigma <= rel_tol * max(smax, 1e-300):
            v = vh[i].conj()
            pivot = v[int(np.argmax(np.abs(v)))]
            v = v / pivot
            vec = tuple(complex(z) for z in v)
            out.append(KernelVector(vector=vec, rational=_rationalize(vec)))
    return out
