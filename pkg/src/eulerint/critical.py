"""Counting complex critical points of log(f^s x^nu) on the torus complement.

The rational critical equations are cleared to polynomials and solved with a
total-degree homotopy (random start roots, gamma trick, Euler predictor and
Newton corrector).  Solutions landing on the cleared locus are filtered out by
checking the original rational equations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .laurent import IntegrandSpec, LaurentPoly, omega_components


@dataclass(frozen=True)
class PolySystem:
    """Cleared polynomial form of the critical equations."""

    equations: tuple          # n LaurentPoly without negative exponents
    cleared_factors: tuple    # textual record of what was multiplied in
    spec: IntegrandSpec

    @property
    def nvars(self) -> int:
        return self.spec.nvars


@dataclass(frozen=True)
class TrackerSettings:
    initial_step: float = 0.05
    min_step: float = 1e-7
    newton_tol: float = 1e-10
    max_newton: int = 6
    residual_tol: float = 1e-8
    dedup_distance: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        for name in ("initial_step", "min_step", "newton_tol", "residual_tol",
                     "dedup_distance"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.dedup_distance <= self.residual_tol:
            raise ValueError("dedup_distance must exceed residual_tol")


@dataclass(frozen=True)
class SolutionSet:
    solutions: tuple          # tuples of complex coordinates
    residuals: tuple          # max |omega_i| at each reported solution
    raw_paths: int
    converged: int
    filtered: int
    distinct: int
    failed_paths: int

    @property
    def certified(self) -> bool:
        return self.failed_paths == 0


def build_system(spec: IntegrandSpec) -> PolySystem:
    """Clear denominators of the critical equations.

    Equation i is x_i * sum_j s_j (d_i f_j) prod_{k!=j} f_k + nu_i prod_k f_k,
    shifted by a monomial so that no negative exponents remain.
    """
    n = spec.nvars
    eqs = []
    factors = []
    for i in range(n):
        acc = LaurentPoly.zero(n)
        for j, fj in enumerate(spec.f):
            term = fj.partial(i + 1).scale(spec.s[j])
            for k, fk in enumerate(spec.f):
                if k != j:
                    term = term * fk
            acc = acc + term
        acc = acc.shift(tuple(1 if k == i else 0 for k in range(n)))
        prod_all = LaurentPoly.constant(n, 1)
        for fk in spec.f:
            prod_all = prod_all * fk
        acc = acc + prod_all.scale(spec.nu[i])
        mins = acc.min_exponents()
        clear = tuple(-m if m < 0 else 0 for m in mins)
        if any(clear):
            acc = acc.shift(clear)
        factors.append(f"x{i + 1} * f1..f{len(spec.f)}"
                       + (f" * x^{clear}" if any(clear) else ""))
        eqs.append(acc)
    return PolySystem(tuple(eqs), tuple(factors), spec)


class _FastSystem:
    """Stacked exponent/coefficient arrays for fast evaluation of F and its Jacobian."""

    def __init__(self, equations, n):
        self.n = n
        self.eq_data = []
        for eq in equations:
            exps = np.array(eq.support(), dtype=np.float64).reshape(-1, n)
            coeffs = np.array([complex(c) if not hasattr(c, "denominator")
                               else complex(float(c))
                               for c in (eq.terms[tuple(int(x) for x in e)]
                                         for e in exps)], dtype=np.complex128)
            jexps = []
            jcoeffs = []
            for k in range(n):
                je = exps.copy()
                jc = coeffs * exps[:, k]
                je[:, k] -= 1
                keep = jc != 0
                jexps.append(je[keep])
                jcoeffs.append(jc[keep])
            self.eq_data.append((exps, coeffs, jexps, jcoeffs))

    def eval(self, x):
        out = np.empty(self.n, dtype=np.complex128)
        for i, (exps, coeffs, _, _) in enumerate(self.eq_data):
            out[i] = coeffs @ np.prod(x[None, :] ** exps, axis=1)
        return out

    def eval_abs(self, x):
        """Per-equation sum of |c_k| |x|^{e_k}: the natural residual scale."""
        ax = np.abs(x)
        out = np.empty(self.n, dtype=np.float64)
        for i, (exps, coeffs, _, _) in enumerate(self.eq_data):
            out[i] = np.abs(coeffs) @ np.prod(ax[None, :] ** exps, axis=1)
        return out

    def jac(self, x):
        out = np.empty((self.n, self.n), dtype=np.complex128)
        for i, (_, _, jexps, jcoeffs) in enumerate(self.eq_data):
            for k in range(self.n):
                if len(jcoeffs[k]) == 0:
                    out[i, k] = 0
                else:
                    out[i, k] = jcoeffs[k] @ np.prod(x[None, :] ** jexps[k], axis=1)
        return out


def _track_path(fast, start, gamma, degrees, roots, settings):
    """Track one path of H(x,t) = gamma (1-t) G(x) + t F(x) from t=0 to t=1."""
    n = fast.n

    def h_eval(x, t):
        g = x ** degrees - roots
        return gamma * (1 - t) * g + t * fast.eval(x)

    def h_jac(x, t):
        jg = np.diag(degrees * x ** (degrees - 1))
        return gamma * (1 - t) * jg + t * fast.jac(x)

    def h_dt(x, t):
        g = x ** degrees - roots
        return fast.eval(x) - gamma * g

    def h_scale(x, t):
        # backward-error scale: sum of |term| over both homotopy parts
        ax = np.abs(x)
        gs = ax ** degrees + np.abs(roots)
        return (1 - t) * gs + t * fast.eval_abs(x)

    x = np.array(start, dtype=np.complex128)
    t = 0.0
    dt = settings.initial_step
    successes = 0
    while t < 1.0:
        dt = min(dt, 1.0 - t)
        # Euler predictor
        try:
            dx = np.linalg.solve(h_jac(x, t), -h_dt(x, t)) * dt
        except np.linalg.LinAlgError:
            return "stalled", x, t
        xp = x + dx
        tp = t + dt
        # Newton corrector
        ok = False
        for _ in range(settings.max_newton):
            r = h_eval(xp, tp)
            if not np.all(np.isfinite(r)):
                break
            if np.all(np.abs(r) < settings.newton_tol
                      * np.maximum(1.0, h_scale(xp, tp))):
                ok = True
                break
            try:
                xp = xp + np.linalg.solve(h_jac(xp, tp), -r)
            except np.linalg.LinAlgError:
                break
        # guard against path jumping: the corrected point must stay within the
        # predictor's reach, otherwise shrink the step and retry
        if ok and np.linalg.norm(xp - (x + dx)) > 2.0 * np.linalg.norm(dx) + 1e-6 * (
                1.0 + np.linalg.norm(x)):
            ok = False
        if ok:
            x, t = xp, tp
            successes += 1
            if successes >= 3:
                dt = min(dt * 2, 0.1)
                successes = 0
            if np.max(np.abs(x)) > 1e6:
                return "diverged", x, t
        else:
            successes = 0
            dt /= 2
            if dt < settings.min_step:
                return "stalled", x, t
    return "ok", x, t


def _term_magnitude(poly, x):
    """Sum of |c_k| |x|^{e_k} over the terms of a Laurent polynomial."""
    ax = np.abs(np.asarray(x, dtype=np.complex128))
    total = 0.0
    for exps, coeff in poly.terms.items():
        total += abs(complex(coeff)) * float(np.prod(ax ** np.array(exps)))
    return total


def _converged(fast, x, tol=1e-10):
    r = fast.eval(x)
    return bool(np.all(np.isfinite(r))
                and np.all(np.abs(r) < tol * np.maximum(1.0, fast.eval_abs(x))))


def _polish(fast, x, iters=30, tol=1e-13):
    for _ in range(iters):
        r = fast.eval(x)
        if not np.all(np.isfinite(r)):
            return None
        if np.all(np.abs(r) < tol * np.maximum(1.0, fast.eval_abs(x))):
            return x
        try:
            x = x + np.linalg.solve(fast.jac(x), -r)
        except np.linalg.LinAlgError:
            return None
    return x


def _run_tracking(fast, degrees, rng, settings):
    """One full total-degree tracking run with fresh random constants and gamma.

    Returns (endpoints, converged, failed, unresolved).  `failed` counts
    mid-domain stalls; `unresolved` counts near-t=1 stalls whose endpoint could
    not be polished (usually boundary/infinity divergences, but occasionally a
    badly conditioned path toward a genuine solution).
    """
    n = fast.n
    angles = rng.uniform(0, 2 * math.pi, size=n)
    radii = rng.uniform(0.5, 1.5, size=n)
    roots_const = radii * np.exp(1j * angles)
    gamma = np.exp(1j * rng.uniform(0, 2 * math.pi))

    per_var = []
    for i in range(n):
        d = int(degrees[i])
        base = roots_const[i] ** (1.0 / d)
        per_var.append([base * np.exp(2j * math.pi * k / d) for k in range(d)])
    start_points = [np.array(combo, dtype=np.complex128)
                    for combo in itertools.product(*per_var)]

    failed = 0
    unresolved = 0
    converged = 0
    endpoints = []
    for sp in start_points:
        status, x, t = _track_path(fast, sp, gamma, degrees, roots_const, settings)
        if status == "diverged":
            continue
        if status == "stalled":
            # Paths heading to the toric boundary or to infinity stall with
            # shrinking steps just before t = 1.  Regular target solutions are
            # recovered by Newton polish from the stall point; a failed polish
            # that close to t = 1 means the path has no finite regular limit.
            # Only mid-domain stalls count as genuine tracking failures.
            polished = _polish(fast, x)
            if polished is not None and _converged(fast, polished):
                converged += 1
                endpoints.append(polished)
            elif t > 1 - 1e-2:
                unresolved += 1
            else:
                failed += 1
            continue
        polished = _polish(fast, x)
        if polished is None or not _converged(fast, polished):
            failed += 1
            continue
        converged += 1
        endpoints.append(polished)
    return endpoints, converged, failed, unresolved, len(start_points)


def solve(system: PolySystem, settings: TrackerSettings | None = None) -> SolutionSet:
    """All distinct critical points in the torus complement, by total-degree homotopy.

    If a run leaves stalled paths that could not be resolved, the whole path
    collection is re-tracked with a fresh random gamma (up to three attempts)
    and the strictly verified endpoints are pooled; the verified solution set
    does not depend on gamma, so pooling cannot introduce spurious points.
    """
    settings = settings or TrackerSettings()
    spec = system.spec
    n = system.nvars
    if len(system.equations) != n:
        raise ValueError("system must be square")
    rng = np.random.default_rng(settings.seed)
    fast = _FastSystem(system.equations, n)
    degrees = np.array([max(1, eq.total_degree()) for eq in system.equations],
                       dtype=np.float64)

    # Two independent runs are always pooled: a path jump or an unresolved
    # stall under one gamma is overwhelmingly unlikely to recur at the same
    # solution under an independent gamma.  A third run is added only when a
    # run reports genuine mid-domain tracking failures.
    endpoints = []
    raw = 0
    converged = 0
    failed = 0
    for attempt in range(3):
        ep, conv, fail, unresolved, paths = _run_tracking(fast, degrees, rng, settings)
        endpoints.extend(ep)
        raw += paths
        converged += conv
        failed = fail
        if attempt >= 1 and fail == 0:
            break

    # filter to the torus complement and check the original rational equations;
    # all thresholds are relative to the term magnitudes at x, so badly scaled
    # but genuine solutions are not rejected
    partials = [[fj.partial(i + 1) for i in range(n)] for fj in spec.f]
    kept = []
    for x in endpoints:
        if np.any(np.abs(x) < 1e-8):
            continue
        if any(abs(fj.evaluate(x)) < 1e-8 * max(1.0, _term_magnitude(fj, x))
               for fj in spec.f):
            continue
        omega = omega_components(spec, x)
        scale = np.array([
            sum(abs(spec.s[j]) * abs(partials[j][i].evaluate(x))
                / abs(spec.f[j].evaluate(x)) for j in range(len(spec.f)))
            + abs(spec.nu[i]) / abs(x[i])
            for i in range(n)])
        resid = float(np.max(np.abs(omega) / np.maximum(1.0, scale)))
        if resid <= settings.residual_tol:
            kept.append((x, resid))
    filtered = converged - len(kept)

    # order-independent dedup: sort, then cluster in the max norm
    kept.sort(key=lambda p: tuple((round(c.real, 8), round(c.imag, 8)) for c in p[0]))
    distinct = []
    for x, resid in kept:
        if all(np.max(np.abs(x - np.array(y))) > settings.dedup_distance
               for y, _ in distinct):
            distinct.append((tuple(x), resid))

    return SolutionSet(
        solutions=tuple(s for s, _ in distinct),
        residuals=tuple(r for _, r in distinct),
        raw_paths=raw,
        converged=converged,
        filtered=filtered,
        distinct=len(distinct),
        failed_paths=failed,
    )


def _random_parameters(rng, count):
    return tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(count))


def euler_characteristic(spec_or_polys, settings: TrackerSettings | None = None,
                         draws: int = 2):
    """Signed Euler characteristic via critical point counts.

    Accepts either a full IntegrandSpec (its s, nu are replaced by random
    draws) or a bare list of LaurentPoly.  The count must agree across
    `draws` independent random parameter draws.
    """
    settings = settings or TrackerSettings()
    if isinstance(spec_or_polys, IntegrandSpec):
        polys = spec_or_polys.f
    else:
        polys = tuple(spec_or_polys)
    n = polys[0].nvars
    ell = len(polys)
    rng = np.random.default_rng(settings.seed)
    counts = []
    certified = True
    for d in range(draws):
        s = _random_parameters(rng, ell)
        nu = _random_parameters(rng, n)
        spec = IntegrandSpec(polys, s, nu)
        sub = TrackerSettings(**{**settings.__dict__, "seed": settings.seed + 1000 + d})
        sol = solve(build_system(spec), sub)
        counts.append(sol.distinct)
        certified = certified and sol.certified
    if len(set(counts)) != 1:
        raise RuntimeError(f"critical point counts disagree across draws: {counts}; "
                           "non-generic parameters or tracking failure")
    count = counts[0]
    chi = (-1) ** n * count
    return chi, count, certified
