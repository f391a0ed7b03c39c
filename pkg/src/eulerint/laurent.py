"""Sparse multivariate Laurent polynomials over C and the log-derivative form.

Coefficients may be ints, Fractions, floats, or complex numbers.  Arithmetic
on int/Fraction inputs stays exact; `evaluate` always returns a complex number.
Values are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

_EXACT_TYPES = (int, Fraction)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _is_zero(c) -> bool:
    return c == 0


def coeff_to_complex(c) -> complex:
    if isinstance(c, Fraction):
        return complex(float(c))
    return complex(c)


class LaurentPoly:
    """A finite map from integer exponent vectors to nonzero coefficients."""

    __slots__ = ("nvars", "terms", "_arrays")

    def __init__(self, nvars: int, terms: Mapping[tuple, object]):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has wrong length for nvars={nvars}")
            if not _is_zero(c):
                clean[exp] = clean.get(exp, 0) + c if exp in clean else c
        clean = {e: c for e, c in clean.items() if not _is_zero(c)}
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_arrays", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Iterable[int], c=1) -> "LaurentPoly":
        exp = tuple(int(e) for e in exp)
        return cls(len(exp), {exp: c})

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.nvars, t)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, t)

    def scale(self, c) -> "LaurentPoly":
        if _is_zero(c):
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def shift(self, exp: Iterable[int]) -> "LaurentPoly":
        """Multiply by the monomial x^exp."""
        exp = tuple(int(e) for e in exp)
        return LaurentPoly(self.nvars, {tuple(a + b for a, b in zip(e, exp)): c
                                        for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {format_poly(self)!r})"

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self):
        return sorted(self.terms.keys())

    def min_exponents(self):
        """Per-variable minimum exponent over the support (0 for the zero poly)."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def has_negative_exponents(self) -> bool:
        return any(x < 0 for e in self.terms for x in e)

    # -- calculus and evaluation -------------------------------------------

    def partial(self, i: int) -> "LaurentPoly":
        """Formal partial derivative with respect to variable i (1-based)."""
        if not 1 <= i <= self.nvars:
            raise ValueError(f"variable index {i} out of range 1..{self.nvars}")
        k = i - 1
        t = {}
        for e, c in self.terms.items():
            if e[k] == 0:
                continue
            ne = tuple(x - 1 if j == k else x for j, x in enumerate(e))
            t[ne] = t.get(ne, 0) + e[k] * c
        return LaurentPoly(self.nvars, t)

    def _eval_arrays(self):
        cached = self._arrays
        if cached is None:
            exps = np.array(sorted(self.terms.keys()), dtype=np.int64).reshape(-1, self.nvars)
            coeffs = np.array([coeff_to_complex(self.terms[tuple(e)]) for e in exps],
                              dtype=np.complex128)
            cached = (exps, coeffs)
            object.__setattr__(self, "_arrays", cached)
        return cached

    def evaluate(self, x) -> complex:
        """Evaluate at a point with all coordinates nonzero."""
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.nvars,):
            raise ValueError(f"point has dimension {x.shape}, expected ({self.nvars},)")
        if not self.terms:
            return 0j
        mins = self.min_exponents()
        for i, xi in enumerate(x):
            if xi == 0 and mins[i] < 0:
                raise ZeroDivisionError(f"coordinate {i + 1} is zero but appears "
                                        "with negative exponent")
        exps, coeffs = self._eval_arrays()
        return complex(coeffs @ np.prod(x[None, :] ** exps, axis=1))


@dataclass(frozen=True)
class IntegrandSpec:
    """The family data (f_1..f_l, s, nu) behind the multivalued integrand f^s x^nu."""

    f: tuple
    s: tuple
    nu: tuple

    def __init__(self, f, s, nu):
        f = tuple(f)
        if len(f) < 1:
            raise ValueError("need at least one polynomial")
        n = f[0].nvars
        for p in f:
            if p.nvars != n:
                raise ValueError("all polynomials must share the same nvars")
            if p.is_zero():
                raise ValueError("zero polynomial not allowed")
            if p.is_monomial():
                raise ValueError("monomial (unit) polynomial not allowed")
        s = tuple(s)
        nu = tuple(nu)
        if len(s) != len(f):
            raise ValueError(f"s has length {len(s)}, expected {len(f)}")
        if len(nu) != n:
            raise ValueError(f"nu has length {len(nu)}, expected {n}")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "nu", nu)

    @property
    def nvars(self) -> int:
        return self.f[0].nvars

    @property
    def npolys(self) -> int:
        return len(self.f)

    def with_parameters(self, s, nu) -> "IntegrandSpec":
        return IntegrandSpec(self.f, s, nu)


class OutsideDomainError(ValueError):
    """Raised when a point lies on V(f) or a coordinate hyperplane."""


def omega_components(spec: IntegrandSpec, x) -> np.ndarray:
    """Components of dlog(f^s x^nu): sum_j s_j (d_i f_j)/f_j + nu_i/x_i."""
    x = np.asarray(x, dtype=np.complex128)
    n = spec.nvars
    if x.shape != (n,):
        raise ValueError(f"point has dimension {x.shape}, expected ({n},)")
    if np.any(x == 0):
        raise OutsideDomainError("point has a zero coordinate")
    fvals = [p.evaluate(x) for p in spec.f]
    if any(v == 0 for v in fvals):
        raise OutsideDomainError("point lies on the vanishing locus of f")
    out = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        acc = 0j
        for sj, p, fv in zip(spec.s, spec.f, fvals):
            acc += coeff_to_complex(sj) * p.partial(i + 1).evaluate(x) / fv
        out[i] = acc + coeff_to_complex(spec.nu[i]) / x[i]
    return out


# -- text grammar ----------------------------------------------------------
#
# terms joined by +/-; term = [coefficient][*]monomials;
# monomial = var^int (negative allowed); variables x1..xn, aliases x,y,z
# for nvars <= 3.

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sign>[+-])
  | (?P<cpx>\([^)]*\))
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?:/\d+)?)
  | (?P<var>x\d+|[xyz])
  | (?P<caret>\^)
  | (?P<star>\*)
""", re.VERBOSE)

_ALIAS = {"x": 1, "y": 2, "z": 3}


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return out


def _parse_number(tok, pos):
    if "/" in tok:
        num, den = tok.split("/")
        if "." in num or "e" in num or "E" in num:
            return float(num) / float(den)
        return Fraction(int(num), int(den))
    if "." in tok or "e" in tok or "E" in tok:
        return float(tok)
    return int(tok)


def _parse_complex(tok, pos):
    try:
        return complex(tok.strip("()").replace(" ", ""))
    except ValueError:
        raise ParseError(f"bad complex coefficient {tok!r}", pos) from None


def parse_poly(text: str, nvars: int | None = None) -> LaurentPoly:
    """Parse the text grammar into a LaurentPoly.

    When nvars is omitted it is inferred from the largest variable index used
    (at least 1).
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    terms = []  # (coeff, {varindex: exponent})
    i = 0
    maxvar = 1
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "sign":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ParseError("dangling sign", tokens[-1][2])
        coeff = 1
        seen_any = False
        if tokens[i][0] == "num":
            coeff = _parse_number(tokens[i][1], tokens[i][2])
            i += 1
            seen_any = True
        elif tokens[i][0] == "cpx":
            coeff = _parse_complex(tokens[i][1], tokens[i][2])
            i += 1
            seen_any = True
        exps = {}
        while i < len(tokens) and tokens[i][0] in ("star", "var"):
            if tokens[i][0] == "star":
                i += 1
                continue
            name = tokens[i][1]
            vpos = tokens[i][2]
            vidx = _ALIAS[name] if name in _ALIAS else int(name[1:])
            if vidx < 1:
                raise ParseError(f"bad variable {name!r}", vpos)
            maxvar = max(maxvar, vidx)
            i += 1
            e = 1
            if i < len(tokens) and tokens[i][0] == "caret":
                i += 1
                esign = 1
                if i < len(tokens) and tokens[i][0] == "sign":
                    esign = -1 if tokens[i][1] == "-" else 1
                    i += 1
                if i >= len(tokens) or tokens[i][0] != "num" or not tokens[i][1].isdigit():
                    raise ParseError("expected integer exponent",
                                     tokens[i][2] if i < len(tokens) else len(text))
                e = esign * int(tokens[i][1])
                i += 1
            exps[vidx] = exps.get(vidx, 0) + e
            seen_any = True
        if not seen_any:
            raise ParseError("expected a term", tokens[i][2])
        terms.append((sign * coeff if sign < 0 else coeff, exps))
    n = nvars if nvars is not None else maxvar
    if maxvar > n:
        raise ParseError(f"variable index {maxvar} exceeds nvars={n}", 0)
    tmap = {}
    for coeff, exps in terms:
        key = tuple(exps.get(v + 1, 0) for v in range(n))
        tmap[key] = tmap.get(key, 0) + coeff
    return LaurentPoly(n, tmap)


def _grlex_key(exp):
    return (sum(exp), exp)


def _format_coeff(c):
    if isinstance(c, complex):
        if c.imag == 0:
            c = c.real
        else:
            return f"({c.real:+g}{c.imag:+g}j)".replace("(+", "(")
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, float) and c.is_integer():
        return str(int(c))
    return str(c)


def format_poly(p: LaurentPoly) -> str:
    """Canonical text rendering: graded-lex descending term order."""
    if not p.terms:
        return "0"
    names = (["x", "y", "z"][: p.nvars] if p.nvars <= 3
             else [f"x{i + 1}" for i in range(p.nvars)])
    parts = []
    for exp in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[exp]
        mono = "*".join(f"{names[i]}^{e}" if e != 1 else names[i]
                        for i, e in enumerate(exp) if e != 0)
        neg = False
        if not isinstance(c, complex) and c < 0:
            neg = True
            c = -c
        cs = _format_coeff(c)
        if mono and cs == "1":
            body = mono
        elif mono:
            body = f"{cs}*{mono}"
        else:
            body = cs
        parts.append(("- " if neg else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# -- JSON form -------------------------------------------------------------

def poly_to_json(p: LaurentPoly) -> dict:
    return {"nvars": p.nvars,
            "terms": [{"exp": list(e),
                       "re": coeff_to_complex(c).real,
                       "im": coeff_to_complex(c).imag}
                      for e in sorted(p.terms) for c in [p.terms[e]]]}


def poly_from_json(obj: dict) -> LaurentPoly:
    n = int(obj["nvars"])
    terms = {}
    for t in obj["terms"]:
        c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        if c.imag == 0 and float(c.real).is_integer():
            c = int(c.real)
        terms[tuple(t["exp"])] = terms.get(tuple(t["exp"]), 0) + c
    return LaurentPoly(n, terms)
