"""Curvature-line potentials with closed-form derivatives.

A potential is a finite sum of terms.  Every term kind except ``monomial`` is
harmonic by construction; monomials ``c u^a v^b`` exist so that arbitrary
polynomials (including inadmissible ones) can be written down and rejected
by the Laplace test.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NotHarmonic

HARMONIC_TOL = 1e-12

TERM_KINDS = ("constant", "linear-u", "linear-v", "re-poly", "im-poly",
              "exp-cos", "exp-sin", "monomial")


class PotentialValues(NamedTuple):
    phi: np.ndarray
    phi_u: np.ndarray
    phi_v: np.ndarray
    phi_uu: np.ndarray
    phi_uv: np.ndarray
    phi_vv: np.ndarray
    harmonic_residual: np.ndarray


@dataclass(frozen=True)
class Term:
    """One summand.

    ``coefficient`` multiplies the basis function.  ``degree`` is the power
    for ``re-poly``/``im-poly`` (``Re/Im (u + i v)^degree``), ``rate`` the
    frequency ``k`` in ``exp(k u) cos(k v)``, and ``powers`` the exponents
    ``(a, b)`` of a monomial.
    """

    kind: str
    coefficient: float = 1.0
    degree: int = 1
    rate: float = 1.0
    powers: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.kind not in TERM_KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}; expected one of {TERM_KINDS}")
        if self.kind in ("re-poly", "im-poly") and int(self.degree) < 0:
            raise ValueError("polynomial degree must be non-negative")
        if self.kind == "monomial" and min(self.powers) < 0:
            raise ValueError("monomial powers must be non-negative")

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "coefficient": float(self.coefficient)}
        if self.kind in ("re-poly", "im-poly"):
            d["degree"] = int(self.degree)
        elif self.kind in ("exp-cos", "exp-sin"):
            d["rate"] = float(self.rate)
        elif self.kind == "monomial":
            d["powers"] = [int(self.powers[0]), int(self.powers[1])]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Term:
        d = dict(d)
        if "powers" in d:
            d["powers"] = tuple(int(x) for x in d["powers"])
        return cls(**d)


def _zeros_like(u):
    return np.zeros(np.broadcast(u, u).shape)


def _term_values(t: Term, u, v):
    c = float(t.coefficient)
    z0 = _zeros_like(u + v)
    if t.kind == "constant":
        return (c + z0, z0, z0, z0, z0, z0)
    if t.kind == "linear-u":
        return (c * u + z0, c + z0, z0, z0, z0, z0)
    if t.kind == "linear-v":
        return (c * v + z0, z0, c + z0, z0, z0, z0)
    if t.kind in ("re-poly", "im-poly"):
        n = int(t.degree)
        z = u + 1j * v
        f0 = z ** n
        f1 = n * z ** (n - 1) if n >= 1 else 0 * z
        f2 = n * (n - 1) * z ** (n - 2) if n >= 2 else 0 * z
        # holomorphic F: F_u = F', F_v = i F', F_uu = F'', F_uv = i F'', F_vv = -F''
        parts = (f0, f1, 1j * f1, f2, 1j * f2, -f2)
        pick = np.real if t.kind == "re-poly" else np.imag
        return tuple(c * pick(x) + z0 for x in parts)
    if t.kind in ("exp-cos", "exp-sin"):
        k = float(t.rate)
        e = np.exp(k * u)
        cs, sn = np.cos(k * v), np.sin(k * v)
        if t.kind == "exp-cos":
            g, g_v = e * cs, -k * e * sn
        else:
            g, g_v = e * sn, k * e * cs
        # g = Re/Im exp(k z): g_u = k g, g_uu = k^2 g, g_uv = k g_v, g_vv = -k^2 g
        return tuple(c * x + z0 for x in (g, k * g, g_v, k * k * g, k * g_v, -k * k * g))
    a, b = t.powers

    def mono(i, j, di, dj):
        if di > i or dj > j:
            return z0
        ci = np.prod(np.arange(i - di + 1, i + 1)) if di else 1
        cj = np.prod(np.arange(j - dj + 1, j + 1)) if dj else 1
        return c * ci * cj * u ** (i - di) * v ** (j - dj) + z0

    return (mono(a, b, 0, 0), mono(a, b, 1, 0), mono(a, b, 0, 1),
            mono(a, b, 2, 0), mono(a, b, 1, 1), mono(a, b, 0, 2))


@dataclass(frozen=True)
class HarmonicPotential:
    terms: tuple[Term, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def from_spec(cls, spec) -> HarmonicPotential:
        return cls(tuple(t if isinstance(t, Term) else Term.from_dict(t) for t in spec))

    def to_spec(self) -> list[dict]:
        return [t.to_dict() for t in self.terms]

    def laplacian_polynomial(self) -> dict[tuple[int, int], float]:
        """Exact Laplacian of the monomial part, as ``{(a, b): coefficient}``."""
        lap: dict[tuple[int, int], float] = defaultdict(float)
        for t in self.terms:
            if t.kind != "monomial":
                continue
            a, b = t.powers
            if a >= 2:
                lap[(a - 2, b)] += a * (a - 1) * t.coefficient
            if b >= 2:
                lap[(a, b - 2)] += b * (b - 1) * t.coefficient
        return {k: c for k, c in lap.items() if c != 0.0}

    def is_admissible(self) -> bool:
        return not self.laplacian_polynomial()

    def check(self) -> None:
        lap = self.laplacian_polynomial()
        if lap:
            desc = " + ".join(f"{c:g} u^{a} v^{b}" for (a, b), c in sorted(lap.items()))
            raise NotHarmonic(f"potential has nonzero Laplacian {desc}")

    def __call__(self, u, v, check: bool = True) -> PotentialValues:
        return eval_potential(self, u, v, check=check)

    def max_abs(self, u, v) -> float:
        return float(np.max(np.abs(eval_potential(self, u, v, check=False).phi)))


def eval_potential(phi: HarmonicPotential, u, v, check: bool = True) -> PotentialValues:
    """Potential and derivatives up to second order at ``(u, v)`` (arrays broadcast).

    The returned residual is ``phi_uu + phi_vv``.  With ``check`` set, a
    potential whose monomial part is not harmonic raises :class:`NotHarmonic`.
    """
    if check:
        phi.check()
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    shape = np.broadcast(u, v).shape
    acc = [np.zeros(shape) for _ in range(6)]
    for t in phi.terms:
        for k, x in enumerate(_term_values(t, u, v)):
            acc[k] = acc[k] + x
    residual = acc[3] + acc[5]
    return PotentialValues(*acc, residual)


def linear_u(c: float = 1.0) -> Term:
    return Term("linear-u", c)


def linear_v(c: float = 1.0) -> Term:
    return Term("linear-v", c)


def re_poly(n: int, c: float = 1.0) -> Term:
    return Term("re-poly", c, degree=n)


def im_poly(n: int, c: float = 1.0) -> Term:
    return Term("im-poly", c, degree=n)


def default_potential() -> HarmonicPotential:
    """``u + 0.3 (u^2 - v^2)``, the potential used throughout the checks."""
    return HarmonicPotential((linear_u(1.0), re_poly(2, 0.3)))
