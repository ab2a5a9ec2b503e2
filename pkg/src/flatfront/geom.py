"""Linear algebra in the indefinite spaces R^{4,2}, R^{3,1} and R^{1,1}.

Coordinates in R^{4,2} are ordered ``(p, q, y0, y1, y2, y3)`` with signature
``(-, +, -, +, +, +)``.  The point sphere complex is ``p``, the fixed
orthonormal partner is ``q`` and ``R^{3,1}`` is the span of ``y0..y3``.

Single vectors are :class:`SigVec` instances.  Grid computations work on raw
``(..., 6)`` or ``(..., 4)`` arrays through :func:`dot`, which broadcasts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContactSpanDegenerate,
    DegenerateConfiguration,
    NotCollinear,
    SignatureMismatch,
)

COLLINEAR_TOL = 1e-8


class Signature(enum.Enum):
    R42 = "R42"
    R31 = "R31"
    R11 = "R11"

    @property
    def metric(self) -> np.ndarray:
        return _METRICS[self].copy()

    @property
    def dim(self) -> int:
        return len(_METRICS[self])


ETA42 = np.diag([-1.0, 1.0, -1.0, 1.0, 1.0, 1.0])
ETA31 = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA11 = np.diag([-1.0, 1.0])
_METRICS = {Signature.R42: ETA42, Signature.R31: ETA31, Signature.R11: ETA11}
_DIAG = {sig: np.diag(m).copy() for sig, m in _METRICS.items()}


@dataclass(frozen=True, eq=False)
class SigVec:
    """A vector together with the signature of the space it lives in."""

    coords: np.ndarray
    signature: Signature = Signature.R42

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (self.signature.dim,):
            raise ValueError(
                f"{self.signature.value} vectors need {self.signature.dim} "
                f"components, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def __add__(self, other: SigVec) -> SigVec:
        _same(self, other)
        return SigVec(self.coords + other.coords, self.signature)

    def __sub__(self, other: SigVec) -> SigVec:
        _same(self, other)
        return SigVec(self.coords - other.coords, self.signature)

    def __neg__(self) -> SigVec:
        return SigVec(-self.coords, self.signature)

    def __mul__(self, k: float) -> SigVec:
        return SigVec(float(k) * self.coords, self.signature)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> SigVec:
        return SigVec(self.coords / float(k), self.signature)

    def __repr__(self) -> str:
        body = ", ".join(f"{x:.6g}" for x in self.coords)
        return f"SigVec[{self.signature.value}]({body})"

    def embed(self) -> SigVec:
        """Zero-pad an R^{3,1} or R^{1,1} vector into R^{4,2}."""
        return SigVec(embed(self.coords, self.signature), Signature.R42)

    def allclose(self, other: SigVec, atol: float = 1e-12) -> bool:
        return self.signature is other.signature and np.allclose(
            self.coords, other.coords, rtol=0.0, atol=atol
        )


def _same(x: SigVec, y: SigVec) -> None:
    if x.signature is not y.signature:
        raise SignatureMismatch(
            f"{x.signature.value} vector combined with {y.signature.value} vector"
        )


def embed(coords: np.ndarray, signature: Signature = Signature.R31) -> np.ndarray:
    """Zero-pad an array of R^{3,1} (or R^{1,1}) coordinates into R^{4,2}."""
    coords = np.asarray(coords, dtype=float)
    out = np.zeros(coords.shape[:-1] + (6,))
    if signature is Signature.R31:
        out[..., 2:] = coords
    elif signature is Signature.R11:
        out[..., :2] = coords
    elif signature is Signature.R42:
        out[...] = coords
    return out


def dot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Broadcasting inner product of coordinate arrays; dimension picks the form."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    weights = {6: _DIAG[Signature.R42], 4: _DIAG[Signature.R31], 2: _DIAG[Signature.R11]}[n]
    return np.sum(x * weights * np.asarray(y, dtype=float), axis=-1)


def inner(x: SigVec, y: SigVec) -> float:
    _same(x, y)
    return float(dot(x.coords, y.coords))


def basis() -> dict[str, SigVec]:
    """Named basis vectors of R^{4,2}."""
    names = ["p", "q", "y0", "y1", "y2", "y3"]
    return {n: SigVec(np.eye(6)[k]) for k, n in enumerate(names)}


@dataclass(frozen=True, eq=False)
class AmbientSplit:
    """Orthogonal splitting R^{4,2} = R^{1,1} + R^{3,1} with the fixed null pair."""

    p: SigVec
    q: SigVec

    @classmethod
    def standard(cls) -> AmbientSplit:
        b = basis()
        return cls(b["p"], b["q"])

    @classmethod
    def from_null_pair(cls, qplus: SigVec, qminus: SigVec) -> AmbientSplit:
        """Recover (p, q) from null q+ and q-, rescaled symmetrically to pairing -2."""
        pairing = inner(qplus, qminus)
        if pairing >= 0 or abs(pairing) < 1e-14:
            raise ContactSpanDegenerate(f"<q+, q-> = {pairing:.3g}, expected negative")
        k = np.sqrt(-2.0 / pairing)
        qp, qm = qplus * k, qminus * k
        return cls((qp + qm) / 2.0, (qp - qm) / 2.0)

    @property
    def qplus(self) -> SigVec:
        return self.p + self.q

    @property
    def qminus(self) -> SigVec:
        return self.p - self.q


@dataclass(frozen=True, eq=False)
class ContactElement:
    """Null 2-plane spanned by two sphere vectors."""

    s1: SigVec
    s2: SigVec

    def nullity_defect(self) -> float:
        return max(abs(inner(self.s1, self.s1)), abs(inner(self.s2, self.s2)),
                   abs(inner(self.s1, self.s2)))


@dataclass(frozen=True, eq=False)
class SkewEndo:
    """The rank-2 endomorphism ``z -> <a,z> b - <b,z> a``."""

    a: SigVec
    b: SigVec

    def __post_init__(self):
        _same(self.a, self.b)

    def __call__(self, z: SigVec) -> SigVec:
        return wedge_apply(self, z)

    def matrix(self) -> np.ndarray:
        return wedge_matrix(self.a.coords, self.b.coords)


def wedge_apply(e: SkewEndo, z: SigVec) -> SigVec:
    _same(e.a, z)
    return e.b * inner(e.a, z) - e.a * inner(e.b, z)


def wedge_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of ``a ^ b`` acting on column vectors; broadcasts over leading axes.

    ``(a ^ b) z = <a, z> b - <b, z> a``, so the matrix is ``(b a^T - a b^T) eta``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w = {6: _DIAG[Signature.R42], 4: _DIAG[Signature.R31]}[a.shape[-1]]
    return (b[..., :, None] * (a * w)[..., None, :]
            - a[..., :, None] * (b * w)[..., None, :])


def is_skew(m: np.ndarray, atol: float = 1e-12) -> bool:
    """Skew-adjointness of ``m`` with respect to the R^{4,2} form."""
    g = ETA42 @ m
    return bool(np.all(np.abs(g + np.swapaxes(g, -1, -2)) <= atol))


def cross_ratio(a: SigVec, b: SigVec, c: SigVec, d: SigVec,
                tol: float = COLLINEAR_TOL) -> float:
    """Cross ratio of four points on the projective line through ``a`` and ``b``.

    Writes ``c = alpha a + beta b`` and ``d = gamma a + delta b`` and returns
    ``(beta/alpha) (gamma/delta)``, the value in the affine chart sending
    ``a`` to infinity and ``b`` to zero.  Harmonic separation gives -1.
    """
    for v in (b, c, d):
        _same(a, v)
    ab = np.column_stack([a.coords, b.coords])
    scale_ab = np.linalg.norm(ab, axis=0)
    if np.any(scale_ab == 0):
        raise DegenerateConfiguration("zero vector given as a point")
    sv = np.linalg.svd(ab / scale_ab, compute_uv=False)
    if sv[-1] < tol:
        raise DegenerateConfiguration("a and b represent the same point")
    coeffs = []
    for v in (c, d):
        sol, *_ = np.linalg.lstsq(ab, v.coords, rcond=None)
        resid = np.linalg.norm(ab @ sol - v.coords)
        if resid > tol * max(np.linalg.norm(v.coords), 1e-300):
            raise NotCollinear(f"point off the line through a, b (residual {resid:.2e})")
        coeffs.append(sol)
    (alpha, beta), (gamma, delta) = coeffs
    eps = tol * max(abs(alpha) + abs(beta), abs(gamma) + abs(delta))
    if abs(alpha) <= eps or abs(delta) <= eps:
        raise DegenerateConfiguration("c coincides with b or d coincides with a")
    return float((beta / alpha) * (gamma / delta))


def check_contact(s: SigVec, q: SigVec) -> float:
    """Pairing of two sphere vectors; zero means oriented contact."""
    return inner(s, q)
