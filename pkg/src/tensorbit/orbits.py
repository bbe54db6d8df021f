"""Hyperdeterminant and orbit classification for 2x2x2 tensors.

The eight orbits of real 2x2x2 tensors under invertible transforms in all
three modes are D0, D1, D2, D2p, D2pp, G2, D3, G3.  Degenerate orbits are
separated by multilinear rank; the full-multilinear-rank orbits G2 / D3 /
G3 are separated by the sign of the hyperdeterminant (+ / 0 / -), with D3
additionally carrying a defective double eigenvalue of the slab pencil.
Symmetric tensors occupy the sub-list D0, D1, G2, D3, G3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .smallalg import DEFAULT_COINCIDENCE_TOL, EigenPair2, eig2
from .tensors import Tensor222, multilinear_rank

__all__ = [
    "ORBITS",
    "SYMMETRIC_ORBITS",
    "OrbitLabel",
    "SymTensor222",
    "hyperdet",
    "hyperdet_sym",
    "classify",
    "classify_sym",
    "pencil_eigs",
    "canonical_form",
]

ORBITS = ("D0", "D1", "D2", "D2p", "D2pp", "G2", "D3", "G3")
SYMMETRIC_ORBITS = ("D0", "D1", "G2", "D3", "G3")

PENCIL_COND_CAP = 1e8

_CANONICAL = {
    "D0": (0, 0, 0, 0, 0, 0, 0, 0),
    "D1": (1, 0, 0, 0, 0, 0, 0, 0),
    "D2": (1, 0, 0, 1, 0, 0, 0, 0),
    "D2p": (1, 0, 0, 0, 0, 1, 0, 0),
    "D2pp": (1, 0, 0, 0, 0, 0, 1, 0),
    "G2": (1, 0, 0, 0, 0, 0, 0, 1),
    "D3": (0, 1, 1, 0, 1, 0, 0, 0),
    "G3": (-1, 0, 0, 1, 0, 1, 1, 0),
}


def canonical_form(orbit: str) -> Tensor222:
    """Canonical representative of an orbit."""
    return Tensor222.from_entries(*_CANONICAL[orbit])


@dataclass(frozen=True)
class OrbitLabel:
    """Orbit name plus a distance-to-threshold diagnostic.

    ``boundary_margin`` is |hyperdeterminant| in units of the fourth power
    of the largest entry magnitude, i.e. how far the tensor sits from the
    Delta = 0 boundary on the classifier's own scale.
    """

    orbit: str
    boundary_margin: float = 0.0

    def __eq__(self, other):
        if isinstance(other, OrbitLabel):
            return self.orbit == other.orbit
        return self.orbit == other

    def __hash__(self):
        return hash(self.orbit)


@dataclass(frozen=True)
class SymTensor222:
    """Symmetric 2x2x2 tensor with slabs X1 = [a b; b c], X2 = [b c; c d]."""

    a: float
    b: float
    c: float
    d: float

    def __init__(self, a, b, c, d):
        for name, v in (("a", a), ("b", b), ("c", c), ("d", d)):
            v = float(v)
            if not np.isfinite(v):
                raise ValueError("tensor entries must be finite")
            object.__setattr__(self, name, v)

    @classmethod
    def from_flat(cls, data) -> "SymTensor222":
        data = np.asarray(data, dtype=float).ravel()
        if data.size != 4:
            raise ValueError(f"expected 4 entries, got {data.size}")
        return cls(*data)

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def tensor(self) -> Tensor222:
        """Full 2x2x2 expansion (symmetric under all index permutations)."""
        a, b, c, d = self.as_tuple()
        return Tensor222.from_entries(a, b, b, c, b, c, c, d)

    def rank1_update(self, y, coeff=1.0) -> "SymTensor222":
        """This tensor plus ``coeff`` times y (x) y (x) y."""
        y1, y2 = float(y[0]), float(y[1])
        return SymTensor222(self.a + coeff * y1 ** 3,
                            self.b + coeff * y1 ** 2 * y2,
                            self.c + coeff * y1 * y2 ** 2,
                            self.d + coeff * y2 ** 3)


def _slabs(X):
    if isinstance(X, SymTensor222):
        a, b, c, d = X.as_tuple()
        return np.array([[a, b], [b, c]]), np.array([[b, c], [c, d]])
    if isinstance(X, Tensor222):
        return X.slab1, X.slab2
    arr = np.asarray(X, dtype=float)
    return arr[:, :, 0], arr[:, :, 1]


def hyperdet(X) -> float:
    """Hyperdeterminant: discriminant of det(l1 X1 + l2 X2) in (l1, l2).

    Positive for orbit G2, negative for G3, zero on the boundary (D3 and
    the degenerate orbits).
    """
    X1, X2 = _slabs(X)
    det = lambda M: M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    mix = (det(X1 + X2) - det(X1 - X2)) / 2.0
    return float(mix * mix - 4.0 * det(X1) * det(X2))


def hyperdet_sym(Xs: SymTensor222) -> float:
    """Closed form (bc - ad)^2 - 4 (bd - c^2)(ac - b^2) for symmetric input."""
    a, b, c, d = Xs.as_tuple() if isinstance(Xs, SymTensor222) else Xs
    return float((b * c - a * d) ** 2 - 4.0 * (b * d - c * c) * (a * c - b * b))


def pencil_eigs(X, slab_order: str = "21",
                coincidence_tol: float = DEFAULT_COINCIDENCE_TOL) -> EigenPair2:
    """Eigen classification of the slab quotient X2 X1^-1 (or X1 X2^-1).

    ``slab_order`` "21" uses X2 X1^-1, "12" uses X1 X2^-1.  Raises when the
    designated slab is singular (condition number above the cap), pointing
    at the other order.
    """
    X1, X2 = _slabs(X)
    if slab_order == "21":
        num, den = X2, X1
        other = "12"
    elif slab_order == "12":
        num, den = X1, X2
        other = "21"
    else:
        raise ValueError("slab_order must be '21' or '12'")
    if np.linalg.cond(den) > PENCIL_COND_CAP:
        raise ValueError(
            f"designated slab is singular or ill-conditioned; try slab_order='{other}'")
    quotient = np.linalg.solve(den.T, num.T).T
    return eig2(quotient, coincidence_tol)


def _pencil_auto(X, coincidence_tol):
    """Slab quotient in the preferred order, None if both slabs are singular."""
    X1, _ = _slabs(X)
    for order in (("21", "12") if np.linalg.cond(X1) <= PENCIL_COND_CAP else ("12", "21")):
        try:
            return pencil_eigs(X, order, coincidence_tol), order
        except ValueError:
            continue
    return None, None


def _entry_scale(X) -> float:
    if isinstance(X, SymTensor222):
        return float(np.max(np.abs(X.as_tuple())))
    X1, X2 = _slabs(X)
    return float(max(np.max(np.abs(X1)), np.max(np.abs(X2))))


def classify(X, tol: float = 1e-9, zero_scale: float | None = None,
             coincidence_tol: float = DEFAULT_COINCIDENCE_TOL) -> OrbitLabel:
    """Orbit of a 2x2x2 tensor.

    Multilinear rank separates the degenerate orbits; for full multilinear
    rank (2,2,2) the sign of the hyperdeterminant with a band of
    ``tol * max|entry|^4`` separates G2 (+), G3 (-) and the boundary D3.
    ``zero_scale`` supplies an external magnitude reference so that
    numerically-zero residual tensors classify as D0/D1.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(X, SymTensor222):
        X = X.tensor()
    scale = _entry_scale(X)
    if scale == 0.0 or (zero_scale is not None and scale <= tol * float(zero_scale)):
        return OrbitLabel("D0", 0.0)
    delta = hyperdet(X)
    quartic = scale ** 4
    margin = abs(delta) / quartic
    mlr = multilinear_rank(X, tol).as_tuple()
    if max(mlr) <= 1:
        return OrbitLabel("D1", margin)
    if min(mlr) == 1:
        which = mlr.index(1)
        return OrbitLabel(("D2p", "D2pp", "D2")[which], margin)
    if delta > tol * quartic:
        return OrbitLabel("G2", margin)
    if delta < -tol * quartic:
        return OrbitLabel("G3", margin)
    return OrbitLabel("D3", margin)


def classify_sym(Xs: SymTensor222, tol: float = 1e-9, zero_scale: float | None = None,
                 coincidence_tol: float = DEFAULT_COINCIDENCE_TOL) -> OrbitLabel:
    """Orbit of a symmetric 2x2x2 tensor among D0, D1, G2, D3, G3.

    Multilinear rank rules out D0/D1; the hyperdeterminant band declares
    the boundary D3; otherwise the slab-pencil eigenstructure separates
    G2 (distinct real) from G3 (complex), with the hyperdeterminant sign
    as the arbiter when both slabs are singular.  The pencil and the
    hyperdeterminant criteria are equivalent in exact arithmetic.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    full = Xs.tensor()
    scale = _entry_scale(Xs)
    if scale == 0.0 or (zero_scale is not None and scale <= tol * float(zero_scale)):
        return OrbitLabel("D0", 0.0)
    delta = hyperdet_sym(Xs)
    margin = abs(delta) / scale ** 4
    if max(multilinear_rank(full, tol).as_tuple()) <= 1:
        return OrbitLabel("D1", margin)
    quartic = scale ** 4
    if abs(delta) <= tol * quartic:
        # Delta equals the pencil discriminant times det(X1)^2, so the band
        # on Delta is the scale-honest boundary test even when a slab is
        # nearly singular and the raw eigenvalue gap looks wide
        return OrbitLabel("D3", margin)
    pencil, _ = _pencil_auto(Xs, coincidence_tol)
    if pencil is not None:
        if pencil.kind == "DistinctReal":
            return OrbitLabel("G2", margin)
        if pencil.kind == "ComplexPair":
            return OrbitLabel("G3", margin)
        if pencil.kind == "DoubleRealDefective":
            return OrbitLabel("D3", margin)
    return OrbitLabel("G2" if delta > 0 else "G3", margin)
