"""Small real-coefficient polynomial and eigenvalue kernels.

Root-finding goes through the balanced companion matrix (LAPACK QR under
numpy), which is robust for the degree <= 8 polynomials that arise here.
Eigen classification of 2x2 matrices uses the closed-form discriminant
with an explicit coincidence band, since the downstream orbit tests hinge
on "identical" versus "distinct" eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Polynomial",
    "NumericalFailure",
    "roots",
    "common_root",
    "EigenPair2",
    "Spectrum",
    "eig2",
    "spectrum_small",
    "DEFAULT_COINCIDENCE_TOL",
]

COEFF_DROP_TOL = 1e-12
IMAG_TOL = 1e-7
DEFAULT_COINCIDENCE_TOL = 1e-6


class NumericalFailure(RuntimeError):
    """Numerical routine failed to converge."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending-degree coefficients."""

    coefficients: np.ndarray

    def __init__(self, coefficients):
        c = np.atleast_1d(np.asarray(coefficients, dtype=float))
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        """Index of the last coefficient above the drop tolerance."""
        c = self.coefficients
        scale = np.max(np.abs(c))
        if scale == 0.0:
            return -1
        idx = np.nonzero(np.abs(c) > COEFF_DROP_TOL * scale)[0]
        return int(idx[-1]) if idx.size else -1

    def trimmed(self) -> np.ndarray:
        """Coefficients up to the numerical degree (ascending)."""
        return self.coefficients[: self.degree + 1]

    def __call__(self, u):
        # Horner, highest degree first
        c = self.coefficients
        acc = np.zeros_like(np.asarray(u, dtype=complex) if np.iscomplexobj(u) else np.asarray(u, dtype=float))
        for coef in c[::-1]:
            acc = acc * u + coef
        return acc

    def derivative(self) -> "Polynomial":
        c = self.coefficients
        if c.size <= 1:
            return Polynomial([0.0])
        return Polynomial(c[1:] * np.arange(1, c.size))


def is_real_root(r: complex, tol_imag: float | None = None) -> bool:
    t = IMAG_TOL if tol_imag is None else tol_imag
    return abs(r.imag) <= t * (1.0 + abs(r.real))


def roots(f: Polynomial, tol: float = 1e-8) -> np.ndarray:
    """All complex roots of ``f`` (with multiplicity), companion-matrix QR.

    Each root is polished with one Newton step; the residual |f(root)| is
    checked against ``tol`` times the coefficient scale.
    """
    if not isinstance(f, Polynomial):
        f = Polynomial(f)
    c = f.trimmed()
    if c.size == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    if c.size == 1:
        raise ValueError("constant polynomial has no roots")
    # np.roots balances the companion matrix before the QR eigensolve
    rts = np.roots(c[::-1])
    dF = f.derivative()
    polished = []
    scale = np.max(np.abs(c))
    for r in rts:
        for _ in range(2):
            fr = complex(f(r))
            dfr = complex(dF(r))
            if abs(dfr) < 1e-300:
                break
            step = fr / dfr
            if not np.isfinite(step.real) or not np.isfinite(step.imag):
                break
            r_new = r - step
            if abs(complex(f(r_new))) < abs(fr):
                r = r_new
            else:
                break
        polished.append(r)
    polished = np.asarray(polished)
    resid = np.abs(f(polished))
    if np.any(resid > tol * scale * (1.0 + np.abs(polished)) ** f.degree):
        bad = float(np.max(resid))
        raise NumericalFailure(f"root residual {bad:.3e} exceeds tolerance", iterations=2)
    return polished


def _real_roots(f: Polynomial, tol: float = 1e-8) -> np.ndarray:
    rs = roots(f, tol)
    return np.array(sorted(r.real for r in rs if is_real_root(r)))


def common_root(f: Polynomial, g: Polynomial, tol: float = 1e-8):
    """Common root of two quadratics, or None.

    Uses the resultant relation (ae - bd)(bn - ec) = (cd - an)^2 for
    f = a u^2 + b u + c, g = d u^2 + e u + n, and recovers the root as
    (bn - ec)/(cd - an) = (cd - an)/(ae - bd).  Near-degenerate factors
    fall back to explicit root-set intersection.
    """
    if not isinstance(f, Polynomial):
        f = Polynomial(f)
    if not isinstance(g, Polynomial):
        g = Polynomial(g)
    if f.degree > 2 or g.degree > 2:
        raise ValueError("common_root expects polynomials of degree at most 2")
    if f.degree < 0 and g.degree < 0:
        raise ValueError("both polynomials are zero")
    if f.degree < 1 or g.degree < 1:
        # a constant (or zero) polynomial shares no root unless it is zero,
        # in which case any root of the other counts
        lo, hi = (f, g) if f.degree < 1 else (g, f)
        if lo.degree == 0:
            return None
        rr = _real_roots(hi, tol)
        return float(rr[0]) if rr.size else None

    ca = np.zeros(3)
    ca[: f.coefficients.size] = f.coefficients[:3]
    cb = np.zeros(3)
    cb[: g.coefficients.size] = g.coefficients[:3]
    c_, b_, a_ = ca
    n_, e_, d_ = cb
    scale = max(np.max(np.abs(ca)), np.max(np.abs(cb)))
    lhs = (a_ * e_ - b_ * d_) * (b_ * n_ - e_ * c_)
    rhs = (c_ * d_ - a_ * n_) ** 2
    if abs(lhs - rhs) > tol * scale ** 4 * 4.0:
        return None
    den1 = c_ * d_ - a_ * n_
    den2 = a_ * e_ - b_ * d_
    if abs(den1) > 1e-10 * scale ** 2:
        return float((b_ * n_ - e_ * c_) / den1)
    if abs(den2) > 1e-10 * scale ** 2:
        return float(den1 / den2)
    # closed form degenerates; intersect the root sets directly
    rf = _real_roots(f, tol)
    rg = _real_roots(g, tol)
    best = None
    for u in rf:
        for v in rg:
            d = abs(u - v)
            if best is None or d < best[0]:
                best = (d, 0.5 * (u + v))
    if best is not None and best[0] <= tol * (1.0 + abs(best[1])) * 10.0:
        return float(best[1])
    return None


@dataclass(frozen=True)
class EigenPair2:
    """Eigen classification of a 2x2 real matrix.

    ``kind`` is one of DistinctReal, DoubleRealDiagonalizable,
    DoubleRealDefective, ComplexPair.  For real kinds ``values`` holds the
    two eigenvalues; for ComplexPair it holds (real part, imag part).
    ``gap`` is the eigenvalue spread sqrt(|discriminant|) before the
    coincidence band collapses a near-double pair.
    """

    kind: str
    values: tuple
    eigenvector_count: int
    gap: float = 0.0

    @property
    def is_defective_double(self) -> bool:
        return self.kind == "DoubleRealDefective"


def eig2(M, coincidence_tol: float = DEFAULT_COINCIDENCE_TOL) -> EigenPair2:
    """Classify the eigenstructure of a 2x2 matrix with a coincidence band.

    Eigenvalues closer than ``coincidence_tol * (1 + max|lambda|)`` count as
    identical; defectiveness is decided by the rank of M - lambda I.
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2) or not np.all(np.isfinite(M)):
        raise ValueError("expected a finite 2x2 matrix")
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr - 4.0 * det
    gap = np.sqrt(abs(disc))
    lam_scale = max(abs(tr) / 2.0 + gap / 2.0, np.sqrt(abs(det)))
    band = coincidence_tol * (1.0 + lam_scale)
    if gap <= band:
        lam = tr / 2.0
        shifted = M - lam * np.eye(2)
        sigma_max = np.linalg.norm(shifted, 2)
        mat_scale = 1.0 + np.abs(M).max()
        if sigma_max <= coincidence_tol * mat_scale:
            return EigenPair2("DoubleRealDiagonalizable", (lam, lam), 2, gap)
        return EigenPair2("DoubleRealDefective", (lam, lam), 1, gap)
    if disc > 0:
        lam1 = (tr + np.sqrt(disc)) / 2.0
        lam2 = (tr - np.sqrt(disc)) / 2.0
        return EigenPair2("DistinctReal", (lam1, lam2), 2, gap)
    return EigenPair2("ComplexPair", (tr / 2.0, np.sqrt(-disc) / 2.0), 2, gap)


@dataclass(frozen=True)
class Spectrum:
    """Full eigenvalue list of a small matrix with pair statistics."""

    eigenvalues: tuple
    n_complex_pairs: int
    n_coincident_real_pairs: int


def spectrum_small(M, coincidence_tol: float = DEFAULT_COINCIDENCE_TOL) -> Spectrum:
    """Eigenvalues of a p x p matrix (p <= 16) with pair counting.

    Complex eigenvalues are reported in conjugate pairs.  Real eigenvalues
    within a relative gap of ``coincidence_tol`` are counted as coincident
    pairs (greedy matching on the sorted list, each value used once).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("expected a square matrix")
    if M.shape[0] > 16:
        raise ValueError("spectrum_small is limited to p <= 16")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    try:
        # LAPACK geev: balancing + Hessenberg + shifted QR
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalFailure(f"eigenvalue iteration failed: {exc}", iterations=30 * M.shape[0]) from exc
    real_mask = np.abs(vals.imag) <= IMAG_TOL * (1.0 + np.abs(vals.real))
    reals = np.sort(vals[real_mask].real)
    n_complex = int(np.count_nonzero(~real_mask)) // 2
    lam_max = np.max(np.abs(vals)) if vals.size else 0.0
    band = coincidence_tol * (1.0 + lam_max)
    coincident = 0
    i = 0
    while i + 1 < reals.size:
        if reals[i + 1] - reals[i] <= band:
            coincident += 1
            i += 2
        else:
            i += 1
    ordered = tuple(complex(v) for v in sorted(vals, key=lambda v: (v.real, v.imag)))
    return Spectrum(ordered, n_complex, coincident)
