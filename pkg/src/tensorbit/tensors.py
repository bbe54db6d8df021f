"""Dense 2x2x2 and pxpx2 tensor containers with mode contractions and ranks.

A 2x2x2 tensor is stored with entry ``X[i, j, k]`` indexing row ``i``,
column ``j``, frontal slab ``k``.  The flat entry order used everywhere in
this package (I/O included) is slab-major::

    X1 = [[a, b], [c, d]]    (k = 0)
    X2 = [[e, f], [g, h]]    (k = 1)

i.e. ``(a, b, c, d, e, f, g, h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Tensor222",
    "TensorPxPx2",
    "Rank1Term",
    "MultilinearRank",
    "contract_mode",
    "multilinear_transform",
    "frobenius_norm_sq",
    "multilinear_rank",
]

DEFAULT_RANK_TOL = 1e-9


def _frozen_array(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor entries must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Tensor222:
    """Dense real 2x2x2 tensor (slab pair X1 | X2)."""

    array: np.ndarray

    def __init__(self, array):
        object.__setattr__(self, "array", _frozen_array(array, (2, 2, 2)))

    @classmethod
    def from_entries(cls, a, b, c, d, e, f, g, h) -> "Tensor222":
        """Build from slab-major entries: X1 = [a b; c d], X2 = [e f; g h]."""
        arr = np.empty((2, 2, 2))
        arr[:, :, 0] = [[a, b], [c, d]]
        arr[:, :, 1] = [[e, f], [g, h]]
        return cls(arr)

    @classmethod
    def from_flat(cls, data) -> "Tensor222":
        data = np.asarray(data, dtype=float).ravel()
        if data.size != 8:
            raise ValueError(f"expected 8 entries, got {data.size}")
        return cls.from_entries(*data)

    @classmethod
    def from_slabs(cls, slab1, slab2) -> "Tensor222":
        arr = np.empty((2, 2, 2))
        arr[:, :, 0] = slab1
        arr[:, :, 1] = slab2
        return cls(arr)

    @property
    def slab1(self) -> np.ndarray:
        return self.array[:, :, 0]

    @property
    def slab2(self) -> np.ndarray:
        return self.array[:, :, 1]

    @property
    def entries(self) -> tuple:
        """Slab-major entry tuple (a, b, c, d, e, f, g, h)."""
        x = self.array
        return (x[0, 0, 0], x[0, 1, 0], x[1, 0, 0], x[1, 1, 0],
                x[0, 0, 1], x[0, 1, 1], x[1, 0, 1], x[1, 1, 1])

    def flat(self) -> np.ndarray:
        return np.array(self.entries)

    def __sub__(self, other) -> "Tensor222":
        other_arr = other.array if isinstance(other, Tensor222) else np.asarray(other)
        return Tensor222(self.array - other_arr)

    def __add__(self, other) -> "Tensor222":
        other_arr = other.array if isinstance(other, Tensor222) else np.asarray(other)
        return Tensor222(self.array + other_arr)


@dataclass(frozen=True)
class TensorPxPx2:
    """Dense real pxpx2 tensor; slabs are the two p x p frontal matrices."""

    array: np.ndarray
    p: int = field(init=False)

    def __init__(self, array):
        arr = np.array(array, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected shape (p, p, 2), got {arr.shape}")
        if arr.shape[0] < 2:
            raise ValueError("dimension p must be at least 2")
        object.__setattr__(self, "array", _frozen_array(arr, arr.shape))
        object.__setattr__(self, "p", arr.shape[0])

    @classmethod
    def from_slabs(cls, slab1, slab2) -> "TensorPxPx2":
        return cls(np.stack([np.asarray(slab1), np.asarray(slab2)], axis=2))

    @property
    def slab1(self) -> np.ndarray:
        return self.array[:, :, 0]

    @property
    def slab2(self) -> np.ndarray:
        return self.array[:, :, 1]


@dataclass(frozen=True)
class Rank1Term:
    """Outer-product term x (x) y (x) z with entries ``x_i * y_j * z_k``."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __init__(self, x, y, z):
        for name, v in (("x", x), ("y", y), ("z", z)):
            v = np.asarray(v, dtype=float)
            if v.ndim != 1:
                raise ValueError(f"factor {name} must be a vector")
            object.__setattr__(self, name, _frozen_array(v, v.shape))

    def tensor(self) -> np.ndarray:
        return np.einsum("i,j,k->ijk", self.x, self.y, self.z)

    def norm_sq(self) -> float:
        return float((self.x @ self.x) * (self.y @ self.y) * (self.z @ self.z))


@dataclass(frozen=True)
class MultilinearRank:
    """Triple of mode-n unfolding ranks."""

    r1: int
    r2: int
    r3: int

    def as_tuple(self) -> tuple:
        return (self.r1, self.r2, self.r3)

    def __iter__(self):
        return iter(self.as_tuple())

    def __eq__(self, other):
        if isinstance(other, MultilinearRank):
            return self.as_tuple() == other.as_tuple()
        return self.as_tuple() == tuple(other)

    def __hash__(self):
        return hash(self.as_tuple())


def _as_array(X) -> np.ndarray:
    if isinstance(X, (Tensor222, TensorPxPx2)):
        return X.array
    return np.asarray(X, dtype=float)


def contract_mode(X, v, mode: int) -> np.ndarray:
    """Contract tensor ``X`` with vector ``v`` in the given mode (1, 2 or 3).

    Returns the matrix of the contracted tensor, with the remaining modes
    ordered as in the input.  E.g. mode 3 yields ``v[0]*X1 + v[1]*X2``.
    """
    arr = _as_array(X)
    if mode not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {mode}")
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size != arr.shape[mode - 1]:
        raise ValueError(
            f"vector length {v.size} does not match mode-{mode} dimension {arr.shape[mode - 1]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("contraction vector must be finite")
    spec = {1: "ijk,i->jk", 2: "ijk,j->ik", 3: "ijk,k->ij"}[mode]
    return np.einsum(spec, arr, v)


def multilinear_transform(X, S, T, U):
    """Apply the multilinear transform (S, T, U) . X.

    New entries are ``sum_pqr S_ip T_jq U_kr X_pqr``.  Identity matrices
    return the tensor unchanged.  The result has the same container type
    as the input.
    """
    arr = _as_array(X)
    S, T, U = (np.asarray(M, dtype=float) for M in (S, T, U))
    for name, M, dim in (("S", S, arr.shape[0]), ("T", T, arr.shape[1]), ("U", U, arr.shape[2])):
        if M.shape != (dim, dim):
            raise ValueError(f"matrix {name} must be {dim}x{dim}, got {M.shape}")
    out = np.einsum("ip,jq,kr,pqr->ijk", S, T, U, arr)
    if isinstance(X, Tensor222):
        return Tensor222(out)
    if isinstance(X, TensorPxPx2):
        return TensorPxPx2(out)
    return out


def frobenius_norm_sq(X) -> float:
    """Sum of squared entries; zero iff the all-zero tensor."""
    arr = _as_array(X)
    return float((arr ** 2).sum())


def _unfolding_rank(mat: np.ndarray, tol: float) -> int:
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


def multilinear_rank(X, tol: float = DEFAULT_RANK_TOL) -> MultilinearRank:
    """Numerical multilinear rank via mode-n unfolding SVDs.

    Singular values above ``tol`` times the largest one are counted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    arr = _as_array(X)
    n1, n2, n3 = arr.shape
    m1 = arr.reshape(n1, n2 * n3)
    m2 = np.moveaxis(arr, 1, 0).reshape(n2, n1 * n3)
    m3 = np.moveaxis(arr, 2, 0).reshape(n3, n1 * n2)
    return MultilinearRank(*(_unfolding_rank(m, tol) for m in (m1, m2, m3)))
