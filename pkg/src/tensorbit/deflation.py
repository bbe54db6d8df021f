"""Rank-1 deflation with orbit transition reports and seeded experiments.

The central empirical fact exercised here: subtracting a best rank-1
approximation from a generic 2x2x2 tensor (symmetric or not) lands the
residual on the rank-2/rank-3 boundary orbit D3, i.e. the residual slab
pencil acquires a defective double eigenvalue and the hyperdeterminant of
the residual vanishes.

Experiments draw i.i.d. standard-normal tensors from a counter-based RNG
(one Philox stream per trial keyed on the run seed), so results are
bit-identical for a fixed (seed, trials, tolerances) regardless of
execution order.  Per-trial rows can be dumped as CSV; summaries are
plain dicts ready for JSON.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import rank1
from .decomp import DomainError
from .orbits import (OrbitLabel, SymTensor222, canonical_form, classify, classify_sym,
                     hyperdet, hyperdet_sym, pencil_eigs)
from .smallalg import spectrum_small
from .tensors import MultilinearRank, Tensor222, TensorPxPx2, frobenius_norm_sq, \
    multilinear_rank, multilinear_transform

__all__ = [
    "DeflationReport",
    "ExperimentStats",
    "ExperimentTolerances",
    "deflate_once",
    "experiment_generic",
    "experiment_symmetric",
    "experiment_d3_closure",
    "experiment_pxpx2",
    "check_degenerate_props",
    "write_trial_csv",
]

GAP_BUCKETS = (1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0)


@dataclass(frozen=True)
class ExperimentTolerances:
    """Classification bands for deflation experiments.

    Looser than the library defaults because residuals reach the boundary
    only up to root-solver accuracy.
    """

    delta_band: float = 1e-6
    eigen_gap: float = 1e-4
    rank_tol: float = 1e-9


@dataclass(frozen=True)
class DeflationReport:
    """Orbit transition data for one deflation step."""

    orbit_before: OrbitLabel
    orbit_after: OrbitLabel
    delta_before: float
    delta_after: float
    pencil_before: object
    pencil_after: object
    residual_mlrank: MultilinearRank
    psi: float
    ties: int
    warnings: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class ExperimentStats:
    """Aggregate of a seeded deflation experiment."""

    kind: str
    trials: int
    seed: int
    counts: tuple            # ((orbit, count), ...) in fixed orbit order
    fraction_d3: float
    max_abs_delta_after: float
    eigen_gap_histogram: tuple   # ((bucket_label, count), ...)
    failures: int
    failure_reasons: tuple
    extras: tuple = field(default_factory=tuple)   # ((key, value), ...)
    rows: tuple = field(default_factory=tuple)

    def summary_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "trials": self.trials,
            "seed": self.seed,
            "counts": {k: v for k, v in self.counts},
            "fraction_d3": self.fraction_d3,
            "max_abs_delta_after": self.max_abs_delta_after,
            "eigen_gap_histogram": {k: v for k, v in self.eigen_gap_histogram},
            "failures": self.failures,
            "failure_reasons": list(self.failure_reasons),
        }
        for k, v in self.extras:
            out[k] = v
        return out


def _pencil_or_none(X, coincidence_tol):
    for order in ("21", "12"):
        try:
            return pencil_eigs(X, order, coincidence_tol)
        except ValueError:
            continue
    return None


def _pencil_gap(pencil):
    if pencil is None:
        return None
    lam = max(abs(v) for v in np.atleast_1d(np.asarray(pencil.values, float)).ravel())
    return float(pencil.gap / (1.0 + lam))


def deflate_once(X, tol: float = 1e-9, coincidence_tol: float = 1e-6,
                 cross_check: bool = False):
    """Subtract a best rank-1 approximation and report the orbit transition.

    Symmetric input follows the symmetric route (term y (x) y (x) y and
    symmetric classification); the residual keeps the input's type.
    Returns (residual, DeflationReport).
    """
    if isinstance(X, TensorPxPx2):
        raise ValueError("deflate_once handles 2x2x2 tensors; use hopm plus "
                         "spectrum_small (or experiment_pxpx2) for pxpx2 input")
    if isinstance(X, SymTensor222):
        before = classify_sym(X, tol, coincidence_tol=coincidence_tol)
        result = rank1.best_rank1_sym(X)
        y = result.term.y
        residual = X.rank1_update(y, -1.0)
        scale = max(abs(v) for v in X.as_tuple())
        after = classify_sym(residual, max(tol, 1e-6), zero_scale=scale,
                             coincidence_tol=coincidence_tol)
        d_before, d_after = hyperdet_sym(X), hyperdet_sym(residual)
        mlr = multilinear_rank(residual.tensor(), max(tol, 1e-9))
    else:
        t = X if isinstance(X, Tensor222) else Tensor222(X)
        before = classify(t, tol, coincidence_tol=coincidence_tol)
        result = rank1.best_rank1_222(t, cross_check=cross_check)
        residual = Tensor222(t.array - result.term.tensor())
        scale = float(np.max(np.abs(t.array)))
        after = classify(residual, max(tol, 1e-6), zero_scale=scale,
                         coincidence_tol=coincidence_tol)
        d_before, d_after = hyperdet(t), hyperdet(residual)
        mlr = multilinear_rank(residual.array, max(tol, 1e-9))
    report = DeflationReport(
        orbit_before=before, orbit_after=after,
        delta_before=float(d_before), delta_after=float(d_after),
        pencil_before=_pencil_or_none(X, coincidence_tol),
        pencil_after=_pencil_or_none(residual, coincidence_tol),
        residual_mlrank=mlr, psi=float(result.psi), ties=result.multiplicity,
        warnings=result.warnings)
    return residual, report


# ---------------------------------------------------------------------------
# experiment plumbing
# ---------------------------------------------------------------------------

def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64(trial)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _bucket_label(i: int) -> str:
    lo = "0" if i == 0 else f"{GAP_BUCKETS[i - 1]:.0e}"
    hi = f"{GAP_BUCKETS[i]:.0e}" if i < len(GAP_BUCKETS) else "inf"
    return f"{lo}..{hi}"


def _histogram(gaps) -> tuple:
    counts = [0] * (len(GAP_BUCKETS) + 1)
    for g in gaps:
        if g is None or not np.isfinite(g):
            continue
        counts[int(np.searchsorted(GAP_BUCKETS, g))] += 1
    return tuple((_bucket_label(i), c) for i, c in enumerate(counts) if c)


def _mlrank_str(mlr) -> str:
    return "x".join(str(r) for r in mlr.as_tuple())


_ORBIT_ORDER = ("D0", "D1", "D2", "D2p", "D2pp", "G2", "D3", "G3", "error")


def _aggregate(kind, trials, seed, rows, failures, reasons, extras=()):
    counts = {k: 0 for k in _ORBIT_ORDER}
    gaps = []
    max_delta = 0.0
    d3 = 0
    for row in rows:
        counts[row["orbit_after"]] = counts.get(row["orbit_after"], 0) + 1
        if row["orbit_after"] == "D3":
            d3 += 1
        gap = row.get("eigen_gap")
        if gap is not None and np.isfinite(gap):
            gaps.append(gap)
        scaled = row.get("delta_after_scaled")
        if scaled is not None and np.isfinite(scaled):
            max_delta = max(max_delta, abs(scaled))
    n_ok = max(1, sum(1 for r in rows if r["orbit_after"] != "error"))
    return ExperimentStats(
        kind=kind, trials=trials, seed=seed,
        counts=tuple((k, v) for k, v in counts.items() if v),
        fraction_d3=d3 / n_ok,
        max_abs_delta_after=max_delta,
        eigen_gap_histogram=_histogram(gaps),
        failures=failures, failure_reasons=tuple(reasons),
        extras=tuple(extras), rows=tuple(rows))


def _classify_residual(Z: Tensor222, scale: float, tols: ExperimentTolerances) -> OrbitLabel:
    return classify(Z, tols.delta_band, zero_scale=scale, coincidence_tol=tols.eigen_gap)


def _deflate_row(trial: int, X: Tensor222, tols: ExperimentTolerances) -> dict:
    enum = rank1.stationary_points_222(X, hessian=False)
    usable = [p for p in enum.points if not p.degenerate]
    if not usable:
        raise RuntimeError("no usable stationary point")
    best = min(usable, key=lambda p: p.psi)
    Z = Tensor222(X.array - best.term().tensor())
    scale = float(np.max(np.abs(X.array)))
    orbit_after = _classify_residual(Z, scale, tols)
    pencil = _pencil_or_none(Z, tols.eigen_gap)
    mlr = multilinear_rank(Z.array, tols.rank_tol)
    return {
        "trial": trial,
        "orbit_before": classify(X, tols.rank_tol).orbit,
        "orbit_after": orbit_after.orbit,
        "delta_before": hyperdet(X),
        "delta_after": best.delta_residual,
        "delta_after_scaled": abs(best.delta_residual) / scale ** 4,
        "psi": best.psi,
        "eigen_gap": _pencil_gap(pencil),
        "mlrank": _mlrank_str(mlr),
    }


def _error_row(trial: int) -> dict:
    return {"trial": trial, "orbit_before": "error", "orbit_after": "error",
            "delta_before": None, "delta_after": None, "delta_after_scaled": None,
            "psi": None, "eigen_gap": None, "mlrank": ""}


def _run_trials(trials: int, worker, threads: int = 1):
    """Run per-trial workers, returning (row, reason) pairs in trial order.

    Every trial has its own random stream, so the output is identical for
    any worker count; failures are captured per trial, never aborting the
    run.
    """
    def call(trial):
        try:
            return worker(trial), None
        except Exception as exc:
            return None, f"trial {trial}: {exc}"

    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(call, range(trials)))
    return [call(t) for t in range(trials)]


def _collect(results):
    rows, reasons = [], []
    failures = 0
    for trial, (row, reason) in enumerate(results):
        if row is None:
            failures += 1
            reasons.append(reason)
            rows.append(_error_row(trial))
        else:
            rows.append(row)
    return rows, reasons, failures


def experiment_generic(trials: int, seed: int = 0,
                       tolerances: ExperimentTolerances | None = None,
                       threads: int = 1) -> ExperimentStats:
    """Deflate i.i.d. standard-normal 2x2x2 tensors and classify residuals."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tols = tolerances or ExperimentTolerances()

    def worker(trial):
        X = Tensor222.from_flat(_trial_rng(seed, trial).standard_normal(8))
        return _deflate_row(trial, X, tols)

    rows, reasons, failures = _collect(_run_trials(trials, worker, threads))
    n_ok = max(1, trials - failures)
    mlrank_222 = sum(1 for r in rows if r["mlrank"] == "2x2x2")
    return _aggregate("generic", trials, seed, rows, failures, reasons,
                      extras=(("fraction_mlrank_222", mlrank_222 / n_ok),))


def experiment_symmetric(trials: int, seed: int = 0,
                         tolerances: ExperimentTolerances | None = None,
                         threads: int = 1) -> ExperimentStats:
    """Symmetric analogue: (a, b, c, d) i.i.d. normal, symmetric deflation."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tols = tolerances or ExperimentTolerances()

    def worker(trial):
        Xs = SymTensor222(*_trial_rng(seed, trial).standard_normal(4))
        enum = rank1.stationary_points_sym(Xs)
        if not len(enum):
            raise RuntimeError("no real stationary point")
        best = enum[0]
        Z = Xs.rank1_update(best.y, -1.0)
        scale = max(abs(v) for v in Xs.as_tuple())
        after = classify_sym(Z, tols.delta_band, zero_scale=scale,
                             coincidence_tol=tols.eigen_gap)
        pencil = _pencil_or_none(Z, tols.eigen_gap)
        mlr = multilinear_rank(Z.tensor().array, tols.rank_tol)
        return {
            "trial": trial,
            "orbit_before": classify_sym(Xs, tols.rank_tol).orbit,
            "orbit_after": after.orbit,
            "delta_before": hyperdet_sym(Xs),
            "delta_after": best.delta_residual,
            "delta_after_scaled": abs(best.delta_residual) / scale ** 4,
            "psi": best.psi,
            "eigen_gap": _pencil_gap(pencil),
            "mlrank": _mlrank_str(mlr),
        }

    rows, reasons, failures = _collect(_run_trials(trials, worker, threads))
    n_ok = max(1, trials - failures)
    mlrank_222 = sum(1 for r in rows if r["mlrank"] == "2x2x2")
    return _aggregate("symmetric", trials, seed, rows, failures, reasons,
                      extras=(("fraction_mlrank_222", mlrank_222 / n_ok),))


def _random_invertible(rng: np.random.Generator, cond_cap: float = 1e3) -> np.ndarray:
    while True:
        M = rng.standard_normal((2, 2))
        if np.linalg.cond(M) <= cond_cap:
            return M


def experiment_d3_closure(trials: int, seed: int = 0,
                          tolerances: ExperimentTolerances | None = None,
                          threads: int = 1) -> ExperimentStats:
    """Deflate random orbit-D3 tensors (random transforms of the canonical
    form) and tally the residual orbits; supports, not asserts, closure."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tols = tolerances or ExperimentTolerances()
    base = canonical_form("D3")

    def worker(trial):
        rng = _trial_rng(seed, trial)
        S, T, U = (_random_invertible(rng) for _ in range(3))
        X = multilinear_transform(base, S, T, U)
        result = rank1.best_rank1_222(X, cross_check=False)
        Z = Tensor222(X.array - result.term.tensor())
        scale = float(np.max(np.abs(X.array)))
        after = _classify_residual(Z, scale, tols)
        pencil = _pencil_or_none(Z, tols.eigen_gap)
        return {
            "trial": trial,
            "orbit_before": "D3",
            "orbit_after": after.orbit,
            "delta_before": hyperdet(X),
            "delta_after": hyperdet(Z),
            "delta_after_scaled": abs(hyperdet(Z)) / scale ** 4,
            "psi": result.psi,
            "eigen_gap": _pencil_gap(pencil),
            "mlrank": _mlrank_str(multilinear_rank(Z.array, tols.rank_tol)),
        }

    rows, reasons, failures = _collect(_run_trials(trials, worker, threads))
    return _aggregate("d3", trials, seed, rows, failures, reasons)


def experiment_pxpx2(p: int, trials: int, seed: int = 0,
                     tolerances: ExperimentTolerances | None = None,
                     max_iter: int = 1500, restarts: int = 6,
                     threads: int = 1) -> ExperimentStats:
    """pxpx2 deflation via alternating least squares; spectra comparison.

    For each trial the slab-pencil spectrum of the residual is compared
    with the input's: conjecture-consistent means exactly one coincident
    real pair appears and the complex-pair count drops from n to
    max(0, n - 1).
    """
    if not 2 <= p <= 8:
        raise ValueError("p must be between 2 and 8")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tols = tolerances or ExperimentTolerances()

    def worker(trial):
        rng = _trial_rng(seed, trial)
        X = TensorPxPx2(rng.standard_normal((p, p, 2)))
        result = rank1.hopm(X, max_iter=max_iter, tol=1e-14, restarts=restarts,
                            seed=seed * 1000003 + trial)
        Z = X.array - result.term.tensor()
        spec_x = spectrum_small(np.linalg.solve(X.slab1.T, X.slab2.T).T, tols.eigen_gap)
        spec_z = spectrum_small(np.linalg.solve(Z[:, :, 0].T, Z[:, :, 1].T).T,
                                tols.eigen_gap)
        n = spec_x.n_complex_pairs
        one_pair = spec_z.n_coincident_real_pairs == 1
        dec = spec_z.n_complex_pairs == max(0, n - 1)
        return {
            "trial": trial,
            "orbit_before": f"ncomplex={n}",
            "orbit_after": "D3" if (one_pair and dec) else "other",
            "delta_before": None,
            "delta_after": None,
            "delta_after_scaled": None,
            "psi": result.psi,
            "eigen_gap": None,
            "mlrank": "",
            "converged": result.converged,
            "coincident_pairs": spec_z.n_coincident_real_pairs,
            "complex_before": n,
            "complex_after": spec_z.n_complex_pairs,
        }

    rows, reasons, failures = _collect(_run_trials(trials, worker, threads))
    consistent = coincident_hits = decrement_hits = converged_count = 0
    for row in rows:
        if row.get("converged"):
            converged_count += 1
            one_pair = row["coincident_pairs"] == 1
            dec = row["complex_after"] == max(0, row["complex_before"] - 1)
            coincident_hits += one_pair
            decrement_hits += dec
            consistent += one_pair and dec
        elif "converged" in row:
            reasons.append(
                f"trial {row['trial']}: alternating least squares did not converge")
    n_conv = max(1, converged_count)
    extras = (
        ("p", p),
        ("converged", converged_count),
        ("coincident_pair_fraction", coincident_hits / n_conv),
        ("complex_decrement_fraction", decrement_hits / n_conv),
        ("consistent_fraction", consistent / n_conv),
    )
    return _aggregate("pxp2", trials, seed, rows, failures, reasons, extras=extras)


def write_trial_csv(stats: ExperimentStats, path) -> None:
    """Dump per-trial rows: trial, seed, orbits, deltas, psi, gap, mlrank."""
    fields = ["trial", "seed", "orbit_before", "orbit_after", "delta_before",
              "delta_after", "psi", "eigen_gap", "mlrank"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in stats.rows:
            writer.writerow([row.get("trial"), stats.seed, row.get("orbit_before"),
                             row.get("orbit_after"), repr(row.get("delta_before")),
                             repr(row.get("delta_after")), repr(row.get("psi")),
                             repr(row.get("eigen_gap")), row.get("mlrank")])


# ---------------------------------------------------------------------------
# deterministic checks for the degenerate-orbit propositions
# ---------------------------------------------------------------------------

def _diagonal_slab_entries(t: Tensor222, tol: float):
    a_, b_, c_, d_, e_, f_, g_, h_ = t.entries
    scale = max(abs(v) for v in t.entries)
    if scale == 0.0:
        return None
    if max(abs(b_), abs(c_), abs(f_), abs(g_)) > tol * scale:
        return None
    return a_, d_, e_, h_


def check_degenerate_props(X, tol: float = 1e-9) -> DeflationReport:
    """Verify the deterministic deflation statements for degenerate inputs.

    D1 deflates to D0; the D2 family deflates to D1; diagonal-slab rank-2
    tensors deflate to D1, with the tie multiplicity reported when both
    diagonal pairs carry equal weight (and the extra closed-form family
    counted when ah = de).
    """
    t = X if isinstance(X, Tensor222) else Tensor222(X)
    label = classify(t, tol)
    diag = _diagonal_slab_entries(t, tol)
    if label.orbit == "D1" or (diag is None and label.orbit in ("D2", "D2p", "D2pp")):
        residual, report = deflate_once(t, tol)
        expected = "D0" if label.orbit == "D1" else "D1"
        if report.orbit_after.orbit != expected:
            raise RuntimeError(
                f"{label.orbit} input deflated to {report.orbit_after.orbit}, "
                f"expected {expected}")
        return report
    if diag is None:
        raise DomainError(
            f"check_degenerate_props applies to D1, the D2 family, or "
            f"diagonal-slab rank-2 input; got orbit {label.orbit}")
    a_, d_, e_, h_ = diag
    lead = a_ * a_ + e_ * e_
    tail = d_ * d_ + h_ * h_
    scale_sq = max(lead, tail)
    candidates = [
        Tensor222.from_entries(0, 0, 0, d_, 0, 0, 0, h_),   # keep the (d, h) pair
        Tensor222.from_entries(a_, 0, 0, 0, e_, 0, 0, 0),   # keep the (a, e) pair
    ]
    psis = [frobenius_norm_sq(Tensor222(t.array - c.array)) for c in candidates]
    family = abs(lead - tail) <= tol * max(1.0, scale_sq) and \
        abs(a_ * h_ - d_ * e_) <= tol * max(1.0, np.sqrt(scale_sq)) ** 2
    if family:
        y1, y2 = 1.0, 1.0
        nf = y1 * y1 + y2 * y2
        fam = Tensor222.from_entries(y1 * y1 * a_, y1 * y2 * a_, y1 * y2 * d_, y2 * y2 * d_,
                                     y1 * y1 * e_, y1 * y2 * e_, y1 * y2 * h_, y2 * y2 * h_)
        fam = Tensor222(fam.array / nf)
        candidates.append(fam)
        psis.append(frobenius_norm_sq(Tensor222(t.array - fam.array)))
    best_idx = int(np.argmin(psis))
    best_psi = psis[best_idx]
    ties = sum(1 for p in psis if p <= best_psi + 1e-9 * (1.0 + best_psi))
    residual = Tensor222(t.array - candidates[best_idx].array)
    scale = float(np.max(np.abs(t.array)))
    after = classify(residual, max(tol, 1e-9), zero_scale=scale)
    if after.orbit != "D1":
        raise RuntimeError(f"diagonal-slab input deflated to {after.orbit}, expected D1")
    return DeflationReport(
        orbit_before=label, orbit_after=after,
        delta_before=hyperdet(t), delta_after=hyperdet(residual),
        pencil_before=_pencil_or_none(t, 1e-6),
        pencil_after=_pencil_or_none(residual, 1e-6),
        residual_mlrank=multilinear_rank(residual.array, tol),
        psi=float(best_psi), ties=int(ties))
