# Orbit classification of 2x2x2 tensors.
#
# Real 2x2x2 tensors split into eight orbits under invertible transforms
# applied in each mode.  Degenerate orbits are recognized by multilinear
# rank; the three full-rank orbits are separated by the sign of the
# hyperdeterminant: positive for G2 (rank 2), negative for G3 (rank 3),
# zero on the boundary orbit D3.

import numpy as np

import tensorbit as tb

print("canonical representatives and their classification")
for orbit in ("D0", "D1", "D2", "D2p", "D2pp", "G2", "D3", "G3"):
    t = tb.canonical_form(orbit)
    label = tb.classify(t)
    mlr = tb.multilinear_rank(t)
    print(f"  {orbit:4} -> {label.orbit:4}  multilinear rank {tuple(mlr)}  "
          f"delta = {tb.hyperdet(t):+.1f}")

print()
print("the classification is invariant under invertible transforms")
rng = np.random.default_rng(0)
t = tb.canonical_form("G3")
for k in range(3):
    mats = rng.standard_normal((3, 2, 2))
    moved = tb.multilinear_transform(t, *mats)
    print(f"  random transform {k}: orbit {tb.classify(moved).orbit}, "
          f"delta = {tb.hyperdet(moved):+.4f} (sign preserved)")

print()
print("slab-pencil eigenstructure tells the same story")
examples = [
    ("distinct real eigenvalues -> rank 2 (G2)", tb.Tensor222.from_entries(0, 1, 1, 0, 1, 0, 0, 2)),
    ("complex eigenvalues       -> rank 3 (G3)", tb.Tensor222.from_entries(1, 0, 0, 1, 0, -2, 1, 0)),
]
for text, t in examples:
    pencil = tb.pencil_eigs(t, "21")
    print(f"  {text}: pencil kind {pencil.kind}, classify -> {tb.classify(t).orbit}")
