# Rank-1 deflation does not behave like the matrix SVD.
#
# Subtracting a best rank-1 approximation from a generic 2x2x2 tensor
# produces a residual whose slab pencil has a defective double
# eigenvalue: the residual sits on the boundary orbit D3 and has rank 3.
# Starting from a rank-2 tensor, deflation *increases* the rank.

import numpy as np

import tensorbit as tb

rng = np.random.default_rng(12)
X = tb.Tensor222.from_flat(rng.standard_normal(8))

residual, report = tb.deflate_once(X)
print(f"input orbit:    {report.orbit_before.orbit} "
      f"(rank {'2' if report.orbit_before.orbit == 'G2' else '3'}), "
      f"delta = {report.delta_before:+.4f}")
print(f"residual orbit: {report.orbit_after.orbit} (rank 3), "
      f"delta = {report.delta_after:+.2e}")
print(f"residual pencil: {report.pencil_after.kind}, "
      f"double eigenvalue {report.pencil_after.values[0]:.6f}")
print(f"residual multilinear rank: {tuple(report.residual_mlrank)}")

print()
print("iterated deflation keeps landing on the boundary:")
current = X
for step in range(4):
    current, rep = tb.deflate_once(current)
    norm = tb.frobenius_norm_sq(current)
    print(f"  step {step + 1}: psi = {rep.psi:10.6f}, orbit {rep.orbit_after.orbit}, "
          f"remaining norm^2 = {norm:.6f}")

print()
print("degenerate orbits do deflate cleanly (the matrix-like cases):")
for entries, name in [((2.5, 0, 0, 0, 0, 0, 0, 0), "rank-1 input"),
                      ((3.0, 0, 0, 1.5, 0, 0, 0, 0), "scaled diagonal pair")]:
    rep = tb.check_degenerate_props(tb.Tensor222.from_entries(*entries))
    print(f"  {name}: {rep.orbit_before.orbit} -> {rep.orbit_after.orbit}, "
          f"ties = {rep.ties}")

print()
print("a tensor with an orthogonal slab pencil has infinitely many best")
print("rank-1 approximations, all with the same criterion value:")
khl = tb.Tensor222.from_entries(1, 0, 0, 1, 0, -1, 1, 0)
print(f"  detect_infinite_best -> {tb.detect_infinite_best(khl)}")
for z2 in (0.0, 0.7, -2.0):
    y = np.array([1.0, 0.3])
    z = np.array([1.0, z2])
    x = tb.optimal_x(khl, y, z)
    print(f"  psi at z2 = {z2:+.1f}: {tb.psi(khl, tb.Rank1Term(x, y, z)):.12f}")
