"""
Normalized restrictions stay within 3 lambda
============================================

A lambda-gapped module only has maps across gaps of size lambda, so there is no
single barcode.  Each normalized sequence gives a totally ordered restriction,
and any two of those barcodes are at bottleneck distance at most 3 lambda.
This script samples modules and sequences and shows the distances.
"""

import itertools
from fractions import Fraction

from gapped_persistence import (barcode, bottleneck_distance, check_gapped,
                                gapped_spectral_invariant, restrict,
                                restriction_spectral_invariant)
from gapped_persistence.random_modules import (progression_grid, rng_from_env, quiet_chain,
                                               random_gapped_module, random_normalized_sequence,
                                               spectrum_below)

rng = rng_from_env()
lam = Fraction(1)

# Lattice of step lam/3 plus one progression nudged off the lattice, so
# sequences have real choices to make.
grid = progression_grid(rng, lam, 3, 2, 6, 1)
chain = quiet_chain(rng, grid[0] + 2 * lam, grid[-1] - 2 * lam, 8, 4)
gm = check_gapped(random_gapped_module(rng, lam, grid, spectrum_below(grid, lam / 9),
                                       chain=chain))
print(f"{len(grid)} grid points, dims {list(gm.dims)}, colimit dim {gm.colimit_dim}")

seqs = [random_normalized_sequence(rng, gm) for _ in range(4)]
for s in seqs:
    # the progression offset is tiny, so print decimals
    print("sequence:", " ".join(f"{float(v):+.4f}" for v in s.values))

# Pairwise distances between the restriction barcodes
bcs = [barcode(restrict(gm, s)) for s in seqs]
for (i, x), (j, y) in itertools.combinations(enumerate(bcs), 2):
    d = bottleneck_distance(x, y)
    print(f"d(B{i}, B{j}) = {d}  ({float(d / lam):.3f} lambda)")

# Restricting along a sequence and then taking c gives the same value as the
# image test on the whole gapped module, class by class.
print("class, image test, best restriction")
for a in itertools.product((0, 1), repeat=gm.colimit_dim):
    if any(a):
        print(a, gapped_spectral_invariant(gm, a), restriction_spectral_invariant(gm, a))
