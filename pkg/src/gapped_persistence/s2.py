"""Zero-Hamiltonian gapped module of the unit co-sphere bundle of the round 2-sphere.

All parameters are in units of ``2*pi``: the grid is ``{m + eps : 0 <= m <= M}``
and the Reeb spectrum in the window is ``{0, 1, ..., M}``.  Coefficients are GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .exact import Field, Matrix
from .gapped import GappedModule
from .persistence import COLIMIT, Barcode, Interval

UNIT = "2pi"


def sh_rank(k: int) -> int:
    """Rank of symplectic homology of the co-disk bundle in degree ``k``."""
    if k in (0, 1):
        return 1
    return 2 if k >= 2 else 0


def hf_rank(k: int, m: int) -> int:
    """Rank of HF_k at parameter ``2*pi*m + eps``."""
    if 2 <= k <= 2 * m:
        return 2
    return 1 if k in (0, 1, 2 * m + 1, 2 * m + 2) else 0


@dataclass(frozen=True)
class S2FixtureSpec:
    max_degree: int = 10
    max_m: int = 8
    epsilon: Fraction = Fraction(1, 100)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.max_m < (self.max_degree - 1) // 2 + 2:
            raise ValueError("window too short to see every infinite bar")


def _first_iso(k: int) -> int:
    # the canonical map to SH_k is an isomorphism once 2m > k - 1
    return 1 if k == 1 else (k - 1) // 2 + 1


def build_s2_fixture(spec: S2FixtureSpec, k: int) -> GappedModule:
    """Degree-``k`` module as a 0-gapped module over the window.

    Step maps are coordinate inclusions except the forced zero map from
    ``m = 0`` to ``m = 1`` in degree 1; colimit basis vectors are ordered by
    birth, so ``e_1 = a_k`` and ``e_2 = b_k``.
    """
    if not 1 <= k <= spec.max_degree:
        raise ValueError(f"degree must lie in [1, {spec.max_degree}]")
    f = Field.GF2
    eps, M = spec.epsilon, spec.max_m
    grid = tuple(m + eps for m in range(M + 1))
    dims = tuple(hf_rank(k, m) for m in range(M + 1))
    sh = sh_rank(k)
    maps = {}
    for m in range(M):
        if k == 1 and m == 0:
            maps[(0, 1)] = Matrix.zeros(dims[1], dims[0], f)
        else:
            maps[(m, m + 1)] = Matrix.inclusion(dims[m + 1], dims[m], f)
    colimit = []
    for m in range(M + 1):
        if m >= _first_iso(k):
            colimit.append(Matrix.identity(sh, f))
        elif k == 1:
            colimit.append(Matrix.zeros(sh, dims[m], f))
        else:
            colimit.append(Matrix.inclusion(sh, dims[m], f))
    return GappedModule(Fraction(0), tuple(range(M + 1)), grid, dims, maps, sh,
                        tuple(colimit), f, UNIT)


class S2Reference(NamedTuple):
    barcode: Barcode
    c_a: Fraction
    c_b: Optional[Fraction]


def s2_reference(k: int, epsilon=Fraction(1, 100)) -> S2Reference:
    """Closed-form barcode and spectral invariants of ``a_k`` and ``b_k``.

    Degree 1 also carries the single-point bar ``[eps, eps]``: the rank table
    gives HF_1(eps) rank 1 while the infinite bar starts at ``1 + eps``.
    """
    if k < 1:
        raise ValueError("degree must be at least 1")
    eps = Fraction(epsilon)
    if k == 1:
        bc = Barcode((Interval(eps, eps), Interval(1 + eps, COLIMIT)), UNIT)
        return S2Reference(bc, 1 + eps, None)
    base = (k - 1) // 2
    bc = Barcode((Interval(base + eps, COLIMIT), Interval(base + 1 + eps, COLIMIT)), UNIT)
    return S2Reference(bc, base + eps, base + 1 + eps)


def snap_to_spectrum(value, spectrum, epsilon) -> Optional[Fraction]:
    """``value - epsilon`` when that is a spectrum point, else ``None``."""
    v = Fraction(value) - Fraction(epsilon)
    return v if v in set(Fraction(s) for s in spectrum) else None
