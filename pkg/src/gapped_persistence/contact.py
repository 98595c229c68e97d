"""Envelope model of contact Hamiltonians and the quasi-state arithmetic.

A Hamiltonian ``h_t`` is represented only by piecewise-constant (in time)
bounds ``max_M h_t`` and ``min_M h_t`` on a partition of ``[0, 1]``, plus a
declared spectrum.  Everything computed here factors through those numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence


@dataclass(frozen=True)
class ContactEnvelope:
    breakpoints: tuple
    max_env: tuple
    min_env: tuple
    spectrum: tuple = ()

    def __post_init__(self):
        for name in ("breakpoints", "max_env", "min_env", "spectrum"):
            object.__setattr__(self, name, tuple(Fraction(x) for x in getattr(self, name)))
        bp = self.breakpoints
        if len(bp) < 2 or bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if not len(self.max_env) == len(self.min_env) == len(bp) - 1:
            raise ValueError("one max/min value per piece is required")
        if any(hi < lo for hi, lo in zip(self.max_env, self.min_env)):
            raise ValueError("max envelope below min envelope")

    @classmethod
    def constant(cls, value, spectrum=()) -> "ContactEnvelope":
        return cls((0, 1), (value,), (value,), spectrum)

    @property
    def lengths(self) -> tuple:
        return tuple(b - a for a, b in zip(self.breakpoints, self.breakpoints[1:]))

    def piece_at(self, t) -> int:
        """Index of the piece containing ``t`` (pieces are half-open except the last)."""
        for k, b in enumerate(self.breakpoints[1:]):
            if t < b:
                return k
        return len(self.max_env) - 1


def osc(h: ContactEnvelope) -> Fraction:
    return sum(((hi - lo) * w for hi, lo, w in zip(h.max_env, h.min_env, h.lengths)),
               Fraction(0))


def _refined(h: ContactEnvelope, g: ContactEnvelope):
    cuts = sorted(set(h.breakpoints) | set(g.breakpoints))
    for a, b in zip(cuts, cuts[1:]):
        yield b - a, h.piece_at(a), g.piece_at(a)


def osc_pair(h: ContactEnvelope, g: ContactEnvelope) -> Fraction:
    """Integral over time of ``max_M h_t - min_M g_t``."""
    return sum((w * (h.max_env[i] - g.min_env[j]) for w, i, j in _refined(h, g)), Fraction(0))


def m_hg(h: ContactEnvelope, g: ContactEnvelope) -> Fraction:
    return 2 * max(osc_pair(g, h), osc_pair(h, g))


def oscbar(h: ContactEnvelope) -> Fraction:
    return max(hi - lo for hi, lo in zip(h.max_env, h.min_env))


def concatenate(h: ContactEnvelope, g: ContactEnvelope, convention: str = "unit_speed"
                ) -> ContactEnvelope:
    """Run ``h`` on ``[0, 1/2]`` and ``g`` on ``[1/2, 1]``.

    ``convention="unit_speed"`` keeps envelope values (``h_{2t}``), so ``oscbar`` of an
    iterated self-concatenation equals ``oscbar h``.  ``"speed2"`` doubles them,
    which makes ``osc`` additive.  The spectrum of the result is not derivable
    from envelopes and is left empty.
    """
    if convention == "unit_speed":
        factor = 1
    elif convention == "speed2":
        factor = 2
    else:
        raise ValueError(f"unknown convention {convention!r}")
    half = Fraction(1, 2)
    bps = [b * half for b in h.breakpoints] + [half + b * half for b in g.breakpoints[1:]]
    return ContactEnvelope(tuple(bps),
                           tuple(factor * x for x in h.max_env + g.max_env),
                           tuple(factor * x for x in h.min_env + g.min_env))


def iterate(h: ContactEnvelope, k: int, convention: str = "unit_speed") -> ContactEnvelope:
    """Left-nested k-fold concatenation ``h #^ h #^ ... #^ h``."""
    if k < 1:
        raise ValueError("k must be positive")
    out = h
    for _ in range(k - 1):
        out = concatenate(out, h, convention)
    return out


def tilde_c(c, oscbar_h) -> Fraction:
    """Spectral invariant balanced by ``3 * oscbar h`` (subadditive along concatenation)."""
    return c + 3 * Fraction(oscbar_h)


def check_triangle(c_theta, c_eta, c_product, oscbar_h, oscbar_g) -> bool:
    return c_product <= c_theta + c_eta + 3 * max(Fraction(oscbar_h), Fraction(oscbar_g))


class NotSubadditiveError(ValueError):
    def __init__(self, j: int, k: int):
        super().__init__(f"c~_{j + k} > c~_{j} + c~_{k}")
        self.pair = (j, k)


class FeketeBracket(NamedTuple):
    limit: Fraction
    current: Fraction


def first_subadditivity_violation(ctilde: Sequence):
    """First ``(j, k)`` with ``c~_{j+k} > c~_j + c~_k`` (1-based), or ``None``."""
    K = len(ctilde)
    for total in range(2, K + 1):
        for j in range(1, total // 2 + 1):
            k = total - j
            if ctilde[total - 1] > ctilde[j - 1] + ctilde[k - 1]:
                return (j, k)
    return None


def fekete_limit(ctilde: Sequence) -> FeketeBracket:
    """Bracket ``(inf_k c~_k/k, c~_K/K)`` for a subadditive sequence ``c~_1..c~_K``.

    Raises :class:`NotSubadditiveError` naming the first violating pair.
    """
    if not ctilde:
        raise ValueError("empty sequence")
    vals = [Fraction(x) for x in ctilde]
    bad = first_subadditivity_violation(vals)
    if bad is not None:
        raise NotSubadditiveError(*bad)
    ratios = [v / k for k, v in enumerate(vals, start=1)]
    return FeketeBracket(min(ratios), ratios[-1])
