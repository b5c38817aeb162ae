"""Hilbert data and homological invariants of quotients ``R/I``."""

from __future__ import annotations

from .hilbert import HilbertSeries
from .ideals import Ideal, height as _height
from .resolution import BettiTable, FreeComplex, minimal_resolution, schreyer_frame

__all__ = [
    "hilbert_numerator",
    "hilbert_function",
    "dim",
    "height",
    "multiplicity",
    "free_resolution",
    "betti",
    "pd",
    "depth",
    "is_cm",
    "euler_check",
]


def hilbert_numerator(I: Ideal) -> HilbertSeries:
    """Hilbert series of ``R/I`` from the initial ideal."""
    return I.hilbert


def hilbert_function(I: Ideal, n: int) -> int:
    return I.hilbert(n)


def dim(I: Ideal) -> int:
    """Krull dimension of ``R/I`` (``-1`` for the unit ideal)."""
    return I.hilbert.dim


def height(I: Ideal) -> int:
    """``nvars - dim``; the unit ideal is given height ``nvars``."""
    return _height(I)


def multiplicity(I: Ideal) -> int:
    if I.is_unit():
        raise ValueError("the unit ideal has no multiplicity")
    return I.hilbert.multiplicity


def _frame(I: Ideal):
    if I.is_unit():
        raise ValueError("R/I is zero for the unit ideal")
    cached = I._frame
    if cached is None:
        cached = schreyer_frame(I.ring, list(I.gb) if not I.is_zero() else [])
        I._frame = cached
    return cached


def betti(I: Ideal) -> BettiTable:
    """Graded Betti numbers of ``R/I`` (ranks of the Tor modules)."""
    cached = I._betti
    if cached is None:
        cached = _frame(I).betti()
        I._betti = cached
    return cached


def free_resolution(I: Ideal) -> tuple[FreeComplex, BettiTable]:
    """Minimal graded free resolution of ``R/I`` and its Betti table."""
    C = minimal_resolution(_frame(I).complex())
    return C, C.betti()


def pd(I: Ideal) -> int:
    return betti(I).pd


def depth(I: Ideal) -> int:
    """``nvars - pd`` (Auslander–Buchsbaum)."""
    return I.ring.nvars - pd(I)


def is_cm(I: Ideal) -> bool:
    return pd(I) == height(I)


def euler_check(I: Ideal) -> bool:
    """Alternating Betti sum equals the Hilbert numerator."""
    return betti(I).numerator() == list(I.hilbert.numerator)
