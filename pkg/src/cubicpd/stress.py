"""Randomized falsification runs on ideals generated by three cubics.

Each trial draws three cubic forms, computes height, multiplicity and
projective dimension of ``R/I`` and checks the known bounds:

* height 3: ``I`` is a complete intersection, so ``pd = 3``;
* height 2 with three minimal generators: ``e <= 7`` and ``pd <= 5``,
  ``e = 7`` forces ``pd = 2``, and ``pd(R/I) <= pd(R/L) + 1`` for a link
  ``L = C : I`` by two cubics;
* two generators sharing a factor (the ``shared_factor`` family):
  ``pd <= 4``;
* height 2 with two minimal generators: a complete intersection, ``pd = 2``;
* height at most 1: recorded as ``skipped_height``.

Uniform trials include every cubic monomial with a fixed probability.  The
structured families put the triple inside a height-2 ideal so that the
height-2 branch is exercised.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import _budget
from .ideals import Ideal, NoCompleteIntersection, colon, find_complete_intersection, height
from .invariants import euler_check, multiplicity, pd
from .polyring import FieldSpec, PolyRing, Polynomial

__all__ = [
    "TrialConfig",
    "TrialRecord",
    "FAMILIES",
    "STRUCTURED",
    "make_ring",
    "random_form",
    "random_cubic",
    "run_trial",
    "run_trials",
    "write_csv",
    "write_generators",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("trial", "seed", "nvars", "char", "ht", "e", "pd", "depth", "verdict", "elapsed_ms")
VERDICTS = ("ok", "bound_violation", "skipped_height", "timeout")


@dataclass(frozen=True)
class TrialConfig:
    nvars: int = 6
    char: int = 32003
    trials: int = 100
    seed: int = 0
    density: float = 0.25
    budget: float | None = 10.0
    family: str = "uniform"

    def __post_init__(self):
        if not 4 <= self.nvars <= 12:
            raise ValueError(f"nvars must be between 4 and 12, got {self.nvars}")
        if self.char <= 0:
            raise ValueError("stress trials need a prime field")
        FieldSpec.prime(self.char)
        if not 0 < self.density <= 1:
            raise ValueError(f"density must lie in (0, 1], got {self.density}")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if self.family not in FAMILIES and self.family != "structured":
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(sorted(FAMILIES))} or structured")


@dataclass
class TrialRecord:
    trial: int
    seed: int
    nvars: int
    char: int
    generators: tuple[str, ...]
    family: str = "uniform"
    ht: int | None = None
    e: int | None = None
    pd: int | None = None
    depth: int | None = None
    verdict: str = "ok"
    violations: list[str] = field(default_factory=list)
    euler: bool | None = None  # Betti numbers match the Hilbert numerator
    elapsed_ms: int = 0

    def row(self) -> list:
        return [self.trial, self.seed, self.nvars, self.char,
                "" if self.ht is None else self.ht,
                "" if self.e is None else self.e,
                "" if self.pd is None else self.pd,
                "" if self.depth is None else self.depth,
                self.verdict, self.elapsed_ms]

    def as_dict(self) -> dict:
        return {
            "trial": self.trial, "seed": self.seed, "nvars": self.nvars, "char": self.char,
            "family": self.family, "generators": list(self.generators), "ht": self.ht, "e": self.e,
            "pd": self.pd, "depth": self.depth, "verdict": self.verdict,
            "violations": list(self.violations), "euler": self.euler, "elapsed_ms": self.elapsed_ms,
        }


# -- sampling ----------------------------------------------------------
def make_ring(nvars: int, char: int = 32003) -> PolyRing:
    return PolyRing([f"x{i}" for i in range(1, nvars + 1)], FieldSpec.prime(char))


def random_form(rng: random.Random, ring: PolyRing, degree: int, density: float = 1.0,
                *, retries: int = 100) -> Polynomial:
    """A nonzero form of ``degree``: each monomial is kept with probability
    ``density`` and gets a uniform nonzero coefficient."""
    from .ideals import monomials_of_degree

    monos = monomials_of_degree(ring, degree)
    for _ in range(retries):
        terms = {m: ring.field.random_nonzero(rng) for m in monos if rng.random() < density}
        if terms:
            return Polynomial(ring, terms)
    raise ValueError(f"no nonzero form drawn after {retries} attempts at density {density}")


def random_cubic(rng: random.Random, ring: PolyRing, density: float = 1.0) -> Polynomial:
    return random_form(rng, ring, 3, density)


def _uniform(rng, R, density):
    return [random_cubic(rng, R, density) for _ in range(3)]


def _linear_pair(rng, R, density):
    # three cubics inside (l1, l2)
    l1, l2 = random_form(rng, R, 1), random_form(rng, R, 1)
    return [l1 * random_form(rng, R, 2, density) + l2 * random_form(rng, R, 2, density) for _ in range(3)]


def _linear_quadric(rng, R, density):
    # three cubics inside (l, q)
    l, q = random_form(rng, R, 1), random_form(rng, R, 2, density)
    return [l * random_form(rng, R, 2, density) + q * random_form(rng, R, 1) for _ in range(3)]


def _shared_factor(rng, R, density):
    # two cubics with a common linear factor and a third one through it
    l = random_form(rng, R, 1)
    f = [l * random_form(rng, R, 2, density), l * random_form(rng, R, 2, density)]
    return f + [random_cubic(rng, R, density)]


def _monomial_generic(rng, R, density):
    # (s^3, t^3, s^2 a + s t b + t^2 c) for two general linear forms s, t
    s, t = random_form(rng, R, 1), random_form(rng, R, 1)
    a, b, c = (random_form(rng, R, 1, density) for _ in range(3))
    return [s ** 3, t ** 3, s * s * a + s * t * b + t * t * c]


def _primary_plus_prime(rng, R, density):
    # cubics in (x1, x2)^2 plus a transversal linear prime (x3, x4)
    x = R.gens()
    P = (x[0], x[1])
    Q = (x[2], x[3])
    out = []
    for _ in range(3):
        f = R.zero()
        for g in (P[0] * P[0], P[0] * P[1], P[1] * P[1]):
            for h in Q:
                if rng.random() < max(density, 0.5):
                    f = f + g * h.scale(R.field.random_nonzero(rng))
        if f.is_zero():
            f = P[0] * P[0] * Q[0]
        out.append(f)
    return out


def _linked_ci(rng, R, density):
    # C : (l, q) for two cubics C inside (l, q); generated by three cubics
    l, q = random_form(rng, R, 1), random_form(rng, R, 2, density)
    C = [l * random_form(rng, R, 2, density) + q * random_form(rng, R, 1) for _ in range(2)]
    gens = colon(Ideal(R, C), Ideal(R, [l, q])).minimal_generators()
    return list(gens) if len(gens) == 3 else C + [l * l * l]


FAMILIES: dict[str, Callable] = {
    "uniform": _uniform,
    "linear_pair": _linear_pair,
    "linear_quadric": _linear_quadric,
    "shared_factor": _shared_factor,
    "monomial_generic": _monomial_generic,
    "primary_plus_prime": _primary_plus_prime,
    "linked_ci": _linked_ci,
}
STRUCTURED = ("linear_pair", "linear_quadric", "shared_factor", "monomial_generic", "primary_plus_prime", "linked_ci")


def _family_for(config: TrialConfig, index: int) -> str:
    if config.family == "structured":
        return STRUCTURED[index % len(STRUCTURED)]
    return config.family


def trial_seeds(master: int, n: int) -> list[int]:
    """Per-trial seeds derived from the master seed."""
    rng = random.Random(master)
    return [rng.getrandbits(48) for _ in range(n)]


# -- evaluation ----------------------------------------------------------
def _link_check(I: Ideal, p: int, seed: int) -> str | None:
    """Compare ``pd(R/I)`` with ``pd(R/L) + 1`` for a link by two cubics."""
    try:
        C = find_complete_intersection(I, [3, 3], seed=seed)
    except NoCompleteIntersection:
        return None
    L = colon(C.ideal(), I)
    if L.is_unit():
        return None
    q = pd(L)
    if p > q + 1:
        return f"pd(R/I) <= pd(R/L) + 1 violated: pd(R/I) = {p}, pd(R/L) = {q}"
    return None


def run_trial(gens: Sequence[Polynomial], *, trial: int = 0, seed: int = 0, budget: float | None = 10.0,
              family: str = "given", link_check: bool = True) -> TrialRecord:
    """Evaluate one triple of forms and check the bounds."""
    R = gens[0].ring
    rec = TrialRecord(trial, seed, R.nvars, R.char, tuple(g.format() for g in gens), family)
    t0 = time.perf_counter()
    try:
        with _budget.deadline(budget):
            I = Ideal(R, list(gens))
            h = height(I)
            rec.ht = h
            if h <= 1:
                rec.e = multiplicity(I) if h >= 0 and not I.is_unit() else None
                rec.verdict = "skipped_height"
            else:
                e = multiplicity(I)
                p = pd(I)
                rec.e, rec.pd, rec.depth = e, p, R.nvars - p
                rec.euler = euler_check(I)
                rec.violations = _violations(I, h, e, p, seed, link_check, family == "shared_factor")
                if not rec.euler:
                    rec.violations.append("alternating Betti sum differs from the Hilbert numerator")
                rec.verdict = "bound_violation" if rec.violations else "ok"
    except _budget.BudgetExceeded:
        rec.verdict = "timeout"
    rec.elapsed_ms = int(round((time.perf_counter() - t0) * 1000))
    return rec


def _violations(I: Ideal, h: int, e: int, p: int, seed: int, link_check: bool,
                common_factor: bool = False) -> list[str]:
    out = []
    if h == 3:
        if p != 3:
            out.append(f"ht = 3 => pd(R/I) = 3 violated: pd(R/I) = {p}")
        return out
    if h != 2:
        return out
    ngens = len(I.minimal_generators())
    if ngens < 3:
        if p != 2:
            out.append(f"complete intersection of height 2 => pd(R/I) = 2 violated: pd(R/I) = {p}")
        return out
    if e > 7:
        out.append(f"ht = 2 => e(R/I) <= 7 violated: e(R/I) = {e}")
    if p > 5:
        out.append(f"ht = 2 => pd(R/I) <= 5 violated: pd(R/I) = {p}")
    if e == 7 and p != 2:
        out.append(f"e(R/I) = 7 => pd(R/I) = 2 violated: pd(R/I) = {p}")
    if common_factor and p > 4:
        out.append(f"two generators with a common factor => pd(R/I) <= 4 violated: pd(R/I) = {p}")
    if link_check:
        msg = _link_check(I, p, seed)
        if msg:
            out.append(msg)
    return out


def _run_index(args) -> TrialRecord:
    config, index, seed = args
    R = make_ring(config.nvars, config.char)
    fam = _family_for(config, index)
    rng = random.Random(seed)
    gens = FAMILIES[fam](rng, R, config.density)
    return run_trial(gens, trial=index, seed=seed, budget=config.budget, family=fam)


def run_trials(config: TrialConfig, *, jobs: int = 1,
               progress: Callable[[TrialRecord], None] | None = None) -> tuple[list[TrialRecord], list[TrialRecord]]:
    """Run ``config.trials`` trials; returns ``(records, violations)``.

    Records are ordered by trial index whatever the degree of parallelism.
    """
    seeds = trial_seeds(config.seed, config.trials)
    tasks = [(config, i, s) for i, s in enumerate(seeds)]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = []
            for r in pool.map(_run_index, tasks, chunksize=4):
                records.append(r)
                if progress:
                    progress(r)
    else:
        records = []
        for t in tasks:
            r = _run_index(t)
            records.append(r)
            if progress:
                progress(r)
    return records, [r for r in records if r.verdict == "bound_violation"]


# -- output ----------------------------------------------------------------
def write_csv(records: Sequence[TrialRecord], path) -> None:
    """One row per trial under the header ``CSV_COLUMNS``."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in records:
                w.writerow(r.row())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_generators(records: Sequence[TrialRecord], path, *, only_violations: bool = True) -> int:
    """Dump generators keyed by trial index; returns the number of entries."""
    n = 0
    try:
        with open(path, "w") as fh:
            for r in records:
                if only_violations and r.verdict != "bound_violation":
                    continue
                fh.write(f"{r.trial}\t{r.family}\t{', '.join(r.generators)}")
                for v in r.violations:
                    fh.write(f"\t{v}")
                fh.write("\n")
                n += 1
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return n
