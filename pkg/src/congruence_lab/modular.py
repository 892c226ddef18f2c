"""Conjugacy classes of hyperbolic elements of SL2(Z) via indefinite forms.

A hyperbolic ``[[a, b], [c, d]]`` is sent to the binary quadratic form
``(c, d - a, -b)`` of discriminant ``tr^2 - 4``; SL2(Z)-conjugation becomes
proper equivalence of forms, and proper equivalence classes are the cycles
of reduced forms under the reduction operator ``rho``.
"""
from __future__ import annotations

import csv
import enum
import os
import threading
from dataclasses import dataclass
from functools import reduce
from math import gcd, isqrt
from pathlib import Path
from typing import Iterator

from .exact import IntMat2


class ElementKind(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


def kind_of_trace(t) -> ElementKind:
    if abs(t) < 2:
        return ElementKind.ELLIPTIC
    if abs(t) == 2:
        return ElementKind.PARABOLIC
    return ElementKind.HYPERBOLIC


def _require_sl2(m: IntMat2):
    if m.det() != 1:
        raise ValueError(f"{m} has determinant {m.det()}, not 1")


def classify(m: IntMat2) -> ElementKind:
    _require_sl2(m)
    return kind_of_trace(m.trace())


def _require_hyperbolic(m: IntMat2):
    _require_sl2(m)
    if abs(m.trace()) <= 2:
        raise ValueError(f"{m} is not hyperbolic (trace {m.trace()})")


# -- forms -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def content(self) -> int:
        return gcd(gcd(self.A, self.B), self.C)

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def act(self, g: IntMat2) -> "BinaryQuadraticForm":
        """The form ``f(g.a x + g.b y, g.c x + g.d y)``."""
        A, B, C = self.A, self.B, self.C
        a, b, c, d = g.entries()
        return BinaryQuadraticForm(
            A * a * a + B * a * c + C * c * c,
            2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
            A * b * b + B * b * d + C * d * d,
        )

    def is_reduced(self) -> bool:
        return is_reduced(self)

    def __repr__(self):
        return f"({self.A}, {self.B}, {self.C})"


def _lt_sqrt(x: int, D: int) -> bool:
    """``x < sqrt(D)`` for a non-square ``D > 0``."""
    return x < 0 or x * x < D


def _gt_sqrt(x: int, D: int) -> bool:
    return x > 0 and x * x > D


def _check_discriminant(D: int):
    if D <= 0:
        raise ValueError(f"discriminant {D} is not positive")
    r = isqrt(D)
    if r * r == D:
        raise ValueError(f"discriminant {D} is a perfect square")


def matrix_to_form(m: IntMat2) -> BinaryQuadraticForm:
    _require_hyperbolic(m)
    return BinaryQuadraticForm(m.c, m.d - m.a, -m.b)


def form_to_matrix(f: BinaryQuadraticForm, t: int) -> IntMat2:
    """Inverse of :func:`matrix_to_form` on matrices of trace ``t``."""
    if f.discriminant != t * t - 4:
        raise ValueError(f"{f} has discriminant {f.discriminant}, expected {t * t - 4}")
    return IntMat2((t - f.B) // 2, -f.C, f.A, (t + f.B) // 2)


def _normalize_b(B: int, C: int, D: int) -> int:
    """The ``B' = -B mod 2|C|`` used by rho."""
    m = 2 * abs(C)
    r = isqrt(D)
    if abs(C) > r:
        # B' in (-|C|, |C|]
        Bp = (-B) % m
        if Bp > abs(C):
            Bp -= m
        return Bp
    # B' in (sqrt(D) - 2|C|, sqrt(D)); r < sqrt(D) < r + 1
    Bp = (-B) % m
    Bp += ((r - Bp) // m) * m
    return Bp


def rho(f: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """One reduction step ``(A, B, C) -> (C, B', (B'^2 - D) / 4C)``."""
    D = f.discriminant
    Bp = _normalize_b(f.B, f.C, D)
    return BinaryQuadraticForm(f.C, Bp, (Bp * Bp - D) // (4 * f.C))



def is_reduced(f: BinaryQuadraticForm) -> bool:
    """``0 < B < sqrt(D)`` and ``sqrt(D) - B < 2|A| < sqrt(D) + B``."""
    D, A, B = f.discriminant, abs(f.A), f.B
    return B > 0 and _lt_sqrt(B, D) and _gt_sqrt(2 * A + B, D) and _lt_sqrt(2 * A - B, D)


def reduce_form(f: BinaryQuadraticForm) -> BinaryQuadraticForm:
    _check_discriminant(f.discriminant)
    while not is_reduced(f):
        f = rho(f)
    return f


def reduce_cycle(f: BinaryQuadraticForm) -> tuple[BinaryQuadraticForm, ...]:
    """The rho-cycle of reduced forms properly equivalent to ``f``.

    Rotated to start at its smallest form, so two forms are properly
    equivalent iff their cycles are equal.
    """
    start = reduce_form(f)
    cycle = [start]
    g = rho(start)
    while g != start:
        cycle.append(g)
        g = rho(g)
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def forms_equivalent(f: BinaryQuadraticForm, g: BinaryQuadraticForm) -> bool:
    return f.discriminant == g.discriminant and reduce_cycle(f) == reduce_cycle(g)


def reduced_forms(D: int) -> list[BinaryQuadraticForm]:
    """All reduced forms of discriminant ``D`` (any content), sorted."""
    _check_discriminant(D)
    r = isqrt(D)
    out = []
    for B in range(1, r + 1):
        if (B - D) % 2:
            continue
        n = (D - B * B) // 4  # = -A*C > 0
        for A in range(1, n + 1):
            if n % A:
                continue
            if _gt_sqrt(2 * A + B, D) and _lt_sqrt(2 * A - B, D):
                out.append(BinaryQuadraticForm(A, B, -n // A))
                out.append(BinaryQuadraticForm(-A, B, n // A))
    return sorted(out)


def form_cycles(D: int) -> list[tuple[BinaryQuadraticForm, ...]]:
    """Partition the reduced forms of discriminant ``D`` into rho-cycles."""
    seen: set[BinaryQuadraticForm] = set()
    cycles = []
    for f in reduced_forms(D):
        if f in seen:
            continue
        cyc = reduce_cycle(f)
        seen.update(cyc)
        cycles.append(cyc)
    return cycles


# -- primitivity -------------------------------------------------------------


def _trace_powers(s: int, limit: int) -> Iterator[tuple[int, int, int]]:
    """Yield ``(k, tr(b^k), U_{k-1})`` for a trace-``s`` element ``b``, ``k >= 2``.

    ``tr(b^k) = 2 T_k(s/2)``; ``U`` is the companion Chebyshev sequence with
    ``b^k = U_{k-1} b - U_{k-2}``.  Stops once the trace exceeds ``limit``.
    """
    v_prev, v = 2, s
    u_prev, u = 1, s  # U_0, U_1
    k = 1
    while True:
        v_prev, v = v, s * v - v_prev
        k += 1
        if abs(v) > limit:
            return
        yield k, v, u
        u_prev, u = u, s * u - u_prev


def find_root(m: IntMat2):
    """Some ``(beta, k)`` with ``k >= 2`` and ``beta^k = +-m``, or None.

    A root commutes with ``m``, so it is ``u + v m`` for rationals ``u, v``;
    its trace ``s`` must satisfy ``2 T_k(s/2) = |tr m|``, and then
    ``v = +-1/U_{k-1}(s)``.  Every candidate is checked by an exact power.
    """
    _require_hyperbolic(m)
    t = m.trace()
    T = abs(t)
    s = 3
    while s * s - 2 <= T:
        for k, vk, uk in _trace_powers(s, T):
            if vk != T:
                continue
            for sigma in (1, -1):
                for num in (1, -1):
                    # beta = (w I + num m) / uk with tr(beta) = sigma*s
                    twice_w = sigma * s * uk - num * t
                    if twice_w % 2:
                        continue
                    w = twice_w // 2
                    ents = [num * m.a + w, num * m.b, num * m.c, num * m.d + w]
                    if any(e % uk for e in ents):
                        continue
                    beta = IntMat2(*(e // uk for e in ents))
                    if beta.det() != 1:
                        continue
                    p = beta ** k
                    if p == m or p == -m:
                        return beta, k
        s += 1
    return None


def is_primitive(m: IntMat2) -> bool:
    """True iff ``m`` is not ``+-beta^k`` for any ``beta`` in SL2(Z), ``k >= 2``."""
    return find_root(m) is None


# -- class counts --------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyClass:
    trace: int
    representative: IntMat2
    canonical_cycle: tuple[BinaryQuadraticForm, ...]
    primitive: bool

    def __eq__(self, other):
        if not isinstance(other, ConjugacyClass):
            return NotImplemented
        return self.canonical_cycle == other.canonical_cycle

    def __hash__(self):
        return hash(self.canonical_cycle)


def conjugacy_class(m: IntMat2) -> ConjugacyClass:
    cyc = reduce_cycle(matrix_to_form(m))
    return ConjugacyClass(m.trace(), m, cyc, is_primitive(m))


def hyperbolic_classes(t: int) -> list[ConjugacyClass]:
    """All SL2(Z)-classes of trace ``t >= 3``; equivalently PSL2(Z)-classes of trace ``+-t``."""
    if t <= 2:
        raise ValueError(f"trace {t} has no hyperbolic classes; need t >= 3")
    out = []
    for cyc in form_cycles(t * t - 4):
        rep = form_to_matrix(cyc[0], t)
        out.append(ConjugacyClass(t, rep, cyc, is_primitive(rep)))
    return out


@dataclass(frozen=True)
class Mu0Count:
    trace: int
    mu0: int  # PSL2(Z) classes of trace +-t
    discriminant: int
    n_cycles: int  # all classes, primitive or not

    @property
    def mu0_sl2(self) -> int:
        """SL2(Z) classes of trace +t or -t (each PSL2 class lifts to two)."""
        return 2 * self.mu0


def mu0_count(t: int) -> Mu0Count:
    classes = hyperbolic_classes(t)
    return Mu0Count(t, sum(c.primitive for c in classes), t * t - 4, len(classes))


def mu0(t: int) -> int:
    """Number of primitive PSL2(Z)-conjugacy classes of trace ``+-t``."""
    return mu0_count(t).mu0


# -- cache ---------------------------------------------------------------------

CACHE_HEADER = ["trace", "mu0", "discriminant", "n_cycles"]
CACHE_ENV = "CONGRUENCE_LAB_CACHE"


def default_cache_path() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "congruence_lab" / "mu0.csv"


class Mu0Cache:
    """Trace -> Mu0Count table persisted as CSV.

    Reads go through a plain dict; insertions and file writes are serialized
    by a lock.  A file with a wrong header or malformed row is discarded and
    recomputed, never partially reused.
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self._rows: dict[int, Mu0Count] = {}
        self._lock = threading.Lock()
        self.discarded = False
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        try:
            with open(self.path, newline="") as fh:
                reader = csv.reader(fh)
                if next(reader, None) != CACHE_HEADER:
                    raise ValueError("bad header")
                rows = {}
                for rec in reader:
                    t, m, d, n = (int(x) for x in rec)
                    if d != t * t - 4 or m < 0 or n < m:
                        raise ValueError(f"inconsistent row {rec}")
                    rows[t] = Mu0Count(t, m, d, n)
        except (ValueError, csv.Error):
            self.discarded = True
            return
        self._rows = rows

    def __contains__(self, t: int) -> bool:
        return t in self._rows

    def get(self, t: int) -> Mu0Count:
        row = self._rows.get(t)
        if row is None:
            row = mu0_count(t)
            with self._lock:
                self._rows.setdefault(t, row)
        return row

    def many(self, traces) -> list[Mu0Count]:
        rows = [self.get(t) for t in traces]
        self.save()
        return rows

    def save(self):
        if self.path is None:
            return
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            with open(tmp, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CACHE_HEADER)
                for t in sorted(self._rows):
                    r = self._rows[t]
                    w.writerow([r.trace, r.mu0, r.discriminant, r.n_cycles])
            os.replace(tmp, self.path)
