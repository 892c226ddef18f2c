"""Principal congruence subgroups, modular and quaternionic.

Everything here is exact integer arithmetic.  Enumerations are truncated
at a height bound ``H`` (max absolute entry / coordinate) and never claim
more than what lies inside that window.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from math import isqrt

from sympy import isprime, primefactors

from .exact import IntMat2
from .modular import ElementKind, kind_of_trace
from .quaternion import Quaternion, QuaternionAlgebra


class Setting(enum.Enum):
    MODULAR = "modular"
    QUATERNIONIC = "quaternionic"


def check_quaternionic_prime(p: int):
    if not (isinstance(p, int) and p > 2 and isprime(p) and p % 4 == 3):
        raise ValueError(f"p = {p!r} must be a prime congruent to 3 mod 4")


@dataclass(frozen=True)
class CongruenceLevel:
    N: int
    setting: Setting = Setting.MODULAR
    p: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"level N = {self.N} must be at least 2")
        if self.setting is Setting.QUATERNIONIC:
            check_quaternionic_prime(self.p)
        elif self.p is not None:
            raise ValueError("the modular setting takes no prime p")


@dataclass(frozen=True)
class EnumerationWindow:
    height: int

    def __post_init__(self):
        if self.height < 1:
            raise ValueError(f"height bound {self.height} must be >= 1")


def _window(window) -> int:
    return window.height if isinstance(window, EnumerationWindow) else EnumerationWindow(int(window)).height


# -- modular Gamma(N) -----------------------------------------------------------


def in_gamma_n(m: IntMat2, N: int) -> bool:
    if m.det() != 1:
        raise ValueError(f"{m} has determinant {m.det()}, not 1")
    return (m.a - 1) % N == 0 and m.b % N == 0 and m.c % N == 0 and (m.d - 1) % N == 0


def sl2_order_mod(N: int) -> int:
    """``|SL2(Z/NZ)| = N^3 prod_{p | N} (1 - p^-2)``."""
    if N < 2:
        raise ValueError(f"N = {N} must be at least 2")
    order = N**3
    for p in primefactors(N):
        order = order // (p * p) * (p * p - 1)
    return order


def sl2_order_bruteforce(N: int) -> int:
    """Count determinant-one matrices mod ``N`` by direct enumeration."""
    if N < 2:
        raise ValueError(f"N = {N} must be at least 2")
    # number of (a, d) with ad = x, and (b, c) with bc = x - 1, for each residue x
    prod_count = [0] * N
    for u in range(N):
        for v in range(N):
            prod_count[u * v % N] += 1
    return sum(prod_count[x] * prod_count[(x - 1) % N] for x in range(N))


def psl2_index(N: int) -> int:
    """``[PSL2(Z) : image of Gamma(N)]``; ``-I`` is not in Gamma(N) for ``N >= 3``."""
    if N <= 2:
        raise ValueError(f"N = {N}: the PSL2 index formula needs N >= 3")
    return sl2_order_mod(N) // 2


def trace_witness(N: int) -> IntMat2:
    """``[[0, -1], [1, N]]``: determinant 1, trace ``N``."""
    if N <= 2:
        raise ValueError(f"N = {N}: a hyperbolic trace witness needs N >= 3")
    return IntMat2(0, -1, 1, N)


def systole_witness(beta: IntMat2, N: int) -> IntMat2:
    """``-beta^2`` for ``beta`` of trace ``+-N``; lands in Gamma(N) with trace ``-(N^2 - 2)``."""
    if beta.det() != 1:
        raise ValueError(f"{beta} has determinant {beta.det()}, not 1")
    if abs(beta.trace()) != N:
        raise ValueError(f"trace of {beta} is {beta.trace()}, expected +-{N}")
    w = -(beta @ beta)
    # Cayley-Hamilton: -beta^2 = I - tr(beta) beta
    t = beta.trace()
    assert w == IntMat2(1 - t * beta.a, -t * beta.b, -t * beta.c, 1 - t * beta.d)
    assert in_gamma_n(w, N)
    assert w.trace() == -(N * N - 2)
    return w


def _multiples(N: int, H: int, offset: int = 0):
    """Integers ``v`` with ``v = offset mod N`` and ``|v| <= H``, ascending."""
    lo = -H + ((offset + H) % N)
    return range(lo, H + 1, N)


def _factor_pairs(P: int, N: int, H: int):
    """Pairs ``(b, c)`` of multiples of ``N`` with ``b c = P`` and ``|b|, |c| <= H``."""
    if P == 0:
        # b = 0 with c free, or c = 0 with b free
        for c in _multiples(N, H):
            yield 0, c
        for b in _multiples(N, H):
            if b:
                yield b, 0
        return
    if P % (N * N):
        return
    Q = P // (N * N)
    lim = H // N
    aQ = abs(Q)
    for d in range(1, min(lim, isqrt(aQ)) + 1):
        if aQ % d:
            continue
        for b1 in {d, aQ // d}:
            c1 = Q // b1
            if b1 <= lim and abs(c1) <= lim:
                yield N * b1, N * c1
                yield -N * b1, -N * c1


def enumerate_gamma_n(N: int, window) -> list[IntMat2]:
    """All ``gamma = [[1+x, y], [z, 1+w]]`` in Gamma(N) with entries bounded by ``H``.

    Solves ``x + w + x w - y z = 0`` over multiples of ``N``.  Sorted by
    entry tuple.
    """
    if N < 3:
        raise ValueError(f"N = {N} must be at least 3")
    H = _window(window)
    out = set()
    for a in _multiples(N, H, 1):
        for d in _multiples(N, H, 1):
            for b, c in _factor_pairs(a * d - 1, N, H):
                out.add(IntMat2(a, b, c, d))
    return sorted(out, key=IntMat2.entries)


@dataclass
class TraceGapScan:
    """Result of an exhaustive search for Gamma(N) elements with ``2 < |tr| < N^2 - 2``."""

    N: int
    height: int
    diagonal_pairs: int = 0
    elements_in_band: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def scan_trace_gap(N: int, window) -> TraceGapScan:
    """Every Gamma(N) element in the window whose trace lies in ``(-(N^2-2), N^2-2)``.

    Only diagonals ``(1+x, 1+w)`` with ``|2 + x + w| < N^2 - 2`` are visited
    (the off-diagonal entries are then forced up to a finite divisor search),
    so this is exhaustive for that trace band while staying linear in ``H``.
    Elements of trace ``+-2`` inside the band are counted, not reported.
    """
    if N < 3:
        raise ValueError(f"N = {N} must be at least 3")
    H = _window(window)
    gap = N * N - 2
    scan = TraceGapScan(N, H)
    for a in _multiples(N, H, 1):
        # need |a + d| < gap  ->  d in (-gap - a, gap - a)
        lo, hi = max(-H, -gap - a + 1), min(H, gap - a - 1)
        if lo > hi:
            continue
        first = lo + ((1 - lo) % N)
        for d in range(first, hi + 1, N):
            scan.diagonal_pairs += 1
            for b, c in _factor_pairs(a * d - 1, N, H):
                scan.elements_in_band += 1
                if abs(a + d) != 2:
                    scan.counterexamples.append(IntMat2(a, b, c, d))
    return scan


# -- quaternionic -------------------------------------------------------------


def quaternion_algebra(p: int) -> QuaternionAlgebra:
    check_quaternionic_prime(p)
    return QuaternionAlgebra(p, -1)


def quat_enumerate(p: int, window) -> dict[int, list[Quaternion]]:
    """Integral norm-one elements of ``(p, -1)`` with all ``|x_i| <= H``, keyed by reduced trace.

    Uses ``x0^2 + x2^2 = 1 + p (x1^2 + x3^2)``: a table of sums of two
    squares is built once and looked up for every ``(x1, x3)``.  Lists are
    in lexicographic coordinate order; keys ascend.
    """
    alg = quaternion_algebra(p)
    H = _window(window)
    limit = 2 * H * H
    sums: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for x0 in range(-H, H + 1):
        for x2 in range(-H, H + 1):
            sums[x0 * x0 + x2 * x2].append((x0, x2))
    coords = []
    for x1 in range(-H, H + 1):
        for x3 in range(-H, H + 1):
            n = 1 + p * (x1 * x1 + x3 * x3)
            if n > limit:
                continue
            for x0, x2 in sums.get(n, ()):
                coords.append((x0, x1, x2, x3))
    coords.sort()
    grouped: dict[int, list[Quaternion]] = defaultdict(list)
    for c in coords:
        grouped[2 * c[0]].append(Quaternion(alg, c))
    return dict(sorted(grouped.items()))


def quat_in_congruence(x: Quaternion, N: int) -> bool:
    """``x0 = 1`` and ``x1 = x2 = x3 = 0`` mod ``N``."""
    if not x.is_integral():
        raise ValueError(f"{x} has non-integral coordinates")
    x0, x1, x2, x3 = x.int_coords()
    return (x0 - 1) % N == 0 and x1 % N == 0 and x2 % N == 0 and x3 % N == 0


def quat_kind(x: Quaternion) -> ElementKind:
    return kind_of_trace(2 * x.x0)


def quaternionic_gap(N: int) -> int:
    """Trace gap ``2N^2 - 2`` for odd ``N``.

    Derived here, not quoted: norm one forces ``x0^2 = 1 mod N^2``, and
    ``x0 = 1 mod N`` with ``N`` odd then gives ``x0 = 1 mod N^2``.
    """
    if N % 2 == 0:
        raise ValueError("the quaternionic trace gap is only derived for odd N")
    return 2 * N * N - 2


@dataclass
class QuaternionGapCheck:
    p: int
    N: int
    height: int
    members: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def check_quaternionic_gap(p: int, N: int, window, elements=None) -> QuaternionGapCheck:
    """Members of level-``N`` subgroup other than ``+-1`` with ``|tr| != 2`` must have ``|tr| >= 2N^2 - 2``."""
    H = _window(window)
    gap = quaternionic_gap(N)
    if elements is None:
        elements = quat_enumerate(p, H)
    res = QuaternionGapCheck(p, N, H)
    for tr, xs in elements.items():
        for x in xs:
            if not quat_in_congruence(x, N):
                continue
            res.members += 1
            if abs(tr) != 2 and abs(tr) < gap:
                res.counterexamples.append(x)
    return res


def nontrivial_parabolic_quaternions(elements: dict[int, list[Quaternion]]) -> list[Quaternion]:
    """Elements with ``|tr| = 2`` other than ``+-1`` (none exist in a division algebra)."""
    out = []
    for tr in (-2, 2):
        for x in elements.get(tr, ()):
            if x.int_coords()[1:] != (0, 0, 0):
                out.append(x)
    return out

