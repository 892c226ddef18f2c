"""Hyperbolic-plane evaluators and the systole / kissing-number bound chain.

This is the only module that uses floating point.  Verdicts compare with a
relative slack of 1e-9 tilted towards failure, so rounding can make a
verdict fail but never pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .congruence import Setting, psl2_index
from .exact import IntMat2
from .modular import mu0

V0_MODULAR = math.pi / 3
SLACK = 1e-9


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"imaginary part must be positive, got {self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.x, self.y)


def mobius_apply(m: IntMat2 | tuple[float, float, float, float], z: UpperHalfPoint) -> UpperHalfPoint:
    """``(a z + b) / (c z + d)``; ``m`` is an IntMat2 or a real ``(a, b, c, d)`` of determinant 1."""
    a, b, c, d = m.entries() if isinstance(m, IntMat2) else m
    det = a * d - b * c
    if (det != 1) if isinstance(m, IntMat2) else abs(det - 1) > 1e-12:
        raise ValueError(f"{m} has determinant {det}, not 1")
    w = complex(z)
    return UpperHalfPoint.from_complex((a * w + b) / (c * w + d))


def hyp_distance(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    # 2 asinh(|z - w| / (2 sqrt(y_z y_w))) avoids the cancellation of arccosh near 1
    return 2.0 * math.asinh(abs(complex(z) - complex(w)) / (2.0 * math.sqrt(z.y * w.y)))


def translation_length(t: int) -> float:
    """Length of the closed geodesic of a hyperbolic element with trace ``t``."""
    if abs(t) <= 2:
        raise ValueError(f"trace {t} is not hyperbolic")
    return 2.0 * math.acosh(abs(t) / 2.0)


def gauss_bonnet_area(g: int) -> float:
    if g < 2:
        raise ValueError(f"genus {g} must be at least 2")
    return 2.0 * math.pi * (2 * g - 2)


def ball_area(R: float) -> float:
    if R < 0:
        raise ValueError(f"radius {R} must be non-negative")
    return 2.0 * math.pi * (math.cosh(R) - 1.0)


def _positive(name, x):
    if not x > 0:
        raise ValueError(f"{name} must be positive, got {x}")


def rhs_bounds(kind: str, **params) -> float:
    """Right-hand side of one of the classical upper bounds.

    ``kind`` and its parameters:

    - ``"sys_area"``: ``2 log(area/pi + 2)``; ``area``
    - ``"sys_vol"``: ``2/(n-1) log(vol) + c``; ``vol``, ``n``, ``c``
    - ``"sys_vol3"``: ``2 log(vol) + d1``; ``vol``, ``d1``
    - ``"sys_vol3_arith"``: ``(4/3) log(vol) + d2``; ``vol``, ``d2``
    - ``"kiss_genus"``: ``U g^2 / log g``; ``g``, ``U``
    - ``"kiss_genus_cusps"``: ``C (g+n) g / log(g+1)``; ``g``, ``n``, ``C``
    - ``"kiss_vol"``: ``A_n vol^2 / log(1 + vol)``; ``vol``, ``A``

    Unspecified additive constants default to 0, multiplicative ones to 1.
    """
    if kind == "sys_area":
        _positive("area", params["area"])
        return 2.0 * math.log(params["area"] / math.pi + 2.0)
    if kind == "sys_vol":
        vol, n = params["vol"], params["n"]
        _positive("vol", vol)
        if n < 2:
            raise ValueError(f"dimension {n} must be at least 2")
        return 2.0 / (n - 1) * math.log(vol) + params.get("c", 0.0)
    if kind == "sys_vol3":
        _positive("vol", params["vol"])
        return 2.0 * math.log(params["vol"]) + params.get("d1", 0.0)
    if kind == "sys_vol3_arith":
        _positive("vol", params["vol"])
        return 4.0 / 3.0 * math.log(params["vol"]) + params.get("d2", 0.0)
    if kind == "kiss_genus":
        g = params["g"]
        _positive("g", g)
        if g <= 1:
            raise ValueError("log g must be positive")
        return params.get("U", 1.0) * g * g / math.log(g)
    if kind == "kiss_genus_cusps":
        g, n = params["g"], params.get("n", 0)
        _positive("g", g)
        if n < 0:
            raise ValueError("number of cusps must be non-negative")
        return params.get("C", 1.0) * (g + n) * g / math.log(g + 1)
    if kind == "kiss_vol":
        vol = params["vol"]
        _positive("vol", vol)
        return params.get("A", 1.0) * vol * vol / math.log1p(vol)
    raise ValueError(f"unknown bound kind {kind!r}")


def area_s_n(N: int, setting: Setting = Setting.MODULAR) -> float:
    """Area of ``Gamma(N) \\ H^2`` in the modular setting, ``(pi/3) [PSL2(Z) : Gamma(N)]``."""
    if setting is not Setting.MODULAR:
        raise ValueError("quaternionic covolumes are not computed; use units of v0")
    area = V0_MODULAR * psl2_index(N)
    assert area < V0_MODULAR * N**3
    return area


def geq_conservative(lhs: float, rhs: float) -> bool:
    """``lhs >= rhs`` with a 1e-9 relative margin demanded of ``lhs``."""
    return lhs >= rhs + SLACK * max(abs(lhs), abs(rhs))


def systole_rhs(area: float, v0: float = V0_MODULAR) -> float:
    return 4.0 / 3.0 * math.log(area) - (2.0 * math.log(2.0) + 4.0 / 3.0 * math.log(v0))


def kissing_rhs(area: float, epsilon: float, v0: float = V0_MODULAR) -> float:
    return area ** (4.0 / 3.0 - epsilon) / (2.0 * v0 * v0)


@dataclass(frozen=True)
class BoundReport:
    N: int
    setting: str
    mu0_of_N: int
    index: int
    area: float
    sys_lower: float
    kiss_lower: int
    epsilon: float
    verdict_kiss: bool
    verdict_sys: bool
    precondition: bool  # mu0(N) >= N^(1 - epsilon)

    def recompute_verdicts(self) -> tuple[bool, bool]:
        return (
            geq_conservative(self.kiss_lower, kissing_rhs(self.area, self.epsilon)),
            geq_conservative(self.sys_lower, systole_rhs(self.area)),
        )


def _mu0_precondition(mu: int, N: int, epsilon: float) -> bool:
    if epsilon == 0.5:
        return mu * mu >= N
    return mu >= N ** (1.0 - epsilon)


def theorem_5_4_report(N: int, epsilon: float, mu0_value: int | None = None) -> BoundReport:
    """Lower bounds for systole and kissing number of ``Gamma(N) \\ H^2``.

    ``kiss_lower = mu0(N) * index / 2`` counts the systoles produced by the
    ``-beta^2`` construction; ``sys_lower`` is the length of trace
    ``N^2 - 2``.  ``mu0_value`` skips recomputing ``mu0(N)`` (e.g. from a cache).
    """
    if N < 5:
        raise ValueError(f"N = {N} must be at least 5")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon = {epsilon} must lie in (0, 1)")
    if mu0_value is None:
        mu0_value = mu0(N)
    index = psl2_index(N)
    area = area_s_n(N)
    if (mu0_value * index) % 2:
        raise AssertionError(f"mu0 * index = {mu0_value * index} is odd")
    kiss_lower = mu0_value * index // 2
    sys_lower = 2.0 * math.acosh((N * N - 2) / 2.0)
    return BoundReport(
        N=N,
        setting=Setting.MODULAR.value,
        mu0_of_N=mu0_value,
        index=index,
        area=area,
        sys_lower=sys_lower,
        kiss_lower=kiss_lower,
        epsilon=epsilon,
        verdict_kiss=geq_conservative(kiss_lower, kissing_rhs(area, epsilon)),
        verdict_sys=geq_conservative(sys_lower, systole_rhs(area)),
        precondition=_mu0_precondition(mu0_value, N, epsilon),
    )


@dataclass(frozen=True)
class PGTRow:
    t: int
    mu0: int
    cumulative: int
    reference: float  # sum over 3 <= s <= t of s / log s
    ratio: float


def pgt_statistics(t_max: int, counts=None) -> list[PGTRow]:
    """Cumulative primitive class counts against ``sum t / log t``.

    ``counts`` maps trace to mu0 (e.g. a cache); missing traces are computed.
    """
    if t_max < 10:
        raise ValueError(f"t_max = {t_max} must be at least 10")
    rows = []
    cum, ref = 0, 0.0
    for t in range(3, t_max + 1):
        m = counts(t) if callable(counts) else (counts[t] if counts is not None else mu0(t))
        cum += m
        ref += t / math.log(t)
        rows.append(PGTRow(t, m, cum, ref, cum / ref))
    return rows
