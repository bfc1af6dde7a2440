"""Coefficient vectors and concrete orthonormal basis evaluation.

A `CoeffVector` holds finitely many log-domain coefficients over basis
indices m >= offset_p; exact zeros are never stored.  Inner products are
taken in coefficient (Parseval) space.  Pointwise basis evaluation is
provided for the monomial basis z^n/sqrt(n!) and for the theta-lattice
basis, both computed termwise in the log domain so no intermediate is
exponentiated at full size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import OffsetMismatch, ValidationError
from .numerics import (
    LC_ZERO,
    LogComplex,
    lc_add,
    lc_conj,
    lc_mul,
    lc_neg,
    wrap_phase,
)
from .weights import ThetaParams


@dataclass(slots=True)
class CoeffVector:
    """Finite-support coefficient vector over indices m >= offset_p."""

    offset_p: int = 0
    entries: dict[int, LogComplex] = field(default_factory=dict)

    def __post_init__(self):
        for m, c in self.entries.items():
            if m < self.offset_p:
                raise ValidationError(
                    f"index {m} below the vector's base offset {self.offset_p}"
                )
            if c.is_zero:
                raise ValidationError("exact zeros must be absent keys, not stored")

    @classmethod
    def unit(cls, m: int, offset_p: int = 0) -> "CoeffVector":
        return cls(offset_p, {m: LogComplex(0.0, 0.0)})

    @classmethod
    def from_entries(cls, offset_p: int, entries: Mapping[int, LogComplex]) -> "CoeffVector":
        return cls(offset_p, {m: c for m, c in entries.items() if not c.is_zero})

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> list[int]:
        return sorted(self.entries)

    def get(self, m: int) -> LogComplex:
        return self.entries.get(m, LC_ZERO)

    def to_json_dict(self) -> dict:
        return {
            "p": self.offset_p,
            "entries": [[m, self.entries[m].logmag, self.entries[m].phase] for m in self.support()],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CoeffVector":
        entries = {}
        for m, logmag, phase in obj.get("entries", []):
            entries[int(m)] = LogComplex(float(logmag), wrap_phase(float(phase)))
        return cls.from_entries(int(obj["p"]), entries)


def coeff_add(u: CoeffVector, v: CoeffVector) -> CoeffVector:
    if u.offset_p != v.offset_p:
        raise OffsetMismatch(f"offsets differ: {u.offset_p} vs {v.offset_p}")
    out = dict(u.entries)
    for m, c in v.entries.items():
        s = lc_add(out[m], c) if m in out else c
        if s.is_zero:
            out.pop(m, None)
        else:
            out[m] = s
    return CoeffVector(u.offset_p, out)


def coeff_scale(u: CoeffVector, a: LogComplex) -> CoeffVector:
    if a.is_zero:
        return CoeffVector(u.offset_p, {})
    return CoeffVector(u.offset_p, {m: lc_mul(c, a) for m, c in u.entries.items()})


def coeff_neg(u: CoeffVector) -> CoeffVector:
    return CoeffVector(u.offset_p, {m: lc_neg(c) for m, c in u.entries.items()})


def coeff_sub(u: CoeffVector, v: CoeffVector) -> CoeffVector:
    return coeff_add(u, coeff_neg(v))


def coeff_inner(u: CoeffVector, v: CoeffVector) -> LogComplex:
    """<u, v> = sum_m u_m * conj(v_m), linear on the left."""
    if u.offset_p != v.offset_p:
        raise OffsetMismatch(f"offsets differ: {u.offset_p} vs {v.offset_p}")
    acc = LC_ZERO
    for m in sorted(set(u.entries) & set(v.entries)):
        acc = lc_add(acc, lc_mul(u.entries[m], lc_conj(v.entries[m])))
    return acc

def coeff_norm_log(u: CoeffVector) -> float:
    """log ||u||; -inf for the zero vector.  <u,u> is real, so halve its log."""
    return coeff_inner(u, u).logmag / 2.0


def bargmann_basis_eval(n: int, z: complex) -> LogComplex:
    """z^n / sqrt(n!) in log form; z = 0 follows the empty-product rule."""
    if n < 0:
        raise ValidationError(f"basis index must be >= 0, got {n}")
    if n == 0:
        return LogComplex(0.0, 0.0)
    if z == 0:
        return LC_ZERO
    logmag = n * math.log(abs(z)) - 0.5 * math.lgamma(n + 1.0)
    phase = wrap_phase(n * math.atan2(z.imag, z.real))
    return LogComplex(logmag, phase)


def theta_basis_eval(m: int, z: complex, params: ThetaParams) -> LogComplex:
    """The theta-lattice basis function at z, assembled exponent by exponent.

    Magnitude and phase are accumulated from the three factors (constant
    prefactor, Gaussian-in-z, lattice exponential) without ever forming
    exp() of the large real exponents.
    """
    if m < 0:
        raise ValidationError(f"basis index must be >= 0, got {m}")
    nu = params.nu
    x, y = z.real, z.imag
    ma = m + params.alpha
    logmag = (
        0.25 * math.log(2.0 * nu / math.pi)
        + 0.5 * nu * (x * x - y * y)
        - (math.pi * math.pi / nu) * ma * ma
        - 2.0 * math.pi * ma * y
    )
    phase = wrap_phase(nu * x * y + 2.0 * math.pi * ma * x)
    return LogComplex(logmag, phase)


class BargmannBasis:
    """Monomial basis z^n/sqrt(n!); evaluation is index-only."""

    name = "bargmann"

    def eval(self, n: int, z: complex) -> LogComplex:
        return bargmann_basis_eval(n, z)


@dataclass(frozen=True, slots=True)
class ThetaBasis:
    params: ThetaParams
    name: str = field(default="theta", init=False)

    def eval(self, m: int, z: complex) -> LogComplex:
        return theta_basis_eval(m, z, self.params)


def synth(v: CoeffVector, z: complex, basis) -> LogComplex:
    """Pointwise synthesis sum_m c_m * basis(m, z) over the finite support."""
    acc = LC_ZERO
    for m in v.support():
        acc = lc_add(acc, lc_mul(v.entries[m], basis.eval(m, z)))
    return acc
