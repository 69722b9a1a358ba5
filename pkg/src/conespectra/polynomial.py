"""Dense univariate real polynomials with ascending coefficient storage.

The convention throughout the package: ``coeffs[k]`` multiplies ``t**k``.
Exact trailing zeros are stripped on construction, so two polynomials
that are equal as functions compare equal coefficient-wise. The zero
polynomial is represented by the single coefficient ``[0.0]`` and
reports degree ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroPolynomial

__all__ = ["Polynomial", "format_polynomial"]


@dataclass(frozen=True)
class Polynomial:
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).ravel()
        n = c.size
        while n > 1 and c[n - 1] == 0.0:
            n -= 1
        c = np.array(c[:n], dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        """Monic polynomial with the given real roots (with multiplicity)."""
        p = np.array([1.0])
        for r in np.atleast_1d(np.asarray(roots, dtype=float)):
            p = np.convolve(p, np.array([-r, 1.0]))
        return cls(p)

    @classmethod
    def quadratic_from_conjugate_pair(cls, modulus: float, real_part: float) -> "Polynomial":
        """t**2 - 2*real_part*t + modulus**2, the real factor of a complex pair."""
        return cls(np.array([modulus**2, -2.0 * real_part, 1.0]))

    @property
    def degree(self) -> int:
        if self.coeffs.size == 1 and self.coeffs[0] == 0.0:
            return -1
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    @property
    def lead(self) -> float:
        return float(self.coeffs[-1])

    @property
    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, x):
        # Horner, ascending storage so iterate from the top.
        acc = np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] -= other.coeffs
        return Polynomial(out)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial(np.zeros(1))
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * float(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Long division: returns (quotient, remainder) with
        deg(remainder) < deg(divisor). Exact-arithmetic algorithm; no
        tolerance is applied here, callers trim the remainder themselves."""
        if divisor.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        if self.degree < divisor.degree:
            return Polynomial(np.zeros(1)), self
        rem = np.array(self.coeffs, dtype=float)
        dcoef = divisor.coeffs
        dd = divisor.degree
        quot = np.zeros(self.degree - dd + 1)
        for k in range(self.degree - dd, -1, -1):
            q = rem[k + dd] / dcoef[dd]
            quot[k] = q
            rem[k : k + dd + 1] -= q * dcoef
        return Polynomial(quot), Polynomial(rem[:dd] if dd > 0 else np.zeros(1))

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial(np.zeros(1))
        k = np.arange(1, self.coeffs.size)
        return Polynomial(self.coeffs[1:] * k)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no monic normalization")
        return Polynomial(self.coeffs / self.coeffs[-1])

    def trimmed(self, rel_tol: float) -> "Polynomial":
        """Drop trailing coefficients below rel_tol relative to the largest one."""
        scale = self.norm_inf
        if scale == 0.0:
            return Polynomial(np.zeros(1))
        c = np.array(self.coeffs)
        n = c.size
        while n > 1 and abs(c[n - 1]) <= rel_tol * scale:
            n -= 1
        if n == 1 and abs(c[0]) <= rel_tol * scale:
            return Polynomial(np.zeros(1))
        return Polynomial(c[:n])

    def shift_scale(self, scale: float) -> "Polynomial":
        """p(scale * t) as a polynomial in t."""
        return Polynomial(self.coeffs * scale ** np.arange(self.coeffs.size))

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({np.array2string(self.coeffs, separator=', ')})"


def format_polynomial(p: Polynomial, var: str = "t") -> str:
    """Human display, highest power first, 12 significant digits."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0.0:
            continue
        mag = abs(c)
        if k == 0:
            body = "%.12g" % mag
        else:
            tvar = var if k == 1 else f"{var}^{k}"
            body = tvar if mag == 1.0 else "%.12g %s" % (mag, tvar)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)
