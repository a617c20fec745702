"""Exact polynomial arithmetic in a formal parameter h, modulo h^(N+1).

One power of h is carried per inserted chord or Casimir.  Coefficients
are rationals; all operations stay within the truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 h + ... + c_N h^N, arithmetic closed modulo h^(N+1)."""

    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        c = [Fraction(0)] * (order + 1)
        c[0] = Fraction(value)
        return cls(tuple(c))

    @classmethod
    def h(cls, order: int) -> "TruncatedSeries":
        c = [Fraction(0)] * (order + 1)
        if order >= 1:
            c[1] = Fraction(1)
        return cls(tuple(c))

    def _match(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError("truncation orders differ")
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._match(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._match(other))

    def __rsub__(self, other):
        return self._match(other) - self

    def __mul__(self, other):
        other = self._match(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > n:
                    break
                if b:
                    out[i + j] += a * b
        return TruncatedSeries(tuple(out))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        if not self.coeffs[0]:
            raise ZeroDivisionError("constant term is zero")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / self.coeffs[0]
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                acc += self.coeffs[i] * inv[k - i]
            inv[k] = -acc / self.coeffs[0]
        return TruncatedSeries(tuple(inv))

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c} h")
            else:
                parts.append(f"{c} h^{i}")
        return " + ".join(parts) if parts else "0"
