"""Graded-commutative polynomials in the basis coordinates of an algebra.

Monomials are sorted index tuples; even variables commute, odd ones
anticommute and square to zero (Koszul convention).  The same container
represents elements of the symmetric algebra on a space (``dual=False``)
and on its dual (``dual=True``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial


def sort_monomial(indices, parities) -> tuple[tuple[int, ...], int]:
    """Sort an index word, tracking the Koszul sign; 0 for odd squares."""
    word = list(indices)
    sign = 1
    # insertion sort, counting odd-odd transpositions
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            if parities[word[j - 1]] and parities[word[j]]:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            j -= 1
    for i in range(1, len(word)):
        if word[i] == word[i - 1] and parities[word[i]]:
            return tuple(word), 0
    return tuple(word), sign


@dataclass
class Poly:
    parities: tuple[int, ...]
    dual: bool = False
    terms: dict = field(default_factory=dict)

    @classmethod
    def zero(cls, parities, dual=False) -> "Poly":
        return cls(tuple(parities), dual, {})

    @classmethod
    def one(cls, parities, dual=False) -> "Poly":
        return cls(tuple(parities), dual, {(): Fraction(1)})

    def _check(self, other: "Poly"):
        if self.parities != other.parities or self.dual != other.dual:
            raise ValueError("polynomial domains differ")

    def copy(self) -> "Poly":
        return Poly(self.parities, self.dual, dict(self.terms))

    def add_term(self, mono, coeff) -> None:
        mono, sign = sort_monomial(mono, self.parities)
        if sign == 0:
            return
        c = self.terms.get(mono, Fraction(0)) + Fraction(coeff) * sign
        if c:
            self.terms[mono] = c
        else:
            self.terms.pop(mono, None)

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = self.copy()
        for m, c in other.terms.items():
            cur = out.terms.get(m, Fraction(0)) + c
            if cur:
                out.terms[m] = cur
            else:
                out.terms.pop(m, None)
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.parities, self.dual)
        return Poly(self.parities, self.dual, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = Poly.zero(self.parities, self.dual)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out.add_term(m1 + m2, c1 * c2)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.parities == other.parities
            and self.dual == other.dual
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def degree_part(self, k: int) -> "Poly":
        return Poly(
            self.parities, self.dual, {m: c for m, c in self.terms.items() if len(m) == k}
        )

    def max_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def truncate(self, max_deg: int) -> "Poly":
        return Poly(
            self.parities,
            self.dual,
            {m: c for m, c in self.terms.items() if len(m) <= max_deg},
        )

    def derivative(self, a: int) -> "Poly":
        """Left derivative by variable ``a`` (Koszul sign for odd ones)."""
        out = Poly.zero(self.parities, self.dual)
        for m, c in self.terms.items():
            for pos, x in enumerate(m):
                if x != a:
                    continue
                sign = 1
                if self.parities[a]:
                    crossed = sum(1 for y in m[:pos] if self.parities[y])
                    sign = -1 if crossed % 2 else 1
                rest = m[:pos] + m[pos + 1 :]
                cur = out.terms.get(rest, Fraction(0)) + c * sign
                if cur:
                    out.terms[rest] = cur
                else:
                    out.terms.pop(rest, None)
                if not self.parities[a]:
                    continue
                break  # an odd variable occurs at most once
        return out

    def __repr__(self):
        return f"Poly({'dual' if self.dual else 'primal'}, {len(self.terms)} terms)"


def exp_truncated(x: Poly, max_deg: int) -> Poly:
    """exp of a positive-degree polynomial, truncated by polynomial degree."""
    if () in x.terms:
        raise ValueError("exp needs a positive-degree argument")
    acc = Poly.one(x.parities, x.dual)
    term = Poly.one(x.parities, x.dual)
    k = 1
    while not term.is_zero():
        term = (term * x).truncate(max_deg).scale(Fraction(1, k))
        acc = acc + term
        k += 1
    return acc


def cap_product(p: Poly, s: Poly) -> Poly:
    """Symmetrized contraction of a dual polynomial into a primal one.

    On monomials of degrees i <= m this is ((m-i)!/m!) * d^nu x^mu, the
    average over all axis injections of the full tensor contraction;
    components with i > m vanish.  Derivatives for odd variables compose
    in ascending index order.
    """
    if not p.dual or s.dual:
        raise ValueError("cap contracts a dual polynomial into a primal one")
    out = Poly.zero(s.parities, False)
    by_degree: dict[int, list] = {}
    for mu, b in s.terms.items():
        by_degree.setdefault(len(mu), []).append((mu, b))
    for nu, a in p.terms.items():
        i = len(nu)
        for m, terms in by_degree.items():
            if i > m:
                continue
            w = Fraction(factorial(m - i), factorial(m))
            part = Poly(s.parities, False, {mu: b for mu, b in terms})
            for var in nu:
                part = part.derivative(var)
            for mono, c in part.terms.items():
                cur = out.terms.get(mono, Fraction(0)) + a * c * w
                if cur:
                    out.terms[mono] = cur
                else:
                    out.terms.pop(mono, None)
    return out
