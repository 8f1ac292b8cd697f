"""Exact coordinates: roots of unity times rational powers of primes.

A :class:`KummerNumber` represents an element of the multiplicative group
generated by all roots of unity and all rational powers of prime numbers,

    zeta * 2^(e_2) * 3^(e_3) * 5^(e_5) * ...

with ``zeta = exp(2*pi*i*t)`` for a rational ``t in [0, 1)`` and finitely many
nonzero rational exponents ``e_p``.  This group is divisible, so every n-th
root exists, which is what lets translation splittings and isogeny preimages
stay exactly representable.

Values are immutable and canonical: equal group elements compare equal.

>>> two = KummerNumber.from_rational(2)
>>> three = KummerNumber.from_rational(3)
>>> print(two * three)
6
>>> print(two.nth_root(2))
2^(1/2)
>>> parse_kummer("zeta(3)^2 * 2/5") == parse_kummer("2/5 * zeta(3)^2")
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ParseError

Point = tuple["KummerNumber", ...]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class KummerNumber:
    """A root of unity times a product of rational prime powers.

    ``torsion`` is the reduced fraction t in [0,1) encoding exp(2*pi*i*t);
    ``primes`` maps each prime with a nonzero exponent to that exponent,
    stored as a sorted tuple of (prime, exponent) pairs so values hash.
    """

    torsion: Fraction
    primes: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not (0 <= self.torsion < 1):
            raise ValueError(f"torsion exponent {self.torsion} not reduced into [0,1)")
        for p, e in self.primes:
            if e == 0:
                raise ValueError("zero prime exponent stored")
        if [p for p, _ in self.primes] != sorted({p for p, _ in self.primes}):
            raise ValueError("prime support not sorted/distinct")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def build(torsion: Fraction | int, primes: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]]) -> KummerNumber:
        """Canonicalize and construct: torsion mod 1, zero exponents dropped."""
        t = Fraction(torsion) % 1
        items = primes.items() if isinstance(primes, Mapping) else primes
        merged: dict[int, Fraction] = {}
        for p, e in items:
            merged[p] = merged.get(p, Fraction(0)) + Fraction(e)
        cleaned = tuple(sorted((p, e) for p, e in merged.items() if e != 0))
        return KummerNumber(t, cleaned)

    @staticmethod
    def one() -> KummerNumber:
        return KummerNumber(Fraction(0), ())

    @staticmethod
    def root_of_unity(order: int, power: int = 1) -> KummerNumber:
        """exp(2*pi*i*power/order)."""
        if order < 1:
            raise ValueError("order must be positive")
        return KummerNumber.build(Fraction(power, order), {})

    @staticmethod
    def from_rational(q: Fraction | int) -> KummerNumber:
        """Embed a nonzero rational; the sign lands in the torsion part."""
        q = Fraction(q)
        if q == 0:
            raise ValueError("0 is not invertible")
        t = Fraction(0) if q > 0 else Fraction(1, 2)
        exps: dict[int, Fraction] = {}
        for p, m in factorize(abs(q.numerator)).items():
            exps[p] = exps.get(p, Fraction(0)) + m
        for p, m in factorize(q.denominator).items():
            exps[p] = exps.get(p, Fraction(0)) - m
        return KummerNumber.build(t, exps)

    @staticmethod
    def prime_power(p: int, exponent: Fraction | int) -> KummerNumber:
        f = factorize(p)
        if len(f) != 1 or next(iter(f.values())) != 1:
            raise ValueError(f"{p} is not prime")
        return KummerNumber.build(0, {p: Fraction(exponent)})

    # -- group operations --------------------------------------------------

    def __mul__(self, other: KummerNumber) -> KummerNumber:
        exps = dict(self.primes)
        for p, e in other.primes:
            exps[p] = exps.get(p, Fraction(0)) + e
        return KummerNumber.build(self.torsion + other.torsion, exps)

    def inverse(self) -> KummerNumber:
        return KummerNumber.build(-self.torsion, {p: -e for p, e in self.primes})

    def __pow__(self, k: int) -> KummerNumber:
        if not isinstance(k, int):
            return NotImplemented
        return KummerNumber.build(self.torsion * k, {p: e * k for p, e in self.primes})

    def nth_root(self, n: int) -> KummerNumber:
        """The principal n-th root: every exponent divided by n.

        ``x.nth_root(n) ** n == x`` always holds; other roots differ by a
        root of unity in the kernel and are not produced.
        """
        if n < 1:
            raise ValueError("root order must be >= 1")
        return KummerNumber.build(self.torsion / n, {p: e / n for p, e in self.primes})

    # -- predicates --------------------------------------------------------

    def is_one(self) -> bool:
        return self.torsion == 0 and not self.primes

    def is_torsion(self) -> bool:
        return not self.primes

    def torsion_order(self) -> int | None:
        """Multiplicative order when torsion, else None."""
        if not self.is_torsion():
            return None
        return self.torsion.denominator

    def prime_exponent(self, p: int) -> Fraction:
        for q, e in self.primes:
            if q == p:
                return e
        return Fraction(0)

    def prime_support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.primes)

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        parts: list[str] = []
        if self.torsion != 0:
            m, k = self.torsion.denominator, self.torsion.numerator
            parts.append(f"zeta({m})" if k == 1 else f"zeta({m})^{k}")
        num, den = 1, 1
        frac_parts: list[str] = []
        for p, e in self.primes:
            if e.denominator == 1:
                if e > 0:
                    num *= p ** e.numerator
                else:
                    den *= p ** (-e.numerator)
            else:
                frac_parts.append(f"{p}^({e})")
        if num != 1 or den != 1:
            parts.append(str(num) if den == 1 else f"{num}/{den}")
        parts.extend(frac_parts)
        return " * ".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"KummerNumber({str(self)!r})"


def char_eval(point: Iterable[KummerNumber], exponents: Iterable[int]) -> KummerNumber:
    """Evaluate the monomial character x -> prod_i x_i^(b_i) at a point."""
    xs, bs = tuple(point), tuple(exponents)
    if len(xs) != len(bs):
        raise ValueError(f"dimension mismatch: point {len(xs)}, character {len(bs)}")
    acc = KummerNumber.one()
    for x, b in zip(xs, bs):
        if b != 0:
            acc = acc * x**b
    return acc


# -- parsing ----------------------------------------------------------------

_ZETA_RE = re.compile(r"^zeta\((\d+)\)(?:\^(\(?-?\d+\)?))?$")
_POWER_RE = re.compile(r"^(\d+)\^(?:\((-?\d+)(?:/(\d+))?\)|(-?\d+))$")
_RATIONAL_RE = re.compile(r"^(\d+)(?:/(\d+))?$")


def _parse_factor(tok: str) -> KummerNumber:
    m = _ZETA_RE.match(tok)
    if m:
        order = int(m.group(1))
        if order < 1:
            raise ParseError(f"bad root-of-unity order in {tok!r}")
        k = int(m.group(2).strip("()")) if m.group(2) else 1
        return KummerNumber.root_of_unity(order, k)
    m = _POWER_RE.match(tok)
    if m:
        base = int(m.group(1))
        if m.group(4) is not None:
            exp = Fraction(int(m.group(4)))
        else:
            exp = Fraction(int(m.group(2)), int(m.group(3) or 1))
        if base < 2:
            raise ParseError(f"power base must be >= 2 in {tok!r}")
        # non-prime bases distribute over their prime factorization
        acc = KummerNumber.one()
        for p, mult in factorize(base).items():
            acc = acc * KummerNumber.build(0, {p: exp * mult})
        return acc
    m = _RATIONAL_RE.match(tok)
    if m:
        num = int(m.group(1))
        den = int(m.group(2) or 1)
        if num == 0 or den == 0:
            raise ParseError(f"zero is not a group element: {tok!r}")
        return KummerNumber.from_rational(Fraction(num, den))
    raise ParseError(f"cannot parse coordinate factor {tok!r}")


def parse_kummer(text: str) -> KummerNumber:
    """Parse the ``zeta(m)^k * n/d * p^(a/b)`` coordinate syntax.

    A single leading ``-`` is accepted and folds into the torsion part
    (``-1 == zeta(2)``).  The canonical printer round-trips exactly:
    ``parse_kummer(str(x)) == x``.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty coordinate")
    acc = KummerNumber.one()
    if s.startswith("-"):
        acc = KummerNumber.root_of_unity(2)
        s = s[1:].strip()
    for tok in s.split("*"):
        tok = tok.strip()
        if not tok:
            raise ParseError(f"empty factor in {text!r}")
        acc = acc * _parse_factor(tok)
    return acc


def parse_point(coords: Iterable[str]) -> Point:
    return tuple(parse_kummer(c) for c in coords)


def format_point(point: Iterable[KummerNumber]) -> tuple[str, ...]:
    return tuple(str(x) for x in point)


def one_point(n: int) -> Point:
    return (KummerNumber.one(),) * n
