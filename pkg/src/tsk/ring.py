"""Truncated polynomial arithmetic in Z[H]/<H^(n+1)> and Q[H]/<H^(n+1)>.

The Chow ring of P^n is Z[H]/<H^(n+1)>; Chern polynomials live there.
One class covers both coefficient domains: coefficients are Python ints
or fractions.Fraction (always exact, never floats).  Mixed instances
compare equal when the values do, because int and Fraction share
equality and hash in Python.

The formal log/exp pair used throughout:

    log(P)  = -sum_{i>=1} (-1)^i R^i / i      for P = 1 + R, R in <H>,
    exp(A)  =  sum_{i>=0} A^i / i!            for A in <H>.

Both are polynomials mod H^(n+1), are mutually inverse there, and turn
products into sums (log(P1 P2) = log P1 + log P2).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def _exact(value: Scalar) -> Scalar:
    """Normalize a coefficient: exact ints stay ints, Fractions reduce."""
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError(f"coefficients must be int or Fraction, got {value!r}")
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


class TruncPoly:
    """An element of Z[H]/<H^(n+1)> or Q[H]/<H^(n+1)>.

    Immutable; `coeffs` has exactly n+1 entries, coeffs[k] multiplying H^k.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable[Scalar] = ()) -> None:
        if n < 0:
            raise ValueError("truncation order n must be >= 0")
        cs = [_exact(c) for c in coeffs]
        if len(cs) > n + 1:
            raise ValueError(f"too many coefficients for truncation at H^{n}")
        cs.extend([0] * (n + 1 - len(cs)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_: object) -> None:
        raise AttributeError("TruncPoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def one(cls, n: int) -> "TruncPoly":
        return cls(n, (1,))

    @classmethod
    def zero(cls, n: int) -> "TruncPoly":
        return cls(n)

    @classmethod
    def linear(cls, n: int, a: Scalar, b: Scalar = 1) -> "TruncPoly":
        """The polynomial a + b*H."""
        return cls(n, (a, b) if n >= 1 else (a,))

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def __repr__(self) -> str:
        return f"TruncPoly({self.n}, {list(self.coeffs)!r})"

    def __str__(self) -> str:
        return self.render()

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k]

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def to_integral(self) -> "TruncPoly":
        """Assert all coefficients are integers and return self."""
        if not self.is_integral:
            raise ValueError(f"non-integer coefficients in {self!r}")
        return self

    # -- ring operations -------------------------------------------------

    def _match(self, other: "TruncPoly") -> None:
        if not isinstance(other, TruncPoly):
            raise TypeError(f"expected TruncPoly, got {other!r}")
        if self.n != other.n:
            raise ValueError(
                f"truncation orders differ: H^{self.n} vs H^{other.n}"
            )

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._match(other)
        return TruncPoly(self.n, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        self._match(other)
        return TruncPoly(self.n, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncPoly":
        return TruncPoly(self.n, (-a for a in self.coeffs))

    def __mul__(self, other: "TruncPoly | Scalar") -> "TruncPoly":
        if isinstance(other, (int, Fraction)):
            return TruncPoly(self.n, (a * other for a in self.coeffs))
        self._match(other)
        out: list[Scalar] = [0] * (self.n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(self.n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncPoly(self.n, out)

    __rmul__ = __mul__

    def inverse(self) -> "TruncPoly":
        """Multiplicative inverse; the constant term must be a unit.

        Over Z that means constant +-1 (the inverse then stays integral);
        over Q any nonzero constant works.
        """
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term 0 is not invertible")
        if self.is_integral and c0 not in (1, -1):
            raise ValueError(
                f"constant term {c0} is not a unit of Z[H]/<H^{self.n + 1}>;"
                " convert to rational coefficients first"
            )
        inv0: Scalar = c0 if c0 in (1, -1) else Fraction(1, 1) / c0
        out: list[Scalar] = [inv0] + [0] * self.n
        for k in range(1, self.n + 1):
            acc: Scalar = 0
            for i in range(1, k + 1):
                if self.coeffs[i] != 0:
                    acc += self.coeffs[i] * out[k - i]
            out[k] = -inv0 * acc
        return TruncPoly(self.n, out)

    def int_pow(self, e: int) -> "TruncPoly":
        """Integer power, negative exponents via the inverse."""
        base = self.inverse() if e < 0 else self
        e = abs(e)
        result = TruncPoly.one(self.n)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- formal log / exp -------------------------------------------------

    def log(self) -> "TruncPoly":
        """Formal log of 1 + R; coefficients come back rational."""
        if self.coeffs[0] != 1:
            raise ValueError("log requires constant term exactly 1")
        r = TruncPoly(self.n, (0,) + self.coeffs[1:])
        out = TruncPoly.zero(self.n)
        power = TruncPoly.one(self.n)
        for i in range(1, self.n + 1):
            power = power * r
            out = out + power * Fraction((-1) ** (i + 1), i)
        return out

    def exp(self) -> "TruncPoly":
        """Formal exp of an element with constant term 0."""
        if self.coeffs[0] != 0:
            raise ValueError("exp requires constant term exactly 0")
        out = TruncPoly.one(self.n)
        power = TruncPoly.one(self.n)
        factorial = 1
        for i in range(1, self.n + 1):
            power = power * self
            factorial *= i
            out = out + power * Fraction(1, factorial)
        return out

    # -- rendering / parsing ----------------------------------------------

    def render(self) -> str:
        """Render like "1 + 13*H + 48*H^2" (the CLI grammar).

        Every nonzero coefficient is printed explicitly (including 1),
        rationals as p/q.  The zero polynomial renders as "0".
        """
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = -c if c < 0 else c
            if k == 0:
                body = str(mag)
            elif k == 1:
                body = f"{mag}*H"
            else:
                body = f"{mag}*H^{k}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts) if parts else "0"


_TERM_RE = re.compile(
    r"""^\s*
        (?P<coeff>-?\d+(?:/\d+)?)          # integer or p/q
        (?:\s*\*\s*H(?:\^(?P<exp>\d+))?)?  # optional *H or *H^k
        \s*$""",
    re.VERBOSE,
)


def parse_poly(text: str, n: int) -> TruncPoly:
    """Parse the `render` grammar back into a TruncPoly.

    Accepts e.g. "1 + 13*H + 48*H^2", "-1*H^3", "0", "1/2*H^2".
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    # Split into signed terms: a leading sign, then +/- separators.
    chunks = re.split(r"\s+([+-])\s+", s)
    signed: list[tuple[int, str]] = []
    head = chunks[0]
    sign = 1
    if head.startswith("-"):
        sign, head = -1, head[1:]
    signed.append((sign, head))
    for op, term in zip(chunks[1::2], chunks[2::2]):
        signed.append((1 if op == "+" else -1, term))
    coeffs: list[Scalar] = [0] * (n + 1)
    for sign, term in signed:
        m = _TERM_RE.match(term)
        if m is None:
            raise ValueError(f"cannot parse polynomial term {term!r} in {text!r}")
        raw = m.group("coeff")
        coeff: Scalar = Fraction(raw) if "/" in raw else int(raw)
        if m.group("exp") is not None:
            k = int(m.group("exp"))
        elif m.group(0).rstrip().endswith("H"):
            k = 1
        else:
            k = 0
        if k > n:
            raise ValueError(f"degree {k} exceeds truncation H^{n} in {text!r}")
        coeffs[k] += sign * coeff
    return TruncPoly(n, coeffs)


def product(polys: Iterable[TruncPoly], n: int) -> TruncPoly:
    """Product of a (possibly empty) iterable of polynomials."""
    out = TruncPoly.one(n)
    for p in polys:
        out = out * p
    return out
