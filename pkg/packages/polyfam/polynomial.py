"""
TreeSpectra — Exact integer polynomials.

Coefficients are Python ints, lowest degree first, trailing zeros stripped;
the zero polynomial has an empty coefficient tuple.  Every operation stays in
Z[x]: division is pseudo-division, and sign evaluation at a float is done on
its exact dyadic value.
"""

from __future__ import annotations

import math
import numbers
from functools import reduce
from typing import Iterable, List, Sequence, Tuple, Union

from pydantic import BaseModel, field_serializer, field_validator


def _strip(coeffs: Iterable[int]) -> Tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Polynomial(BaseModel):
    """An element of Z[x]; serialises as a JSON list of decimal strings."""
    coeffs: Tuple[int, ...] = ()

    model_config = {"frozen": True}

    @field_validator("coeffs", mode="before")
    @classmethod
    def _parse(cls, value):
        parsed = []
        for c in value:
            if isinstance(c, bool):
                raise ValueError("polynomial coefficients must be integers, got bool")
            if isinstance(c, str):
                parsed.append(int(c))
            elif isinstance(c, numbers.Integral):
                parsed.append(int(c))
            else:
                raise ValueError(f"polynomial coefficients must be integers, got {c!r}")
        return _strip(parsed)

    @field_serializer("coeffs")
    def _as_strings(self, coeffs: Tuple[int, ...]) -> List[str]:
        return [str(c) for c in coeffs]

    # ── constructors ─────────────────────────────────────────────────────────

    @classmethod
    def of(cls, *coeffs: int) -> "Polynomial":
        """Build from coefficients given lowest degree first."""
        return cls._make(coeffs)

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls._make((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "Polynomial":
        return cls._make([0] * degree + [c])

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "Polynomial":
        return cls(coeffs=tuple(items))

    @classmethod
    def _make(cls, coeffs: Iterable[int]) -> "Polynomial":
        return cls.model_construct(coeffs=_strip(coeffs))

    # ── structure ────────────────────────────────────────────────────────────

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        if not self.coeffs:
            return 0
        return reduce(math.gcd, (abs(c) for c in self.coeffs))

    def primitive(self) -> "Polynomial":
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return Polynomial._make(c // g for c in self.coeffs)

    def derivative(self) -> "Polynomial":
        return Polynomial._make(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def to_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    # ── ring operations ──────────────────────────────────────────────────────

    @staticmethod
    def _lift(other: Union["Polynomial", int]) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, numbers.Integral) and not isinstance(other, bool):
            return Polynomial._make((int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial._make(
            [x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)]
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._make(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Integral) and not isinstance(other, bool):
            return Polynomial._make(c * int(other) for c in self.coeffs)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial._make(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial._make(out)

    __rmul__ = __mul__

    def shift(self, n: int) -> "Polynomial":
        """Multiply by x**n."""
        if self.is_zero:
            return self
        return Polynomial._make([0] * n + list(self.coeffs))

    def pseudo_divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """
        Pseudo-division: returns (q, r) with lc(divisor)**(deg f - deg g + 1) * f = q*g + r
        and deg r < deg g.  For deg f < deg g returns (0, f).
        """
        if divisor.is_zero:
            raise ZeroDivisionError("pseudo-division by the zero polynomial")
        df, dg = self.degree, divisor.degree
        if df < dg:
            return Polynomial._make(()), self
        lc = divisor.leading
        g = divisor.coeffs
        q = [0] * (df - dg + 1)
        r = list(self.coeffs)
        remaining = df - dg + 1
        dr = df
        while dr >= dg and any(r):
            coef = r[dr]
            j = dr - dg
            q = [c * lc for c in q]
            q[j] += coef
            r = [c * lc for c in r]
            for i, gc in enumerate(g):
                r[i + j] -= coef * gc
            while r and r[-1] == 0:
                r.pop()
            dr = len(r) - 1
            remaining -= 1
        factor = lc ** remaining
        return (
            Polynomial._make(c * factor for c in q),
            Polynomial._make(c * factor for c in r),
        )

    def divides(self, other: "Polynomial") -> bool:
        """True iff self | other in Q[x] (equivalently Z[x] up to content)."""
        if self.is_zero:
            raise ZeroDivisionError("zero polynomial divides nothing")
        _, r = other.pseudo_divmod(self)
        return r.is_zero

    def exact_quotient(self, divisor: "Polynomial") -> "Polynomial":
        """Primitive part of self / divisor; raises if the division is not exact."""
        q, r = self.pseudo_divmod(divisor)
        if not r.is_zero:
            raise ArithmeticError("division is not exact")
        return q.primitive()

    # ── evaluation ───────────────────────────────────────────────────────────

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_scaled(self, num: int, den: int) -> int:
        """den**deg * p(num/den), exactly.  den must be positive."""
        n = self.degree
        if n < 0:
            return 0
        acc = 0
        den_pow = 1
        # Horner from the top: acc_{i} = acc_{i+1} * num + c_i * den^(n-i)
        for c in reversed(self.coeffs):
            acc = acc * num + c * den_pow
            den_pow *= den
        return acc

    def sign_at(self, x: float) -> int:
        """Exact sign of p at the dyadic rational value of the float x."""
        num, den = float(x).as_integer_ratio()
        v = self.eval_scaled(num, den)
        return (v > 0) - (v < 0)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                coef = "" if mag == 1 else str(mag)
                body = coef + ("x" if i == 1 else f"x^{i}")
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


ZERO = Polynomial.of()
ONE  = Polynomial.of(1)
X    = Polynomial.of(0, 1)
