"""Exact scalar arithmetic over Q and Q(t), and the standard weight parametrisations.

Every quantity in this package is an element of Q (a ``fractions.Fraction``)
or of the rational-function field Q(t) (a :class:`RatFunc`).  There is no
floating point anywhere: determinants, nullspaces and invariants are computed
bit-exactly.

Polynomials are stored as tuples of integer coefficients in ascending powers
of t.  A :class:`RatFunc` keeps a reduced numerator/denominator pair with the
denominator's leading coefficient positive and the joint integer content
equal to one, so equality is a syntactic check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Union

Poly = tuple  # tuple[int, ...], ascending powers of t, no trailing zeros (zero poly = (0,))

ZERO_POLY: Poly = (0,)
ONE_POLY: Poly = (1,)


def _trim(coeffs) -> Poly:
    cs = list(coeffs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_deg(p: Poly) -> int:
    """Degree, with deg 0 = -1 for the zero polynomial."""
    return -1 if p == ZERO_POLY else len(p) - 1


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a == ZERO_POLY or b == ZERO_POLY:
        return ZERO_POLY
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim(out)


def poly_content(a: Poly) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g or 1


def poly_primitive(a: Poly) -> Poly:
    g = poly_content(a)
    return tuple(c // g for c in a) if g > 1 else a


def poly_divmod_frac(a: Poly, b: Poly):
    """Quotient/remainder over Q (coefficients returned as Fractions)."""
    if b == ZERO_POLY:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in a]
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    lead = Fraction(b[-1])
    for i in range(len(rem) - 1, db - 1, -1):
        if rem[i]:
            f = rem[i] / lead
            quo[i - db] = f
            for j, cb in enumerate(b):
                rem[i - db + j] -= f * cb
    return quo, rem


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd over Z (monic up to sign, content 1)."""
    a, b = poly_primitive(a), poly_primitive(b)
    while b != ZERO_POLY:
        _, rem = poly_divmod_frac(a, b)
        # clear Fraction denominators, keep primitive integer poly
        den = 1
        for c in rem:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ib = _trim(int(c * den) for c in rem)
        a, b = b, poly_primitive(ib)
    if a[-1] < 0:
        a = poly_neg(a)
    return a


def poly_eval(a: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_str(p: Poly, var: str = "t") -> str:
    if p == ZERO_POLY:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mon = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append(f"-{mon}")
            else:
                parts.append(f"{c}*{mon}")
    out = parts[0]
    for term in parts[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


class ZeroParameterError(ValueError):
    """Raised when a parametrisation is evaluated at t = 0."""


class IrrationalRootsError(ValueError):
    """Raised when a requested rational solution does not exist over Q."""


class RatFunc:
    """An element of Q(t), stored as a reduced fraction of integer polynomials.

    Arithmetic closes over Q(t) and mixes transparently with int and
    Fraction operands.  Instances are immutable and hashable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE_POLY, _reduced=False):
        num = _trim(num)
        den = _trim(den)
        if den == ZERO_POLY:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num == ZERO_POLY:
                den = ONE_POLY
            else:
                g = poly_gcd(num, den)
                if poly_deg(g) > 0 or g != ONE_POLY:
                    num = _trim(int(c) for c in poly_divmod_frac(num, g)[0])
                    den = _trim(int(c) for c in poly_divmod_frac(den, g)[0])
                cn, cd = poly_content(num), poly_content(den)
                g2 = math.gcd(cn, cd)
                if g2 > 1:
                    num = tuple(c // g2 for c in num)
                    den = tuple(c // g2 for c in den)
                if den[-1] < 0:
                    num, den = poly_neg(num), poly_neg(den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    # -- coercion ---------------------------------------------------------
    @staticmethod
    def _lift(x) -> "RatFunc | None":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, int):
            return RatFunc((x,), ONE_POLY, _reduced=True)
        if isinstance(x, Fraction):
            return RatFunc((x.numerator,), (x.denominator,), _reduced=True)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        num = poly_add(poly_mul(self.num, o.den), poly_mul(o.num, self.den))
        return RatFunc(num, poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(poly_neg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RatFunc(poly_mul(self.num, o.num), poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.num == ZERO_POLY:
            raise ZeroDivisionError("division by zero in Q(t)")
        return RatFunc(poly_mul(self.num, o.den), poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** (-n))
        out = RatFunc(ONE_POLY, ONE_POLY, _reduced=True)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __bool__(self):
        return self.num != ZERO_POLY

    def __hash__(self):
        if poly_deg(self.num) <= 0 and poly_deg(self.den) <= 0:
            return hash(Fraction(self.num[0], self.den[0]))
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({scalar_str(self)})"

    # -- queries ----------------------------------------------------------
    def is_constant(self) -> bool:
        return poly_deg(self.num) <= 0 and poly_deg(self.den) <= 0

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self!r} is not a constant")
        return Fraction(self.num[0], self.den[0])

    def specialise(self, t0: Fraction) -> Fraction:
        """Evaluate at a rational t0 != 0 not cancelling the denominator."""
        t0 = Fraction(t0)
        if t0 == 0:
            raise ZeroParameterError("specialisation at t = 0 is not defined")
        d = poly_eval(self.den, t0)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t = {t0}")
        return poly_eval(self.num, t0) / d


#: the generator t of Q(t)
T_GEN = RatFunc((0, 1))

Scalar = Union[Fraction, RatFunc]


def is_zero(s: Scalar) -> bool:
    return not s


def exact_div(a, b):
    """a / b staying inside Q or Q(t); int/int becomes a Fraction, never a float."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def scalar_complexity(s: Scalar) -> int:
    """Pivot-selection score: small for simple entries, degree-driven over Q(t)."""
    if isinstance(s, RatFunc):
        return 1000 * (max(poly_deg(s.num), 0) + max(poly_deg(s.den), 0)) + len(str(s.num[-1]))
    return s.numerator.bit_length() + s.denominator.bit_length()


class KacLabel(NamedTuple):
    """A pair of positive integers indexing a vanishing line of the grade determinant."""

    r: int
    s: int

    def validate(self) -> "KacLabel":
        if self.r < 1 or self.s < 1:
            raise ValueError(f"Kac label requires r, s >= 1, got {self}")
        return self


def central_charge(t: Scalar) -> Scalar:
    """c = 13 - 6(t + 1/t); symmetric under t <-> 1/t."""
    if not t:
        raise ZeroParameterError("central charge is undefined at t = 0")
    return 13 - 6 * (t + 1 / t)


def kac_weight(label: KacLabel, t: Scalar) -> Scalar:
    """h_{r,s} = (r^2-1)t/4 - (rs-1)/2 + (s^2-1)/(4t)."""
    r, s = KacLabel(*label).validate()
    if not t:
        raise ZeroParameterError("kac_weight is undefined at t = 0")
    quarter = Fraction(1, 4)
    return (r * r - 1) * quarter * t - Fraction(r * s - 1, 2) + (s * s - 1) * quarter / t


def t_candidates_from_c(c: Fraction) -> tuple[Fraction, Fraction]:
    """Rational roots t, 1/t of 6t^2 + (c-13)t + 6 = 0.

    Raises IrrationalRootsError when the roots are not rational (in particular
    for 1 < c < 25, where t is complex); the caller must supply t directly.
    """
    c = Fraction(c)
    disc = (c - 13) ** 2 - 144
    if disc < 0:
        raise IrrationalRootsError(f"no real t for c = {c} (1 < c < 25 needs complex t)")
    root = _fraction_sqrt(disc)
    if root is None:
        raise IrrationalRootsError(f"t is irrational for c = {c}; supply t explicitly")
    t1 = (13 - c + root) / 12
    t2 = (13 - c - root) / 12
    return (t1, t2)


def _fraction_sqrt(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


# -- JSON encoding ---------------------------------------------------------
#
# Rationals are encoded as strings "p/q" (the "/q" omitted when q = 1);
# rational functions as {"num": [...], "den": [...]} ascending-power arrays.


def scalar_to_json(s: Scalar):
    if isinstance(s, RatFunc):
        if s.is_constant():
            return scalar_to_json(s.as_fraction())
        return {"num": list(s.num), "den": list(s.den)}
    s = Fraction(s)
    return str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        return RatFunc(tuple(obj["num"]), tuple(obj["den"]))
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, int):
        return Fraction(obj)
    raise ValueError(f"not a scalar encoding: {obj!r}")


def parse_scalar(text: str) -> Fraction:
    """Parse a rational command-line argument like "3/2" or "-2"."""
    return Fraction(text.strip())


def scalar_str(s: Scalar) -> str:
    """Exact human-readable form; factors Q(t) values when small factors split off."""
    if isinstance(s, RatFunc):
        if s.is_constant():
            return scalar_str(s.as_fraction())
        num = factored_poly_str(s.num)
        if s.den == ONE_POLY:
            return num
        return f"({num}) / ({factored_poly_str(s.den)})"
    return str(s)


def factored_poly_str(p: Poly, var: str = "t") -> str:
    """Render an integer polynomial with small linear/quadratic factors split off.

    Tries t, (a*t - b), (a*t + b) and (a^2 t^2 - b^2)-style factors with small
    a, b; anything left over is printed expanded.  Cosmetic only.
    """
    if p == ZERO_POLY:
        return "0"
    content = poly_content(p)
    if p[-1] < 0:
        content = -content
    work = tuple(c // content for c in p)
    factors: list[tuple[str, int]] = []

    def divide_out(q: Poly, name: str):
        nonlocal work
        count = 0
        while poly_deg(work) >= poly_deg(q):
            quo, rem = poly_divmod_frac(work, q)
            if any(rem) or any(f.denominator != 1 for f in quo):
                break
            work = _trim(int(f) for f in quo)
            count += 1
        if count:
            factors.append((name, count))

    divide_out((0, 1), var)
    for a in range(1, 7):
        for b in range(1, 7):
            if math.gcd(a, b) != 1:
                continue
            head = f"{a * a}{var}^2" if a > 1 else f"{var}^2"
            divide_out((-b * b, 0, a * a), f"{head} - {b * b}")
    for a in range(1, 7):
        for b in range(1, 7):
            if math.gcd(a, b) != 1:
                continue
            head = f"{a}{var}" if a > 1 else var
            divide_out((-b, a), f"{head} - {b}")
            divide_out((b, a), f"{head} + {b}")

    parts = []
    if content != 1 or not factors:
        parts.append(str(content))
    for name, mult in factors:
        wrapped = name if name == var else f"({name})"
        parts.append(wrapped + (f"^{mult}" if mult > 1 else ""))
    if poly_deg(work) > 0 or work != ONE_POLY:
        parts.append(f"({poly_str(work, var)})")
    return " ".join(parts) if parts else "1"
