"""Exact multivariate polynomial and rational-function arithmetic.

Representation
--------------
A polynomial lives in a ``PolyRing`` (an ordered tuple of symbol names) and is
stored as a dict mapping exponent tuples to nonzero ``Fraction`` coefficients::

    3/2*t^2*w12 - 5   ->   {(2, 1): Fraction(3, 2), (0, 0): Fraction(-5)}

for the ring ``PolyRing(("t", "w12"))``.  All arithmetic is exact; zero
coefficients are dropped eagerly so that equality is plain dict comparison.

Monomial order is graded lexicographic: higher total degree first, ties broken
by comparing exponent tuples in symbol declaration order.  The canonical text
form sorts monomials in descending graded-lex order, which makes serialized
output deterministic.

A ``RatFunc`` is a reduced fraction of two polynomials from the same ring.
Reduction divides out the full multivariate gcd (computed with a primitive
subresultant remainder sequence) and then scales so the denominator's leading
coefficient is 1.  Equality of reduced forms is therefore structural equality.

Determinants of polynomial matrices use Bareiss fraction-free elimination (all
intermediate divisions are exact), with a cheap singleton-row/column expansion
pass first so that sparse matrices collapse before elimination starts.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


class ExactAlgError(Exception):
    """Base error for this module."""


class SymbolMismatch(ExactAlgError):
    """Operands belong to different rings."""


class InexactDivision(ExactAlgError):
    """Polynomial division left a remainder where exactness was required."""


class DegenerateSpecialization(ExactAlgError):
    """A substitution made a denominator identically zero."""


class ZeroDenominator(ExactAlgError):
    """Attempt to build a rational function with zero denominator."""


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class PolyRing:
    """An ordered, immutable set of symbol names."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if len(set(syms)) != len(syms):
            raise ValueError(f"duplicate symbols in {syms!r}")
        for s in syms:
            if not s or not isinstance(s, str):
                raise ValueError(f"bad symbol name {s!r}")
        self.symbols = syms
        self._index = {s: i for i, s in enumerate(syms)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"PolyRing({self.symbols!r})"

    @property
    def nvars(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SymbolMismatch(f"symbol {name!r} not in ring {self.symbols}") from None

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, value: Scalar) -> "MultiPoly":
        c = _as_fraction(value)
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "MultiPoly":
        i = self.index(name)
        exp = [0] * self.nvars
        exp[i] = 1
        return MultiPoly(self, {tuple(exp): Fraction(1)})

    def poly(self, terms: Mapping[tuple, Scalar]) -> "MultiPoly":
        return MultiPoly(self, terms)


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """Exact multivariate polynomial; see module docstring for representation."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, Scalar]):
        clean: dict = {}
        n = ring.nvars
        for exp, coeff in terms.items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has wrong arity for {ring}")
            if any(e < 0 or not isinstance(e, int) for e in exp):
                raise ValueError(f"exponents must be non-negative integers: {exp}")
            c = _as_fraction(coeff)
            if c != 0:
                clean[exp] = c
        self.ring = ring
        self.terms = clean

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ExactAlgError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        """Degree in one symbol; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        i = self.ring.index(name)
        return max(e[i] for e in self.terms)

    def leading(self) -> tuple:
        """(exponent, coefficient) of the graded-lex leading term."""
        if self.is_zero:
            raise ExactAlgError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def denominator_lcm(self) -> int:
        """Least common multiple of coefficient denominators (1 if integral)."""
        lcm = 1
        for c in self.terms.values():
            lcm = lcm * c.denominator // _int_gcd(lcm, c.denominator)
        return lcm

    # -- arithmetic ---------------------------------------------------------

    def _check_ring(self, other: "MultiPoly") -> None:
        if self.ring != other.ring:
            raise SymbolMismatch(
                f"ring mismatch: {self.ring.symbols} vs {other.ring.symbols}"
            )

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check_ring(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in p.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return _raw_poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return _raw_poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return self + (-p)

    def __rsub__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return p + (-self)

    def __mul__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        if self.is_zero or p.is_zero:
            return self.ring.zero()
        a, b = self.terms, p.terms
        if len(a) > len(b):
            a, b = b, a
        # Integer-only operands take a plain-int accumulation loop: Fraction
        # renormalizes on every product, which dominates large multiplies.
        if all(c.denominator == 1 for c in a.values()) and all(
            c.denominator == 1 for c in b.values()
        ):
            ints: dict = {}
            for ea, ca in a.items():
                na = ca.numerator
                for eb, cb in b.items():
                    exp = tuple(x + y for x, y in zip(ea, eb))
                    s = ints.get(exp, 0) + na * cb.numerator
                    if s:
                        ints[exp] = s
                    else:
                        del ints[exp]
            return _raw_poly(self.ring, {e: Fraction(c) for e, c in ints.items()})
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(exp, Fraction(0)) + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return _raw_poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None  # mutable-ish container; not usable as a dict key

    # -- calculus and substitution ------------------------------------------

    def derivative(self, name: str) -> "MultiPoly":
        i = self.ring.index(name)
        out: dict = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e == 0:
                continue
            new = list(exp)
            new[i] = e - 1
            key = tuple(new)
            s = out.get(key, Fraction(0)) + c * e
            if s:
                out[key] = s
            else:
                del out[key]
        return _raw_poly(self.ring, out)

    def subs(self, bindings: Mapping[str, object]) -> "MultiPoly":
        """Substitute symbols by scalars or polynomials of the same ring."""
        values = {}
        for name, v in bindings.items():
            i = self.ring.index(name)
            if isinstance(v, MultiPoly):
                self._check_ring(v)
                values[i] = v
            else:
                values[i] = self.ring.const(_as_fraction(v))
        result = self.ring.zero()
        pow_cache: dict = {}
        for exp, c in self.terms.items():
            term = self.ring.const(c)
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                if i in values:
                    key = (i, e)
                    if key not in pow_cache:
                        pow_cache[key] = values[i] ** e
                    term = term * pow_cache[key]
                else:
                    mono = [0] * self.ring.nvars
                    mono[i] = e
                    term = term * _raw_poly(self.ring, {tuple(mono): Fraction(1)})
            result = result + term
        return result

    def eval_all(self, bindings: Mapping[str, Scalar]) -> Fraction:
        """Evaluate with every symbol bound to an exact rational."""
        out = Fraction(0)
        vals = [
            _as_fraction(bindings[s]) for s in self.ring.symbols
        ]  # KeyError if missing
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(vals, exp):
                if e:
                    term *= v**e
            out += term
        return out

    def eval_float(self, bindings: Mapping[str, float]) -> float:
        """Floating-point evaluation (for ODE monitoring, not identities)."""
        out = 0.0
        vals = [float(bindings[s]) for s in self.ring.symbols]
        for exp, c in self.terms.items():
            term = float(c)
            for v, e in zip(vals, exp):
                if e:
                    term *= v**e
            out += term
        return out

    def embed(self, ring: PolyRing) -> "MultiPoly":
        """Re-express in a larger ring containing all of this ring's symbols."""
        positions = [ring.index(s) for s in self.ring.symbols]
        out: dict = {}
        for exp, c in self.terms.items():
            new = [0] * ring.nvars
            for pos, e in zip(positions, exp):
                new[pos] = e
            out[tuple(new)] = c
        return _raw_poly(ring, out)

    # -- exact division -----------------------------------------------------

    def divexact(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact division; raises InexactDivision if not divisible."""
        d = self._coerce(divisor)
        if d is None or d.is_zero:
            raise InexactDivision("division by zero polynomial")
        if self.is_zero:
            return self.ring.zero()
        dexp, dc = d.leading()
        rem = dict(self.terms)
        q: dict = {}
        while rem:
            rexp = max(rem, key=_grlex_key)
            rc = rem[rexp]
            qexp = tuple(a - b for a, b in zip(rexp, dexp))
            if any(e < 0 for e in qexp):
                raise InexactDivision(f"({self}) not divisible by ({d})")
            qc = rc / dc
            q[qexp] = q.get(qexp, Fraction(0)) + qc
            for exp, c in d.terms.items():
                key = tuple(a + b for a, b in zip(qexp, exp))
                s = rem.get(key, Fraction(0)) - qc * c
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        return _raw_poly(self.ring, q)

    # -- serialization ------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                s if e == 1 else f"{s}^{e}"
                for s, e in zip(self.ring.symbols, exp)
                if e
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = text

    def __repr__(self) -> str:
        return f"MultiPoly({self.text()})"

    def to_json(self) -> dict:
        return {
            "symbols": list(self.ring.symbols),
            "terms": [[list(exp), str(c)] for exp, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        ring = PolyRing(data["symbols"])
        return cls(ring, {tuple(exp): Fraction(c) for exp, c in data["terms"]})


def _raw_poly(ring: PolyRing, terms: dict) -> MultiPoly:
    """Internal constructor for already-canonical term dicts."""
    p = MultiPoly.__new__(MultiPoly)
    p.ring = ring
    p.terms = terms
    return p


# ---------------------------------------------------------------------------
# multivariate gcd (subresultant remainder sequence)
# ---------------------------------------------------------------------------


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd on rationals: gcd of numerators over lcm of denominators, >= 0."""
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = _int_gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // _int_gcd(a.denominator, b.denominator)
    return Fraction(num, den)


def _rational_content(p: MultiPoly) -> Fraction:
    c = Fraction(0)
    for coeff in p.terms.values():
        c = _frac_gcd(c, coeff)
    return c


def _coeffs_in(p: MultiPoly, i: int) -> dict:
    """Decompose as a polynomial in symbol i with coefficients free of it."""
    out: dict = {}
    for exp, c in p.terms.items():
        e = exp[i]
        rest = list(exp)
        rest[i] = 0
        d = out.setdefault(e, {})
        d[tuple(rest)] = c
    return {e: _raw_poly(p.ring, d) for e, d in out.items()}


def _degree_idx(p: MultiPoly, i: int) -> int:
    if p.is_zero:
        return -1
    return max(exp[i] for exp in p.terms)


def _lead_coeff_in(p: MultiPoly, i: int) -> MultiPoly:
    d = _degree_idx(p, i)
    out: dict = {}
    for exp, c in p.terms.items():
        if exp[i] == d:
            rest = list(exp)
            rest[i] = 0
            out[tuple(rest)] = c
    return _raw_poly(p.ring, out)


# -- integer-coefficient core for the remainder sequence ---------------------
#
# The subresultant loop is multiplication-heavy, and Fraction normalizes on
# every operation.  A gcd is only defined up to a scalar, so the loop can run
# on plain-int coefficient dicts ({exponent tuple: int}) with denominators
# cleared once up front.


def _zz_clear(p: MultiPoly) -> dict:
    """Integer-coefficient copy of p, scaled to integer content one."""
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // _int_gcd(lcm, c.denominator)
    ints = {e: c.numerator * (lcm // c.denominator) for e, c in p.terms.items()}
    g = 0
    for c in ints.values():
        g = _int_gcd(g, c)
    if g > 1:
        ints = {e: c // g for e, c in ints.items()}
    return ints


def _zz_to_poly(ring: PolyRing, z: dict) -> MultiPoly:
    return _raw_poly(ring, {e: Fraction(c) for e, c in z.items()})


def _zz_deg(z: dict, i: int) -> int:
    if not z:
        return -1
    return max(e[i] for e in z)


def _zz_lead_in(z: dict, i: int) -> dict:
    d = _zz_deg(z, i)
    out = {}
    for exp, c in z.items():
        if exp[i] == d:
            rest = list(exp)
            rest[i] = 0
            out[tuple(rest)] = c
    return out


def _zz_mul(x: dict, y: dict) -> dict:
    if len(x) > len(y):
        x, y = y, x
    out: dict = {}
    for e1, c1 in x.items():
        for e2, c2 in y.items():
            k = tuple(i + j for i, j in zip(e1, e2))
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            elif k in out:
                del out[k]
    return out


def _zz_pow(x: dict, n: int, nvars: int) -> dict:
    out = {(0,) * nvars: 1}
    for _ in range(n):
        out = _zz_mul(out, x)
    return out


def _zz_pseudo_rem(a: dict, b: dict, i: int, nvars: int) -> dict:
    """Strict pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in symbol i.

    The full multiplier matters: the subresultant divisions assume it, so
    when cancellation drops the degree by more than one per pass the missing
    lc(b) factors are restored at the end.
    """
    db = _zz_deg(b, i)
    lcb = _zz_lead_in(b, i)
    r = a
    missing = _zz_deg(a, i) - db + 1
    while r and _zz_deg(r, i) >= db:
        dr = _zz_deg(r, i)
        shift = dr - db
        new = _zz_mul(lcb, r)
        for e2, c2 in _zz_mul(_zz_lead_in(r, i), b).items():
            k = list(e2)
            k[i] += shift
            k = tuple(k)
            v = new.get(k, 0) - c2
            if v:
                new[k] = v
            elif k in new:
                del new[k]
        r = new
        missing -= 1
    if missing > 0 and r:
        r = _zz_mul(_zz_pow(lcb, missing, nvars), r)
    return r


def _zz_divexact(x: dict, y: dict) -> dict:
    """Exact quotient x / y on integer dicts; graded-lex elimination."""
    if not y:
        raise ZeroDivisionError("exact division by zero polynomial")
    ye = max(y, key=_grlex_key)
    yc = y[ye]
    rem = dict(x)
    out: dict = {}
    while rem:
        xe = max(rem, key=_grlex_key)
        xc = rem[xe]
        qe = tuple(a - b for a, b in zip(xe, ye))
        if any(q < 0 for q in qe) or xc % yc:
            raise InexactDivision("quotient is not a polynomial")
        qc = xc // yc
        out[qe] = qc
        for e2, c2 in y.items():
            k = tuple(i + j for i, j in zip(qe, e2))
            v = rem.get(k, 0) - qc * c2
            if v:
                rem[k] = v
            elif k in rem:
                del rem[k]
    return out


# -- gcd degree bounds from integer evaluation --------------------------------
#
# Substituting integers for all symbols but one maps a polynomial divisor to
# a univariate divisor, so as long as the evaluation keeps the leading
# coefficient alive, deg gcd(a, b) in that symbol is at most the degree of
# the univariate integer gcd of the images.  A bound of zero everywhere
# proves the gcd is a constant and skips the remainder sequence outright.

_EVAL_POINTS = (
    (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67),
    (13, 31, 5, 23, 53, 3, 41, 11, 67, 17, 59, 7, 29, 61, 19, 43, 37, 47),
    (29, 7, 43, 3, 31, 37, 61, 53, 11, 47, 5, 67, 17, 23, 41, 13, 59, 19),
)


def _zz_eval_except(z: dict, main: int, pts: tuple) -> dict:
    """Univariate image {degree in main: int} at xj = pts[j] for j != main."""
    out: dict = {}
    cache: dict = {}
    for exp, c in z.items():
        v = c
        for j, e in enumerate(exp):
            if j == main or e == 0:
                continue
            p = cache.get((j, e))
            if p is None:
                p = pts[j] ** e
                cache[(j, e)] = p
            v *= p
        d = exp[main]
        s = out.get(d, 0) + v
        if s:
            out[d] = s
        elif d in out:
            del out[d]
    return out


def _uni_gcd_degree(u: dict, v: dict) -> int:
    """Degree of gcd of two nonzero univariate integer polynomials."""
    while v:
        du, dv = max(u), max(v)
        if du < dv:
            u, v = v, u
            continue
        lcv = v[dv]
        r = dict(u)
        while r and max(r) >= dv:
            dr = max(r)
            lcr = r[dr]
            new = {d: lcv * c for d, c in r.items()}
            for d, c in v.items():
                k = d + dr - dv
                s = new.get(k, 0) - lcr * c
                if s:
                    new[k] = s
                elif k in new:
                    del new[k]
            r = new
        if r:
            g = 0
            for c in r.values():
                g = _int_gcd(g, c)
            r = {d: c // g for d, c in r.items()}
        u, v = v, r
    return max(u)


def _gcd_var_bounds(za: dict, zb: dict, dva: list, dvb: list) -> list:
    """Per-symbol upper bounds for the gcd degree (None where unproven)."""
    bounds = []
    for i in range(len(dva)):
        if min(dva[i], dvb[i]) == 0:
            bounds.append(0)
            continue
        bound = None
        for pts in _EVAL_POINTS:
            ia = _zz_eval_except(za, i, pts)
            ib = _zz_eval_except(zb, i, pts)
            if ia and ib and max(ia) == dva[i] and max(ib) == dvb[i]:
                bound = _uni_gcd_degree(ia, ib)
                break
        bounds.append(bound)
    return bounds


def _content_in(p: MultiPoly, i: int) -> MultiPoly:
    coeffs = list(_coeffs_in(p, i).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = _gcd_rec(g, c)
        if g.is_constant:
            break
    return g


def _primitive_in(p: MultiPoly, i: int) -> MultiPoly:
    cont = _content_in(p, i)
    return p.divexact(cont)


def _monomial_min(p: MultiPoly) -> tuple:
    """Exponent-wise minimum over all terms (the monomial content)."""
    it = iter(p.terms)
    m = list(next(it))
    for exp in it:
        for k, e in enumerate(exp):
            if e < m[k]:
                m[k] = e
    return tuple(m)


def _monomial_quot(p: MultiPoly, m: tuple) -> MultiPoly:
    if not any(m):
        return p
    out = {}
    for exp, c in p.terms.items():
        out[tuple(e - f for e, f in zip(exp, m))] = c
    return _raw_poly(p.ring, out)


def _gcd_rec(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    ring = a.ring
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.is_constant or b.is_constant:
        return ring.const(_frac_gcd(_rational_content(a), _rational_content(b)))
    # Split off the common monomial part first: after division neither
    # operand is divisible by any single symbol, so the two gcd factors are
    # coprime and multiply back exactly.  (Tau denominators are mostly pure
    # powers of t, which this catches for free.)
    ma, mb = _monomial_min(a), _monomial_min(b)
    if any(ma) or any(mb):
        common = _raw_poly(
            ring, {tuple(min(e, f) for e, f in zip(ma, mb)): Fraction(1)}
        )
        return common * _gcd_rec(_monomial_quot(a, ma), _monomial_quot(b, mb))
    nv = ring.nvars
    za, zb = _zz_clear(a), _zz_clear(b)
    dva = [_zz_deg(za, i) for i in range(nv)]
    dvb = [_zz_deg(zb, i) for i in range(nv)]
    bounds = _gcd_var_bounds(za, zb, dva, dvb)
    if all(x == 0 for x in bounds):
        return ring.const(_frac_gcd(_rational_content(a), _rational_content(b)))
    # Main symbol: smallest positive degree (shortest remainder sequence)
    # among symbols the gcd can actually contain.
    main, best = -1, -1
    for i in range(nv):
        if bounds[i] == 0:
            continue
        d = max(dva[i], dvb[i])
        if d > 0 and (best < 0 or d < best):
            main, best = i, d
    if main < 0:  # unreachable given the all-zero check, but keep safe
        return ring.const(_frac_gcd(_rational_content(a), _rational_content(b)))
    if dva[main] == 0:
        return _gcd_rec(a, _content_in(b, main))
    if dvb[main] == 0:
        return _gcd_rec(_content_in(a, main), b)
    ca = _content_in(a, main)
    cb = _content_in(b, main)
    cg = _gcd_rec(ca, cb)
    zg = _zz_clear(a.divexact(ca))
    zh = _zz_clear(b.divexact(cb))
    if _zz_deg(zg, main) < _zz_deg(zh, main):
        zg, zh = zh, zg
    # Subresultant sequence on the primitive parts: each pseudo-remainder is
    # divided exactly by the tracked beta factor, so no content gcds are
    # needed inside the loop -- only once on the final element.
    one = (0,) * nv
    gap = _zz_deg(zg, main) - _zz_deg(zh, main)
    beta = {one: (-1) ** (gap + 1)}
    psi = {one: -1}
    while True:
        r = _zz_pseudo_rem(zg, zh, main, nv)
        if not r:
            break
        dr = _zz_deg(r, main)
        if dr == 0:
            zh = {one: 1}
            break
        r = _zz_divexact(r, beta)
        neg_lch = {e: -c for e, c in _zz_lead_in(zh, main).items()}
        if gap == 1:
            psi = neg_lch
        elif gap > 1:
            psi = _zz_divexact(_zz_pow(neg_lch, gap, nv), _zz_pow(psi, gap - 1, nv))
        gap = _zz_deg(zh, main) - dr
        beta = _zz_mul(neg_lch, _zz_pow(psi, gap, nv))
        zg, zh = zh, r
    return cg * _primitive_in(_zz_to_poly(ring, zh), main)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Multivariate gcd, normalized to leading (graded-lex) coefficient 1."""
    if a.ring != b.ring:
        raise SymbolMismatch("gcd operands must share a ring")
    if a.is_zero and b.is_zero:
        return a.ring.zero()
    g = _gcd_rec(a, b)
    _, lc = g.leading()
    if lc != 1:
        g = _raw_poly(g.ring, {e: c / lc for e, c in g.terms.items()})
    return g


# ---------------------------------------------------------------------------
# fraction-free determinant
# ---------------------------------------------------------------------------


def fraction_free_det(rows: Sequence[Sequence[MultiPoly]], ring: PolyRing = None) -> MultiPoly:
    """Exact determinant by Bareiss elimination.

    A singleton-expansion pass first removes rows/columns with at most one
    nonzero entry (the tau matrices are sparse with many unit rows), then
    Bareiss runs on the dense core.  The empty 0x0 determinant is 1 by
    convention, which requires an explicit ring.
    """
    n = len(rows)
    if n == 0:
        if ring is None:
            raise ValueError("0x0 determinant needs an explicit ring")
        return ring.one()
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    if ring is None:
        ring = m[0][0].ring
    sign = 1
    prefactor = ring.one()

    def nonzero_in_row(i):
        return [j for j in range(len(m)) if not m[i][j].is_zero]

    def nonzero_in_col(j):
        return [i for i in range(len(m)) if not m[i][j].is_zero]

    changed = True
    while m and changed:
        changed = False
        k = len(m)
        for i in range(k):
            nz = nonzero_in_row(i)
            if len(nz) == 0:
                return ring.zero()
            if len(nz) == 1:
                j = nz[0]
                if (i + j) % 2:
                    sign = -sign
                prefactor = prefactor * m[i][j]
                del m[i]
                for r in m:
                    del r[j]
                changed = True
                break
        if changed or not m:
            continue
        for j in range(len(m)):
            nz = nonzero_in_col(j)
            if len(nz) == 0:
                return ring.zero()
            if len(nz) == 1:
                i = nz[0]
                if (i + j) % 2:
                    sign = -sign
                prefactor = prefactor * m[i][j]
                del m[i]
                for r in m:
                    del r[j]
                changed = True
                break

    if not m:
        return prefactor if sign > 0 else -prefactor

    # Bareiss on the dense core.
    k = len(m)
    prev = ring.one()
    for col in range(k - 1):
        pivot_row = None
        for i in range(col, k):
            if not m[i][col].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            return ring.zero()
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign = -sign
        pivot = m[col][col]
        for i in range(col + 1, k):
            for j in range(col + 1, k):
                num = m[i][j] * pivot - m[i][col] * m[col][j]
                m[i][j] = num.divexact(prev)
            m[i][col] = ring.zero()
        prev = pivot
    det = prefactor * m[k - 1][k - 1]
    return det if sign > 0 else -det


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced quotient of two polynomials from one ring.

    Always stored with gcd(num, den) constant and the denominator's leading
    graded-lex coefficient equal to 1, which makes reduced forms canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None):
        if den is None:
            den = num.ring.one()
        if not isinstance(num, MultiPoly) or not isinstance(den, MultiPoly):
            raise TypeError("RatFunc needs MultiPoly numerator/denominator")
        if num.ring != den.ring:
            raise SymbolMismatch("numerator and denominator rings differ")
        if den.is_zero:
            raise ZeroDenominator("zero denominator")
        if num.is_zero:
            self.num = num.ring.zero()
            self.den = num.ring.one()
            return
        g = poly_gcd(num, den)
        if not g.is_constant:
            num = num.divexact(g)
            den = den.divexact(g)
        _, lc = den.leading()
        if lc != 1:
            inv = 1 / lc
            num = _raw_poly(num.ring, {e: c * inv for e, c in num.terms.items()})
            den = _raw_poly(den.ring, {e: c * inv for e, c in den.terms.items()})
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p)

    @classmethod
    def const(cls, ring: PolyRing, value: Scalar) -> "RatFunc":
        return cls(ring.const(value))

    @classmethod
    def var(cls, ring: PolyRing, name: str) -> "RatFunc":
        return cls(ring.var(name))

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ring != self.ring:
                raise SymbolMismatch("ring mismatch")
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.ring.const(other))
        return None

    def __add__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return RatFunc(self.num * r.den + r.num * self.den, self.den * r.den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return self + (-r)

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return r + (-self)

    def __mul__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return RatFunc(self.num * r.num, self.den * r.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        if r.is_zero:
            raise ZeroDenominator("division by zero rational function")
        return RatFunc(self.num * r.den, self.den * r.num)

    def __rtruediv__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return r / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("rational function power must be an integer")
        if n < 0:
            if self.is_zero:
                raise ZeroDenominator("negative power of zero")
            return RatFunc(self.den**(-n), self.num**(-n))
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        r = self._coerce(other) if isinstance(other, (RatFunc, MultiPoly, int, Fraction)) else None
        if r is None:
            return NotImplemented
        return self.num == r.num and self.den == r.den

    __hash__ = None

    # -- calculus / substitution ----------------------------------------------

    def derivative(self, name: str) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative(name) * d - n * d.derivative(name), d * d)

    def specialize(self, bindings: Mapping[str, Scalar]) -> "RatFunc":
        """Bind symbols to exact rationals; error if the denominator dies."""
        num = self.num.subs(bindings)
        den = self.den.subs(bindings)
        if den.is_zero:
            raise DegenerateSpecialization(
                f"denominator vanishes under {dict(bindings)!r}"
            )
        return RatFunc(num, den)

    def subs(self, bindings: Mapping[str, "RatFunc"]) -> "RatFunc":
        """Substitute symbols by rational functions of the same ring."""
        parts = {}
        for name, v in bindings.items():
            if isinstance(v, (int, Fraction)):
                v = RatFunc.const(self.ring, v)
            elif isinstance(v, MultiPoly):
                v = RatFunc(v)
            parts[name] = v
        num = _poly_sub_ratfunc(self.num, parts)
        den = _poly_sub_ratfunc(self.den, parts)
        if den.is_zero:
            raise DegenerateSpecialization("denominator vanishes under substitution")
        return num / den

    def eval_all(self, bindings: Mapping[str, Scalar]) -> Fraction:
        den = self.den.eval_all(bindings)
        if den == 0:
            raise DegenerateSpecialization(f"pole at {dict(bindings)!r}")
        return self.num.eval_all(bindings) / den

    def eval_float(self, bindings: Mapping[str, float]) -> float:
        return self.num.eval_float(bindings) / self.den.eval_float(bindings)

    # -- serialization ----------------------------------------------------------

    def text(self) -> str:
        if self.den == 1:
            return self.num.text()
        return f"({self.num.text()}) / ({self.den.text()})"

    __str__ = text

    def __repr__(self) -> str:
        return f"RatFunc({self.text()})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "RatFunc":
        return cls(MultiPoly.from_json(data["num"]), MultiPoly.from_json(data["den"]))


def _poly_sub_ratfunc(p: MultiPoly, bindings: Mapping[str, RatFunc]) -> RatFunc:
    ring = p.ring
    values = {ring.index(k): v for k, v in bindings.items()}
    out = RatFunc(ring.zero())
    for exp, c in p.terms.items():
        term = RatFunc(ring.const(c))
        for i, e in enumerate(exp):
            if e == 0:
                continue
            if i in values:
                term = term * values[i] ** e
            else:
                mono = [0] * ring.nvars
                mono[i] = e
                term = term * _raw_poly(ring, {tuple(mono): Fraction(1)})
        out = out + term
    return out


def poly_json_text(p) -> str:
    """Deterministic JSON text for either MultiPoly or RatFunc."""
    return json.dumps(p.to_json(), sort_keys=True, separators=(",", ":"))
