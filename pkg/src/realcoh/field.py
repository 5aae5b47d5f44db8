"""Exact arithmetic in a dynamically extended square-root-closed subfield of C.

The field is a tower Q(i)(sqrt(r1), ..., sqrt(rm)) where every radicand r_k is
a positive real element of the preceding subtower.  Elements are stored in a
unique normal form: a Q-linear combination of monomials i^b * prod sqrt(r_k),
b in {0,1}, over square-free subsets of the generators.  Zero testing is exact
(empty coordinate map), so all downstream identity checks are zero tolerance.

Square roots are total on nonzero elements: perfect squares are recognised
inside the tower, real positive radicands extend the tower, negative reals go
through i, unit-modulus elements use the closed half-angle form, and general
complex elements factor through their modulus.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Union

import mpmath

Rational = Union[int, Fraction]

_SQRT_CACHE_LIMIT = 4096


class FieldError(Exception):
    """Error with a stable machine-readable code."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(message or code)


def _rat_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    num = mpmath.libmp.isqrt(q.numerator)
    den = mpmath.libmp.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


class FieldTower:
    """A growing tower Q(i)(sqrt(r1),...,sqrt(rm)).

    Adjunction mutates the tower (append only), so previously built elements
    stay valid.  One tower per computation session; adjunction must be
    serialized externally if used from several threads.
    """

    def __init__(self, contains_i: bool = True):
        self.contains_i = contains_i
        self.gens: list[FieldElement] = []  # radicands, real positive
        self._sqrt_cache: dict = {}

    # -- element constructors -------------------------------------------------

    def from_rational(self, q: Rational) -> "FieldElement":
        q = Fraction(q)
        if q == 0:
            return FieldElement(self, {})
        return FieldElement(self, {(0, 0): q})

    def zero(self) -> "FieldElement":
        return FieldElement(self, {})

    def one(self) -> "FieldElement":
        return self.from_rational(1)

    def i(self) -> "FieldElement":
        if not self.contains_i:
            self.contains_i = True
        return FieldElement(self, {(1, 0): Fraction(1)})

    def gen_element(self, k: int) -> "FieldElement":
        """The element sqrt(r_k)."""
        return FieldElement(self, {(0, 1 << k): Fraction(1)})

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.tower is self:
                return x
            return self._import(x)
        return self.from_rational(x)

    def _import(self, x: "FieldElement") -> "FieldElement":
        """Re-express an element of another tower here (adjoining as needed)."""
        total = self.zero()
        for (ib, mask), c in x.coords.items():
            term = self.from_rational(c)
            if ib:
                term = term * self.i()
            k = 0
            m = mask
            while m:
                if m & 1:
                    term = term * self.sqrt(self._import(x.tower.gens[k]))
                k += 1
                m >>= 1
            total = total + term
        return total

    # -- square roots ---------------------------------------------------------

    def sqrt(self, x) -> "FieldElement":
        """Exact square root; may extend the tower.  Total for x != 0."""
        x = self.coerce(x)
        if x.is_zero():
            return self.zero()
        key = x._key()
        hit = self._sqrt_cache.get(key)
        if hit is not None:
            return hit
        r = self._sqrt_inner(x)
        assert (r * r - x).is_zero()
        r = _canonical_sign(r)
        if len(self._sqrt_cache) < _SQRT_CACHE_LIMIT:
            self._sqrt_cache[key] = r
        return r

    def _sqrt_inner(self, x: "FieldElement") -> "FieldElement":
        y = self._sqrt_in_tower(x)
        if y is not None:
            return y
        if x.is_real():
            if x.is_positive():
                return self._adjoin(x)
            return self.i() * self.sqrt(-x)
        norm2 = x * x.conj()  # real positive
        if (norm2 - self.one()).is_zero():
            # half-angle closed form for |x| = 1
            a = x.real_part()
            b = x.imag_part()
            if (x - self.one()).is_zero():
                return self.one()
            v = b + (self.one() - a) * self.i()
            scale = self.sqrt((self.one() - a) * self.from_rational(2))
            return v / scale
        m = self.sqrt(norm2)
        return self.sqrt(m) * self.sqrt(x / m)

    def _adjoin(self, r: "FieldElement") -> "FieldElement":
        """Adjoin sqrt(r) for a real positive r with no root in the tower."""
        self.gens.append(r)
        return self.gen_element(len(self.gens) - 1)

    def _sqrt_in_tower(self, x: "FieldElement") -> Optional["FieldElement"]:
        return self._sqrt_level(x, len(self.gens) - 1)

    def _sqrt_level(self, x: "FieldElement", k: int) -> Optional["FieldElement"]:
        """Square root of x using only generators 0..k and i, or None."""
        if x.is_zero():
            return self.zero()
        if k < 0:
            return self._sqrt_gaussian(x)
        g = self.gen_element(k)
        gval = self.gens[k]
        p, q = x._split(k)
        if q.is_zero():
            r = self._sqrt_level(p, k - 1)
            if r is not None:
                return r
            r = self._sqrt_level(p * gval, k - 1)
            if r is not None:
                return r * g / gval
            return None
        n2 = p * p - q * q * gval
        n = self._sqrt_level(n2, k - 1)
        if n is None:
            return None
        for sign in (1, -1):
            c2 = (p + n * sign) / 2
            if c2.is_zero():
                continue
            c = self._sqrt_level(c2, k - 1)
            if c is not None and not c.is_zero():
                d = q / (c * 2)
                return c + d * g
        return None

    def _sqrt_gaussian(self, x: "FieldElement") -> Optional["FieldElement"]:
        """Square root inside Q(i), or None."""
        a = x._rat_coeff(0, 0)
        b = x._rat_coeff(1, 0)
        if b == 0:
            r = _rat_sqrt(a)
            if r is not None:
                return self.from_rational(r)
            r = _rat_sqrt(-a)
            if r is not None:
                return self.from_rational(r) * self.i()
            return None
        s = _rat_sqrt(a * a + b * b)
        if s is None:
            return None
        for c2 in ((a + s) / 2, (a - s) / 2):
            c = _rat_sqrt(c2)
            if c is not None and c != 0:
                d = b / (2 * c)
                return self.from_rational(c) + self.from_rational(d) * self.i()
        return None

    # -- numerics (for sign determination only) -------------------------------

    def _gen_interval(self, k: int, prec: int):
        iv = mpmath.iv
        with mpmath.workprec(prec):
            rad = self.gens[k]._real_interval(prec)
            return iv.sqrt(rad)


def _canonical_sign(r: "FieldElement") -> "FieldElement":
    """Fix the sign of a square root deterministically.

    Convention: real part positive; if the real part is zero, imaginary part
    positive.
    """
    re = r.real_part()
    if not re.is_zero():
        return r if re.is_positive() else -r
    im = r.imag_part()
    if im.is_zero():
        return r
    return r if im.is_positive() else -r


class FieldElement:
    """Element of a FieldTower in normal form.

    coords maps monomials (i_bit, generator_mask) to nonzero rationals.
    """

    __slots__ = ("tower", "coords")

    def __init__(self, tower: FieldTower, coords: dict):
        self.tower = tower
        self.coords = coords

    # -- helpers --------------------------------------------------------------

    def _key(self):
        return frozenset(self.coords.items())

    def __hash__(self):
        return hash(self._key())

    def _rat_coeff(self, ib: int, mask: int) -> Fraction:
        return self.coords.get((ib, mask), Fraction(0))

    def _top_gen(self) -> int:
        top = -1
        for (_, mask) in self.coords:
            if mask:
                top = max(top, mask.bit_length() - 1)
        return top

    def _split(self, k: int):
        """Write self = p + q*sqrt(r_k); returns (p, q)."""
        bit = 1 << k
        p, q = {}, {}
        for (ib, mask), c in self.coords.items():
            if mask & bit:
                q[(ib, mask ^ bit)] = c
            else:
                p[(ib, mask)] = c
        return FieldElement(self.tower, p), FieldElement(self.tower, q)

    def is_rational(self) -> bool:
        return all(m == (0, 0) for m in self.coords)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise FieldError("not-rational")
        return self._rat_coeff(0, 0)

    def is_gaussian(self) -> bool:
        return all(mask == 0 for (_, mask) in self.coords)

    # -- ring structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other) -> bool:
        if not isinstance(other, (FieldElement, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero()

    def __add__(self, other) -> "FieldElement":
        other = self.tower.coerce(other)
        out = dict(self.coords)
        for m, c in other.coords.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return FieldElement(self.tower, out)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.tower, {m: -c for m, c in self.coords.items()})

    def __sub__(self, other) -> "FieldElement":
        return self + (-self.tower.coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return self.tower.coerce(other) - self

    def _mono_mul(self, m1, c1: Fraction, m2, c2: Fraction) -> "FieldElement":
        ib1, mask1 = m1
        ib2, mask2 = m2
        coeff = c1 * c2
        if ib1 and ib2:
            coeff = -coeff
        ib = ib1 ^ ib2
        common = mask1 & mask2
        base = FieldElement(self.tower, {(ib, mask1 ^ mask2): coeff})
        k = 0
        while common:
            if common & 1:
                base = base * self.tower.gens[k]
            k += 1
            common >>= 1
        return base

    def __mul__(self, other) -> "FieldElement":
        other = self.tower.coerce(other)
        if isinstance(other, FieldElement) and other.is_rational():
            q = other._rat_coeff(0, 0)
            if q == 0:
                return self.tower.zero()
            return FieldElement(self.tower, {m: c * q for m, c in self.coords.items()})
        if self.is_rational():
            return other * self
        total = self.tower.zero()
        for m1, c1 in self.coords.items():
            for m2, c2 in other.coords.items():
                total = total + self._mono_mul(m1, c1, m2, c2)
        return total

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise FieldError("division-by-zero")
        top = self._top_gen()
        if top < 0:
            a = self._rat_coeff(0, 0)
            b = self._rat_coeff(1, 0)
            n = a * a + b * b
            return FieldElement(
                self.tower,
                {
                    m: c
                    for m, c in (((0, 0), a / n), ((1, 0), -b / n))
                    if c != 0
                },
            )
        p, q = self._split(top)
        g = self.tower.gens[top]
        denom = p * p - q * q * g
        if denom.is_zero():
            raise FieldError(
                "tower-degenerate",
                "conjugate norm vanished; generator dependent on subtower",
            )
        inv_denom = denom.inverse()
        return (p - q * self.tower.gen_element(top)) * inv_denom

    def __truediv__(self, other) -> "FieldElement":
        other = self.tower.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self.tower.coerce(other) / self

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        out = self.tower.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- involution and real/imaginary structure ------------------------------

    def conj(self) -> "FieldElement":
        return FieldElement(
            self.tower,
            {m: (-c if m[0] else c) for m, c in self.coords.items()},
        )

    def real_part(self) -> "FieldElement":
        return FieldElement(
            self.tower, {m: c for m, c in self.coords.items() if m[0] == 0}
        )

    def imag_part(self) -> "FieldElement":
        """The real element y with self = real_part + i*y."""
        return FieldElement(
            self.tower, {(0, m[1]): c for m, c in self.coords.items() if m[0] == 1}
        )

    def is_real(self) -> bool:
        return all(m[0] == 0 for m in self.coords)

    def _real_interval(self, prec: int):
        """Rigorous enclosure of a real element."""
        iv = mpmath.iv
        with mpmath.workprec(prec):
            total = iv.mpf(0)
            for (ib, mask), c in self.coords.items():
                assert ib == 0
                term = iv.mpf(c.numerator) / iv.mpf(c.denominator)
                k = 0
                m = mask
                while m:
                    if m & 1:
                        term = term * self.tower._gen_interval(k, prec)
                    k += 1
                    m >>= 1
                total = total + term
            return total

    def is_positive(self) -> bool:
        """Exact sign of a nonzero real element via interval refinement."""
        if not self.is_real():
            raise FieldError("not-real")
        if self.is_zero():
            return False
        prec = 64
        while True:
            box = self._real_interval(prec)
            if box.a > 0:
                return True
            if box.b < 0:
                return False
            prec *= 2
            if prec > 1 << 16:
                raise FieldError("precision-exhausted")

    def complex_approx(self, prec: int = 53) -> complex:
        with mpmath.workprec(prec):
            re = self.real_part()
            im = self.imag_part()
            rv = float(mpmath.mpf(re._real_interval(prec).mid)) if not re.is_zero() else 0.0
            ivv = float(mpmath.mpf(im._real_interval(prec).mid)) if not im.is_zero() else 0.0
            return complex(rv, ivv)

    # -- printing -------------------------------------------------------------

    def __repr__(self):
        return f"<{format_element(self)}>"


def arith(x: FieldElement, y, op: str) -> FieldElement:
    """Dispatch wrapper matching the operation contract."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise FieldError("unknown-op", op)


# -- textual element grammar --------------------------------------------------
#
# expr   := term (('+'|'-') term)*
# term   := factor (('*'|'/') factor)*
# factor := '-' factor | atom
# atom   := rational | 'i' | 'sqrt' '(' expr ')' | '(' expr ')'


def format_element(x: FieldElement) -> str:
    if x.is_zero():
        return "0"
    tower = x.tower
    parts = []
    for (ib, mask), c in sorted(x.coords.items()):
        factors = []
        if abs(c) != 1 or (ib == 0 and mask == 0):
            factors.append(str(abs(c)))
        if ib:
            factors.append("i")
        k = 0
        m = mask
        while m:
            if m & 1:
                factors.append(f"sqrt({format_element(tower.gens[k])})")
            k += 1
            m >>= 1
        text = "*".join(factors) if factors else "1"
        parts.append(("-" if c < 0 else "+", text))
    sign0, first = parts[0]
    out = ("-" if sign0 == "-" else "") + first
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


class _Parser:
    def __init__(self, text: str, tower: FieldTower):
        self.text = text
        self.pos = 0
        self.tower = tower

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str):
        if self._peek() != ch:
            raise FieldError("parse-error", f"expected {ch!r} at {self.pos}")
        self.pos += 1

    def parse(self) -> FieldElement:
        x = self.expr()
        self._skip()
        if self.pos != len(self.text):
            raise FieldError("parse-error", f"trailing input at {self.pos}")
        return x

    def expr(self) -> FieldElement:
        x = self.term()
        while self._peek() in ("+", "-"):
            op = self._peek()
            self.pos += 1
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> FieldElement:
        x = self.factor()
        while self._peek() in ("*", "/"):
            op = self._peek()
            self.pos += 1
            y = self.factor()
            x = x * y if op == "*" else x / y
        return x

    def factor(self) -> FieldElement:
        if self._peek() == "-":
            self.pos += 1
            return -self.factor()
        return self.atom()

    def atom(self) -> FieldElement:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            x = self.expr()
            self._expect(")")
            return x
        if self.text.startswith("sqrt", self.pos):
            self.pos += 4
            self._expect("(")
            x = self.expr()
            self._expect(")")
            return self.tower.sqrt(x)
        if ch == "i" and not self.text.startswith("sqrt", self.pos):
            self.pos += 1
            return self.tower.i()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isdigit() or self.text[self.pos] == "/"
        ):
            # rational literal; '/' inside a literal only when followed by digits
            if self.text[self.pos] == "/":
                nxt = self.pos + 1
                if nxt >= len(self.text) or not self.text[nxt].isdigit():
                    break
            self.pos += 1
        if self.pos == start:
            raise FieldError("parse-error", f"unexpected input at {self.pos}")
        return self.tower.from_rational(Fraction(self.text[start:self.pos]))


def parse_element(text: str, tower: FieldTower) -> FieldElement:
    return _Parser(text, tower).parse()


# -- polynomials over the field ----------------------------------------------


def poly_normalize(p: list) -> list:
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_degree(p: list) -> int:
    return len(p) - 1


def poly_mul(p: list, q: list, tower: FieldTower) -> list:
    if not p or not q:
        return []
    out = [tower.zero() for _ in range(len(p) + len(q) - 1)]
    for a, ca in enumerate(p):
        for b, cb in enumerate(q):
            out[a + b] = out[a + b] + ca * cb
    return poly_normalize(out)


def poly_divmod(p: list, q: list, tower: FieldTower):
    p = list(p)
    if not q:
        raise FieldError("division-by-zero")
    quot = [tower.zero() for _ in range(max(0, len(p) - len(q) + 1))]
    lead_inv = q[-1].inverse()
    while len(p) >= len(q) and poly_normalize(p):
        if len(p) < len(q):
            break
        c = p[-1] * lead_inv
        d = len(p) - len(q)
        quot[d] = quot[d] + c
        for k, qc in enumerate(q):
            p[d + k] = p[d + k] - c * qc
        p = poly_normalize(p)
    return poly_normalize(quot), p


def poly_gcd(p: list, q: list, tower: FieldTower) -> list:
    p, q = poly_normalize(list(p)), poly_normalize(list(q))
    while q:
        _, r = poly_divmod(p, q, tower)
        p, q = q, r
    if p:
        inv = p[-1].inverse()
        p = [c * inv for c in p]
    return p


def poly_derivative(p: list, tower: FieldTower) -> list:
    return poly_normalize([p[k] * k for k in range(1, len(p))])


def poly_eval(p: list, x: FieldElement, tower: FieldTower) -> FieldElement:
    acc = tower.zero()
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _factor_gaussian(p: list, tower: FieldTower) -> list:
    """Factor a polynomial with Gaussian-rational coefficients via sympy."""
    import sympy

    x = sympy.Symbol("x")
    expr = 0
    for k, c in enumerate(p):
        a = c._rat_coeff(0, 0)
        b = c._rat_coeff(1, 0)
        expr += (sympy.Rational(a.numerator, a.denominator)
                 + sympy.I * sympy.Rational(b.numerator, b.denominator)) * x ** k
    poly = sympy.Poly(expr, x, extension=[sympy.I])
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = fac.all_coeffs()[::-1]
        converted = []
        for c in coeffs:
            c = sympy.nsimplify(c)
            re, im = c.as_real_imag()
            converted.append(
                tower.from_rational(Fraction(int(re.p), int(re.q)))
                + tower.from_rational(Fraction(int(im.p), int(im.q))) * tower.i()
            )
        # make monic
        inv = converted[-1].inverse()
        converted = [c * inv for c in converted]
        for _ in range(mult):
            out.append(poly_normalize(list(converted)))
    return out


def _split_squarefree(p: list, tower: FieldTower) -> list:
    """Split a monic square-free polynomial into linear/quadratic factors."""
    deg = poly_degree(p)
    if deg <= 1:
        return [p]
    if deg == 2:
        b, c = p[1], p[0]
        disc = b * b - c * 4
        if disc.is_zero():
            root = -b / 2
            lin = [-root, tower.one()]
            return [lin, lin]
        s = tower.sqrt(disc)
        r1 = (-b + s) / 2
        r2 = (-b - s) / 2
        return [[-r1, tower.one()], [-r2, tower.one()]]
    if all(c.is_gaussian() for c in p):
        pieces = _factor_gaussian(p, tower)
        out = []
        for piece in pieces:
            if poly_degree(piece) > 2:
                raise FieldError(
                    "factor-degree-exceeded",
                    f"irreducible factor of degree {poly_degree(piece)}",
                )
            out.extend(_split_squarefree(piece, tower) if poly_degree(piece) == 2 else [piece])
        return out
    raise FieldError(
        "factor-degree-exceeded",
        "cannot split degree > 2 polynomials with non-Gaussian coefficients",
    )


def split_poly(p: list, tower: FieldTower) -> list:
    """Split a monic polynomial into factors of degree <= 2.

    Returns a list of monic factors (as coefficient lists, low degree first)
    whose product is p.  Raises FieldError("factor-degree-exceeded") when an
    irreducible factor of degree > 2 appears over the current tower.
    """
    p = poly_normalize([tower.coerce(c) for c in p])
    if not p:
        raise FieldError("zero-polynomial")
    if not (p[-1] - tower.one()).is_zero():
        raise FieldError("not-monic")
    out = []
    rest = p
    while poly_degree(rest) > 0:
        d = poly_gcd(rest, poly_derivative(rest, tower), tower)
        sqfree, _ = poly_divmod(rest, d, tower)
        for factor in _split_squarefree(sqfree, tower):
            out.append(factor)
            rest, rem = poly_divmod(rest, factor, tower)
            assert not rem
    return out
