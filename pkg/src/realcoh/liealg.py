"""Exact Lie algebra algorithms: Levi-type decompositions, Cartan
subalgebras, conjugation of decomposition data, Jordan decomposition, and
membership in a connected algebraic group.

Matrices live in gl(n) over a square-root-closed field tower.  Internally
most algorithms run on structure-constant algebras; elements are coordinate
row vectors with respect to a fixed basis, and linear maps act on the right
(rows-are-images), matching the conventions of the rest of the package.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .field import (
    FieldError,
    FieldTower,
    poly_divmod,
    poly_mul,
    poly_normalize,
    split_poly,
)
from .linalg import (
    charpoly,
    left_kernel,
    mconj,
    meq,
    meye,
    minverse,
    mmul,
    msub,
    mtrace,
    mzeros,
    row_reduce,
    solve_left,
    vmat,
)


class LieError(Exception):
    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(message or code)


# -- coordinate subspaces --------------------------------------------------------


def rref_rows(vectors: list, tower: FieldTower) -> list:
    """Reduced nonzero basis rows of the span of the given row vectors."""
    vecs = [v for v in vectors if any(not x.is_zero() for x in v)]
    if not vecs:
        return []
    rows, _, pivots = row_reduce(vecs, tower)
    return rows[: len(pivots)]


def reduce_row(v: list, basis: list) -> list:
    v = list(v)
    for row in basis:
        j = next(c for c, x in enumerate(row) if not x.is_zero())
        if not v[j].is_zero():
            f = v[j]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def in_span(v: list, basis: list) -> bool:
    return all(x.is_zero() for x in reduce_row(v, basis))


def span_eq(a: list, b: list) -> bool:
    return len(a) == len(b) and all(in_span(v, b) for v in a) \
        and all(v is not None for v in a)


def span_intersect(a: list, b: list, tower: FieldTower) -> list:
    if not a or not b:
        return []
    stacked = [list(r) for r in a] + [[-x for x in r] for r in b]
    out = []
    for c in left_kernel(stacked, tower):
        v = [tower.zero()] * len(a[0])
        for idx in range(len(a)):
            if not c[idx].is_zero():
                v = [x + c[idx] * y for x, y in zip(v, a[idx])]
        out.append(v)
    return rref_rows(out, tower)


def span_sum(a: list, b: list, tower: FieldTower) -> list:
    return rref_rows(list(a) + list(b), tower)


# -- structure constant algebras -------------------------------------------------


class SCAlgebra:
    """Lie algebra given by structure constants on a fixed basis."""

    def __init__(self, table: list, tower: FieldTower, check: bool = False):
        self.table = table  # table[a][b] = coords of [e_a, e_b]
        self.tower = tower
        self.dim = len(table)
        if check:
            self._check()

    def _check(self):
        n = self.dim
        for a in range(n):
            for b in range(n):
                s = [x + y for x, y in zip(self.table[a][b], self.table[b][a])]
                if any(not x.is_zero() for x in s):
                    raise LieError("not-antisymmetric")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    jac = self.bracket(self.table[a][b], self._e(c))
                    jac = [x + y for x, y in zip(
                        jac, self.bracket(self.table[b][c], self._e(a)))]
                    jac = [x + y for x, y in zip(
                        jac, self.bracket(self.table[c][a], self._e(b)))]
                    if any(not x.is_zero() for x in jac):
                        raise LieError("jacobi-fails")

    def _e(self, i: int) -> list:
        v = [self.tower.zero()] * self.dim
        v[i] = self.tower.one()
        return v

    def basis_rows(self) -> list:
        return [self._e(i) for i in range(self.dim)]

    def bracket(self, u: list, v: list) -> list:
        out = [self.tower.zero()] * self.dim
        for a in range(self.dim):
            if u[a].is_zero():
                continue
            for b in range(self.dim):
                if v[b].is_zero():
                    continue
                f = u[a] * v[b]
                out = [x + f * y for x, y in zip(out, self.table[a][b])]
        return out

    def ad(self, u: list) -> list:
        """Matrix of ad(u) acting on coordinate rows, v |-> coords([u, v])."""
        return [self.bracket(u, self._e(j)) for j in range(self.dim)]

    def product_space(self, a: list, b: list) -> list:
        vecs = [self.bracket(x, y) for x in a for y in b]
        return rref_rows(vecs, self.tower)

    def derived_series(self, a: list) -> list:
        series = [rref_rows(a, self.tower)]
        while series[-1]:
            nxt = self.product_space(series[-1], series[-1])
            if span_eq(nxt, series[-1]):
                break
            series.append(nxt)
        return series

    def lower_central_series(self, a: list) -> list:
        series = [rref_rows(a, self.tower)]
        while series[-1]:
            nxt = self.product_space(series[0], series[-1])
            if span_eq(nxt, series[-1]):
                break
            series.append(nxt)
        return series

    def killing(self, u: list, v: list):
        m = mmul(self.ad(u), self.ad(v))
        acc = self.tower.zero()
        for i in range(self.dim):
            acc = acc + m[i][i]
        return acc

    def radical(self) -> list:
        """Solvable radical: Killing-orthogonal of the derived subalgebra."""
        derived = self.product_space(self.basis_rows(), self.basis_rows())
        if not derived:
            return self.basis_rows()
        gram = [[self.killing(self._e(i), d) for d in derived]
                for i in range(self.dim)]
        return left_kernel(gram, self.tower)

    def centralizer(self, a: list, b: list) -> list:
        """{x in span(a) : [x, y] = 0 for all y in span(b)}."""
        if not a:
            return []
        if not b:
            return rref_rows(a, self.tower)
        cols = []
        for x in a:
            row = []
            for y in b:
                row.extend(self.bracket(x, y))
            cols.append(row)
        coeffs = left_kernel(cols, self.tower)
        out = []
        for c in coeffs:
            v = [self.tower.zero()] * self.dim
            for idx in range(len(a)):
                if not c[idx].is_zero():
                    v = [p + c[idx] * q for p, q in zip(v, a[idx])]
            out.append(v)
        return rref_rows(out, self.tower)

    def center_of(self, a: list) -> list:
        return self.centralizer(a, a)

    def normalizer_contains(self, h: list, x: list) -> bool:
        return all(in_span(self.bracket(x, y), h) for y in h)

    # -- quotients and subalgebras ---------------------------------------------

    def quotient(self, ideal: list):
        """Quotient algebra by an ideal.

        Returns (algebra, proj, lift): proj maps coordinate rows of self to
        quotient coordinates, lift picks coset representatives.
        """
        ib = rref_rows(ideal, self.tower)
        pivots = [next(c for c, x in enumerate(row) if not x.is_zero())
                  for row in ib]
        free = [j for j in range(self.dim) if j not in pivots]

        def proj(v):
            red = reduce_row(v, ib)
            return [red[j] for j in free]

        def lift(w):
            v = [self.tower.zero()] * self.dim
            for idx, j in enumerate(free):
                v[j] = w[idx]
            return v

        table = [[proj(self.bracket(self._e(free[a]), self._e(free[b])))
                  for b in range(len(free))] for a in range(len(free))]
        return SCAlgebra(table, self.tower), proj, lift

    def subalgebra(self, rows: list):
        """Algebra on the span of rows (must be closed under the bracket).

        Returns (algebra, embed, coords): embed maps sub-coordinates to
        self-coordinates, coords inverts it on the subspace.
        """
        basis = rref_rows(rows, self.tower)
        m = len(basis)

        def embed(w):
            v = [self.tower.zero()] * self.dim
            for idx in range(m):
                if not w[idx].is_zero():
                    v = [p + w[idx] * q for p, q in zip(v, basis[idx])]
            return v

        def coords(v):
            sol = solve_left(basis, v, self.tower) if m else []
            if sol is None:
                raise LieError("not-in-subalgebra")
            return sol

        table = [[coords(self.bracket(basis[a], basis[b]))
                  for b in range(m)] for a in range(m)]
        return SCAlgebra(table, self.tower), embed, coords

    # -- Fitting decomposition --------------------------------------------------

    def generalized_kernel(self, op: list, space: list) -> list:
        """Generalized 0-eigenspace of the operator op restricted to space."""
        basis = rref_rows(space, self.tower)
        if not basis:
            return []
        m = len(basis)
        restr = []
        for row in basis:
            img = vmat(row, op)
            sol = solve_left(basis, img, self.tower)
            if sol is None:
                raise LieError("not-invariant")
            restr.append(sol)
        power = meye(self.tower, m)
        for _ in range(m):
            power = mmul(power, restr)
        coeffs = left_kernel(power, self.tower)
        out = []
        for c in coeffs:
            v = [self.tower.zero()] * self.dim
            for idx in range(m):
                if not c[idx].is_zero():
                    v = [p + c[idx] * q for p, q in zip(v, basis[idx])]
            out.append(v)
        return rref_rows(out, self.tower)

    def fitting(self, a: list, h: list) -> tuple:
        """Fitting decomposition of span(a) relative to the nilpotent
        subalgebra span(h): (null component, one component)."""
        a = rref_rows(a, self.tower)
        h = rref_rows(h, self.tower)
        a0 = a
        while True:
            nxt = a0
            for y in h:
                nxt = self.generalized_kernel(self.ad(y), nxt)
            if span_eq(nxt, a0):
                break
            a0 = nxt
        a1 = a
        while True:
            nxt = rref_rows([self.bracket(y, v) for y in h for v in a1],
                            self.tower)
            if span_eq(nxt, a1):
                break
            a1 = nxt
        if h and a1 and span_intersect(a0, a1, self.tower):
            raise LieError("fitting-failed")
        if len(a0) + len(a1) != len(a):
            raise LieError("fitting-failed")
        return a0, a1

    def fitting_null_of_element(self, x: list) -> list:
        return self.generalized_kernel(self.ad(x), self.basis_rows())

    # -- Cartan subalgebras -----------------------------------------------------

    def cartan_subalgebra(self, seed: int = 0) -> list:
        """A Cartan subalgebra, by random regular elements (seeded)."""
        if self.dim == 0:
            return []
        rng = random.Random(seed)
        omega = 2 * max(self.dim, 1)
        for _ in range(200):
            x = [self.tower.from_rational(rng.randrange(omega))
                 for _ in range(self.dim)]
            if all(t.is_zero() for t in x):
                continue
            h = self.fitting_null_of_element(x)
            if self._confirm_cartan(h):
                return h
        raise LieError("cartan-not-found")

    def _confirm_cartan(self, h: list) -> bool:
        if not self.is_nilpotent_space(h):
            return False
        try:
            a0, _ = self.fitting(self.basis_rows(), h)
        except LieError:
            return False
        return span_eq(a0, h)

    def is_nilpotent_space(self, h: list) -> bool:
        if not h:
            return True
        series = self.lower_central_series(h)
        return series[-1] == [] or not series[-1]

    def regular_element(self, h: list, seed: int = 0) -> list:
        """x in the Cartan subalgebra h with null component exactly h."""
        rng = random.Random(seed)
        omega = 2 * max(self.dim, 1)
        h = rref_rows(h, self.tower)
        for _ in range(200):
            c = [rng.randrange(omega) for _ in range(len(h))]
            x = [self.tower.zero()] * self.dim
            for idx, ci in enumerate(c):
                if ci:
                    x = [p + self.tower.from_rational(ci) * q
                         for p, q in zip(x, h[idx])]
            if any(not t.is_zero() for t in x) and \
                    span_eq(self.fitting_null_of_element(x), h):
                return x
        raise LieError("regular-not-found")

    # -- exp(ad x) --------------------------------------------------------------

    def exp_ad(self, x: list) -> list:
        """Operator exp(ad x) on coordinate rows; ad x must be nilpotent."""
        adx = self.ad(x)
        out = meye(self.tower, self.dim)
        term = meye(self.tower, self.dim)
        k = 1
        while True:
            term = mmul(term, adx)
            if all(t.is_zero() for row in term for t in row):
                break
            f = self.tower.from_rational(Fraction(1, _factorial(k)))
            out = [[a + f * b for a, b in zip(ra, rb)]
                   for ra, rb in zip(out, term)]
            k += 1
            if k > self.dim + 1:
                raise LieError("ad-not-nilpotent")
        return out

    def apply_operator(self, op: list, space: list) -> list:
        return rref_rows([vmat(v, op) for v in space], self.tower)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# -- Levi decomposition (abstract) -----------------------------------------------


def levi_subalgebra(alg: SCAlgebra) -> list:
    """Rows spanning a semisimple complement to the radical."""
    rad = alg.radical()
    if not rad:
        return alg.basis_rows()
    series = alg.derived_series(rad)
    ideal = series[-1] if series[-1] else series[-2]
    # ideal is the last nonzero term of the derived series: abelian, and an
    # ideal of the whole algebra
    quot, proj, lift = alg.quotient(ideal)
    sbar = levi_subalgebra(quot)
    reps = [lift(w) for w in sbar]
    m = len(reps)
    p = len(ideal)
    ib = rref_rows(ideal, alg.tower)

    def icoords(v):
        sol = solve_left(ib, v, alg.tower)
        if sol is None:
            raise LieError("not-in-ideal")
        return sol

    # structure constants of the quotient Levi on the chosen representatives
    sc = [[solve_left(sbar, quot.bracket(sbar[a], sbar[b]), alg.tower)
           for b in range(m)] for a in range(m)]
    if any(entry is None for row in sc for entry in row):
        raise LieError("levi-not-closed")
    if m == 0 or p == 0:
        return rref_rows(reps, alg.tower)
    # unknowns u_a in the ideal correcting reps to close under the bracket
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    ncols = len(pairs) * p
    rows = []
    tower = alg.tower
    zero = tower.zero()
    for a in range(m):
        for k in range(p):
            row = [zero] * ncols
            for pi, (x, y) in enumerate(pairs):
                contrib = [zero] * p
                if x == a:
                    # -[rep_y, i_k] term from -ad(rep_y)(u_x) with sign
                    contrib = [c - d for c, d in zip(
                        contrib, icoords(alg.bracket(reps[y], ib[k])))]
                if y == a:
                    contrib = [c + d for c, d in zip(
                        contrib, icoords(alg.bracket(reps[x], ib[k])))]
                if not sc[x][y][a].is_zero():
                    contrib[k] = contrib[k] - sc[x][y][a]
                for j in range(p):
                    row[pi * p + j] = contrib[j]
            rows.append(row)
    target = []
    for (x, y) in pairs:
        z = alg.bracket(reps[x], reps[y])
        for c in range(m):
            if not sc[x][y][c].is_zero():
                z = [zi - sc[x][y][c] * ri for zi, ri in zip(z, reps[c])]
        target.extend([-t for t in icoords(z)])
    sol = solve_left(rows, target, tower)
    if sol is None:
        raise LieError("levi-correction-failed")
    out = []
    for a in range(m):
        v = list(reps[a])
        for k in range(p):
            c = sol[a * p + k]
            if not c.is_zero():
                v = [vi + c * bi for vi, bi in zip(v, ib[k])]
        out.append(v)
    out = rref_rows(out, alg.tower)
    # verify closure
    for x in out:
        for y in out:
            if not in_span(alg.bracket(x, y), out):
                raise LieError("levi-not-closed")
    return out


def combine_rows(rows: list, coeffs: list, tower: FieldTower, dim: int) -> list:
    v = [tower.zero()] * dim
    for r, c in zip(rows, coeffs):
        if not c.is_zero():
            v = [p + c * q for p, q in zip(v, r)]
    return v


def compose_exp(alg: SCAlgebra, zs: list) -> list:
    """Operator exp(ad z_1) o ... o exp(ad z_k); the last z is applied first."""
    op = meye(alg.tower, alg.dim)
    for z in zs:
        op = mmul(alg.exp_ad(z), op)
    return op


# -- conjugating Cartan subalgebras of a solvable algebra ------------------------


def conj_cartan_solvable_sc(alg: SCAlgebra, h1: list, h2: list) -> list:
    """Elements x_1..x_k of [b,b] with exp(ad x_1)...exp(ad x_k)(h1) = h2."""
    tower = alg.tower
    h1 = rref_rows(h1, tower)
    h2 = rref_rows(h2, tower)
    if span_eq(h1, h2):
        return []
    b = alg.basis_rows()
    series = alg.derived_series(b)
    if series[-1]:
        raise LieError("not-solvable")
    ideal = series[-2]
    if span_eq(span_sum(h2, ideal, tower), b):
        # the one-component of b relative to h2 is then an abelian ideal,
        # and b = h1 (+) b1(h2) = h2 (+) b1(h2)
        ideal = alg.fitting(b, h2)[1]
        if not ideal:
            raise LieError("conjugation-failed")
        u = alg.regular_element(h2)
        stacked = h1 + ideal
        sol = solve_left(stacked, u, tower)
        if sol is None:
            raise LieError("conjugation-failed")
        y = combine_rows(ideal, sol[len(h1):], tower, alg.dim)
        rows = [alg.bracket(v, u) for v in ideal]
        zc = solve_left(rows, y, tower)
        if zc is None:
            raise LieError("conjugation-failed")
        z = combine_rows(ideal, zc, tower, alg.dim)
        if not span_eq(alg.apply_operator(alg.exp_ad(z), h1), h2):
            raise LieError("conjugation-failed")
        return [z]
    # recurse in the quotient, then inside h2 + ideal
    quot, proj, _lift = alg.quotient(ideal)
    xs_bar = conj_cartan_solvable_sc(
        quot, [proj(v) for v in h1], [proj(v) for v in h2])
    derived = alg.product_space(b, b)
    proj_der = [proj(v) for v in derived]
    xs = []
    for xb in xs_bar:
        sol = solve_left(proj_der, xb, tower)
        if sol is None:
            raise LieError("conjugation-failed")
        xs.append(combine_rows(derived, sol, tower, alg.dim))
    h0 = alg.apply_operator(compose_exp(alg, xs), h1)
    a = span_sum(h2, ideal, tower)
    sub, embed, coords = alg.subalgebra(a)
    ys_sub = conj_cartan_solvable_sc(
        sub, [coords(v) for v in h0], [coords(v) for v in h2])
    ys = [embed(y) for y in ys_sub]
    result = ys + xs
    if not span_eq(alg.apply_operator(compose_exp(alg, result), h1), h2):
        raise LieError("conjugation-failed")
    return result


# -- conjugating Levi subalgebras -------------------------------------------------


def conj_levi_sc(alg: SCAlgebra, s1: list, s2: list) -> list:
    """z in [g, r] with exp(ad z)(s1) = s2."""
    tower = alg.tower
    zero = [tower.zero()] * alg.dim
    s1 = rref_rows(s1, tower)
    s2 = rref_rows(s2, tower)
    if span_eq(s1, s2):
        return zero
    rad = alg.radical()
    b = alg.basis_rows()
    gr = alg.product_space(b, rad)
    if not gr:
        raise LieError("conjugation-failed")
    rr = alg.product_space(rad, rad)
    rad_b = rref_rows(rad, tower)
    if not rr and span_eq(gr, rad_b):
        # abelian radical with [g, r] = r: one linear solve
        stacked = s2 + rad_b
        rows = []
        for k in range(len(rad_b)):
            row = []
            for x in s1:
                row.extend(alg.bracket(rad_b[k], x))
            rows.append(row)
        target = []
        for x in s1:
            sol = solve_left(stacked, x, tower)
            if sol is None:
                raise LieError("conjugation-failed")
            xr = combine_rows(rad_b, sol[len(s2):], tower, alg.dim)
            target.extend([-t for t in xr])
        ac = solve_left(rows, target, tower)
        if ac is None:
            raise LieError("conjugation-failed")
        a = combine_rows(rad_b, ac, tower, alg.dim)
        if not span_eq(alg.apply_operator(alg.exp_ad(a), s1), s2):
            raise LieError("conjugation-failed")
        return a
    # general case: split off the center of [g, r]
    c = alg.center_of(gr)
    if not c:
        raise LieError("conjugation-failed")
    quot, proj, _lift = alg.quotient(c)
    abar = conj_levi_sc(quot, [proj(v) for v in s1], [proj(v) for v in s2])
    grb = rref_rows(gr, tower)
    sol = solve_left([proj(v) for v in grb], abar, tower)
    if sol is None:
        raise LieError("conjugation-failed")
    a = combine_rows(grb, sol, tower, alg.dim)
    s0 = alg.apply_operator(alg.exp_ad(a), s1)
    asub = span_sum(s2, c, tower)
    sub, embed, coords = alg.subalgebra(asub)
    bsub = conj_levi_sc(sub, [coords(v) for v in s0], [coords(v) for v in s2])
    bvec = embed(bsub)
    z = [p + q for p, q in zip(a, bvec)]
    if not span_eq(alg.apply_operator(alg.exp_ad(z), s1), s2):
        raise LieError("conjugation-failed")
    return z


def cartan_containing_torus(alg: SCAlgebra, t_rows: list, seed: int = 0) -> list:
    """A Cartan subalgebra of alg containing the toral subalgebra t_rows."""
    zc = alg.centralizer(alg.basis_rows(), t_rows)
    sub, embed, _coords = alg.subalgebra(zc)
    h = rref_rows([embed(v) for v in sub.cartan_subalgebra(seed)], alg.tower)
    for v in t_rows:
        if not in_span(v, h):
            raise LieError("cartan-not-found")
    return h


def conj_levi_torus_sc(alg: SCAlgebra, s1: list, t1: list,
                       s2: list, t2: list) -> list:
    """Nilpotent elements z_1..z_k with the composite exp(ad z_1)...
    exp(ad z_k) mapping (s1, t1) onto (s2, t2)."""
    tower = alg.tower
    z = conj_levi_sc(alg, s1, s2)
    tail = [] if all(x.is_zero() for x in z) else [z]
    op0 = compose_exp(alg, tail)
    t0 = alg.apply_operator(op0, rref_rows(t1, tower))
    ghat = alg.centralizer(alg.basis_rows(), rref_rows(s2, tower))
    sub, embed, coords = alg.subalgebra(ghat)
    h0 = cartan_containing_torus(sub, [coords(v) for v in t0])
    h2 = cartan_containing_torus(sub, [coords(v) for v in t2])
    ys = [embed(y) for y in conj_cartan_solvable_sc(sub, h0, h2)]
    zs = ys + tail
    op = compose_exp(alg, zs)
    if not span_eq(alg.apply_operator(op, rref_rows(s1, tower)),
                   rref_rows(s2, tower)) or \
            not span_eq(alg.apply_operator(op, rref_rows(t1, tower)),
                        rref_rows(t2, tower)):
        raise LieError("conjugation-failed")
    return zs


def align_cartan_sc(alg: SCAlgebra, h0: list, s: list, t: list,
                    n: list) -> tuple:
    """(h_s, h, x_1..x_k): h is a Cartan subalgebra containing h_s (+) t,
    and the nilpotent x_i conjugate h0 onto h."""
    tower = alg.tower
    h0 = rref_rows(h0, tower)
    rad = span_sum(t, n, tower)
    _quot, proj, _lift = alg.quotient(rad)
    s_rref = rref_rows(s, tower)
    sproj = [proj(v) for v in s_rref]
    h_s = []
    for v in h0:
        sol = solve_left(sproj, proj(v), tower)
        if sol is None:
            raise LieError("alignment-failed")
        h_s.append(combine_rows(s_rref, sol, tower, alg.dim))
    h_s = rref_rows(h_s, tower)
    u = span_sum(h_s, t, tower)
    h = cartan_containing_torus(alg, u)
    if not alg._confirm_cartan(h):
        raise LieError("alignment-failed")
    b = span_sum(h, rad, tower)
    bsub, bembed, bcoords = alg.subalgebra(b)
    xs = [bembed(x) for x in conj_cartan_solvable_sc(
        bsub, [bcoords(v) for v in h0], [bcoords(v) for v in h])]
    n_rref = rref_rows(n, tower)
    for x in xs:
        if not in_span(x, n_rref):
            raise LieError("alignment-failed")
    if not span_eq(alg.apply_operator(compose_exp(alg, xs), h0), h):
        raise LieError("alignment-failed")
    return h_s, h, xs


# -- matrix-level Lie algebra data -----------------------------------------------


def _flatten(mat: list) -> list:
    return [x for row in mat for x in row]


class LieAlgebraDatum:
    """A Lie subalgebra of gl(n) given by a basis of matrices."""

    def __init__(self, basis: list, tower: FieldTower,
                 check_jacobi: bool = False):
        if not basis:
            raise LieError("empty-basis")
        self.tower = tower
        self.basis = basis
        self.n = len(basis[0])
        self.dim = len(basis)
        flat = [_flatten(m) for m in basis]
        self._rref, self._trans, self._pivots = row_reduce(flat, tower)
        if len(self._pivots) != self.dim:
            raise LieError("dependent-basis")
        table = [[self.coords(self.bracket(basis[a], basis[b]))
                  for b in range(self.dim)] for a in range(self.dim)]
        self.sc = SCAlgebra(table, tower, check=check_jacobi)
        self.real_form = all(self.contains(mconj(m)) for m in basis)

    def bracket(self, a: list, b: list) -> list:
        return msub(mmul(a, b), mmul(b, a))

    def coords(self, mat: list) -> list:
        v = _flatten(mat)
        cs = []
        for r, c in enumerate(self._pivots):
            f = v[c]
            cs.append(f)
            if not f.is_zero():
                v = [x - f * y for x, y in zip(v, self._rref[r])]
        if any(not x.is_zero() for x in v):
            raise LieError("not-in-algebra")
        out = [self.tower.zero()] * self.dim
        for r, f in enumerate(cs):
            if not f.is_zero():
                out = [x + f * y for x, y in zip(out, self._trans[r])]
        return out

    def contains(self, mat: list) -> bool:
        try:
            self.coords(mat)
            return True
        except LieError:
            return False

    def from_coords(self, v: list) -> list:
        out = mzeros(self.tower, self.n, self.n)
        for i, c in enumerate(v):
            if not c.is_zero():
                out = [[x + c * y for x, y in zip(ra, rb)]
                       for ra, rb in zip(out, self.basis[i])]
        return out

    def mats_to_rows(self, mats: list) -> list:
        return [self.coords(m) for m in mats]

    def rows_to_mats(self, rows: list) -> list:
        return [self.from_coords(v) for v in rows]


@dataclass
class LeviDecomposition:
    s_basis: list
    t_basis: list
    n_basis: list


def _nilpotent_matrix(mat: list, tower: FieldTower) -> bool:
    n = len(mat)
    power = mat
    for _ in range(n):
        if all(x.is_zero() for row in power for x in row):
            return True
        power = mmul(power, mat)
    return all(x.is_zero() for row in power for x in row)


def levi_decompose(datum: LieAlgebraDatum) -> LeviDecomposition:
    alg = datum.sc
    tower = datum.tower
    s_rows = levi_subalgebra(alg)
    rad = alg.radical()
    # nilpotent part of the radical: radical elements trace-orthogonal to
    # the whole algebra in the ambient representation
    n_rows = []
    if rad:
        rad_mats = datum.rows_to_mats(rad)
        gram = [[mtrace(mmul(rm, bm)) for bm in datum.basis]
                for rm in rad_mats]
        for c in left_kernel(gram, tower):
            n_rows.append(combine_rows(rad, c, tower, alg.dim))
    n_rows = rref_rows(n_rows, tower)
    # torus part: semisimple parts of a Cartan subalgebra of the
    # centralizer of the Levi subalgebra inside the radical
    zr = alg.centralizer(rad, s_rows)
    t_rows = []
    if zr:
        sub, embed, _coords = alg.subalgebra(zr)
        for v in sub.cartan_subalgebra():
            mat = datum.from_coords(embed(v))
            sm, _ = additive_jordan(mat, tower)
            t_rows.append(datum.coords(sm))
    t_rows = rref_rows(t_rows, tower)
    _verify_levi(datum, s_rows, t_rows, n_rows)
    return LeviDecomposition(
        datum.rows_to_mats(s_rows),
        datum.rows_to_mats(t_rows),
        datum.rows_to_mats(n_rows),
    )


def _verify_levi(datum: LieAlgebraDatum, s_rows: list, t_rows: list,
                 n_rows: list):
    alg = datum.sc
    tower = datum.tower
    if len(s_rows) + len(t_rows) + len(n_rows) != alg.dim or \
            len(rref_rows(s_rows + t_rows + n_rows, tower)) != alg.dim:
        raise LieError("decomposition-failed", "not a direct sum")
    for x in s_rows:
        for y in t_rows:
            if any(not v.is_zero() for v in alg.bracket(x, y)):
                raise LieError("decomposition-failed", "[s,t] != 0")
    for x in t_rows:
        for y in t_rows:
            if any(not v.is_zero() for v in alg.bracket(x, y)):
                raise LieError("decomposition-failed", "t not abelian")
    n_span = rref_rows(n_rows, tower)
    for x in alg.basis_rows():
        for y in n_rows:
            if not in_span(alg.bracket(x, y), n_span):
                raise LieError("decomposition-failed", "n not an ideal")
    for y in n_rows:
        if not _nilpotent_matrix(datum.from_coords(y), tower):
            raise LieError("decomposition-failed", "n not nilpotent")
    for y in t_rows:
        mat = datum.from_coords(y)
        _, npart = additive_jordan(mat, tower)
        if any(not x.is_zero() for row in npart for x in row):
            raise LieError("decomposition-failed", "t not toral")
    # reductive part: nondegenerate trace form on s + t
    red = s_rows + t_rows
    if red:
        mats = datum.rows_to_mats(red)
        gram = [[mtrace(mmul(a, b)) for b in mats] for a in mats]
        if left_kernel(gram, tower):
            raise LieError("decomposition-failed", "s+t not reductive")


# -- public wrappers on matrices --------------------------------------------------


def fitting(datum: LieAlgebraDatum, a_mats: list, h_mats: list) -> tuple:
    a0, a1 = datum.sc.fitting(datum.mats_to_rows(a_mats),
                              datum.mats_to_rows(h_mats))
    return datum.rows_to_mats(a0), datum.rows_to_mats(a1)


def regular_element(datum: LieAlgebraDatum, h_mats: list,
                    seed: int = 0) -> list:
    x = datum.sc.regular_element(datum.mats_to_rows(h_mats), seed)
    return datum.from_coords(x)


def cartan_subalgebra(datum: LieAlgebraDatum, seed: int = 0) -> list:
    return datum.rows_to_mats(datum.sc.cartan_subalgebra(seed))


def conj_cartan_solvable(datum: LieAlgebraDatum, h1_mats: list,
                         h2_mats: list) -> list:
    xs = conj_cartan_solvable_sc(datum.sc, datum.mats_to_rows(h1_mats),
                                 datum.mats_to_rows(h2_mats))
    return datum.rows_to_mats(xs)


def conj_levi(datum: LieAlgebraDatum, s1_mats: list, s2_mats: list) -> list:
    z = conj_levi_sc(datum.sc, datum.mats_to_rows(s1_mats),
                     datum.mats_to_rows(s2_mats))
    return datum.from_coords(z)


def conj_levi_torus(datum: LieAlgebraDatum, pair1: tuple,
                    pair2: tuple) -> tuple:
    """Group element g0 (and its nilpotent logarithms) conjugating the
    first (s, t) pair onto the second."""
    s1, t1 = pair1
    s2, t2 = pair2
    zs = conj_levi_torus_sc(
        datum.sc,
        datum.mats_to_rows(s1), datum.mats_to_rows(t1),
        datum.mats_to_rows(s2), datum.mats_to_rows(t2))
    xs = datum.rows_to_mats(zs)
    g0 = meye(datum.tower, datum.n)
    for x in xs:
        g0 = mmul(g0, exp_nilpotent(x, datum.tower))
    g0inv = minverse(g0, datum.tower)
    conj_s = [mmul(mmul(g0, m), g0inv) for m in s1]
    conj_t = [mmul(mmul(g0, m), g0inv) for m in t1]
    srows = rref_rows(datum.mats_to_rows(s2), datum.tower)
    trows = rref_rows(datum.mats_to_rows(t2), datum.tower)
    if not span_eq(rref_rows(datum.mats_to_rows(conj_s), datum.tower), srows) \
            or not span_eq(rref_rows(datum.mats_to_rows(conj_t),
                                     datum.tower), trows):
        raise LieError("conjugation-failed")
    return g0, xs


def align_cartan(datum: LieAlgebraDatum, h0_mats: list,
                 levi: LeviDecomposition) -> tuple:
    h_s, h, xs = align_cartan_sc(
        datum.sc,
        datum.mats_to_rows(h0_mats),
        datum.mats_to_rows(levi.s_basis),
        datum.mats_to_rows(levi.t_basis),
        datum.mats_to_rows(levi.n_basis))
    return (datum.rows_to_mats(h_s), datum.rows_to_mats(h),
            datum.rows_to_mats(xs))


# -- Jordan decomposition, exp and log --------------------------------------------


@dataclass
class JordanPair:
    s: list
    u: list


def exp_nilpotent(x: list, tower: FieldTower) -> list:
    n = len(x)
    out = meye(tower, n)
    term = meye(tower, n)
    for k in range(1, n + 2):
        term = mmul(term, x)
        if all(v.is_zero() for row in term for v in row):
            return out
        f = tower.from_rational(Fraction(1, _factorial(k)))
        out = [[a + f * b for a, b in zip(ra, rb)]
               for ra, rb in zip(out, term)]
    raise LieError("not-nilpotent")


def log_unipotent(u: list, tower: FieldTower) -> list:
    n = len(u)
    nil = msub(u, meye(tower, n))
    out = mzeros(tower, n, n)
    term = meye(tower, n)
    for k in range(1, n + 2):
        term = mmul(term, nil)
        if all(v.is_zero() for row in term for v in row):
            return out
        f = tower.from_rational(Fraction((-1) ** (k + 1), k))
        out = [[a + f * b for a, b in zip(ra, rb)]
               for ra, rb in zip(out, term)]
    raise LieError("not-unipotent")


def _poly_sub(p: list, q: list, tower: FieldTower) -> list:
    out = [tower.zero()] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] = out[i] + c
    for i, c in enumerate(q):
        out[i] = out[i] - c
    return poly_normalize(out)


def _poly_inverse_mod(a: list, mod: list, tower: FieldTower) -> list:
    """u with a*u = 1 modulo mod (they must be coprime)."""
    old_r, r = poly_normalize(list(mod)), poly_normalize(list(a))
    old_u, u = [], [tower.one()]
    while r:
        q, rem = poly_divmod(old_r, r, tower)
        old_r, r = r, rem
        old_u, u = u, _poly_sub(old_u, poly_mul(q, u, tower), tower)
    if len(old_r) != 1:
        raise LieError("not-coprime")
    inv = old_r[0].inverse()
    _, reduced = poly_divmod([c * inv for c in old_u], mod, tower)
    return reduced


def _poly_power(base: list, e: int, tower: FieldTower) -> list:
    out = [tower.one()]
    for _ in range(e):
        out = poly_mul(out, base, tower)
    return out


def _mat_poly_eval(p: list, mat: list, tower: FieldTower) -> list:
    n = len(mat)
    out = mzeros(tower, n, n)
    for c in reversed(p):
        out = mmul(out, mat)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def semisimple_part(mat: list, tower: FieldTower) -> list:
    """The semisimple summand of the additive Jordan decomposition,
    obtained as a polynomial in the matrix."""
    n = len(mat)
    cp = charpoly(mat, tower)
    roots = []
    for f in split_poly(cp, tower):
        root = -f[0]
        for pair in roots:
            if pair[0] == root:
                pair[1] += 1
                break
        else:
            roots.append([root, 1])
    if len(roots) == 1:
        lam = roots[0][0]
        out = mzeros(tower, n, n)
        for i in range(n):
            out[i][i] = lam
        return out
    p = []
    for i, (lam, mult) in enumerate(roots):
        mi = [tower.one()]
        for j, (lam2, mult2) in enumerate(roots):
            if j != i:
                mi = poly_mul(mi, _poly_power([-lam2, tower.one()], mult2,
                                              tower), tower)
        modi = _poly_power([-lam, tower.one()], mult, tower)
        ni = _poly_inverse_mod(mi, modi, tower)
        ei = poly_mul(mi, ni, tower)
        _, ei = poly_divmod(ei, cp, tower)
        p = _poly_sub(p, [-lam * c for c in ei], tower)
    return _mat_poly_eval(p, mat, tower)


def additive_jordan(mat: list, tower: FieldTower) -> tuple:
    """(semisimple, nilpotent) with mat = s + n and [s, n] = 0."""
    s = semisimple_part(mat, tower)
    npart = msub(mat, s)
    if not _nilpotent_matrix(npart, tower):
        raise LieError("jordan-failed")
    if not meq(mmul(s, npart), mmul(npart, s)):
        raise LieError("jordan-failed")
    return s, npart


def jordan(g: list, tower: FieldTower) -> JordanPair:
    """Multiplicative Jordan decomposition g = s*u of an invertible matrix."""
    n = len(g)
    s, _ = additive_jordan(g, tower)
    sinv = minverse(s, tower)
    u = mmul(sinv, g)
    if not _nilpotent_matrix(msub(u, meye(tower, n)), tower):
        raise LieError("jordan-failed")
    if not meq(mmul(s, u), mmul(u, s)):
        raise LieError("jordan-failed")
    return JordanPair(s, u)


# -- projection to the reductive quotient -----------------------------------------


def _commutant_rows(datum: LieAlgebraDatum, s: list) -> list:
    """Coordinates of {x in g : s x = x s}."""
    rows = [_flatten(msub(mmul(s, b), mmul(b, s))) for b in datum.basis]
    return left_kernel(rows, datum.tower)


def reductive_projection(datum: LieAlgebraDatum, levi: LeviDecomposition,
                         g: list, seed: int = 0) -> list:
    """Image of g under the canonical projection killing the unipotent
    radical, realized inside the reductive subgroup with algebra s + t."""
    tower = datum.tower
    jp = jordan(g, tower)
    # unipotent part: exp of the (s + t)-component of log u
    zrow = datum.coords(log_unipotent(jp.u, tower))
    srows = datum.mats_to_rows(levi.s_basis)
    trows = datum.mats_to_rows(levi.t_basis)
    nrows = datum.mats_to_rows(levi.n_basis)
    stacked = srows + trows + nrows
    sol = solve_left(stacked, zrow, tower)
    if sol is None:
        raise LieError("projection-failed")
    red = combine_rows(stacked[: len(srows) + len(trows)],
                       sol[: len(srows) + len(trows)], tower, datum.dim)
    pu = exp_nilpotent(datum.from_coords(red), tower)
    # semisimple part: conjugate its torus into the reductive subgroup
    if meq(jp.s, meye(tower, datum.n)):
        ps = jp.s
    else:
        zrows = _commutant_rows(datum, jp.s)
        sub, embed, _c = datum.sc.subalgebra(zrows)
        h0 = [datum.from_coords(embed(v))
              for v in sub.cartan_subalgebra(seed)]
        _hs, _h, xs = align_cartan(datum, h0, levi)
        hmat = meye(tower, datum.n)
        for x in xs:
            hmat = mmul(hmat, exp_nilpotent(x, tower))
        ps = mmul(mmul(hmat, jp.s), minverse(hmat, tower))
    return mmul(ps, pu)


# -- membership in the connected group --------------------------------------------


def membership(g: list, datum: LieAlgebraDatum, seed: int = 0) -> bool:
    """Whether g lies in the connected algebraic group with this algebra."""
    from .torus import TorusError, torus_membership

    tower = datum.tower
    jp = jordan(g, tower)
    try:
        zlog = log_unipotent(jp.u, tower)
    except LieError:
        return False
    if not datum.contains(zlog):
        return False
    s = jp.s
    sinv = minverse(s, tower)
    for b in datum.basis:
        if not datum.contains(mmul(mmul(s, b), sinv)):
            return False
    if meq(s, meye(tower, datum.n)):
        return True
    zrows = _commutant_rows(datum, s)
    sub, embed, _c = datum.sc.subalgebra(zrows)
    t_rows = []
    for v in sub.cartan_subalgebra(seed):
        sm, _ = additive_jordan(datum.from_coords(embed(v)), tower)
        t_rows.append(datum.coords(sm))
    t_mats = datum.rows_to_mats(rref_rows(t_rows, tower))
    try:
        return torus_membership(t_mats, s, tower)
    except TorusError:
        return False


# -- root systems ------------------------------------------------------------------


@dataclass
class RootDatum:
    cartan_basis: list     # matrices spanning the Cartan subalgebra
    roots: list            # eigenvalue tuples of ad on the Cartan basis
    root_vectors: list     # matrices, aligned with roots
    simple_indices: list   # indices into roots, sorted canonically
    x_gens: list
    y_gens: list
    h_gens: list
    cartan_matrix: list    # integer matrix A[i][j] with [h_i,x_j]=A[i][j]x_j


def _elt_positive(x) -> bool:
    r = x.real_part()
    if not r.is_zero():
        return r.is_positive()
    return x.imag_part().is_positive()


def _tuple_positive(t: list) -> bool:
    for x in t:
        if not x.is_zero():
            return _elt_positive(x)
    return False


def _tuple_eq(a: list, b: list) -> bool:
    return all(x == y for x, y in zip(a, b))


def joint_eigenspaces(ops: list, tower: FieldTower, dim: int) -> list:
    """Common eigenspaces of commuting semisimple operators on row space.

    Returns a list of (eigenvalue tuple, basis rows)."""
    spaces = [([], meye(tower, dim))]
    for op in ops:
        refined = []
        for tup, s in spaces:
            restr = []
            for row in s:
                sol = solve_left(s, vmat(row, op), tower)
                if sol is None:
                    raise LieError("not-invariant")
                restr.append(sol)
            vals = []
            for f in split_poly(charpoly(restr, tower), tower):
                root = -f[0]
                if all(root != v for v in vals):
                    vals.append(root)
            covered = 0
            for lam in vals:
                shifted = [
                    [restr[i][j] - (lam if i == j else tower.zero())
                     for j in range(len(s))]
                    for i in range(len(s))
                ]
                eig = []
                for coeff in left_kernel(shifted, tower):
                    eig.append(combine_rows(s, coeff, tower, dim))
                if eig:
                    refined.append((tup + [lam], rref_rows(eig, tower)))
                    covered += len(eig)
            if covered != len(s):
                raise LieError("not-semisimple-action")
        spaces = refined
    return spaces


def root_system(datum: LieAlgebraDatum, cartan_mats: list) -> RootDatum:
    tower = datum.tower
    alg = datum.sc
    t_rows = datum.mats_to_rows(cartan_mats)
    ops = [alg.ad(v) for v in t_rows]
    spaces = joint_eigenspaces(ops, tower, alg.dim)
    roots = []
    vectors = []
    for tup, s in spaces:
        if all(x.is_zero() for x in tup):
            continue
        if len(s) != 1:
            raise LieError("root-multiplicity")
        roots.append(tup)
        vectors.append(datum.from_coords(s[0]))
    # closure under negation
    for tup in roots:
        neg = [-x for x in tup]
        if not any(_tuple_eq(neg, other) for other in roots):
            raise LieError("roots-not-symmetric")
    positive = [i for i, tup in enumerate(roots) if _tuple_positive(tup)]
    simple = []
    for i in positive:
        decomposable = False
        for j in positive:
            for k in positive:
                s = [a + b for a, b in zip(roots[j], roots[k])]
                if _tuple_eq(s, roots[i]):
                    decomposable = True
        if not decomposable:
            simple.append(i)
    # canonical order: lexicographic on the eigenvalue tuples
    order = list(simple)
    for i in range(1, len(order)):
        key = order[i]
        j = i - 1
        while j >= 0 and _tuple_positive(
                [a - b for a, b in zip(roots[order[j]], roots[key])]):
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key
    simple = order
    x_gens, y_gens, h_gens = [], [], []
    for i in simple:
        neg = [-x for x in roots[i]]
        j = next(k for k, tup in enumerate(roots) if _tuple_eq(tup, neg))
        x = datum.coords(vectors[i])
        y0 = datum.coords(vectors[j])
        h0 = alg.bracket(x, y0)
        if all(v.is_zero() for v in h0):
            raise LieError("degenerate-root-pair")
        idx = next(c for c, v in enumerate(x) if not v.is_zero())
        hx = alg.bracket(h0, x)
        c = hx[idx] / x[idx]
        if c.is_zero():
            raise LieError("degenerate-root-pair")
        scale = tower.from_rational(2) / c
        y = [scale * v for v in y0]
        h = alg.bracket(x, y)
        if not all(p == q for p, q in zip(
                alg.bracket(h, x), [tower.from_rational(2) * v for v in x])):
            raise LieError("degenerate-root-pair")
        x_gens.append(datum.from_coords(x))
        y_gens.append(datum.from_coords(y))
        h_gens.append(datum.from_coords(h))
    cartan_matrix = []
    for i in range(len(simple)):
        hrow = datum.coords(h_gens[i])
        row = []
        for j in range(len(simple)):
            xrow = datum.coords(x_gens[j])
            br = alg.bracket(hrow, xrow)
            idx = next(c for c, v in enumerate(xrow) if not v.is_zero())
            val = br[idx] / xrow[idx]
            if not all(p == q for p, q in zip(
                    br, [val * v for v in xrow])):
                raise LieError("degenerate-root-pair")
            rat = val.as_rational()
            if rat.denominator != 1:
                raise LieError("degenerate-root-pair")
            row.append(int(rat))
        cartan_matrix.append(row)
    return RootDatum(cartan_mats, roots, vectors, simple,
                     x_gens, y_gens, h_gens, cartan_matrix)
