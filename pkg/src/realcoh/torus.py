"""Algebraic tori over R: presentations, H^1, and quasi-torus H^2.

A torus T in GL(n,C) is given by a basis of its Lie algebra together with a
real-structure matrix N (the anti-regular involution is g -> N conj(g) N^-1,
with N conj(N) = 1).  The presentation diagonalizes t, computes the
cocharacter exponent matrix M with its inverse certificate P, reads off the
involution tau of the coordinate torus, and splits T into indecomposable
factors: compact (F), split (E), and induced (D).  All arithmetic is exact
over a square-root-closed field tower.

Coordinate conventions: a torus element is a coordinate vector (t_1..t_d)
with matrix C*diag(prod t_i^M(i,l))*C^-1.  Lattice maps are integer matrices
in the rows-are-images convention, and an element transforms by
t |-> (prod_j t_j^R(j,i))_i under the map R.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .field import FieldTower, format_element, parse_element, split_poly
from .gammacoh import CohomologyResult, GammaModule, ShortComplex, hyper
from .lattice import (
    gamma_decompose,
    identity as int_identity,
    kernel_basis,
    mat_inverse,
    mat_mul,
    perp,
    snf,
    solve_integer,
    transpose,
)
from .linalg import (
    charpoly,
    left_kernel,
    mconj,
    meq,
    meye,
    minverse,
    mmul,
    mtranspose,
    mzeros,
    solve_left,
)


class TorusError(Exception):
    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(message or code)


# -- multiplicative maps -------------------------------------------------------


def mono_apply(coords: list, r: list) -> list:
    """Image of a coordinate vector under the lattice map r (rows-are-images)."""
    cols = len(r[0]) if r else 0
    tower = coords[0].tower if coords else None
    out = []
    for i in range(cols):
        acc = tower.one()
        for j, t in enumerate(coords):
            e = r[j][i]
            if e:
                acc = acc * t ** e
        out.append(acc)
    return out


def _mod_inverse(a: int, m: int) -> int:
    return pow(a % m, -1, m)


def root_of_minus_one(tower: FieldTower, m: int):
    """Element y of the tower with y^m = -1."""
    a = 0
    odd = m
    while odd % 2 == 0:
        odd //= 2
        a += 1
    u = tower.from_rational(-1)
    for _ in range(a):
        u = tower.sqrt(u)
    if a == 0:
        y = u  # (-1)^odd = -1 for odd exponents
    else:
        y = u ** _mod_inverse(odd, 2 ** (a + 1))
    assert y ** m == -1
    return y


# -- simultaneous diagonalization ----------------------------------------------


def _eigenvalues(mat: list, tower: FieldTower) -> list:
    poly = charpoly(mat, tower)
    factors = split_poly(poly, tower)
    vals = []
    for f in factors:
        root = -f[0]
        if all(root != v for v in vals):
            vals.append(root)
    return vals


def simultaneous_diagonalize(mats: list, tower: FieldTower, n: int) -> list:
    """C with C^-1 * a * C diagonal for every a in mats (commuting, semisimple)."""
    spaces = [meye(tower, n)]
    for a in mats:
        at = mtranspose(a)
        refined = []
        for s in spaces:
            if len(s) == 1:
                refined.append(s)
                continue
            images = mmul(s, at)
            restr = []
            for row in images:
                c = solve_left(s, row, tower)
                if c is None:
                    raise TorusError("not-invariant")
                restr.append(c)
            vals = _eigenvalues(restr, tower)
            if len(vals) == 1:
                refined.append(s)
                continue
            covered = 0
            for lam in vals:
                shifted = [
                    [restr[i][j] - (lam if i == j else tower.zero())
                     for j in range(len(s))]
                    for i in range(len(s))
                ]
                eigenspace = []
                for coeff in left_kernel(shifted, tower):
                    vec = [tower.zero()] * n
                    for idx, c in enumerate(coeff):
                        if not c.is_zero():
                            vec = [x + c * y for x, y in zip(vec, s[idx])]
                    eigenspace.append(vec)
                if eigenspace:
                    refined.append(eigenspace)
                    covered += len(eigenspace)
            if covered != len(s):
                raise TorusError("not-semisimple")
        spaces = refined
    rows = [row for s in spaces for row in s]
    if len(rows) != n:
        raise TorusError("not-semisimple")
    return mtranspose(rows)


# -- presentation ----------------------------------------------------------------


@dataclass
class TorusPresentation:
    tower: FieldTower
    n: int
    lie_basis: list
    nsigma: list
    c: list
    cinv: list
    d: int
    lam_lattice: list   # basis of Lambda (rows), possibly empty
    m: list             # d x n cocharacter exponent matrix
    p: list             # n x n with P * M^T = (I_d; 0)
    tau: list           # involution on coordinates
    a: list             # change of basis: columns f..., e..., (g,h)...
    ainv: list
    nu: list            # canonical involution A^-1 tau A
    k: int              # number of compact factors
    l: int              # number of split factors
    r: int              # number of induced pairs

    # -- element maps -----------------------------------------------------------

    def lam(self, coords: list) -> list:
        """Matrix of the element with coordinates (t_1..t_d)."""
        full = meye(self.tower, self.n)
        if self.d:
            alphas = mono_apply(coords, self.m)
            for i in range(self.n):
                full[i][i] = alphas[i]
        return mmul(mmul(self.c, full), self.cinv)

    def lambda_inverse(self, mat: list):
        """Coordinates of mat in T, or None when mat is not a member."""
        dm = mmul(mmul(self.cinv, mat), self.c)
        for i in range(self.n):
            for j in range(self.n):
                if i != j and not dm[i][j].is_zero():
                    return None
        alphas = [dm[i][i] for i in range(self.n)]
        if any(x.is_zero() for x in alphas):
            return None
        t_full = mono_apply(alphas, transpose(self.p))
        for j in range(self.d, self.n):
            if t_full[j] != 1:
                return None
        return t_full[: self.d]

    def membership(self, mat: list) -> bool:
        return self.lambda_inverse(mat) is not None

    def mu(self, u: list) -> list:
        return self.lam(self.mu_to_lam(u))

    def mu_to_lam(self, u: list) -> list:
        return mono_apply(u, transpose(self.a))

    def lam_to_mu(self, coords: list) -> list:
        return mono_apply(coords, transpose(self.ainv))

    def gamma_matrix(self, mat: list) -> list:
        nsig_inv = minverse(self.nsigma, self.tower)
        return mmul(mmul(self.nsigma, mconj(mat)), nsig_inv)

    def gamma_coords(self, coords: list) -> list:
        conj = [x.conj() for x in coords]
        return mono_apply(conj, transpose(self.tau))

    def identity_coords(self) -> list:
        return [self.tower.one()] * self.d

    def cocharacter_module(self) -> GammaModule:
        return GammaModule(transpose(self.tau))

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "lie_basis": [
                    [[format_element(x) for x in row] for row in mat]
                    for mat in self.lie_basis
                ],
                "N_sigma": [[format_element(x) for x in row]
                            for row in self.nsigma],
            },
            separators=(",", ":"),
        )


def presentation_from_json(text: str, tower: FieldTower) -> TorusPresentation:
    data = json.loads(text)
    basis = [
        [[parse_element(x, tower) for x in row] for row in mat]
        for mat in data["lie_basis"]
    ]
    nsigma = [[parse_element(x, tower) for x in row] for row in data["N_sigma"]]
    return build_presentation(basis, nsigma, tower)


def _lambda_lattice(diag_entries: list, n: int) -> list:
    """Integral e with sum_i e_i * diag_i(a) = 0 for all basis matrices."""
    columns = []
    for diags in diag_entries:
        keys = sorted({key for x in diags for key in x.coords})
        for key in keys:
            col = [x.coords.get(key, Fraction(0)) for x in diags]
            denom = 1
            for q in col:
                if q:
                    qd = int(q.denominator)
                    denom = denom * qd // _gcd(denom, qd)
            columns.append([int(q * Fraction(denom)) for q in col])
    if not columns:
        return []
    mat = [[columns[c][i] for c in range(len(columns))] for i in range(n)]
    return kernel_basis(mat)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _solve_p(m: list, n: int, d: int) -> list:
    """P in GL(n,Z) with P*M^T = (I_d; 0), via SNF of M^T."""
    if d == 0:
        return int_identity(n)
    mt = [[m[i][j] for i in range(d)] for j in range(n)]
    a, p0, q0 = snf(mt)
    for i in range(d):
        if a[i][i] != 1:
            raise TorusError("lattice-not-pure")
    block = [[0] * n for _ in range(n)]
    for i in range(d):
        for j in range(d):
            block[i][j] = q0[i][j]
    for i in range(d, n):
        block[i][i] = 1
    return mat_mul(block, p0)


def _read_tau(pres_b: list, pres_binv: list, m: list, p: list, n: int,
              d: int, tower: FieldTower) -> list:
    """Involution of the coordinate torus from conjugation by B.

    The conjugate of the generic diagonal element is computed over Laurent
    polynomials in the coordinates; it must again be a diagonal monomial
    matrix, whose coordinates are read off with the certificate P.
    """
    # entry (i, j) of B * diag(monomials) * B^-1 as {exponent tuple: coeff}
    exps = [tuple(m[i][l] for i in range(d)) for l in range(n)]
    diag_polys = []
    for i in range(n):
        row = []
        for j in range(n):
            poly = {}
            for k in range(n):
                c = pres_b[i][k] * pres_binv[k][j]
                if c.is_zero():
                    continue
                key = exps[k]
                poly[key] = poly.get(key, tower.zero()) + c
            row.append({k: v for k, v in poly.items() if not v.is_zero()})
        diag_polys.append(row)
    for i in range(n):
        for j in range(n):
            if i != j and diag_polys[i][j]:
                raise TorusError("invalid-real-structure",
                                 "conjugation does not preserve the torus")
    diag_exp = []
    for i in range(n):
        entry = diag_polys[i][i]
        if len(entry) != 1:
            raise TorusError("invalid-real-structure")
        (key, coeff), = entry.items()
        if coeff != 1:
            raise TorusError("invalid-real-structure")
        diag_exp.append(list(key))
    tau = []
    for j in range(n):
        row = [0] * d
        for k in range(n):
            if p[j][k]:
                row = [x + p[j][k] * y for x, y in zip(row, diag_exp[k])]
        if j < d:
            tau.append(row)
        elif any(row):
            raise TorusError("invalid-real-structure")
    return tau


def compact_part_lie(t: TorusPresentation) -> list:
    """Lie algebra generators of the maximal compact subtorus.

    One matrix per compact factor: the tangent direction of the
    corresponding cocharacter of the canonical coordinates.
    """
    out = []
    for i in range(t.k):
        lam_exp = [t.a[j][i] for j in range(t.d)]
        full = mzeros(t.tower, t.n, t.n)
        for l in range(t.n):
            e = sum(lam_exp[j] * t.m[j][l] for j in range(t.d))
            full[l][l] = t.tower.from_rational(e)
        out.append(mmul(mmul(t.c, full), t.cinv))
    return out


def torus_membership(lie_basis: list, mat: list, tower: FieldTower) -> bool:
    """Whether mat lies in the complex torus with the given Lie algebra.

    Uses the diagonal model only; no real structure is involved, so this
    also applies to tori arising as Cartan subgroups inside larger groups.
    """
    n = len(mat)
    if not lie_basis:
        return meq(mat, meye(tower, n))
    diag_test = all(
        b[i][j].is_zero()
        for b in lie_basis for i in range(n) for j in range(n) if i != j
    )
    c = meye(tower, n) if diag_test else \
        simultaneous_diagonalize(lie_basis, tower, n)
    cinv = minverse(c, tower)
    diag_entries = []
    for b in lie_basis:
        dm = mmul(mmul(cinv, b), c)
        for i in range(n):
            for j in range(n):
                if i != j and not dm[i][j].is_zero():
                    raise TorusError("not-semisimple")
        diag_entries.append([dm[i][i] for i in range(n)])
    lam_lattice = _lambda_lattice(diag_entries, n)
    m = perp(lam_lattice, n)
    d = len(m)
    p = _solve_p(m, n, d)
    dm = mmul(mmul(cinv, mat), c)
    for i in range(n):
        for j in range(n):
            if i != j and not dm[i][j].is_zero():
                return False
    alphas = [dm[i][i] for i in range(n)]
    if any(x.is_zero() for x in alphas):
        return False
    t_full = mono_apply(alphas, transpose(p))
    return all(t_full[j] == 1 for j in range(d, n))


def build_presentation(lie_basis: list, nsigma: list, tower: FieldTower,
                       allow_defect: bool = False) -> TorusPresentation:
    """Presentation of the torus with involution g -> N conj(g) N^-1.

    With allow_defect, N*conj(N) may differ from 1 as long as it commutes
    with the torus; the induced map on the torus is then still an
    involution, even though N itself is not a real-structure matrix.
    """
    n = len(nsigma)
    defect = mmul(nsigma, mconj(nsigma))
    if not meq(defect, meye(tower, n)):
        if not allow_defect:
            raise TorusError("invalid-real-structure", "N conj(N) != 1")
        for mat in lie_basis:
            if not meq(mmul(defect, mat), mmul(mat, defect)):
                raise TorusError("invalid-real-structure",
                                 "defect does not centralize the torus")
    diag_test = all(
        mat[i][j].is_zero()
        for mat in lie_basis for i in range(n) for j in range(n) if i != j
    )
    c = meye(tower, n) if diag_test else \
        simultaneous_diagonalize(lie_basis, tower, n)
    cinv = minverse(c, tower)
    diag_entries = []
    for mat in lie_basis:
        dm = mmul(mmul(cinv, mat), c)
        for i in range(n):
            for j in range(n):
                if i != j and not dm[i][j].is_zero():
                    raise TorusError("not-semisimple")
        diag_entries.append([dm[i][i] for i in range(n)])
    lam_lattice = _lambda_lattice(diag_entries, n)
    m = perp(lam_lattice, n)
    d = len(m)
    p = _solve_p(m, n, d)
    b = mmul(mmul(cinv, nsigma), mconj(c))
    binv = minverse(b, tower)
    tau = _read_tau(b, binv, m, p, n, d, tower)
    if d and mat_mul(tau, tau) != int_identity(d):
        raise TorusError("invalid-real-structure", "tau is not an involution")
    if d:
        dec = gamma_decompose(tau)
        cols = dec.f_vectors + dec.e_vectors + \
            [v for pair in dec.gh_pairs for v in pair]
        a = [[cols[j][i] for j in range(d)] for i in range(d)]
        ainv = mat_inverse(a)
        nu = mat_mul(mat_mul(ainv, tau), a)
        k, l, r = len(dec.f_vectors), len(dec.e_vectors), len(dec.gh_pairs)
    else:
        a, ainv, nu, k, l, r = [], [], [], 0, 0, 0
    return TorusPresentation(
        tower, n, lie_basis, nsigma, c, cinv, d, lam_lattice, m, p, tau,
        a, ainv, nu, k, l, r,
    )


# -- H^1 -------------------------------------------------------------------------


@dataclass
class TorusH1Result:
    presentation: TorusPresentation
    sign_patterns: list
    representatives: list  # matrices

    def order(self) -> int:
        return len(self.representatives)


def h1_torus(t: TorusPresentation) -> TorusH1Result:
    """Representatives mu(eps_1..eps_k, 1, ..) over all sign patterns."""
    one = t.tower.one()
    patterns = []
    mats = []
    for signs in product((1, -1), repeat=t.k):
        u = [t.tower.from_rational(s) for s in signs] + \
            [one] * (t.d - t.k)
        patterns.append(list(signs))
        mats.append(t.mu(u))
    return TorusH1Result(t, patterns, mats)


def trivialize_cocycle(t: TorusPresentation, z) -> tuple:
    """Canonical representative and witness for a 1-cocycle z in T(C).

    z may be a matrix or a coordinate vector.  Returns (rep_matrix, signs, s)
    with s^-1 * z * gamma(s) = rep, verified exactly before returning.
    """
    tower = t.tower
    coords = z if isinstance(z, list) and z and not isinstance(z[0], list) \
        else t.lambda_inverse(z)
    if coords is None:
        raise TorusError("not-member")
    gz = t.gamma_coords(coords)
    prod_c = [x * y for x, y in zip(coords, gz)]
    if any(x != 1 for x in prod_c):
        raise TorusError("not-cocycle")
    u = t.lam_to_mu(coords)
    v = [tower.one()] * t.d
    signs = []
    for i in range(t.k):
        ui = u[i]
        if not ui.is_real():
            raise TorusError("not-cocycle")
        if ui.is_positive():
            v[i] = tower.sqrt(ui)
            signs.append(1)
        else:
            v[i] = tower.sqrt(-ui)
            signs.append(-1)
    for i in range(t.k, t.k + t.l):
        ui = u[i]
        if ui == 1:
            continue
        a = ui.real_part()
        b = ui.imag_part()
        v[i] = b + (1 - a) * tower.i()
    for idx in range(t.r):
        pos = t.k + t.l + 2 * idx
        v[pos] = u[pos]
        # second slot stays 1
    s = t.mu(v)
    rep_u = [tower.from_rational(sg) for sg in signs] + \
        [tower.one()] * (t.d - t.k)
    rep = t.mu(rep_u)
    sinv = minverse(s, tower)
    check = mmul(mmul(sinv, t.lam(coords)), t.gamma_matrix(s))
    assert meq(check, rep)
    return rep, signs, s


# -- quasi-torus H^2 -------------------------------------------------------------


@dataclass
class QuasiTorusDatum:
    """Subgroup A of a torus T described by the lattice map to T' = T/A."""

    torus: TorusPresentation
    lattice_map: list        # X_*(T) -> X_*(T'), rows-are-images
    quotient_tau: list       # involution on the coordinates of T'
    component_torus: TorusPresentation | None = None
    component_reps: list | None = None  # matrices in A(C), one per component

    def to_json(self) -> str:
        return json.dumps(
            {
                "torus": json.loads(self.torus.to_json()),
                "lattice_map": self.lattice_map,
                "quotient_tau": self.quotient_tau,
            },
            separators=(",", ":"),
        )

    def complex(self) -> ShortComplex:
        mt = GammaModule(transpose(self.torus.tau))
        mq = GammaModule(transpose(self.quotient_tau))
        return ShortComplex(mt, mq, self.lattice_map)


def characters_to_lattice_map(t: TorusPresentation, chars: list) -> tuple:
    """Lattice map to T' = T/A and quotient involution for A the common
    kernel of the given characters (exponent rows in the coordinates of T)."""
    d = t.d
    dprime = len(chars)
    # image of the i-th basis cocharacter: its pairings with the characters
    partial = [[chars[cidx][i] for cidx in range(dprime)] for i in range(d)]
    # the quotient involution X must satisfy partial * X = tau^T * partial
    k = mat_mul(transpose(t.tau), partial)
    x = []
    for j in range(dprime):
        col = [k[i][j] for i in range(d)]
        sol = solve_integer(transpose(partial), col)
        if sol is None:
            raise TorusError("characters-not-stable")
        x.append(sol)
    # x holds the columns of X; quotient tau is X^T, i.e. the rows of x
    quotient_tau = [list(row) for row in x]
    if dprime and mat_mul(quotient_tau, quotient_tau) != int_identity(dprime):
        raise TorusError("characters-not-stable")
    return partial, quotient_tau


@dataclass
class QuasiTorusH2Result:
    datum: QuasiTorusDatum
    lattice_result: CohomologyResult
    cocycle_coords: list   # coordinates in T of each representative 2-cocycle
    representatives: list  # matrices

    def order(self) -> int:
        return self.lattice_result.order()


def _preimage_of_signs(t: TorusPresentation, partial: list,
                       target_signs: list) -> list:
    """Coordinates of some t with image nu'(-1) in T' under the quotient map."""
    tower = t.tower
    d = len(partial)
    dprime = len(partial[0]) if partial else 0
    if dprime == 0:
        return t.identity_coords()
    a, ps, qs = snf(partial)
    s = [tower.from_rational((-1) ** (e % 2)) for e in target_signs]
    s_q = mono_apply(s, qs)
    y = [tower.one()] * d
    for i in range(dprime):
        di = a[i][i] if i < d else 0
        val = s_q[i]
        if val == 1:
            continue
        if di <= 0:
            raise TorusError("no-preimage")
        y[i] = root_of_minus_one(tower, di)
    return mono_apply(y, ps)


def h2_quasitorus(q: QuasiTorusDatum) -> QuasiTorusH2Result:
    """H^2 of A via the hypercohomology of X_*(T) -> X_*(T'), with explicit
    2-cocycles a = nu(-1) * d^1(t) for a preimage t of nu'(-1)."""
    t = q.torus
    tower = t.tower
    cx = q.complex()
    res = hyper(cx, 1)
    coords_list = []
    mats = []
    for rep in res.representatives:
        nu_vec = rep[: t.d]
        nu_prime = rep[t.d:]
        nu_elt = [tower.from_rational((-1) ** (e % 2)) for e in nu_vec]
        pre = _preimage_of_signs(t, q.lattice_map, nu_prime)
        gpre = t.gamma_coords(pre)
        d1 = [x * y for x, y in zip(gpre, pre)]
        a_coords = [x * y for x, y in zip(nu_elt, d1)]
        ga = t.gamma_coords(a_coords)
        assert all(x == y for x, y in zip(ga, a_coords))
        coords_list.append(a_coords)
        mats.append(t.lam(a_coords))
    return QuasiTorusH2Result(q, res, coords_list, mats)


def h2_is_coboundary(q: QuasiTorusDatum, c: list):
    """Witness s in A(C) with s * gamma(s) = c, or None.

    c is a matrix representing a 2-cocycle (gamma-fixed element of A).  The
    identity component is handled by per-factor closed forms; other
    components via the coset loop over the supplied representatives.
    """
    t = q.torus
    tower = t.tower
    if not meq(t.gamma_matrix(c), c):
        raise TorusError("not-cocycle")
    reps = q.component_reps or [meye(tower, t.n)]
    for r in reps:
        norm_r = mmul(r, t.gamma_matrix(r))
        z = mmul(c, minverse(norm_r, tower))
        if q.component_torus is None:
            if meq(z, meye(tower, t.n)):
                check = mmul(r, t.gamma_matrix(r))
                assert meq(check, c)
                return r
            continue
        ct = q.component_torus
        coords = ct.lambda_inverse(z)
        if coords is None:
            continue
        u = ct.lam_to_mu(coords)
        w = [tower.one()] * ct.d
        good = True
        for i in range(ct.k):
            ui = u[i]
            if ui == 1:
                continue
            a = ui.real_part()
            b = ui.imag_part()
            w[i] = b + (1 - a) * tower.i()
        for i in range(ct.k, ct.k + ct.l):
            ui = u[i]
            if not ui.is_real():
                good = False
                break
            if ui == 1:
                continue
            if not ui.is_positive():
                good = False
                break
            w[i] = tower.sqrt(ui)
        if not good:
            continue
        for idx in range(ct.r):
            pos = ct.k + ct.l + 2 * idx
            w[pos] = u[pos]
        s0 = ct.mu(w)
        s = mmul(s0, r)
        if meq(mmul(s, t.gamma_matrix(s)), c):
            return s
    return None
