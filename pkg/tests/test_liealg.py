from fractions import Fraction

import pytest

from realcoh.field import FieldTower
from realcoh.liealg import (
    JordanPair,
    LieAlgebraDatum,
    LieError,
    additive_jordan,
    align_cartan,
    cartan_subalgebra,
    conj_cartan_solvable,
    conj_levi,
    conj_levi_torus,
    exp_nilpotent,
    fitting,
    jordan,
    levi_decompose,
    log_unipotent,
    membership,
    reductive_projection,
    regular_element,
    root_system,
)
from realcoh.linalg import (
    is_zero_matrix,
    mat_from_ints,
    meq,
    meye,
    minverse,
    mmul,
    msub,
)


def tower():
    return FieldTower()


def sl2(tw):
    h = mat_from_ints(tw, [[1, 0], [0, -1]])
    x = mat_from_ints(tw, [[0, 1], [0, 0]])
    y = mat_from_ints(tw, [[0, 0], [1, 0]])
    return LieAlgebraDatum([h, x, y], tw, check_jacobi=True)


def sl2_semidirect(tw):
    """sl2 acting on its standard 2-dimensional abelian ideal, in gl(3)."""

    def emb(a, v):
        rows = [[a[0][0], a[0][1], v[0]], [a[1][0], a[1][1], v[1]],
                [0, 0, 0]]
        return mat_from_ints(tw, rows)

    z = [[0, 0], [0, 0]]
    h = emb([[1, 0], [0, -1]], [0, 0])
    x = emb([[0, 1], [0, 0]], [0, 0])
    y = emb([[0, 0], [1, 0]], [0, 0])
    e1 = emb(z, [1, 0])
    e2 = emb(z, [0, 1])
    return LieAlgebraDatum([h, x, y, e1, e2], tw)


def sl3(tw):
    mats = []
    for (i, j) in ((0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)):
        m = [[0] * 3 for _ in range(3)]
        m[i][j] = 1
        mats.append(mat_from_ints(tw, m))
    h1 = mat_from_ints(tw, [[1, 0, 0], [0, -1, 0], [0, 0, 0]])
    h2 = mat_from_ints(tw, [[0, 0, 0], [0, 1, 0], [0, 0, -1]])
    return LieAlgebraDatum(mats + [h1, h2], tw), h1, h2


def split_so5(tw):
    """so(5) for the antidiagonal form: the split form of so(2,3)."""
    n = 5
    seen = []
    mats = []
    for i in range(n):
        for j in range(n):
            m = [[0] * n for _ in range(n)]
            m[i][j] += 1
            m[n - 1 - j][n - 1 - i] -= 1
            if any(any(row) for row in m):
                flat = tuple(x for row in m for x in row)
                neg = tuple(-x for x in flat)
                if flat not in seen and neg not in seen:
                    seen.append(flat)
                    mats.append(mat_from_ints(tw, m))
    datum = LieAlgebraDatum(mats, tw)
    assert datum.dim == 10
    h1 = mat_from_ints(
        tw, [[1, 0, 0, 0, 0], [0] * 5, [0] * 5, [0] * 5, [0, 0, 0, 0, -1]])
    h2 = mat_from_ints(
        tw, [[0] * 5, [0, 1, 0, 0, 0], [0] * 5, [0, 0, 0, -1, 0], [0] * 5])
    return datum, h1, h2


# -- datum construction ------------------------------------------------------


def test_non_closed_basis_rejected():
    tw = tower()
    e12 = mat_from_ints(tw, [[0, 1], [0, 0]])
    e21 = mat_from_ints(tw, [[0, 0], [1, 0]])
    with pytest.raises(LieError):
        LieAlgebraDatum([e12, e21], tw)


def test_real_form_flag():
    tw = tower()
    assert sl2(tw).real_form


# -- Levi-type decomposition --------------------------------------------------


def test_levi_sl2():
    tw = tower()
    dec = levi_decompose(sl2(tw))
    assert len(dec.s_basis) == 3
    assert dec.t_basis == [] and dec.n_basis == []


def test_levi_solvable_upper_triangular():
    tw = tower()
    h = mat_from_ints(tw, [[1, 0], [0, -1]])
    c = mat_from_ints(tw, [[1, 0], [0, 1]])
    e = mat_from_ints(tw, [[0, 1], [0, 0]])
    datum = LieAlgebraDatum([h, c, e], tw)
    dec = levi_decompose(datum)
    assert dec.s_basis == []
    assert len(dec.t_basis) == 2
    assert len(dec.n_basis) == 1
    # the nilpotent part is exactly the strict upper triangle
    nmat = dec.n_basis[0]
    assert nmat[0][0].is_zero() and nmat[1][1].is_zero()
    assert nmat[1][0].is_zero() and not nmat[0][1].is_zero()


def test_levi_sl2_semidirect():
    tw = tower()
    datum = sl2_semidirect(tw)
    dec = levi_decompose(datum)
    assert len(dec.s_basis) == 3
    assert dec.t_basis == []
    assert len(dec.n_basis) == 2
    # n is spanned by the translation part
    for m in dec.n_basis:
        assert all(m[i][j].is_zero()
                   for i in range(3) for j in range(2))


# -- Fitting decomposition and regular elements --------------------------------


def test_fitting_sl2_cartan():
    tw = tower()
    datum = sl2(tw)
    h = [datum.basis[0]]
    a0, a1 = fitting(datum, datum.basis, h)
    assert len(a0) == 1 and len(a1) == 2
    assert meq(a0[0], datum.basis[0])


def test_fitting_whole_nilpotent_and_zero():
    tw = tower()
    # Heisenberg algebra inside gl(3)
    x = mat_from_ints(tw, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    y = mat_from_ints(tw, [[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    z = mat_from_ints(tw, [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    datum = LieAlgebraDatum([x, y, z], tw)
    a0, a1 = fitting(datum, datum.basis, datum.basis)
    assert len(a0) == 3 and a1 == []
    a0, a1 = fitting(datum, datum.basis, [])
    assert len(a0) == 3 and a1 == []


def test_regular_element_sl2_and_sl3():
    tw = tower()
    datum = sl2(tw)
    x = regular_element(datum, [datum.basis[0]])
    assert not is_zero_matrix(x)
    datum3, h1, h2 = sl3(tw)
    x = regular_element(datum3, [h1, h2])
    a0, _ = fitting(datum3, datum3.basis, [x])
    assert len(a0) == 2


# -- conjugation of Cartan subalgebras -----------------------------------------


def test_conj_cartan_equal():
    tw = tower()
    h = mat_from_ints(tw, [[1, 0], [0, 0]])
    x = mat_from_ints(tw, [[0, 1], [0, 0]])
    datum = LieAlgebraDatum([h, x], tw)
    assert conj_cartan_solvable(datum, [h], [h]) == []


def test_conj_cartan_one_step():
    tw = tower()
    h = mat_from_ints(tw, [[1, 0], [0, 0]])
    x = mat_from_ints(tw, [[0, 1], [0, 0]])
    datum = LieAlgebraDatum([h, x], tw)
    hx = mat_from_ints(tw, [[1, 1], [0, 0]])
    out = conj_cartan_solvable(datum, [h], [hx])
    assert len(out) == 1
    assert meq(out[0], mat_from_ints(tw, [[0, -1], [0, 0]]))


def test_conj_cartan_nilpotent_unique():
    tw = tower()
    x = mat_from_ints(tw, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    y = mat_from_ints(tw, [[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    z = mat_from_ints(tw, [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    datum = LieAlgebraDatum([x, y, z], tw)
    assert conj_cartan_solvable(datum, datum.basis, datum.basis) == []


# -- conjugation of Levi subalgebras --------------------------------------------


def test_conj_levi_equal():
    tw = tower()
    datum = sl2_semidirect(tw)
    s = datum.basis[:3]
    z = conj_levi(datum, s, s)
    assert is_zero_matrix(z)


def shifted_levi(datum, tw, a, b):
    """Image of the standard Levi under conjugation by a translation."""
    u = meye(tw, 3)
    u[0][2] = tw.from_rational(a)
    u[1][2] = tw.from_rational(b)
    uinv = minverse(u, tw)
    return [mmul(mmul(u, m), uinv) for m in datum.basis[:3]], u


def test_conj_levi_shifted():
    tw = tower()
    datum = sl2_semidirect(tw)
    s1, _ = shifted_levi(datum, tw, 2, -3)
    s2 = datum.basis[:3]
    z = conj_levi(datum, s1, s2)
    # z lies in the abelian ideal
    assert all(z[i][j].is_zero() for i in range(3) for j in range(2))


def test_conj_levi_torus_identity_and_shift():
    tw = tower()
    datum = sl2_semidirect(tw)
    s = datum.basis[:3]
    g0, xs = conj_levi_torus(datum, (s, []), (s, []))
    assert xs == [] or all(is_zero_matrix(x) for x in xs)
    assert meq(g0, meye(tw, 3))
    s1, u = shifted_levi(datum, tw, 1, 4)
    g0, xs = conj_levi_torus(datum, (s1, []), (s, []))
    uinv = minverse(g0, tw)
    for m in s1:
        conj = mmul(mmul(g0, m), uinv)
        assert datum.contains(conj)


# -- aligning a Cartan subalgebra with a decomposition ---------------------------


def test_align_cartan_reductive():
    tw = tower()
    datum = sl2(tw)
    dec = levi_decompose(datum)
    h0 = [datum.basis[0]]
    h_s, h, xs = align_cartan(datum, h0, dec)
    assert xs == []
    assert len(h) == 1 and len(h_s) == 1


def test_align_cartan_semidirect():
    tw = tower()
    datum = sl2_semidirect(tw)
    dec = levi_decompose(datum)
    h = datum.basis[0]
    e1 = datum.basis[3]
    # a Cartan subalgebra shifted into the ideal: exp(ad e1)(h) = h - e1
    h0 = [msub(h, e1)]
    h_s, hnew, xs = align_cartan(datum, h0, dec)
    assert len(hnew) == 1 and len(xs) >= 1
    assert meq(h_s[0], h)
    # the conjugators are nilpotent and lie in the ideal
    for x in xs:
        assert all(x[i][j].is_zero() for i in range(3) for j in range(2))


# -- Jordan decomposition, exp, log ----------------------------------------------


def test_exp_log_basic():
    tw = tower()
    x = mat_from_ints(tw, [[0, 1], [0, 0]])
    u = exp_nilpotent(x, tw)
    assert meq(u, mat_from_ints(tw, [[1, 1], [0, 1]]))
    assert meq(log_unipotent(u, tw), x)


def test_exp_inverse_property():
    tw = tower()
    for entries in ([[0, 2, 5], [0, 0, -3], [0, 0, 0]],
                    [[0, 1, 0], [0, 0, 1], [0, 0, 0]]):
        x = mat_from_ints(tw, entries)
        prod = mmul(exp_nilpotent(x, tw),
                    exp_nilpotent([[-v for v in row] for row in x], tw))
        assert meq(prod, meye(tw, 3))


def test_jordan_scaled_unipotent():
    tw = tower()
    g = mat_from_ints(tw, [[2, 2], [0, 2]])
    jp = jordan(g, tw)
    assert meq(jp.s, mat_from_ints(tw, [[2, 0], [0, 2]]))
    assert meq(jp.u, mat_from_ints(tw, [[1, 1], [0, 1]]))


def test_jordan_diagonalizable():
    tw = tower()
    g = mat_from_ints(tw, [[2, 1], [0, 3]])
    jp = jordan(g, tw)
    assert meq(jp.s, g)
    assert meq(jp.u, meye(tw, 2))


def test_additive_jordan():
    tw = tower()
    m = mat_from_ints(tw, [[1, 1], [0, 1]])
    s, n = additive_jordan(m, tw)
    assert meq(s, meye(tw, 2))
    assert meq(n, mat_from_ints(tw, [[0, 1], [0, 0]]))


# -- reductive projection ---------------------------------------------------------


def test_reductive_projection_semidirect():
    tw = tower()
    datum = sl2_semidirect(tw)
    dec = levi_decompose(datum)
    # unipotent translation: projects to the identity
    e1 = datum.basis[3]
    u = exp_nilpotent(e1, tw)
    assert meq(reductive_projection(datum, dec, u), meye(tw, 3))
    # element of the reductive subgroup: fixed
    g = mat_from_ints(tw, [[2, 0, 0], [0, 0, 0], [0, 0, 1]])
    g[1][1] = tw.from_rational(Fraction(1, 2))
    assert meq(reductive_projection(datum, dec, g), g)
    # semisimple element conjugated out of the reductive subgroup
    tr = meye(tw, 3)
    tr[0][2] = tw.from_rational(3)
    trinv = minverse(tr, tw)
    gshift = mmul(mmul(tr, g), trinv)
    assert not meq(gshift, g)
    assert meq(reductive_projection(datum, dec, gshift), g)
    # multiplicativity spot check
    prod = mmul(gshift, u)
    lhs = reductive_projection(datum, dec, prod)
    rhs = mmul(reductive_projection(datum, dec, gshift),
               reductive_projection(datum, dec, u))
    assert meq(lhs, rhs)


# -- membership --------------------------------------------------------------------


def test_membership_sl2():
    tw = tower()
    datum = sl2(tw)
    assert membership(meye(tw, 2), datum)
    assert membership(mat_from_ints(tw, [[1, 1], [0, 1]]), datum)
    two = mat_from_ints(tw, [[2, 0], [0, 2]])
    assert not membership(two, datum)
    g = mat_from_ints(tw, [[2, 0], [0, 1]])
    g[1][1] = tw.from_rational(Fraction(1, 2))
    assert membership(g, datum)


def test_membership_mixed_element():
    tw = tower()
    datum = sl2(tw)
    g = mat_from_ints(tw, [[2, 1], [0, 1]])
    g[1][1] = tw.from_rational(Fraction(1, 2))
    assert membership(g, datum)
    # determinant obstruction for the torus part
    bad = mat_from_ints(tw, [[2, 1], [0, 3]])
    assert not membership(bad, datum)


# -- root systems ------------------------------------------------------------------


def test_root_system_sl2():
    tw = tower()
    datum = sl2(tw)
    rd = root_system(datum, [datum.basis[0]])
    assert len(rd.roots) == 2
    assert len(rd.simple_indices) == 1
    assert rd.cartan_matrix == [[2]]
    h = rd.h_gens[0]
    x = rd.x_gens[0]
    y = rd.y_gens[0]
    assert meq(datum.bracket(x, y), h)
    two_x = [[tw.from_rational(2) * v for v in row] for row in x]
    assert meq(datum.bracket(h, x), two_x)


def test_root_system_sl3():
    tw = tower()
    datum, h1, h2 = sl3(tw)
    rd = root_system(datum, [h1, h2])
    assert len(rd.roots) == 6
    assert len(rd.simple_indices) == 2
    cm = rd.cartan_matrix
    assert cm[0][0] == 2 and cm[1][1] == 2
    assert cm[0][1] == -1 and cm[1][0] == -1
    for i in range(2):
        assert meq(datum.bracket(rd.x_gens[i], rd.y_gens[i]), rd.h_gens[i])


def test_root_system_so5():
    tw = tower()
    datum, h1, h2 = split_so5(tw)
    rd = root_system(datum, [h1, h2])
    assert len(rd.roots) == 8
    assert len(rd.simple_indices) == 2
    cm = rd.cartan_matrix
    assert cm[0][0] == 2 and cm[1][1] == 2
    assert cm[0][1] * cm[1][0] == 2
    for i in range(2):
        assert meq(datum.bracket(rd.x_gens[i], rd.y_gens[i]), rd.h_gens[i])


def test_cartan_subalgebra_sl2():
    tw = tower()
    datum = sl2(tw)
    h = cartan_subalgebra(datum)
    assert len(h) == 1
