from fractions import Fraction

import pytest

from realcoh.field import FieldTower
from realcoh.linalg import (
    mat_from_ints,
    meq,
    meye,
    minverse,
    mmul,
    mtranspose,
)
from realcoh.reductive import (
    ReductiveError,
    build_reductive,
    h1_connected_reductive,
    realify_torus_conjugator,
    solve_problem2_reductive,
    trivialize_cocycle,
    weyl_action,
)
from realcoh.torus import h1_torus


# -- fixtures ---------------------------------------------------------------------


def sl2r(tower, seed=0):
    h = mat_from_ints(tower, [[1, 0], [0, -1]])
    e = mat_from_ints(tower, [[0, 1], [0, 0]])
    f = mat_from_ints(tower, [[0, 0], [1, 0]])
    rot = mat_from_ints(tower, [[0, 1], [-1, 0]])
    sym = mat_from_ints(tower, [[0, 1], [1, 0]])
    return build_reductive([h, e, f], meye(tower, 2), [rot], [h, sym],
                           tower, seed=seed)


def iota(m, tower):
    """Block embedding g -> diag(g, (g^T)^-1) of 2x2 matrices."""
    inv = minverse(mtranspose(m), tower)
    zero = tower.zero()
    out = [[zero] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            out[i][j] = m[i][j]
            out[2 + i][2 + j] = inv[i][j]
    return out


def su2(tower, seed=0):
    i = tower.i()
    one = tower.one()
    zero = tower.zero()
    b1 = [[i, zero], [zero, -i]]
    b2 = [[zero, one], [-one, zero]]
    b3 = [[zero, i], [i, zero]]
    basis = [iota(m, tower) for m in (b1, b2, b3)]
    nsig = [[zero] * 4 for _ in range(4)]
    for j in range(2):
        nsig[j][2 + j] = one
        nsig[2 + j][j] = one
    return build_reductive(basis, nsig, basis, [], tower, seed=seed)


def so23(tower, seed=0):
    # antisymmetric-with-respect-to-diag(1,1,-1,-1,-1) matrices
    sig = [1, 1, -1, -1, -1]
    basis, k_mats, p_mats = [], [], []
    for i in range(5):
        for j in range(i + 1, 5):
            rows = [[0] * 5 for _ in range(5)]
            rows[i][j] = sig[j]
            rows[j][i] = -sig[i]
            m = mat_from_ints(tower, rows)
            basis.append(m)
            if (i < 2) == (j < 2):
                k_mats.append(m)
            else:
                p_mats.append(m)
    return build_reductive(basis, meye(tower, 5), k_mats, p_mats,
                           tower, seed=seed)


# -- structure --------------------------------------------------------------------


def test_sl2r_structure():
    tower = FieldTower()
    g = sl2r(tower)
    t = g.torus
    assert (t.k, t.l, t.r) == (1, 0, 0)
    assert len(g.weyl) == 2
    assert len(g.w0) == 2
    assert h1_torus(t).order() == 2


def test_su2_structure():
    tower = FieldTower()
    g = su2(tower)
    t = g.torus
    assert (t.k, t.l, t.r) == (1, 0, 0)
    assert len(g.weyl) == 2
    assert len(g.w0) == 2
    assert not g.p_rows
    assert len(g.that0_rows) == 1


def test_so23_structure():
    tower = FieldTower()
    g = so23(tower)
    t = g.torus
    assert (t.k, t.l, t.r) == (2, 0, 0)
    assert h1_torus(t).order() == 4
    assert len(g.weyl) == 8
    assert len(g.root.roots) == 8
    a = g.root.cartan_matrix
    assert a[0][0] == a[1][1] == 2
    assert a[0][1] * a[1][0] == 2


def test_rejects_bad_cartan_decomposition():
    tower = FieldTower()
    h = mat_from_ints(tower, [[1, 0], [0, -1]])
    e = mat_from_ints(tower, [[0, 1], [0, 0]])
    f = mat_from_ints(tower, [[0, 0], [1, 0]])
    rot = mat_from_ints(tower, [[0, 1], [-1, 0]])
    with pytest.raises(ReductiveError) as err:
        build_reductive([h, e, f], meye(tower, 2), [rot], [h],
                        tower)
    assert err.value.code == "not-cartan-decomposition"


# -- class counts -----------------------------------------------------------------


def test_sl2r_one_class():
    tower = FieldTower()
    g = sl2r(tower)
    res = h1_connected_reductive(g)
    assert res.order() == 1
    assert meq(res.representatives[0], meye(tower, 2))


def test_su2_two_classes():
    tower = FieldTower()
    g = su2(tower)
    res = h1_connected_reductive(g)
    assert res.order() == 2
    minus = [[-x for x in row] for row in meye(tower, 4)]
    assert any(meq(z, minus) for z in res.representatives)


def test_so23_three_classes():
    tower = FieldTower()
    g = so23(tower)
    res = h1_connected_reductive(g)
    assert res.order() == 3
    ident = meye(tower, 5)
    for z in res.representatives:
        assert meq(mmul(z, g.gamma(z)), ident)


def test_so23_count_independent_of_cartan_choice():
    tower = FieldTower()
    g = so23(tower, seed=3)
    assert h1_connected_reductive(g).order() == 3


def test_action_well_defined_under_representative_change():
    # replacing n by n * t for t in T(C) does not change the induced
    # permutation of the sign-pattern classes
    tower = FieldTower()
    g = sl2r(tower)
    res = h1_torus(g.torus)
    e = next(w for w in g.w0 if w.word)
    t = g.torus.lam([tower.from_rational(2) + tower.i()])
    n2 = mmul(e.n, t)
    for z in res.representatives:
        z1 = mmul(mmul(minverse(e.n, tower), z), g.gamma(e.n))
        z2 = mmul(mmul(minverse(n2, tower), z), g.gamma(n2))
        _, s1, _ = trivialize_cocycle(g.torus, z1)
        _, s2, _ = trivialize_cocycle(g.torus, z2)
        assert s1 == s2


def test_weyl_table_is_permutation_table():
    tower = FieldTower()
    g = so23(tower)
    table = weyl_action(g)
    for perm in table.perms:
        assert sorted(perm) == list(range(4))
    # (+,+) and (-,-) give the same real form, the mixed patterns do not
    assert table.orbits == [[0, 3], [1], [2]]


# -- equivalence witnesses --------------------------------------------------------


def unimodular_diagonalizer(m2, tower):
    """Determinant-one eigenvector matrix of a 2x2 matrix with distinct
    eigenvalues; requires the top-right entry to be nonzero unless the
    matrix is already diagonal."""
    p, q = m2[0][0], m2[0][1]
    r, s = m2[1][0], m2[1][1]
    if q.is_zero() and r.is_zero():
        return meye(tower, 2)
    assert not q.is_zero()
    tr = p + s
    disc = tr * tr - 4 * (p * s - q * r)
    if disc.is_positive():
        root = tower.sqrt(disc)
    else:
        root = tower.i() * tower.sqrt(-disc)
    d1 = (tr + root) / 2
    d2 = (tr - root) / 2
    det = q * (d2 - d1)
    inv = det.inverse()
    return [[q * inv, q], [(d1 - p) * inv, d2 - p]]


def check_witness(g, cocycle, res, idx, h):
    out = mmul(mmul(minverse(h, g.tower), cocycle), g.gamma(h))
    assert meq(out, res.representatives[idx])


def test_problem2_sl2r_torus_twist():
    tower = FieldTower()
    g = sl2r(tower)
    res = h1_connected_reductive(g)
    s = g.torus.lam([tower.from_rational(2)])
    cocycle = mmul(minverse(s, tower), g.gamma(s))
    idx, h = solve_problem2_reductive(g, cocycle, classes=res)
    assert idx == 0
    check_witness(g, cocycle, res, idx, h)


def test_problem2_sl2r_minus_identity():
    # -1 lies in the compact torus but is killed by the Weyl action
    tower = FieldTower()
    g = sl2r(tower)
    res = h1_connected_reductive(g)
    minus = mat_from_ints(tower, [[-1, 0], [0, -1]])
    idx, h = solve_problem2_reductive(g, minus, classes=res)
    assert idx == 0
    check_witness(g, minus, res, idx, h)


def test_problem2_sl2r_semisimple_outside_fundamental_torus():
    # diag(i, -i) is a cocycle whose centralizer is the split diagonal
    # torus; the general centralizer path applies with no conjugation
    tower = FieldTower()
    g = sl2r(tower)
    res = h1_connected_reductive(g)
    i = tower.i()
    cocycle = [[i, tower.zero()], [tower.zero(), -i]]
    idx, h = solve_problem2_reductive(g, cocycle, classes=res)
    assert idx == 0
    check_witness(g, cocycle, res, idx, h)


def test_problem2_sl2r_unipotent_part():
    tower = FieldTower()
    g = sl2r(tower)
    res = h1_connected_reductive(g)
    i = tower.i()
    one = tower.one()
    cocycle = [[-one, -i], [tower.zero(), -one]]
    assert meq(mmul(cocycle, g.gamma(cocycle)), meye(tower, 2))
    idx, h = solve_problem2_reductive(g, cocycle, classes=res)
    assert idx == 0
    check_witness(g, cocycle, res, idx, h)


def test_problem2_su2_central_and_twisted():
    tower = FieldTower()
    g = su2(tower)
    res = h1_connected_reductive(g)
    minus = [[-x for x in row] for row in meye(tower, 4)]
    idx_minus, h = solve_problem2_reductive(g, minus, classes=res)
    check_witness(g, minus, res, idx_minus, h)
    # twist by a non-real torus element: same class, nontrivial witness
    t = g.torus.lam([tower.from_rational(2)])
    cocycle = mmul(mmul(minverse(t, tower), minus), g.gamma(t))
    idx, h = solve_problem2_reductive(g, cocycle, classes=res)
    assert idx == idx_minus
    check_witness(g, cocycle, res, idx, h)


def test_problem2_so23_roundtrip():
    tower = FieldTower()
    g = so23(tower)
    res = h1_connected_reductive(g)
    u1 = tower.from_rational(2) + tower.i()
    u2 = tower.from_rational(3)
    t = g.torus.lam([u1, u2])
    tinv = minverse(t, tower)
    for want, z in enumerate(res.representatives):
        cocycle = mmul(mmul(tinv, z), g.gamma(t))
        idx, h = solve_problem2_reductive(g, cocycle, classes=res)
        assert idx == want
        check_witness(g, cocycle, res, idx, h)


def test_problem2_su2_needs_conjugator():
    # a twist of -1 by a unipotent of SL(2, C) produces a cocycle whose
    # compact centralizer torus is not inside T: without a hint the solver
    # reports the conjugator gap, with the diagonalizing hint it succeeds
    tower = FieldTower()
    g = su2(tower)
    res = h1_connected_reductive(g)
    i = tower.i()
    one = tower.one()
    zero = tower.zero()
    m = [[one, i], [zero, one]]
    r = iota(m, tower)
    minus = [[-x for x in row] for row in meye(tower, 4)]
    cocycle = mmul(mmul(minverse(r, tower), minus), g.gamma(r))
    with pytest.raises(ReductiveError) as err:
        solve_problem2_reductive(g, cocycle, classes=res)
    assert err.value.code == "conjugator-unavailable"
    # hint: diagonalize the semisimple part, then carry the diagonal torus
    # onto T with the eigenvector matrix of its Lie algebra generator
    s2 = [row[:2] for row in cocycle[:2]]
    t2 = [row[:2] for row in g.t_mats()[0][:2]]
    q_s = unimodular_diagonalizer(s2, tower)
    q_t = unimodular_diagonalizer(t2, tower)
    hint = iota(mmul(q_s, minverse(q_t, tower)), tower)
    idx, h = solve_problem2_reductive(g, cocycle, classes=res,
                                      conjugator_hint=hint)
    minus_idx = next(k for k, z in enumerate(res.representatives)
                     if meq(z, minus))
    assert idx == minus_idx
    check_witness(g, cocycle, res, idx, h)


def test_realify_torus_conjugator_su2():
    tower = FieldTower()
    g = su2(tower)
    # a non-real torus element normalizes T_0 trivially; realification
    # must return a gamma-fixed element inducing the same conjugation
    conj = g.torus.lam([tower.from_rational(2)])
    t0_mats = g.datum.rows_to_mats(g.t0_rows)
    g_r = realify_torus_conjugator(g, t0_mats, conj)
    assert meq(g.gamma(g_r), g_r)
