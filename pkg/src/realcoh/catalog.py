"""Built-in group data: verified bases, real structures, Cartan
decompositions, covers, and component data for the shipped families.

Families:
  * torus:<word>   products of indecomposable real tori, one letter per
                   factor: E = split, F = compact (norm-one), D = induced
                   (restriction of scalars), e.g. torus:fe
  * so(p,q)        special orthogonal algebra of the diagonal form with p
                   plus signs and q minus signs, p+q <= 9
  * sl(n,r)        special linear algebra over the reals, n <= 4
  * su(p,q)        special unitary algebra, p+q <= 3, realized through the
                   block embedding g -> diag(g, transpose-inverse) so the
                   real structure is conjugation by a matrix
  * sp(4,r)        split symplectic algebra of rank 2
  * o(2), o(3)     orthogonal groups with their reflection component
  * mu2            the two-element group inside GL(1)
  * n-sl2-t        normalizer of the diagonal torus in the 2x2 special
                   linear group, split real structure
  * n-sl2-t-compact  the same group with the compact real structure
  * gm-affine      multiplicative group acting on the affine line
  * sl2-c2         2x2 special linear algebra acting on the plane

Every entry is rebuilt and verified by the corresponding pipeline builder
on `get`; expected class counts are carried for tests only and never feed
a computation path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field import FieldTower, format_element
from .h2nab import ScCoverData, chevalley_cover
from .linalg import mat_from_ints, meye, mzeros
from .nonconnected import NonConnectedGroup, build_nonconnected
from .nonreductive import LeviSplitGroup, build_levi_split
from .reductive import ReductiveRealGroup, build_reductive
from .torus import TorusPresentation, build_presentation

import json


class CatalogError(Exception):
    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


@dataclass
class CatalogEntry:
    name: str
    kind: str                     # torus | reductive | nonreductive | nonconnected
    tower: FieldTower
    lie_basis: list
    nsigma: list
    k_mats: list = field(default_factory=list)
    p_mats: list = field(default_factory=list)
    component_reps: list | None = None
    pi0_table: list | None = None
    pi0_gamma: list | None = None
    cover: ScCoverData | None = None
    conjugator_hint: list | None = None
    expected: dict = field(default_factory=dict)   # test-only
    group: object = None          # built, verified pipeline object

    def to_json(self) -> str:
        def fmt(mat):
            return [[format_element(x) for x in row] for row in mat]

        data = {
            "name": self.name,
            "kind": self.kind,
            "n": len(self.nsigma),
            "lie_basis": [fmt(m) for m in self.lie_basis],
            "N_sigma": fmt(self.nsigma),
        }
        if self.kind in ("reductive", "nonreductive"):
            data["k_mats"] = [fmt(m) for m in self.k_mats]
            data["p_mats"] = [fmt(m) for m in self.p_mats]
        if self.kind == "nonconnected":
            data["component_reps"] = [fmt(m) for m in self.component_reps]
            data["pi0_table"] = self.pi0_table
            data["pi0_gamma"] = self.pi0_gamma
        return json.dumps(data, separators=(",", ":"))


# -- matrix helpers ----------------------------------------------------------------


def _block_embed(tower, blocks_sizes, index, mat):
    """Place mat at block `index` of a block-diagonal zero matrix."""
    n = sum(blocks_sizes)
    off = sum(blocks_sizes[:index])
    out = mzeros(tower, n, n)
    for i, row in enumerate(mat):
        for j, x in enumerate(row):
            out[off + i][off + j] = x
    return out


def _eij(tower, n, i, j, val=1):
    out = mzeros(tower, n, n)
    out[i][j] = tower.from_rational(val)
    return out


# -- tori --------------------------------------------------------------------------


_TORUS_BLOCKS = {
    "e": (1, [[[1]]], [[1]]),
    "f": (2, [[[0, 1], [-1, 0]]], [[1, 0], [0, 1]]),
    "d": (2, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [[0, 1], [1, 0]]),
}


def _torus_entry(word: str, tower: FieldTower) -> CatalogEntry:
    letters = [ch for ch in word.lower()]
    if not letters or any(ch not in _TORUS_BLOCKS for ch in letters):
        raise CatalogError("unknown-name", f"torus word {word!r}")
    sizes = [_TORUS_BLOCKS[ch][0] for ch in letters]
    n = sum(sizes)
    basis = []
    nsig = meye(tower, n)
    for idx, ch in enumerate(letters):
        size, block_basis, block_nsig = _TORUS_BLOCKS[ch]
        for bm in block_basis:
            basis.append(_block_embed(tower, sizes, idx,
                                      mat_from_ints(tower, bm)))
        off = sum(sizes[:idx])
        for i in range(size):
            for j in range(size):
                nsig[off + i][off + j] = tower.from_rational(
                    block_nsig[i][j])
    pres = build_presentation(basis, nsig, tower)
    return CatalogEntry(
        name=f"torus:{word.lower()}", kind="torus", tower=tower,
        lie_basis=basis, nsigma=nsig,
        cover=ScCoverData(f"torus:{word.lower()}", [meye(tower, n)],
                          [[]], []),
        expected={"h1_order": 2 ** letters.count("f")},
        group=pres,
    )


# -- orthogonal and linear families -------------------------------------------------


def _sopq_data(p: int, q: int, tower: FieldTower):
    n = p + q
    sign = [1] * p + [-1] * q
    basis, k_mats, p_mats = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            m = mzeros(tower, n, n)
            m[i][j] = tower.one()
            m[j][i] = tower.from_rational(-sign[i] * sign[j])
            basis.append(m)
            if sign[i] == sign[j]:
                k_mats.append(m)
            else:
                p_mats.append(m)
    return basis, k_mats, p_mats


def _sopq_entry(p: int, q: int, tower: FieldTower) -> CatalogEntry:
    if p + q > 9 or p + q < 2 or p < 0 or q < 0:
        raise CatalogError("unknown-name", f"so({p},{q}) out of range")
    basis, k_mats, p_mats = _sopq_data(p, q, tower)
    # standard block rotations: a Cartan subalgebra of so(p) x so(q) whose
    # adjoint eigenvalues stay inside the square-root tower
    cartan = []
    for i in range(p // 2):
        m = mzeros(tower, p + q, p + q)
        m[2 * i][2 * i + 1] = tower.one()
        m[2 * i + 1][2 * i] = tower.from_rational(-1)
        cartan.append(m)
    for j in range(q // 2):
        m = mzeros(tower, p + q, p + q)
        m[p + 2 * j][p + 2 * j + 1] = tower.one()
        m[p + 2 * j + 1][p + 2 * j] = tower.from_rational(-1)
        cartan.append(m)
    group = build_reductive(basis, meye(tower, p + q), k_mats, p_mats,
                            tower, cartan_k_mats=cartan)
    expected = {"h1_order": -(-(p + q) // 2)}
    return CatalogEntry(name=f"so({p},{q})", kind="reductive", tower=tower,
                        lie_basis=basis, nsigma=meye(tower, p + q),
                        k_mats=k_mats, p_mats=p_mats,
                        expected=expected, group=group)


def _slnr_entry(n: int, tower: FieldTower) -> CatalogEntry:
    if not 2 <= n <= 4:
        raise CatalogError("unknown-name", f"sl({n},r) out of range")
    basis, k_mats, p_mats = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            anti = mzeros(tower, n, n)
            anti[i][j] = tower.one()
            anti[j][i] = tower.from_rational(-1)
            sym = mzeros(tower, n, n)
            sym[i][j] = tower.one()
            sym[j][i] = tower.one()
            basis += [anti, sym]
            k_mats.append(anti)
            p_mats.append(sym)
    for i in range(n - 1):
        d = mzeros(tower, n, n)
        d[i][i] = tower.one()
        d[i + 1][i + 1] = tower.from_rational(-1)
        basis.append(d)
        p_mats.append(d)
    # block rotations spanning a Cartan subalgebra of so(n)
    cartan = []
    for i in range(n // 2):
        m = mzeros(tower, n, n)
        m[2 * i][2 * i + 1] = tower.one()
        m[2 * i + 1][2 * i] = tower.from_rational(-1)
        cartan.append(m)
    group = build_reductive(basis, meye(tower, n), k_mats, p_mats, tower,
                            cartan_k_mats=cartan)
    cover = chevalley_cover(group, f"sl({n},r)")
    return CatalogEntry(name=f"sl({n},r)", kind="reductive", tower=tower,
                        lie_basis=basis, nsigma=meye(tower, n),
                        k_mats=k_mats, p_mats=p_mats, cover=cover,
                        expected={"h1_order": 1}, group=group)


def _su_basis(p: int, q: int, tower: FieldTower):
    """Real basis of su(p,q) in the standard representation, split into
    the maximal-compact and complementary parts."""
    n = p + q
    sign = [1] * p + [-1] * q
    i_unit = tower.i()
    k_list, p_list = [], []
    for a in range(n - 1):
        d = mzeros(tower, n, n)
        d[a][a] = i_unit
        d[a + 1][a + 1] = -i_unit
        k_list.append(d)
    for a in range(n):
        for b in range(a + 1, n):
            if sign[a] == sign[b]:
                m1 = mzeros(tower, n, n)
                m1[a][b] = tower.one()
                m1[b][a] = tower.from_rational(-1)
                m2 = mzeros(tower, n, n)
                m2[a][b] = i_unit
                m2[b][a] = i_unit
                k_list += [m1, m2]
            else:
                m1 = mzeros(tower, n, n)
                m1[a][b] = tower.one()
                m1[b][a] = tower.one()
                m2 = mzeros(tower, n, n)
                m2[a][b] = i_unit
                m2[b][a] = -i_unit
                p_list += [m1, m2]
    return k_list, p_list


def _iota_lie(tower, x):
    """Block embedding of the Lie algebra: x -> diag(x, -x^T)."""
    n = len(x)
    out = mzeros(tower, 2 * n, 2 * n)
    for i in range(n):
        for j in range(n):
            out[i][j] = x[i][j]
            out[n + i][n + j] = -x[j][i]
    return out


def _su_entry(p: int, q: int, tower: FieldTower) -> CatalogEntry:
    n = p + q
    if not 2 <= n <= 3:
        raise CatalogError("unknown-name", f"su({p},{q}) out of range")
    k_small, p_small = _su_basis(p, q, tower)
    k_mats = [_iota_lie(tower, m) for m in k_small]
    p_mats = [_iota_lie(tower, m) for m in p_small]
    basis = k_mats + p_mats
    nsig = mzeros(tower, 2 * n, 2 * n)
    sign = [1] * p + [-1] * q
    for i in range(n):
        nsig[i][n + i] = tower.from_rational(sign[i])
        nsig[n + i][i] = tower.from_rational(sign[i])
    # the embedded diagonal matrices span a Cartan subalgebra of k
    group = build_reductive(basis, nsig, k_mats, p_mats, tower,
                            cartan_k_mats=k_mats[:n - 1])
    cover = chevalley_cover(group, f"su({p},{q})")
    # hermitian forms of rank n with the discriminant of the standard one
    expected = {"h1_order": len([b for b in range(n + 1)
                                 if (b - q) % 2 == 0])}
    return CatalogEntry(name=f"su({p},{q})", kind="reductive", tower=tower,
                        lie_basis=basis, nsigma=nsig,
                        k_mats=k_mats, p_mats=p_mats, cover=cover,
                        expected=expected, group=group)


def _sp4_entry(tower: FieldTower) -> CatalogEntry:
    # form matrix [[0, 1], [-1, 0]] in 2x2 blocks
    n = 4

    def sp_elt(a, b, c):
        # [[A, B], [C, -A^T]] with B, C symmetric
        m = mzeros(tower, n, n)
        for i in range(2):
            for j in range(2):
                m[i][j] = tower.from_rational(a[i][j])
                m[i][2 + j] = tower.from_rational(b[i][j])
                m[2 + i][j] = tower.from_rational(c[i][j])
                m[2 + i][2 + j] = tower.from_rational(-a[j][i])
        return m

    z = [[0, 0], [0, 0]]
    e11, e22, e12s = [[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]
    rot = [[0, 1], [-1, 0]]
    k_mats = [
        sp_elt(rot, z, z),
        sp_elt(z, e11, [[-1, 0], [0, 0]]),
        sp_elt(z, e22, [[0, 0], [0, -1]]),
        sp_elt(z, e12s, [[0, -1], [-1, 0]]),
    ]
    p_mats = [
        sp_elt(e11, z, z),
        sp_elt(e22, z, z),
        sp_elt([[0, 1], [1, 0]], z, z),
        sp_elt(z, e11, e11),
        sp_elt(z, e22, e22),
        sp_elt(z, e12s, e12s),
    ]
    basis = k_mats + p_mats
    # the two diagonal rotation pairs span a Cartan subalgebra of k
    group = build_reductive(basis, meye(tower, n), k_mats, p_mats, tower,
                            cartan_k_mats=[k_mats[1], k_mats[2]])
    cover = chevalley_cover(group, "sp(4,r)")
    return CatalogEntry(name="sp(4,r)", kind="reductive", tower=tower,
                        lie_basis=basis, nsigma=meye(tower, n),
                        k_mats=k_mats, p_mats=p_mats, cover=cover,
                        expected={"h1_order": 1}, group=group)


# -- non-connected and non-reductive entries ----------------------------------------


_Z2 = ([[0, 1], [1, 0]], [0, 1])


def _o2_entry(tower: FieldTower) -> CatalogEntry:
    rot = mat_from_ints(tower, [[0, 1], [-1, 0]])
    refl = mat_from_ints(tower, [[1, 0], [0, -1]])
    reps = [meye(tower, 2), refl]
    group = build_nonconnected([rot], meye(tower, 2), reps, *_Z2, tower)
    return CatalogEntry(name="o(2)", kind="nonconnected", tower=tower,
                        lie_basis=[rot], nsigma=meye(tower, 2),
                        component_reps=reps, pi0_table=_Z2[0],
                        pi0_gamma=_Z2[1],
                        expected={"h1_order": 3}, group=group)


def _o3_entry(tower: FieldTower) -> CatalogEntry:
    basis = [mat_from_ints(tower, m) for m in (
        [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
    )]
    minus = mat_from_ints(tower, [[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
    reps = [meye(tower, 3), minus]
    group = build_nonconnected(basis, meye(tower, 3), reps, *_Z2, tower,
                               k_mats=basis, p_mats=[])
    return CatalogEntry(name="o(3)", kind="nonconnected", tower=tower,
                        lie_basis=basis, nsigma=meye(tower, 3),
                        k_mats=basis, p_mats=[],
                        component_reps=reps, pi0_table=_Z2[0],
                        pi0_gamma=_Z2[1],
                        expected={"h1_order": 4}, group=group)


def _mu2_entry(tower: FieldTower) -> CatalogEntry:
    reps = [mat_from_ints(tower, [[1]]), mat_from_ints(tower, [[-1]])]
    group = build_nonconnected([], meye(tower, 1), reps, *_Z2, tower)
    return CatalogEntry(name="mu2", kind="nonconnected", tower=tower,
                        lie_basis=[], nsigma=meye(tower, 1),
                        component_reps=reps, pi0_table=_Z2[0],
                        pi0_gamma=_Z2[1],
                        expected={"h1_order": 2}, group=group)


def _nsl2t_entry(tower: FieldTower, compact: bool) -> CatalogEntry:
    h = mat_from_ints(tower, [[1, 0], [0, -1]])
    w = mat_from_ints(tower, [[0, 1], [-1, 0]])
    nsig = w if compact else meye(tower, 2)
    reps = [meye(tower, 2), w]
    group = build_nonconnected([h], nsig, reps, *_Z2, tower)
    name = "n-sl2-t-compact" if compact else "n-sl2-t"
    return CatalogEntry(name=name, kind="nonconnected", tower=tower,
                        lie_basis=[h], nsigma=nsig,
                        component_reps=reps, pi0_table=_Z2[0],
                        pi0_gamma=_Z2[1],
                        expected={"h1_order": 2}, group=group)


def _gm_affine_entry(tower: FieldTower) -> CatalogEntry:
    d = mat_from_ints(tower, [[1, 0], [0, 0]])
    e = mat_from_ints(tower, [[0, 1], [0, 0]])
    group = build_levi_split([d, e], meye(tower, 2), [], [], tower)
    return CatalogEntry(name="gm-affine", kind="nonreductive", tower=tower,
                        lie_basis=[d, e], nsigma=meye(tower, 2),
                        expected={"h1_order": 1}, group=group)


def _sl2_c2_entry(tower: FieldTower) -> CatalogEntry:
    h = mat_from_ints(tower, [[1, 0, 0], [0, -1, 0], [0, 0, 0]])
    x = mat_from_ints(tower, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    y = mat_from_ints(tower, [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    e1 = mat_from_ints(tower, [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    e2 = mat_from_ints(tower, [[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    rot = mat_from_ints(tower, [[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    sym = mat_from_ints(tower, [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    basis = [h, x, y, e1, e2]
    group = build_levi_split(basis, meye(tower, 3), [rot], [h, sym], tower)
    return CatalogEntry(name="sl2-c2", kind="nonreductive", tower=tower,
                        lie_basis=basis, nsigma=meye(tower, 3),
                        k_mats=[rot], p_mats=[h, sym],
                        expected={"h1_order": 1}, group=group)


# -- registry ----------------------------------------------------------------------


def list_names() -> list:
    names = []
    names += [f"torus:{w}" for w in ("e", "f", "d", "fe", "fd", "fed")]
    names += [f"so({p},{q})" for p, q in
              ((1, 2), (2, 3), (3, 4), (4, 5))]
    names += [f"sl({n},r)" for n in (2, 3, 4)]
    names += ["su(2,0)", "su(1,1)", "su(3,0)", "su(2,1)", "sp(4,r)"]
    names += ["o(2)", "o(3)", "mu2", "n-sl2-t", "n-sl2-t-compact",
              "gm-affine", "sl2-c2"]
    return names


def get(name: str, tower: FieldTower = None) -> CatalogEntry:
    tower = tower or FieldTower()
    key = name.strip().lower().replace(" ", "")
    if key.startswith("torus:"):
        return _torus_entry(key[len("torus:"):], tower)
    import re
    m = re.fullmatch(r"so\((\d+),(\d+)\)", key)
    if m:
        return _sopq_entry(int(m.group(1)), int(m.group(2)), tower)
    m = re.fullmatch(r"sl\((\d+),r\)", key)
    if m:
        return _slnr_entry(int(m.group(1)), tower)
    m = re.fullmatch(r"su\((\d+)(?:,(\d+))?\)", key)
    if m:
        return _su_entry(int(m.group(1)), int(m.group(2) or 0), tower)
    if key == "sp(4,r)":
        return _sp4_entry(tower)
    builders = {
        "o(2)": _o2_entry,
        "o(3)": _o3_entry,
        "mu2": _mu2_entry,
        "gm-affine": _gm_affine_entry,
        "sl2-c2": _sl2_c2_entry,
    }
    if key in builders:
        return builders[key](tower)
    if key == "n-sl2-t":
        return _nsl2t_entry(tower, compact=False)
    if key == "n-sl2-t-compact":
        return _nsl2t_entry(tower, compact=True)
    raise CatalogError("unknown-name", name)
