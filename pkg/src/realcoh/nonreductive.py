"""H^1 and cocycle equivalence for connected groups with unipotent radical.

A connected group G splits as G^u . G^(r) with G^u the unipotent radical and
G^(r) a reductive complement.  The quotient map G -> G/G^u induces a
bijection on first cohomology, proved in one step in both directions with an
explicit exp(-log/2) correction.  This module packages:

  * lifting a cocycle of the quotient to a cocycle of G (sansuc_lift),
  * transporting a quotient-level equivalence witness to an exact witness
    in G (sansuc_transport),
  * the class list of G, which is the class list of the reductive part
    reinterpreted inside G, and
  * the full equivalence solver, which first solves the problem in the
    reductive part and then removes the remaining unipotent discrepancy.

All returned witnesses are verified exactly before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .field import FieldTower
from .liealg import (
    LeviDecomposition,
    LieAlgebraDatum,
    LieError,
    exp_nilpotent,
    in_span,
    levi_decompose,
    log_unipotent,
    reductive_projection,
    rref_rows,
)
from .linalg import mconj, meq, meye, minverse, mmul, mscale
from .reductive import (
    ReductiveError,
    ReductiveH1Result,
    ReductiveRealGroup,
    build_reductive,
    h1_connected_reductive,
    solve_problem2_reductive,
)


class NonReductiveError(Exception):
    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


@dataclass
class LeviSplitGroup:
    tower: FieldTower
    datum: LieAlgebraDatum      # full Lie algebra
    levi: LeviDecomposition
    reductive: ReductiveRealGroup
    u_rows: list                # unipotent radical coordinates
    r_rows: list                # reductive complement coordinates
    nsigma: list

    def gamma(self, mat: list) -> list:
        return self.reductive.gamma(mat)

    def project(self, g: list, seed: int = 0) -> list:
        """Image of a group element under the retraction onto G^(r)."""
        return reductive_projection(self.datum, self.levi, g, seed=seed)


def build_levi_split(lie_basis: list, nsigma: list, k_mats: list,
                     p_mats: list, tower: FieldTower, seed: int = 0,
                     weyl_guard: int = 10000) -> LeviSplitGroup:
    """Split off the unipotent radical and build the reductive complement.

    k_mats/p_mats give a Cartan decomposition of the derived algebra of the
    reductive complement, as for build_reductive.
    """
    datum = LieAlgebraDatum(lie_basis, tower)
    nsig_inv = minverse(nsigma, tower)
    for m in lie_basis:
        if not meq(mmul(mmul(nsigma, mconj(m)), nsig_inv), m):
            raise NonReductiveError("not-real-basis")
    levi = levi_decompose(datum)
    r_mats = levi.s_basis + levi.t_basis
    if not r_mats:
        raise NonReductiveError("trivial-reductive-part",
                                "the reductive complement is zero")
    reductive = build_reductive(r_mats, nsigma, k_mats, p_mats, tower,
                                seed=seed, weyl_guard=weyl_guard)
    u_rows = rref_rows(datum.mats_to_rows(levi.n_basis), tower)
    r_rows = rref_rows(datum.mats_to_rows(r_mats), tower)
    return LeviSplitGroup(tower=tower, datum=datum, levi=levi,
                          reductive=reductive, u_rows=u_rows, r_rows=r_rows,
                          nsigma=nsigma)


def _log_in_radical(g: LeviSplitGroup, u: list) -> list:
    """log of a unipotent radical element, or raise."""
    try:
        lu = log_unipotent(u, g.tower)
        v = g.datum.coords(lu)
    except LieError:
        raise NonReductiveError("not-in-radical")
    if not in_span(v, g.u_rows):
        raise NonReductiveError("not-in-radical")
    return lu


def sansuc_lift(g: LeviSplitGroup, elem: list) -> list:
    """Correct an element that is a cocycle modulo G^u into an exact cocycle.

    The returned g' differs from elem by an element of G^u and satisfies
    g' * gamma(g') = 1 exactly.
    """
    tower = g.tower
    u = mmul(elem, g.gamma(elem))
    lu = _log_in_radical(g, u)
    s = exp_nilpotent(mscale(tower.from_rational(Fraction(-1, 2)), lu),
                      tower)
    out = mmul(s, elem)
    if not meq(mmul(out, g.gamma(out)), meye(tower, g.datum.n)):
        raise NonReductiveError("lift-failed")
    return out


def sansuc_transport(g: LeviSplitGroup, z: list, zprime: list,
                     sbar: list) -> list:
    """Exact witness from a witness that works modulo G^u.

    Given cocycles z, z' of G and sbar with sbar^-1 * z * gamma(sbar) = z'
    modulo G^u, returns s' with s'^-1 * z * gamma(s') = z' exactly.
    """
    tower = g.tower
    z2 = mmul(mmul(minverse(sbar, tower), z), g.gamma(sbar))
    u = mmul(zprime, minverse(z2, tower))
    lu = _log_in_radical(g, u)
    t = exp_nilpotent(mscale(tower.from_rational(Fraction(-1, 2)), lu),
                      tower)
    sprime = mmul(sbar, t)
    check = mmul(mmul(minverse(sprime, tower), z), g.gamma(sprime))
    if not meq(check, zprime):
        raise NonReductiveError("transport-failed")
    return sprime


def h1_connected(g: LeviSplitGroup) -> ReductiveH1Result:
    """Class list of G: the reductive class list, reinterpreted inside G."""
    return h1_connected_reductive(g.reductive)


def solve_problem2_connected(g: LeviSplitGroup, cocycle: list,
                             classes: ReductiveH1Result = None,
                             conjugator_hint: list = None,
                             seed: int = 0) -> tuple:
    """Class index and witness for a cocycle of a connected group.

    Returns (index, s) with s^-1 * cocycle * gamma(s) equal to the stored
    representative, verified exactly.
    """
    tower = g.tower
    n = g.datum.n
    ident = meye(tower, n)
    if not meq(mmul(cocycle, g.gamma(cocycle)), ident):
        raise NonReductiveError("not-cocycle")
    if classes is None:
        classes = h1_connected(g)

    g_red = g.project(cocycle, seed=seed)
    if not meq(mmul(g_red, g.gamma(g_red)), ident):
        raise NonReductiveError("projection-not-cocycle")
    idx, s_r = solve_problem2_reductive(g.reductive, g_red, classes=classes,
                                        conjugator_hint=conjugator_hint,
                                        seed=seed)
    g_i = classes.representatives[idx]

    u = mmul(mmul(mmul(minverse(s_r, tower), cocycle), g.gamma(s_r)),
             minverse(g_i, tower))
    lu = _log_in_radical(g, u)
    # u is a cocycle for the twisted real structure sigma_i = inn(g_i).sigma
    sig_u = mmul(mmul(g_i, g.gamma(u)), minverse(g_i, tower))
    if not meq(mmul(u, sig_u), ident):
        raise NonReductiveError("twisted-cocycle-failed")
    s_i = exp_nilpotent(mscale(tower.from_rational(Fraction(1, 2)), lu),
                        tower)
    s = mmul(s_r, s_i)
    out = mmul(mmul(minverse(s, tower), cocycle), g.gamma(s))
    if not meq(out, g_i):
        raise NonReductiveError("witness-verification-failed")
    return idx, s
