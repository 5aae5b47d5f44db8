"""H^1 and cocycle equivalence for non-connected groups over the reals.

A non-connected group is given by the Lie algebra of its identity component,
the matrix of the real structure, one matrix representative per component,
and the component group as a multiplication table with its gamma-action.
The class list is assembled component-class by component-class:

  1. enumerate H^1 of the component group by brute force;
  2. for each class, form the 2-cocycle (g.gamma(g), inn(g) o gamma) of the
     identity component and decide whether the class lifts (torus closed
     forms, or the nonabelian-H^2 engine for a reductive identity
     component); a lifting witness s gives the cocycle ghat = s.g;
  3. twist the real structure by ghat and list H^1 of the twisted identity
     component;
  4. quotient by the action of the twisted-real component classes, realized
     through the connected equivalence solver, and translate by ghat.

Classes that fail to lift for a mathematical reason (the 2-cocycle is not
a coboundary) are reported in `non_lifting`; classes that cannot be decided
with the supplied data (missing cover, missing conjugator, twisted Cartan
data) are reported in `blocked` with a machine-readable reason, and the
remaining classes are still returned.

The real-structure matrix N may satisfy N.conj(N) = z for a central z != 1
(as happens for compact forms presented inside a simply connected group);
this is supported when the identity component is a torus or trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field import FieldTower
from .gammacoh import FiniteGammaGroup, h1_finite
from .h2nab import H2Error, ScCoverData, delta, neutralize_reductive
from .liealg import rref_rows
from .linalg import mconj, meq, meye, minverse, mmul
from .reductive import (
    ReductiveError,
    ReductiveRealGroup,
    build_reductive,
    h1_connected_reductive,
    solve_problem2_reductive,
)
from .torus import (
    QuasiTorusDatum,
    TorusError,
    TorusPresentation,
    build_presentation,
    h1_torus,
    h2_is_coboundary,
    trivialize_cocycle,
)


class NonConnectedError(Exception):
    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


def _full_torus_qdatum(pres: TorusPresentation) -> QuasiTorusDatum:
    """The torus itself viewed as a quasi-torus (no characters)."""
    return QuasiTorusDatum(
        torus=pres,
        lattice_map=[[] for _ in range(pres.d)],
        quotient_tau=[],
        component_torus=pres,
        component_reps=[meye(pres.tower, pres.n)],
    )


@dataclass
class NonConnectedGroup:
    tower: FieldTower
    n: int
    lie_basis: list          # identity component; may be empty
    nsigma: list
    component_reps: list     # one matrix per pi0 element
    pi0: FiniteGammaGroup
    mode: str                # "finite" | "torus" | "reductive"
    torus: TorusPresentation | None = None
    reductive: ReductiveRealGroup | None = None
    k_mats: list | None = None
    p_mats: list | None = None
    cover: ScCoverData | None = None
    conjugator_hint: list | None = None
    basis_rows: list = field(default_factory=list)

    def gamma(self, mat: list) -> list:
        nsig_inv = minverse(self.nsigma, self.tower)
        return mmul(mmul(self.nsigma, mconj(mat)), nsig_inv)

    def in_identity_component(self, mat: list):
        """True/False when decidable, None when not."""
        if self.mode == "finite":
            return meq(mat, meye(self.tower, self.n))
        if self.mode == "torus":
            return self.torus.membership(mat)
        if meq(mat, meye(self.tower, self.n)):
            return True
        if self.reductive.torus.membership(mat):
            return True
        return None


def build_nonconnected(lie_basis: list, nsigma: list, component_reps: list,
                       pi0_table: list, pi0_gamma: list, tower: FieldTower,
                       k_mats: list = None, p_mats: list = None,
                       cover: ScCoverData = None,
                       conjugator_hint: list = None,
                       seed: int = 0) -> NonConnectedGroup:
    n = len(nsigma)
    ident = meye(tower, n)
    pi0 = FiniteGammaGroup(pi0_table, pi0_gamma)
    if len(component_reps) != pi0.size:
        raise NonConnectedError("component-count-mismatch")

    # the real structure must be an involution: N.conj(N) central
    defect = mmul(nsigma, mconj(nsigma))
    for mat in lie_basis + component_reps:
        if not meq(mmul(defect, mat), mmul(mat, defect)):
            raise NonConnectedError("invalid-real-structure",
                                    "N conj(N) is not central")

    if not lie_basis:
        group = NonConnectedGroup(tower, n, [], nsigma, component_reps, pi0,
                                  "finite")
    else:
        abelian = all(
            meq(mmul(x, y), mmul(y, x)) for x in lie_basis for y in lie_basis
        )
        if abelian and k_mats is None and p_mats is None:
            pres = build_presentation(lie_basis, nsigma, tower,
                                      allow_defect=True)
            group = NonConnectedGroup(tower, n, lie_basis, nsigma,
                                      component_reps, pi0, "torus",
                                      torus=pres)
        else:
            if not meq(defect, ident):
                raise NonConnectedError(
                    "invalid-real-structure",
                    "a central defect needs a torus identity component")
            km = k_mats if k_mats is not None else list(lie_basis)
            pm = p_mats if p_mats is not None else []
            try:
                red = build_reductive(lie_basis, nsigma, km, pm, tower,
                                      seed=seed)
            except ReductiveError as err:
                raise NonConnectedError("cartan-data-required", str(err))
            group = NonConnectedGroup(tower, n, lie_basis, nsigma,
                                      component_reps, pi0, "reductive",
                                      reductive=red, k_mats=km, p_mats=pm,
                                      cover=cover,
                                      conjugator_hint=conjugator_hint)

    if lie_basis:
        from .liealg import LieAlgebraDatum
        datum = LieAlgebraDatum(lie_basis, tower)
        group.basis_rows = rref_rows(datum.mats_to_rows(lie_basis), tower)
        for g in component_reps:
            ginv = minverse(g, tower)
            for x in lie_basis:
                img = mmul(mmul(g, x), ginv)
                if not datum.contains(img):
                    raise NonConnectedError(
                        "representative-does-not-normalize")

    def check_member(mat, what):
        verdict = group.in_identity_component(mat)
        if verdict is False:
            raise NonConnectedError("pi0-data-inconsistent", what)
        if verdict is None:
            raise NonConnectedError("membership-undecided", what)

    for i in range(pi0.size):
        for j in range(pi0.size):
            prod = mmul(component_reps[i], component_reps[j])
            u = mmul(prod,
                     minverse(component_reps[pi0.table[i][j]], tower))
            check_member(u, "multiplication table")
        u = mmul(group.gamma(component_reps[i]),
                 minverse(component_reps[pi0.gamma[i]], tower))
        check_member(u, "gamma action")
    return group


# -- lifting a component class -----------------------------------------------------


def torus_shortcut(lie_basis: list, nsigma: list, g: list,
                   tower: FieldTower):
    """Lift a component representative over a torus identity component.

    Returns (ghat, s) with ghat = s.g and ghat.gamma(ghat) = 1, or None when
    h = g.gamma(g) is not a coboundary of the twisted torus (the class has
    no real points over it).
    """
    nsig_inv = minverse(nsigma, tower)
    h = mmul(g, mmul(mmul(nsigma, mconj(g)), nsig_inv))
    pres_tw = build_presentation(lie_basis, mmul(g, nsigma), tower,
                                 allow_defect=True)
    if pres_tw.lambda_inverse(h) is None:
        raise NonConnectedError("pi0-data-inconsistent",
                                "g.gamma(g) is not in the torus")
    s = h2_is_coboundary(_full_torus_qdatum(pres_tw), minverse(h, tower))
    if s is None:
        return None
    ghat = mmul(s, g)
    gg = mmul(ghat, mmul(mmul(nsigma, mconj(ghat)), nsig_inv))
    if not meq(gg, meye(tower, len(nsigma))):
        raise NonConnectedError("lift-verification-failed")
    return ghat, s


# -- per-class machinery -----------------------------------------------------------


@dataclass
class _ComponentClass:
    c: int                   # pi0 class representative (component index)
    ghat: list
    nsigma_hat: list
    mode: str
    x_reps: list             # H^1 of the twisted identity component
    kept: list               # indices into x_reps surviving the quotient
    orbit_rep: list          # x index -> kept x index
    transport: list          # x index -> u with u^-1 x gamma_hat(u) = rep
    entry_offset: int
    pres_hat: TorusPresentation | None = None
    patterns: list | None = None
    tw_group: ReductiveRealGroup | None = None
    tw_classes: object = None

    def gamma_hat(self, tower, mat):
        return mmul(mmul(self.nsigma_hat, mconj(mat)),
                    minverse(self.nsigma_hat, tower))

    def classify(self, tower, w):
        """(x index, witness s) with s^-1 w gamma_hat(s) = x_reps[index]."""
        if self.mode == "finite":
            if not meq(w, meye(tower, len(w))):
                raise NonConnectedError("not-in-identity-component")
            return 0, meye(tower, len(w))
        if self.mode == "torus":
            rep, signs, s = trivialize_cocycle(self.pres_hat, w)
            return self.patterns.index(signs), s
        return solve_problem2_reductive(self.tw_group, w,
                                        classes=self.tw_classes)


@dataclass
class NonConnectedH1Result:
    group: NonConnectedGroup
    representatives: list    # verified cocycles in G
    provenance: list         # (component index, x index) per representative
    non_lifting: list        # component indices whose class has no lift
    blocked: list            # (component index, reason code)
    classes: list            # internal per-class data

    def order(self) -> int:
        return len(self.representatives)


def _lift_class(group: NonConnectedGroup, c: int):
    """(ghat, s) lifting component class c, None if non-lifting; raises
    NonConnectedError with a data-availability code when undecidable."""
    tower = group.tower
    g = group.component_reps[c]
    if group.mode == "finite":
        a = mmul(g, group.gamma(g))
        if meq(a, meye(tower, group.n)):
            return g, meye(tower, group.n)
        return None
    if group.mode == "torus":
        return torus_shortcut(group.lie_basis, group.nsigma, g, tower)
    cocycle = delta(g, group.nsigma, group.lie_basis, tower)
    try:
        res = neutralize_reductive(group.reductive, cocycle,
                                   cover=group.cover,
                                   conjugator_hint=group.conjugator_hint)
    except H2Error as err:
        raise NonConnectedError(err.code, str(err))
    if not res.neutral:
        return None
    s = res.witness
    ghat = mmul(s, g)
    if not meq(mmul(ghat, group.gamma(ghat)), meye(tower, group.n)):
        raise NonConnectedError("lift-verification-failed")
    return ghat, s


def _twisted_x1(group: NonConnectedGroup, ghat: list):
    """H^1 data of the identity component with the real structure twisted
    by ghat."""
    tower = group.tower
    nsigma_hat = mmul(ghat, group.nsigma)
    if group.mode == "finite":
        return nsigma_hat, {"mode": "finite", "x_reps": [meye(tower,
                                                              group.n)]}
    if group.mode == "torus":
        pres_hat = build_presentation(group.lie_basis, nsigma_hat, tower,
                                      allow_defect=True)
        res = h1_torus(pres_hat)
        return nsigma_hat, {"mode": "torus", "x_reps": res.representatives,
                            "pres_hat": pres_hat,
                            "patterns": res.sign_patterns}
    try:
        tw_group = build_reductive(group.lie_basis, nsigma_hat,
                                   group.k_mats, group.p_mats, tower)
    except (ReductiveError, TorusError) as err:
        raise NonConnectedError("twist-data-required", str(err))
    tw_classes = h1_connected_reductive(tw_group)
    return nsigma_hat, {"mode": "reductive",
                        "x_reps": tw_classes.representatives,
                        "tw_group": tw_group, "tw_classes": tw_classes}


def h1_nonconnected(group: NonConnectedGroup,
                    pi0_bound: int = 10 ** 4) -> NonConnectedH1Result:
    tower = group.tower
    ident = meye(tower, group.n)
    pi0_h1 = h1_finite(group.pi0, bound=pi0_bound)
    representatives = []
    provenance = []
    non_lifting = []
    blocked = []
    classes = []
    for c in pi0_h1.representatives:
        try:
            lifted = _lift_class(group, c)
        except NonConnectedError as err:
            blocked.append((c, err.code))
            continue
        if lifted is None:
            non_lifting.append(c)
            continue
        ghat, _ = lifted
        try:
            nsigma_hat, tw = _twisted_x1(group, ghat)
        except NonConnectedError as err:
            blocked.append((c, err.code))
            continue
        cc = _ComponentClass(
            c=c, ghat=ghat, nsigma_hat=nsigma_hat, mode=tw["mode"],
            x_reps=tw["x_reps"], kept=[], orbit_rep=[], transport=[],
            entry_offset=len(representatives),
            pres_hat=tw.get("pres_hat"), patterns=tw.get("patterns"),
            tw_group=tw.get("tw_group"), tw_classes=tw.get("tw_classes"),
        )
        _quotient_by_components(group, cc)
        for t in cc.kept:
            z = mmul(cc.x_reps[t], ghat)
            if not meq(mmul(z, group.gamma(z)), ident):
                raise NonConnectedError("cocycle-verification-failed")
            representatives.append(z)
            provenance.append((c, t))
        classes.append(cc)
    return NonConnectedH1Result(group, representatives, provenance,
                                non_lifting, blocked, classes)


def _quotient_by_components(group: NonConnectedGroup, cc: _ComponentClass):
    """Orbits of the twisted-real component classes on the twisted H^1."""
    tower = group.tower
    pi0 = group.pi0
    # gamma-action on pi0 twisted by the class component c
    ghat_comp = cc.c
    stab = []
    for e in range(pi0.size):
        tw_gamma_e = pi0.mul(pi0.mul(ghat_comp, pi0.gamma[e]),
                             pi0.inv[ghat_comp])
        if tw_gamma_e == e:
            stab.append(e)
    count = len(cc.x_reps)
    cc.orbit_rep = [None] * count
    cc.transport = [None] * count
    for t0 in range(count):
        if cc.orbit_rep[t0] is not None:
            continue
        cc.kept.append(t0)
        cc.orbit_rep[t0] = t0
        cc.transport[t0] = meye(tower, group.n)
        queue = [t0]
        while queue:
            cur = queue.pop()
            for e in stab:
                a_e = group.component_reps[e]
                y = mmul(mmul(minverse(a_e, tower), cc.x_reps[cur]),
                         cc.gamma_hat(tower, a_e))
                if not meq(mmul(y, cc.gamma_hat(tower, y)),
                           meye(tower, group.n)):
                    raise NonConnectedError("orbit-action-failed")
                tprime, s_conn = cc.classify(tower, y)
                if cc.orbit_rep[tprime] is None:
                    v = mmul(a_e, s_conn)
                    cc.orbit_rep[tprime] = t0
                    cc.transport[tprime] = mmul(minverse(v, tower),
                                                cc.transport[cur])
                    queue.append(tprime)


# -- equivalence -------------------------------------------------------------------


def solve_problem2_nonconnected(group: NonConnectedGroup, g: list,
                                classes: NonConnectedH1Result = None) -> tuple:
    """(index into the class list, witness b) with b^-1 g gamma(b) equal to
    the listed representative, verified exactly."""
    tower = group.tower
    ident = meye(tower, group.n)
    if not meq(mmul(g, group.gamma(g)), ident):
        raise NonConnectedError("not-cocycle")
    if classes is None:
        classes = h1_nonconnected(group)
    for cc in classes.classes:
        ghat_inv = minverse(cc.ghat, tower)
        for e in range(group.pi0.size):
            s = group.component_reps[e]
            w = mmul(mmul(mmul(minverse(s, tower), g), group.gamma(s)),
                     ghat_inv)
            if not meq(mmul(w, cc.gamma_hat(tower, w)), ident):
                continue
            member = _in_twisted_component(group, cc, w)
            if member is False:
                continue
            try:
                t, s_conn = cc.classify(tower, w)
            except (NonConnectedError, ReductiveError, TorusError):
                continue
            rep_t = cc.orbit_rep[t]
            b = mmul(mmul(s, s_conn), cc.transport[t])
            idx = cc.entry_offset + cc.kept.index(rep_t)
            target = classes.representatives[idx]
            out = mmul(mmul(minverse(b, tower), g), group.gamma(b))
            if meq(out, target):
                return idx, b
    if classes.blocked:
        raise NonConnectedError(
            "no-match-with-blocked-classes",
            "blocked component classes: "
            + ", ".join(f"{c}:{code}" for c, code in classes.blocked))
    raise NonConnectedError("no-equivalent-class")


def _in_twisted_component(group: NonConnectedGroup, cc: _ComponentClass,
                          w: list):
    if cc.mode == "finite":
        return meq(w, meye(group.tower, group.n))
    if cc.mode == "torus":
        return cc.pres_hat.membership(w)
    return None
