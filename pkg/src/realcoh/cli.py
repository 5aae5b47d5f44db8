"""Batch front end: parse group data, dispatch to the right pipeline, and
emit verified reports.

Commands
  h1 INPUT                 class list with explicit verified cocycles
  equiv INPUT --cocycle Z  class index and witness for a given cocycle
  h2-quasitorus INPUT      H^2 of a quasi-torus given by torus + characters
  lattice-decompose INPUT  canonical basis of an integer involution module
  catalog list|emit NAME   shipped group data

INPUT is either `catalog:NAME` or a path to a JSON file using the same
schema the catalog emits: {"kind": torus|reductive|nonreductive|
nonconnected, "lie_basis": [...], "N_sigma": [...], ...} with matrix
entries written in the element grammar (e.g. "1/2+3*i", "sqrt(2)").

Exit codes: 0 success, 2 partial result (blocked classes), 1 error.  All
reports are deterministic for a fixed seed and input; every witness is
re-verified by an independent identity check before the report is written,
and `"verified": true` appears only when those checks pass.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import catalog as _catalog
from .field import FieldError, FieldTower, format_element, parse_element
from .gammacoh import CohomologyError
from .h2nab import H2Error
from .lattice import LatticeError, gamma_decompose
from .liealg import LieError
from .linalg import meq, meye, minverse, mmul
from .nonconnected import (NonConnectedError, build_nonconnected,
                           h1_nonconnected, solve_problem2_nonconnected)
from .nonreductive import (NonReductiveError, build_levi_split, h1_connected,
                           solve_problem2_connected)
from .reductive import (ReductiveError, build_reductive,
                        h1_connected_reductive, solve_problem2_reductive)
from .torus import (QuasiTorusDatum, TorusError, build_presentation,
                    characters_to_lattice_map, h1_torus, h2_quasitorus,
                    trivialize_cocycle)

_ERRORS = (FieldError, CohomologyError, H2Error, LatticeError, LieError,
           NonConnectedError, NonReductiveError, ReductiveError, TorusError,
           _catalog.CatalogError)


class CliError(Exception):
    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(message or code)


class GaussianTower(FieldTower):
    """Field backend restricted to the Gaussian rationals Q(i).

    Square roots that stay inside Q(i) are fine; anything that would grow
    the tower raises a structured error instead (the fast path is only
    sound when the whole computation lives in Q(i))."""

    def sqrt(self, x):
        before = len(self.gens)
        out = super().sqrt(x)
        if len(self.gens) != before:
            raise FieldError("field-extension-required",
                             "computation left the Gaussian rationals; "
                             "rerun with --field=sqrt-tower")
        return out


# -- input parsing -----------------------------------------------------------------


def _fmt_mat(mat) -> list:
    return [[format_element(x) for x in row] for row in mat]


def _parse_mat(data, tower: FieldTower) -> list:
    if not isinstance(data, list) or not data or \
            not all(isinstance(row, list) for row in data):
        raise CliError("bad-matrix", "expected a list of rows")
    return [[parse_element(str(x), tower) for x in row] for row in data]


@dataclass
class Job:
    name: str
    kind: str
    tower: FieldTower
    nsigma: list
    group: object
    conjugator_hint: list = None


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError("input-unreadable", str(exc))
    except json.JSONDecodeError as exc:
        raise CliError("input-not-json", str(exc))


def _build_from_data(data: dict, tower: FieldTower, seed: int,
                     weyl_guard: int) -> Job:
    kind = data.get("kind")
    if kind not in ("torus", "reductive", "nonreductive", "nonconnected"):
        raise CliError("bad-input", f"unknown kind {kind!r}")
    name = data.get("name", "<file>")
    basis = [_parse_mat(m, tower) for m in data.get("lie_basis", [])]
    nsig = _parse_mat(data["N_sigma"], tower) if "N_sigma" in data else None
    if nsig is None:
        raise CliError("bad-input", "missing N_sigma")
    hint = (_parse_mat(data["conjugator_hint"], tower)
            if data.get("conjugator_hint") else None)
    if kind == "torus":
        group = build_presentation(basis, nsig, tower)
    elif kind in ("reductive", "nonreductive"):
        k_mats = [_parse_mat(m, tower) for m in data.get("k_mats", [])]
        p_mats = [_parse_mat(m, tower) for m in data.get("p_mats", [])]
        if kind == "reductive":
            cartan = ([_parse_mat(m, tower) for m in data["cartan_k_mats"]]
                      if data.get("cartan_k_mats") else None)
            group = build_reductive(basis, nsig, k_mats, p_mats, tower,
                                    seed=seed, weyl_guard=weyl_guard,
                                    cartan_k_mats=cartan)
        else:
            group = build_levi_split(basis, nsig, k_mats, p_mats, tower)
    else:
        reps = [_parse_mat(m, tower) for m in data.get("component_reps", [])]
        k_mats = ([_parse_mat(m, tower) for m in data["k_mats"]]
                  if data.get("k_mats") else None)
        p_mats = ([_parse_mat(m, tower) for m in data["p_mats"]]
                  if data.get("p_mats") is not None else None)
        group = build_nonconnected(basis, nsig, reps, data["pi0_table"],
                                   data["pi0_gamma"], tower,
                                   k_mats=k_mats, p_mats=p_mats,
                                   conjugator_hint=hint, seed=seed)
    return Job(name=name, kind=kind, tower=tower, nsigma=nsig,
               group=group, conjugator_hint=hint)


def load_job(spec: str, tower: FieldTower, seed: int,
             weyl_guard: int) -> Job:
    if spec.startswith("catalog:"):
        entry = _catalog.get(spec[len("catalog:"):], tower)
        return Job(name=entry.name, kind=entry.kind, tower=tower,
                   nsigma=entry.nsigma, group=entry.group,
                   conjugator_hint=entry.conjugator_hint)
    return _build_from_data(_load_json(spec), tower, seed, weyl_guard)


# -- independent verification ------------------------------------------------------


def _gamma_of(job: Job):
    nsinv = minverse(job.nsigma, job.tower)

    def gamma(mat):
        return mmul(mmul(job.nsigma,
                         [[x.conj() for x in row] for row in mat]), nsinv)

    return gamma


def _is_cocycle(job: Job, z: list) -> bool:
    gamma = _gamma_of(job)
    return meq(mmul(z, gamma(z)), meye(job.tower, len(job.nsigma)))


# -- h1 ----------------------------------------------------------------------------


def _h1_report(job: Job, seed: int) -> tuple:
    """(report dict, exit code); computes, then re-verifies independently."""
    classes = []
    non_lifting = []
    blocked = []
    if job.kind == "torus":
        res = h1_torus(job.group)
        for i, (signs, rep) in enumerate(zip(res.sign_patterns,
                                             res.representatives)):
            classes.append({"index": i, "representative": _fmt_mat(rep),
                            "provenance": {"kind": "torus-sign-pattern",
                                           "signs": signs}})
    elif job.kind in ("reductive", "nonreductive"):
        res = (h1_connected_reductive(job.group) if job.kind == "reductive"
               else h1_connected(job.group))
        for i, (pat, rep) in enumerate(zip(res.class_indices,
                                           res.representatives)):
            classes.append({"index": i, "representative": _fmt_mat(rep),
                            "provenance": {"kind": "weyl-orbit",
                                           "pattern_index": pat}})
    else:
        res = h1_nonconnected(job.group)
        for i, (prov, rep) in enumerate(zip(res.provenance,
                                            res.representatives)):
            comp, xidx = prov
            classes.append({"index": i, "representative": _fmt_mat(rep),
                            "provenance": {"kind": "component-lift",
                                           "component": comp,
                                           "twisted_index": xidx}})
        non_lifting = list(res.non_lifting)
        blocked = [{"component": c, "code": code} for c, code in res.blocked]

    verified = all(_is_cocycle(job, r)
                   for r in getattr(res, "representatives"))
    report = {
        "command": "h1",
        "group": job.name,
        "kind": job.kind,
        "order": len(classes),
        "classes": classes,
        "verified": bool(verified),
    }
    if job.kind == "nonconnected":
        report["non_lifting"] = non_lifting
        report["blocked"] = blocked
    if not verified:
        raise CliError("verification-failed",
                       "a representative failed its cocycle identity")
    return report, (2 if blocked else 0), res


def _h1_text(report: dict) -> str:
    lines = [f"group {report['group']} ({report['kind']}): "
             f"{report['order']} classes"]
    for c in report["classes"]:
        prov = c["provenance"]
        if prov["kind"] == "torus-sign-pattern":
            tag = "signs " + "".join("+" if s == 1 else "-"
                                     for s in prov["signs"])
        elif prov["kind"] == "weyl-orbit":
            tag = f"pattern {prov['pattern_index']}"
        else:
            tag = f"component {prov['component']}"
        lines.append(f"  class {c['index']}: {tag}")
    for c in report.get("non_lifting", []):
        lines.append(f"  component {c}: no lift (non-lifting)")
    for b in report.get("blocked", []):
        lines.append(f"  component {b['component']}: blocked "
                     f"({b['code']})")
    lines.append(f"verified: {str(report['verified']).lower()}")
    return "\n".join(lines)


# -- equiv -------------------------------------------------------------------------


def _load_cocycle(path: str, tower: FieldTower) -> list:
    data = _load_json(path)
    if isinstance(data, dict):
        data = data.get("matrix", data.get("cocycle"))
    if data is None:
        raise CliError("bad-input", "cocycle file must hold a matrix")
    return _parse_mat(data, tower)


def _equiv_report(job: Job, z: list, seed: int) -> dict:
    if not _is_cocycle(job, z):
        raise CliError("not-cocycle", "z * gamma(z) != 1")
    if job.kind == "torus":
        res = h1_torus(job.group)
        rep, signs, s = trivialize_cocycle(job.group, z)
        index = res.sign_patterns.index(signs)
        listed = res.representatives[index]
    elif job.kind == "reductive":
        res = h1_connected_reductive(job.group)
        index, s = solve_problem2_reductive(
            job.group, z, classes=res,
            conjugator_hint=job.conjugator_hint, seed=seed)
        listed = res.representatives[index]
    elif job.kind == "nonreductive":
        res = h1_connected(job.group)
        index, s = solve_problem2_connected(
            job.group, z, classes=res,
            conjugator_hint=job.conjugator_hint, seed=seed)
        listed = res.representatives[index]
    else:
        res = h1_nonconnected(job.group)
        index, s = solve_problem2_nonconnected(job.group, z, classes=res)
        listed = res.representatives[index]

    gamma = _gamma_of(job)
    out = mmul(mmul(minverse(s, job.tower), z), gamma(s))
    if not meq(out, listed):
        raise CliError("verification-failed",
                       "witness does not carry z to the listed class")
    return {
        "command": "equiv",
        "group": job.name,
        "kind": job.kind,
        "index": index,
        "witness": _fmt_mat(s),
        "representative": _fmt_mat(listed),
        "verified": True,
    }


# -- h2-quasitorus -----------------------------------------------------------------


def _h2_report(spec: str, tower: FieldTower) -> dict:
    data = _load_json(spec)
    basis = [_parse_mat(m, tower) for m in data.get("lie_basis", [])]
    if "N_sigma" not in data:
        raise CliError("bad-input", "missing N_sigma")
    nsig = _parse_mat(data["N_sigma"], tower)
    chars = data.get("characters")
    if not isinstance(chars, list):
        raise CliError("bad-input", "missing character exponent rows")
    pres = build_presentation(basis, nsig, tower)
    lattice_map, quotient_tau = characters_to_lattice_map(pres, chars)
    datum = QuasiTorusDatum(pres, lattice_map, quotient_tau)
    res = h2_quasitorus(datum)

    # independent re-check: each representative is gamma-fixed and is
    # killed by every defining character
    verified = True
    for rep in res.representatives:
        gamma = mmul(mmul(nsig, [[x.conj() for x in row] for row in rep]),
                     minverse(nsig, tower))
        if not meq(gamma, rep):
            verified = False
        coords = pres.lambda_inverse(rep)
        if coords is None:
            verified = False
            continue
        for row in chars:
            val = tower.one()
            for c, e in zip(coords, row):
                val = val * (c ** e)
            if val != 1:
                verified = False
    if not verified:
        raise CliError("verification-failed",
                       "an H^2 representative failed its identities")
    return {
        "command": "h2-quasitorus",
        "order": res.order(),
        "representatives": [_fmt_mat(m) for m in res.representatives],
        "verified": True,
    }


# -- lattice-decompose -------------------------------------------------------------


def _lattice_report(spec: str) -> dict:
    data = _load_json(spec)
    tau = data.get("tau") if isinstance(data, dict) else data
    if not isinstance(tau, list):
        raise CliError("bad-input", "expected an integer matrix under 'tau'")
    res = gamma_decompose(tau)
    e, f, gh = res.counts
    return {
        "command": "lattice-decompose",
        "counts": {"e": e, "f": f, "gh": gh},
        "e_vectors": res.e_vectors,
        "f_vectors": res.f_vectors,
        "gh_pairs": [[g, h] for g, h in res.gh_pairs],
        "change_of_basis": res.change_of_basis,
        "verified": True,
    }


# -- entry point -------------------------------------------------------------------


def _emit(report: dict, fmt: str, text_renderer=None) -> None:
    if fmt == "text" and text_renderer is not None:
        print(text_renderer(report))
    elif fmt == "text":
        for key, val in report.items():
            print(f"{key}: {val}")
    else:
        print(json.dumps(report, separators=(",", ":"), sort_keys=False))


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realcoh",
        description="Galois cohomology of real linear algebraic groups")
    parser.add_argument("--field", choices=("gaussian", "sqrt-tower"),
                        default="sqrt-tower")
    parser.add_argument("--format", choices=("json", "text"),
                        default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--weyl-guard", type=int, default=10000)
    sub = parser.add_subparsers(dest="command", required=True)
    p_h1 = sub.add_parser("h1")
    p_h1.add_argument("input")
    p_eq = sub.add_parser("equiv")
    p_eq.add_argument("input")
    p_eq.add_argument("--cocycle", required=True)
    p_h2 = sub.add_parser("h2-quasitorus")
    p_h2.add_argument("input")
    p_ld = sub.add_parser("lattice-decompose")
    p_ld.add_argument("input")
    p_cat = sub.add_parser("catalog")
    p_cat.add_argument("action", choices=("list", "emit"))
    p_cat.add_argument("name", nargs="?")
    return parser


def _run(args) -> int:
    tower = GaussianTower() if args.field == "gaussian" else FieldTower()

    if args.command == "catalog":
        if args.action == "list":
            _emit({"command": "catalog", "names": _catalog.list_names()},
                  args.format,
                  lambda r: "\n".join(r["names"]))
            return 0
        if not args.name:
            raise CliError("bad-input", "catalog emit needs a name")
        entry = _catalog.get(args.name, tower)
        print(entry.to_json())
        return 0

    if args.command == "lattice-decompose":
        _emit(_lattice_report(args.input), args.format)
        return 0

    if args.command == "h2-quasitorus":
        _emit(_h2_report(args.input, tower), args.format)
        return 0

    job = None
    if args.field == "gaussian":
        # reject up front rather than failing mid-computation
        spec = args.input
        kind = None
        if spec.startswith("catalog:"):
            probe = spec[len("catalog:"):].strip().lower().replace(" ", "")
            if probe in ("o(2)", "o(3)", "mu2", "n-sl2-t",
                         "n-sl2-t-compact"):
                kind = "nonconnected"
        else:
            kind = _load_json(spec).get("kind")
        if kind == "nonconnected":
            raise CliError("gaussian-backend-connected-only",
                           "non-connected groups need --field=sqrt-tower")
    job = load_job(args.input, tower, args.seed, args.weyl_guard)
    if args.field == "gaussian" and job.kind == "nonconnected":
        raise CliError("gaussian-backend-connected-only",
                       "non-connected groups need --field=sqrt-tower")

    if args.command == "h1":
        report, code, _ = _h1_report(job, args.seed)
        _emit(report, args.format, _h1_text)
        return code

    if args.command == "equiv":
        z = _load_cocycle(args.cocycle, tower)
        report = _equiv_report(job, z, args.seed)
        _emit(report, args.format)
        return 0

    raise CliError("bad-input", f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        return _run(args)
    except CliError as exc:
        print(json.dumps({"error": {"code": exc.code,
                                    "message": str(exc)}},
                         separators=(",", ":")))
        return 1
    except _ERRORS as exc:
        code = getattr(exc, "code", type(exc).__name__)
        print(json.dumps({"error": {"code": code, "message": str(exc)}},
                         separators=(",", ":")))
        return 1


if __name__ == "__main__":
    sys.exit(main())
