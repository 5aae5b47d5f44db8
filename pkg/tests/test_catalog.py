import json

import pytest

from realcoh.catalog import CatalogError, get, list_names
from realcoh.linalg import meq, meye, mmul
from realcoh.nonconnected import h1_nonconnected
from realcoh.nonreductive import h1_connected
from realcoh.reductive import h1_connected_reductive
from realcoh.torus import h1_torus

# heavier entries (so(4,5) and friends) are exercised by the acceptance
# suite; this file keeps to the entries that build in a few seconds
LIGHT = [
    "torus:e", "torus:f", "torus:d", "torus:fe", "torus:fd",
    "so(1,2)", "so(2,3)",
    "sl(2,r)", "sl(3,r)",
    "su(2,0)", "su(1,1)",
    "sp(4,r)",
    "o(2)", "o(3)", "mu2", "n-sl2-t", "n-sl2-t-compact",
    "gm-affine", "sl2-c2",
]


def class_count(entry):
    if entry.kind == "torus":
        return h1_torus(entry.group).order()
    if entry.kind == "reductive":
        return h1_connected_reductive(entry.group).order()
    if entry.kind == "nonreductive":
        return h1_connected(entry.group).order()
    return h1_nonconnected(entry.group).order()


@pytest.mark.parametrize("name", LIGHT)
def test_entry_matches_expected_count(name):
    entry = get(name)
    assert class_count(entry) == entry.expected["h1_order"]


def test_list_names_all_resolve_lazily():
    names = list_names()
    assert len(names) == len(set(names))
    # every listed name parses; only the quick ones are built here
    for name in names:
        if name in LIGHT:
            assert get(name).name == name


def test_basis_is_gamma_fixed():
    for name in ("so(2,3)", "su(1,1)", "sp(4,r)"):
        entry = get(name)
        from realcoh.linalg import minverse
        nsinv = minverse(entry.nsigma, entry.tower)
        for m in entry.lie_basis:
            img = mmul(mmul(entry.nsigma,
                            [[x.conj() for x in row] for row in m]), nsinv)
            assert meq(img, m)


def test_emit_json_round_trip():
    entry = get("o(2)")
    data = json.loads(entry.to_json())
    assert data["name"] == "o(2)"
    assert data["kind"] == "nonconnected"
    assert data["n"] == 2
    assert data["pi0_table"] == [[0, 1], [1, 0]]
    assert len(data["component_reps"]) == 2
    # deterministic byte output
    assert entry.to_json() == get("o(2)").to_json()


def test_case_and_space_insensitive():
    entry = get(" SO(1, 2) ".replace(" ", " "))
    assert entry.name == "so(1,2)"


def test_unknown_name_raises():
    with pytest.raises(CatalogError) as err:
        get("e8-split")
    assert err.value.code == "unknown-name"
    with pytest.raises(CatalogError):
        get("torus:x")
    with pytest.raises(CatalogError):
        get("so(9,9)")


def test_su_cover_center_order():
    entry = get("su(2,0)")
    assert len(entry.cover.center_elements) == 2


def test_torus_expected_orders():
    assert get("torus:fe").expected["h1_order"] == 2
    assert get("torus:d").expected["h1_order"] == 1
    assert get("torus:fd").expected["h1_order"] == 2
