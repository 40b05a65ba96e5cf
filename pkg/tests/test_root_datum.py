import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kstab.errors import DatumError
from kstab.linalg import IntMatrix2, Vec2Q
from kstab.root_datum import (
    aiii_blowup_datum,
    aiii_datum,
    dump_datum,
    load_datum,
    restricted_weyl_group,
)
from oracles import signed_permutations


def root_map(d):
    return {tuple(r.vec): r.mult for r in d.positive_roots}


def test_aiii_m5_roots():
    d = aiii_datum(5)
    assert root_map(d) == {(1, 0): 2, (0, 1): 2, (1, -1): 2, (1, 1): 2, (2, 0): 1, (0, 2): 1}
    assert d.two_rho == Vec2Q(4, 2)


def test_aiii_m4_is_c2():
    d = aiii_datum(4)
    assert set(root_map(d)) == {(1, -1), (1, 1), (2, 0), (0, 2)}
    assert d.two_rho == Vec2Q(3, 1)


def test_aiii_m6_half_sum():
    d = aiii_datum(6)
    assert d.root_sum().scale(Fraction(1, 2)) == Vec2Q(5, 3)


def test_aiii_rejects_small_m():
    with pytest.raises(DatumError):
        aiii_datum(3)


def test_generic_fields():
    d = aiii_datum(9)
    assert set(d.cone_generators) == {Vec2Q(1, -1), Vec2Q(0, 1)}
    assert {tuple(n) for n in d.chamber_normals} == {(0, 1), (1, -1)}
    assert {e.name: e.coeffs for e in d.divisors} == {"Y1": (-1, 0), "Y2": (-1, -1)}
    assert d.fano


def test_blowup_flags():
    assert not aiii_blowup_datum(4).fano
    d = aiii_blowup_datum(5)
    assert d.fano
    assert [e.name for e in d.divisors] == ["Y1", "Y2", "E"]
    assert d.divisors[-1].coeffs == (-2, -1)


@pytest.mark.parametrize("m", range(4, 201))
def test_root_sum_is_twice_two_rho(m):
    d = aiii_datum(m)
    assert d.root_sum() == d.two_rho.scale(2)
    assert d.total_multiplicity() == (6 if m == 4 else 4 * m - 10)


def test_weyl_group_matches_brute_force():
    G = restricted_weyl_group(aiii_datum(5))
    assert len(G) == 8
    assert {(g.a, g.b, g.c, g.d) for g in G} == signed_permutations()
    assert IntMatrix2.identity() in G


def test_weyl_group_rotation():
    G = restricted_weyl_group(aiii_datum(5))
    swap, flip = IntMatrix2(0, 1, 1, 0), IntMatrix2(1, 0, 0, -1)
    rot = flip @ swap
    assert rot == IntMatrix2(0, 1, -1, 0)
    assert rot @ Vec2Q(3, 7) == Vec2Q(7, -3)
    assert rot in G


@pytest.mark.parametrize("m", [4, 5, 11])
def test_weyl_group_closure_and_root_multiset(m):
    d = aiii_datum(m)
    G = restricted_weyl_group(d)
    group = set(G)
    for g in G:
        assert g.inverse() in group
        for h in G:
            assert g @ h in group
    full = {}
    for r in d.positive_roots:
        full[tuple(r.vec)] = r.mult
        full[tuple(-r.vec)] = r.mult
    for g in G:
        assert {tuple(g @ Vec2Q(*v)): k for v, k in full.items()} == full


def test_weyl_group_unsupported():
    doc = dump_datum(aiii_datum(5))
    doc["cone_generators"] = [[1, 0], [0, 1]]
    doc["positive_roots"] = [{"vec": [1, 0], "mult": 1}, {"vec": [0, 1], "mult": 1}]
    doc["chamber_normals"] = [[1, 0], [0, 1]]
    del doc["two_rho"]
    d = load_datum(doc)
    with pytest.raises(DatumError, match="unsupported"):
        restricted_weyl_group(d)


@pytest.mark.parametrize("m", [4, 5, 6, 30])
def test_chamber_normals_nonnegative_on_two_rho(m):
    d = aiii_datum(m)
    assert all(n.dot(d.two_rho) >= 0 for n in d.chamber_normals)


def test_round_trip():
    for d in (aiii_datum(5), aiii_blowup_datum(7), aiii_blowup_datum(4)):
        doc = json.loads(json.dumps(dump_datum(d)))
        assert load_datum(doc) == d


def test_wrong_two_rho():
    doc = dump_datum(aiii_datum(5))
    doc["two_rho"] = ["4", "3"]
    with pytest.raises(DatumError) as exc:
        load_datum(doc)
    assert exc.value.where == "two_rho_half_root_sum"


def test_two_rho_computed_when_missing():
    doc = dump_datum(aiii_datum(6))
    del doc["two_rho"]
    assert load_datum(doc).two_rho == Vec2Q(5, 3)


@pytest.mark.parametrize(
    "mutate, where",
    [
        (lambda d: d.pop("divisors"), "divisors"),
        (lambda d: d["positive_roots"][2].update(mult=0), "positive_roots[2].mult"),
        (lambda d: d.update(two_rho=[4.0, 2.0]), "two_rho"),
        (lambda d: d.update(extra=1), "$"),
        (lambda d: d["divisors"][0].update(coeffs=["0", "0"]), "divisors[0].coeffs"),
        (lambda d: d.update(cone_generators=[[1, -1]]), "cone_generators"),
        (lambda d: d.update(fano="yes"), "fano"),
    ],
)
def test_schema_errors_name_the_field(mutate, where):
    doc = dump_datum(aiii_datum(5))
    mutate(doc)
    with pytest.raises(DatumError) as exc:
        load_datum(doc)
    assert exc.value.where == where


def test_roots_outside_cone_rejected():
    doc = dump_datum(aiii_datum(5))
    doc["positive_roots"].append({"vec": [-1, 0], "mult": 1})
    del doc["two_rho"]
    with pytest.raises(DatumError) as exc:
        load_datum(doc)
    assert exc.value.where == "roots_in_cone"


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(-5, 5))
def test_random_generators_rejected_or_valid(gen, mult):
    doc = dump_datum(aiii_datum(5))
    doc["positive_roots"][0] = {"vec": gen, "mult": mult}
    del doc["two_rho"]
    try:
        d = load_datum(doc)
    except DatumError:
        return
    assert d.root_sum() == d.two_rho.scale(2)
    assert mult >= 1 and gen != [0, 0]
