from fractions import Fraction

import pytest

from kstab.dh_measure import barycenter, dh_density
from kstab.errors import BoundaryError, GeometryError, InapplicableError, UnboundedError
from kstab.geometry import hull, membership
from kstab.linalg import Vec2Q
from kstab.root_datum import aiii_blowup_datum, aiii_datum
from kstab.stability import (
    Family,
    Outcome,
    Verdict,
    blowup_polytope,
    evaluate,
    greatest_ricci_lower_bound,
    kstability_verdict,
    polytope_from_datum,
    sweep,
    wonderful_polytope,
)

F = Fraction
Q6 = Vec2Q(F(-327603995647340905, 127205190161460224), F(1472450707100482921, 127205190161460224))
# exit point of the ray from the barycenter through (5, 3) on x + y = 9
R6 = F(43946440434306005, 44940230982442413)


def V(*pts):
    return tuple(Vec2Q(*p) for p in pts)


@pytest.mark.parametrize(
    "m, verts",
    [
        (5, [(0, 0), (5, 0), (5, 2), (F(7, 2), F(7, 2))]),
        (6, [(0, 0), (6, 0), (6, 3), (F(9, 2), F(9, 2))]),
        (4, [(0, 0), (4, 0), (4, 1), (F(5, 2), F(5, 2))]),
    ],
)
def test_wonderful_polytope(m, verts):
    assert wonderful_polytope(m).vertices == V(*verts)


@pytest.mark.parametrize(
    "m, verts",
    [
        (5, [(0, 0), (5, 0), (5, 1), (4, 3), (F(7, 2), F(7, 2))]),
        (6, [(0, 0), (6, 0), (6, 2), (5, 4), (F(9, 2), F(9, 2))]),
    ],
)
def test_blowup_polytope(m, verts):
    assert blowup_polytope(m).vertices == V(*verts)


def test_blowup_m4_inapplicable():
    with pytest.raises(InapplicableError, match="Calabi–Yau"):
        blowup_polytope(4)


def test_wonderful_rejects_small_m():
    with pytest.raises(ValueError):
        wonderful_polytope(3)


@pytest.mark.parametrize("m", range(4, 201))
def test_double_construction(m):
    # each constructor asserts vertex/half-plane equality internally
    assert wonderful_polytope(m) == polytope_from_datum(aiii_datum(m))
    if m >= 5:
        assert blowup_polytope(m) == polytope_from_datum(aiii_blowup_datum(m))


def test_polytope_from_datum_examples():
    assert polytope_from_datum(aiii_datum(5)) == wonderful_polytope(5)
    assert polytope_from_datum(aiii_blowup_datum(6)) == blowup_polytope(6)
    with pytest.raises(UnboundedError):
        polytope_from_datum(aiii_datum(5).with_divisors(()))


def test_verdict_m5_stable():
    v = kstability_verdict(aiii_datum(5), wonderful_polytope(5))
    assert v.outcome is Outcome.K_STABLE
    assert all(s > 0 for s in v.slacks)
    assert v.mass == F(391880669, 360)


def test_verdict_blowup6_unstable():
    d = aiii_blowup_datum(6)
    v = kstability_verdict(d, blowup_polytope(6))
    assert v.outcome is Outcome.K_UNSTABLE
    x, y = v.barycenter
    assert v.slacks == (x - 5, x + y - 8)
    assert v.slacks[1] < 0 < v.slacks[0]


def test_verdict_boundary():
    # the density is homogeneous, so scaling the polygon scales the barycenter
    d = aiii_datum(5)
    P = wonderful_polytope(5)
    bx, by = barycenter(dh_density(d), P)
    lam = F(6) / (bx + by)
    scaled = hull([(lam * v.x, lam * v.y) for v in P.vertices])
    v = kstability_verdict(d, scaled)
    assert v.outcome is Outcome.BOUNDARY
    assert min(v.slacks) == 0
    with pytest.raises(BoundaryError):
        greatest_ricci_lower_bound(d, scaled, v)


def test_verdict_inapplicable():
    d = aiii_blowup_datum(4)
    P = polytope_from_datum(d)
    v = kstability_verdict(d, P)
    assert v.outcome is Outcome.INAPPLICABLE and v.slacks is None
    with pytest.raises(InapplicableError):
        greatest_ricci_lower_bound(d, P)


def test_verdict_zero_mass():
    with pytest.raises(GeometryError):
        kstability_verdict(aiii_datum(5), hull([(0, 0), (1, 0)]))


def test_verdict_from_slacks_rules():
    b = Vec2Q(0, 0)
    assert Verdict.from_slacks(b, (F(1), F(2))).outcome is Outcome.K_STABLE
    assert Verdict.from_slacks(b, (F(-1), F(0))).outcome is Outcome.K_UNSTABLE
    assert Verdict.from_slacks(b, (F(0), F(3))).outcome is Outcome.BOUNDARY


def test_ricci_blowup6():
    res = greatest_ricci_lower_bound(aiii_blowup_datum(6), blowup_polytope(6))
    assert res.Q == Q6
    assert res.r == R6
    assert res.methods_agree
    assert res.exit_facets == 1
    assert round(float(res.r), 3) == 0.978


def test_ricci_blowup5_is_one():
    res = greatest_ricci_lower_bound(aiii_blowup_datum(5), blowup_polytope(5))
    assert res.r == 1 and res.Q is None


def test_sweep_small_ranges():
    w = sweep("wonderful", 4, 20)
    assert [r.m for r in w] == list(range(4, 21))
    assert all(r.verdict.outcome is Outcome.K_STABLE for r in w)
    b = sweep(Family.BLOWUP, 5, 20)
    assert b[0].verdict.outcome is Outcome.K_STABLE
    assert all(r.verdict.outcome is Outcome.K_UNSTABLE for r in b[1:])


def test_sweep_ricci_single():
    (rec,) = sweep("blowup", 6, 6, with_ricci=True)
    assert rec.ricci.r == R6


def test_sweep_includes_inapplicable_m4():
    rec = sweep("blowup", 4, 5)
    assert rec[0].verdict.outcome is Outcome.INAPPLICABLE
    assert "Calabi–Yau" in rec[0].verdict.note
    assert rec[1].verdict.outcome is Outcome.K_STABLE


def test_sweep_parallel_matches_serial():
    serial = sweep("blowup", 5, 12, jobs=1, with_ricci=True)
    parallel = sweep("blowup", 5, 12, jobs=2, with_ricci=True)
    assert [(r.m, r.verdict, r.ricci) for r in serial] == [(r.m, r.verdict, r.ricci) for r in parallel]


@pytest.mark.parametrize("bad", [(3, 5), (6, 5), (4.5, 6)])
def test_sweep_invalid_range(bad):
    with pytest.raises(ValueError):
        sweep("wonderful", *bad)


def test_evaluate_records():
    rec = evaluate("wonderful", 6)
    assert rec.barycenter == Vec2Q(F(421619272419, 78063549568), F(226450079005, 78063549568))


def test_slack_signs_wonderful(wonderful_sweep):
    for m, rec in wonderful_sweep.items():
        assert rec.verdict.slacks[1] > 0, m
        assert rec.verdict.outcome is Outcome.K_STABLE, m
        assert membership(rec.polytope, rec.barycenter, "strict"), m


def test_slack_signs_blowup(blowup_sweep):
    for m, rec in blowup_sweep.items():
        assert membership(rec.polytope, rec.barycenter, "strict"), m
        if m >= 6:
            assert rec.verdict.slacks[1] < 0, m
            assert rec.verdict.outcome is Outcome.K_UNSTABLE, m


def test_ricci_over_blowup_sweep(blowup_sweep):
    for m, rec in blowup_sweep.items():
        res = rec.ricci
        assert res.methods_agree, m
        if rec.verdict.outcome is Outcome.K_STABLE:
            assert res.r == 1 and res.Q is None
        else:
            assert 0 < res.r < 1, m
            assert res.exit_facets == 1, m
