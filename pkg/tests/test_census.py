import json
import math

import pytest

from hecke.census import (
    CoeffGrid,
    Integers,
    ScanSpec,
    SearchConstraints,
    UnitGrid,
    candidate_classes,
    enumerate_sequences,
    height,
    height_enclosure,
    height_trajectory,
    power_of_two_constraints,
    read_period_list,
    read_period_table,
    run_census,
    search_periodic,
    spot_check_table,
)
from hecke.expr import parse_element
from hecke.field import build_field_context, in_lambda_Q_lambda2
from hecke.rosen import CUSP, Status, validate_period
from hecke.words import canonical_cycle, symmetry_class

C7 = build_field_context(7)


def test_height_examples():
    assert height(C7.one, C7.zero) == 1
    assert height(C7.zero, C7.one) == 1
    lo, hi = height_enclosure(C7.lam, C7.one)
    assert hi - lo < 1e-6
    expected = math.prod(1 + abs(C7.root_float(j)) for j in range(3))
    assert float(lo) == pytest.approx(expected, abs=1e-9)
    assert height(C7.lam, C7.one) == pytest.approx(9.098, abs=1e-3)
    with pytest.raises(ValueError):
        height(C7.zero, C7.zero)


def test_height_is_projective():
    x, y = C7.element([1, 2, 3]), C7.element([-4, 0, 1])
    assert height(x, y) == pytest.approx(height(x * 6, y * 6))
    assert height(x / 7, y / 7) == pytest.approx(height(x, y))


def test_trajectory_of_lambda():
    tr = height_trajectory(C7.lam, 10)
    assert tr.status is Status.FINITE and tr.digits == (1,)
    assert tr.steps[-1] == (1, 0.0)
    assert all(math.isfinite(h) for _, h in tr.steps)


def test_trajectory_budget():
    tr = height_trajectory(build_field_context(11)(2), 40)
    assert tr.status is Status.UNDETERMINED and len(tr.steps) == 41


def test_census_first_exceptional_integer():
    report = run_census(ScanSpec(7, Integers(1, 670)))
    assert report.total == 670 and report.count(CUSP) == 670
    report = run_census(ScanSpec(7, Integers(660, 680)))
    (row,) = report.non_cusp_rows()
    assert row.representative == 671 and row.label.special


def test_census_q9_counts_sum():
    report = run_census(ScanSpec(9, Integers(1, 100)))
    assert sum(r.count for r in report.rows.values()) + report.undetermined == 100
    classes = {l.symmetry_label for l in report.rows if l.kind == "hyperbolic"}
    target = symmetry_class((3, -4, 1, 1))
    assert target in classes
    point = run_census(ScanSpec(9, Integers(1, 1), premultiplier="2*l + 2"))
    assert [r.label.symmetry_label for r in point.non_cusp_rows()] == [target]


def test_unit_grid_and_premultiplier():
    spec = ScanSpec(7, UnitGrid(("l", "lp"), -2, 2), premultiplier="l")
    assert spec.size() == 25
    pts = dict(spec.points())
    assert pts[0] == C7.lam * C7.lam ** -2 * (2 - C7.lam ** 2) ** -2
    report = run_census(spec, max_steps=2000)
    assert report.total == 25


def test_coefficient_grid_negation_symmetry():
    spec = ScanSpec(7, CoeffGrid(("1", "l", "l^2"), -3, 3))
    report = run_census(spec, max_steps=5000)
    assert report.total == 343 and report.undetermined == 0
    counts = {l.cycle: r.count for l, r in report.rows.items() if l.kind == "hyperbolic"}
    assert counts
    for cycle, n in counts.items():
        assert counts.get(canonical_cycle(tuple(-a for a in cycle))) == n


def test_scan_validation():
    with pytest.raises(ValueError):
        ScanSpec(7, Integers(5, 1))
    with pytest.raises(Exception):
        ScanSpec(7, UnitGrid(("nope",), 0, 1))
    with pytest.raises(ValueError):
        ScanSpec(7, Integers(1, 2), premultiplier="l - l")


def test_spec_json_round_trip():
    spec = ScanSpec(18, CoeffGrid(("l^3", "l^5"), -3, 3), "l")
    assert ScanSpec.from_json(json.loads(json.dumps(spec.to_json()))) == spec


def test_workers_do_not_change_report():
    spec = ScanSpec(7, Integers(600, 760))
    assert run_census(spec).to_json() == run_census(spec, workers=2, block=40).to_json()


def test_merge_is_associative():
    a = run_census(ScanSpec(7, Integers(660, 670)))
    b = run_census(ScanSpec(7, Integers(671, 680)))
    c = run_census(ScanSpec(7, Integers(681, 700)))
    assert a.merge(b).merge(c).to_json() == a.merge(b.merge(c)).to_json()


def test_checkpoint_resume(tmp_path):
    spec = ScanSpec(7, Integers(650, 720))
    path = str(tmp_path / "ck.json")

    class Stop(Exception):
        pass

    def interrupt(done, total):
        if done < total:
            raise Stop

    with pytest.raises(Stop):
        run_census(spec, checkpoint=path, block=20, progress=interrupt)
    with open(path) as fh:
        assert json.load(fh)["next_index"] == 20
    resumed = run_census(spec, checkpoint=path, block=20)
    assert resumed.to_json() == run_census(spec).to_json()
    with pytest.raises(ValueError):
        run_census(ScanSpec(7, Integers(1, 5)), checkpoint=path)


def test_sequence_enumeration():
    seqs = list(enumerate_sequences(4, power_of_two_constraints(4)))
    assert len(seqs) == len(set(seqs))
    assert all(math.prod(s) == 16 and sum(a < 0 for a in s) == 2 for s in seqs)
    assert (2, 2, -2, -2) in seqs
    assert list(enumerate_sequences(4, SearchConstraints(True, True, -16))) == []
    generic = SearchConstraints(balanced_signs=True, digits=(-2, -1, 1, 2))
    assert all(generic.admits(s) for s in enumerate_sequences(2, generic))


def test_search_length_four():
    results = search_periodic(18, 4)
    expected = [symmetry_class(p) for p in read_period_list() if len(p) == 4]
    assert [r.symmetry_class for r in results] == sorted(expected)
    ctx = build_field_context(18)
    for r in results:
        assert validate_period(r.period, ctx)
        assert in_lambda_Q_lambda2(r.fixed_point)


def test_search_wrong_product_is_empty():
    assert search_periodic(18, 4, SearchConstraints(True, True, -16)) == []


def test_search_is_independent_of_workers():
    one = [r.to_json() for r in search_periodic(18, 4)]
    two = [r.to_json() for r in search_periodic(18, 4, workers=2)]
    assert json.dumps(one) == json.dumps(two)
    assert len(candidate_classes(4, power_of_two_constraints(4))) == 17


@pytest.mark.parametrize("q, expr, period", [
    (7, "37/7*l^2 + 29/7*l - 13/7", (13, 1, 2, -13, -2, -1)),
    (14, "l^3 - 3*l", (1, 1, -1, -1)),
    (16, "l^3 - 3*l", (1, 2, 1, 2, -1, -2, -1, -2)),
])
def test_spot_checks(q, expr, period):
    ctx = build_field_context(q)
    assert spot_check_table(q, parse_element(expr, ctx), period)
    assert not spot_check_table(q, parse_element(expr, ctx), (1, 2, 3, -4))


def test_bundled_tables():
    rows = read_period_table()
    assert len(rows) == 20
    assert {r.q for r in rows} == {7, 9, 14, 16, 20, 24, 30}
    assert max(len(r.period) for r in rows) == 134
    assert len(read_period_list()) == 32
