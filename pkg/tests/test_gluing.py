import json

import pytest

from psl2gen.errors import DomainError
from psl2gen.fpgroups import gluing, s4
from psl2gen.fpgroups.coxeter import AFFINE_A3, CoxeterMatrix
from psl2gen.fpgroups.todd_coxeter import todd_coxeter


def test_all_equal_gluing_is_s3():
    rs = s4.rs_relators(s4.STANDARD_TRIPLE)
    pres = gluing.gluing_presentation(1, [rs] * 4)
    for strategy in ("hlt", "felsch"):
        assert todd_coxeter(pres, strategy=strategy).index == 6
    hand = s4.standard_rs().relators
    assert todd_coxeter(gluing.gluing_presentation(1, [hand] * 4)).index == 6


def test_arity_and_case_errors():
    rs = s4.rs_relators(s4.STANDARD_TRIPLE)
    with pytest.raises(DomainError):
        gluing.gluing_presentation(2, [rs] * 4)
    with pytest.raises(DomainError):
        gluing.gluing_presentation(4, [rs] * 4)


def test_slots_rename_generators():
    x = s4.standard_rs().relators
    pres = gluing.gluing_presentation(3, [x, x], gluing.case3_extra())
    used = {g for w in pres.relators for g, _ in w}
    assert used == {0, 1, 2, 3}
    assert pres.generator_count == 4


def test_case2_filter():
    assert gluing.case2_allowed((2, 3, 4))
    assert not gluing.case2_allowed((3, 3, 2))
    assert not gluing.case2_allowed((4, 2, 4))
    assert gluing.case2_allowed((2, 2, 2))


def test_sweep_sizes():
    reps = gluing.orbit_representatives()
    assert len(reps) == 13
    assert len(gluing.sweep_combos(1, reps)) == 13**4
    assert len(gluing.sweep_combos(3, reps)) == 13**2
    assert len(gluing.sweep_combos(2, reps)) == 729


def test_resume(tmp_path):
    path = tmp_path / "sweep.jsonl"
    first = gluing.run_sweep(3, path, caps=(2000,), limit=5)
    assert len(path.read_text().splitlines()) == 5
    again = gluing.run_sweep(3, path, caps=(2000,), limit=8)
    assert len(path.read_text().splitlines()) == 8
    assert [r.to_json() for r in again[:5]] == [r.to_json() for r in first]
    rec = gluing.SweepRecord.from_json(json.loads(path.read_text().splitlines()[0]))
    assert rec.case == 3


def test_summary_and_affine_check():
    recs = [
        gluing.SweepRecord(1, (0,), True, 24, None, 10),
        gluing.SweepRecord(1, (1,), False, None, AFFINE_A3.to_list(), 10),
    ]
    s = gluing.summarize(1, recs)
    assert (s.total, s.finite, s.overflow, s.max_order) == (2, 1, 1, 24)
    assert gluing.is_affine_a3(s.coxeter_patterns[0])
    assert not gluing.is_affine_a3(None)
    assert not gluing.is_affine_a3(AFFINE_A3.relabel([0, 2, 1, 3]).to_list())
    assert CoxeterMatrix.from_array(AFFINE_A3.to_list()) == AFFINE_A3
