import json
from fractions import Fraction
import hashlib

import pytest
from hypothesis import given, strategies as st

from freyhyper.elimination import (CACHE_ENV, CoefficientField, DeligneBoundError, EndpointError,
                                   NewformSchemaError, check_deligne, compositum_norm, eliminate,
                                   ingest_newforms, ingest_space, level_from_json, level_str,
                                   level_to_json, load_records, rational_form, record_from_json,
                                   residue_curves, synthetic_form, trace_bound_T, write_records)
from freyhyper.frey import MINUS, FreyTriple, frey_model
from freyhyper.frobenius import FrobeniusTrace, trace_at_prime
from freyhyper.numfield import Q2, Q5, QuadElement, factor_rational_prime, prime_above
from freyhyper.poly import Poly
from freyhyper.selmer import selmer_group

from oracles import hand_T_rational

GOOD = {"label": "g", "level": [[31, 1, 1, 1, 1]], "field_poly": [0, 1],
        "eigs": {"9.1": [2], "11.1": ["-3"]}}


def test_level_json_roundtrip():
    lev = {Q2.label: 1, Q5.label: 3, "11.2": 1}
    assert level_from_json(level_to_json(lev)) == lev
    assert level_str({}) == "(1)"
    assert level_str({Q5.label: 3}) == "(5.1)^3"


@pytest.mark.parametrize("mutate,msg", [
    (lambda o: o.pop("eigs"), "missing field 'eigs'"),
    (lambda o: o.update(level=[[3, 1, 1, 1]]), "not a prime of K"),
    (lambda o: o.update(level=[[11, 1, 1, 1, 3]]), "no prime 3"),
    (lambda o: o.update(field_poly="x"), "field_poly"),
    (lambda o: o.update(eigs={"9.1": [1.5]}), "exact rational"),
    (lambda o: o.update(eigs={"9.1": [1, 2]}), "at most 1"),
    (lambda o: o.update(eigs={"zz": [1]}), "bad prime label"),
    (lambda o: o.update(cm="yes"), "'cm'"),
    (lambda o: o.update(weight=4), "weight"),
])
def test_schema_errors_name_the_field(mutate, msg):
    obj = json.loads(json.dumps(GOOD))
    mutate(obj)
    with pytest.raises(NewformSchemaError, match=msg):
        record_from_json(obj)


def test_record_roundtrip(tmp_path):
    rec = record_from_json(GOOD)
    assert rec.level == {"31.1": 1} and rec.eigs["11.1"] == (Fraction(-3),)
    path = tmp_path / "forms.jsonl"
    write_records([rec], path)
    assert load_records(path) == [rec]
    assert ingest_newforms(path, {"31.1": 1}) == [rec]
    assert ingest_newforms(path, {}) == []


def test_deligne_bound():
    check_deligne(record_from_json(GOOD))
    bad = dict(GOOD, eigs={"9.1": [7]})          # |7| > 2 sqrt 9
    with pytest.raises(DeligneBoundError):
        check_deligne(record_from_json(bad))
    # over K, the conjugate embedding can break the bound alone
    with pytest.raises(DeligneBoundError):
        check_deligne(record_from_json(dict(GOOD, field_poly=[-1, -1, 1], eigs={"9.1": [0, 4]})))


def test_bad_lines_report_line_number(tmp_path):
    path = tmp_path / "x.jsonl"
    path.write_text("# comment\n" + json.dumps(GOOD) + "\n{oops\n")
    with pytest.raises(NewformSchemaError, match="line 3"):
        load_records(path)


def test_bundled_spaces_are_empty():
    for lev in ({}, {Q5.label: 1}):
        sp = ingest_space("bundled", lev)
        assert sp.asserted_empty and sp.dimension == 0 and len(sp.source_hash) == 64
    assert ingest_space("bundled", {Q2.label: 1}).dimension is None


def test_missing_source_is_endpoint_error(tmp_path):
    with pytest.raises(EndpointError):
        ingest_space(tmp_path / "absent.jsonl")


def test_url_source_reads_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    url = "https://example.invalid/forms.jsonl"
    key = hashlib.sha256(url.encode()).hexdigest()
    (tmp_path / f"{key}.jsonl").write_text(json.dumps(GOOD) + "\n")
    assert [r.label for r in ingest_newforms(url, {"31.1": 1})] == ["g"]


def test_dimension_conflict(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_text('{"space": true, "level": [], "dimension": 0}\n'
                    '{"space": true, "level": [], "dimension": 1}\n')
    with pytest.raises(NewformSchemaError, match="conflicting"):
        ingest_space(path, {})


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_compositum_norm_rational_and_conjugate(a, x, y, b):
    orbit = FrobeniusTrace(QuadElement(x, y), QuadElement(x, y).conjugate())
    # rational a_g: the K-norm squared, since sqrt5 is not in Q
    Fq = CoefficientField([0, 1])
    G = a * a - orbit.trace * a + orbit.norm
    assert compositum_norm(Poly([Fraction(a)]), orbit, Fq) == G * G
    # over K the value does not depend on which conjugate is called a_g
    FK = CoefficientField([-1, -1, 1])
    g = QuadElement(a, b)
    n1 = compositum_norm(FK.element((g.x, g.y)), orbit, FK)
    gc = g.conjugate()
    assert n1 == compositum_norm(FK.element((gc.x, gc.y)), orbit, FK)


def test_residue_curves_cover_all_pairs():
    curves = residue_curves(3, 2, MINUS)
    # u, v in F_9^x restricted to F_3 values; all fifth roots of u + v, w = 0 included
    assert {(rc.u, rc.v) for rc in curves} == {(u, v) for u in (1, 2) for v in (1, 2)}
    assert any(rc.w == 0 for rc in curves)


@pytest.mark.parametrize("case,sign,want", [("II", "minus", -371504185344),
                                            ("I", "plus", -56623104)])
def test_T_matches_hand_computation(case, sign, want):
    g = rational_form("r", {}, {"9.1": 2})
    T = trace_bound_T(g, prime_above(3), case)
    assert T.value == hand_T_rational(2, 3, sign) == want


def test_cm_form_is_unbounded():
    cur = frey_model(FreyTriple(1, -1, 0, 7), MINUS)
    traces = {P.label: trace_at_prime(cur, P)
              for q in (3, 7, 11) for P in factor_rational_prime(q)}
    g = synthetic_form("cm", {Q2.label: 1, Q5.label: 3}, traces, cm=True)
    rep = eliminate("II", [3, 7, 11], [g])
    assert len(rep.results) == len(selmer_group([Q2]))
    trivial = next(r for r in rep.results if r.chi0 == "1")
    assert trivial.gcd == 0 and "CM obstruction" in trivial.verdict()
    assert rep.survivors is None
    assert rep.lines()[-2] == "  survivors: unbounded"


def test_rational_form_survivors():
    g = rational_form("r", {}, {"9.1": 2, "49.1": 0, "11.1": 4, "11.2": -4})
    rep = eliminate("I", [3, 7, 11], [g])
    (res,) = rep.results
    assert res.bounded and set(res.survivors) <= {2, 3, 5, 7, 11}
    assert rep.survivors == frozenset(res.survivors)


def test_case_one_vacuous_with_bundled_spaces():
    spaces = [ingest_space("bundled", lev) for lev in ({}, {Q5.label: 1})]
    rep = eliminate("I", [3], [], spaces)
    assert rep.vacuous and rep.survivors == frozenset() and rep.all_bounded
    rep = eliminate("I", [3], [], [])
    assert not rep.vacuous and rep.survivors is None
    assert eliminate("II", [3], []).survivors is None


def test_eliminate_rejects_bad_aux():
    with pytest.raises(ValueError):
        eliminate("I", [], [])
    with pytest.raises(ValueError):
        eliminate("I", [5], [])
