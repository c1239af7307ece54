import random
from dataclasses import replace
from fractions import Fraction

import pytest

from conftest import SEEDS, tiny
from tpdilog.core import jacobi_to_matrix
from tpdilog.yvars import YFamily
from tpdilog.identities import (
    dilog_sum,
    S3_ELEMENTS,
    S3_WORDS,
    IdentityReport,
    S3Word,
    exact_check,
    exact_result,
    merge_reports,
    numeric_result,
    tetrahedron_size,
    verify_b_version,
    verify_chain,
    verify_function,
    verify_s3_form,
    verify_script_l,
    verify_sum_constant,
)
from tpdilog.utils.sampling import coords_with_zero_delta, random_b_matrix, random_coords


@pytest.mark.parametrize("n, expected", [(3, 1), (4, 4), (5, 10), (6, 20), (7, 35)])
def test_tetrahedron_size(n, expected):
    assert tetrahedron_size(n) == expected


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_sum_constant(engine, seed, n):
    M = jacobi_to_matrix(random_coords(n, random.Random(seed)))
    report = verify_sum_constant(M, engine, seed=seed)
    assert report.passed, report.failures


@pytest.mark.parametrize("family", list(YFamily))
def test_dilog_sum_pairs_with_inverse(engine, family):
    M = jacobi_to_matrix(random_coords(5, random.Random(8)))
    total = dilog_sum(M, family, engine=engine) + dilog_sum(M, family, invert=True, engine=engine)
    assert tiny(total - tetrahedron_size(5))


@pytest.mark.parametrize("seed", SEEDS)
def test_chain(engine, seed):
    M = jacobi_to_matrix(random_coords(5, random.Random(seed)))
    report = verify_chain(M, engine)
    assert report.passed
    assert len(report.results) == 5


def test_corrupted_chain_fails(engine, matrix4):
    report = verify_chain(matrix4, engine, corrupt=True)
    assert not report.passed
    assert {r.name for r in report.failures} >= {"chain Y_lower", "chain all families"}


def test_s3_form(engine, matrix4):
    assert verify_s3_form(matrix4, engine=engine).passed
    words = [S3Word.parse(w) for w in ("s1", "id", "s2s1", "s1s2s1")]
    assert verify_s3_form(matrix4, words, engine=engine).passed
    with pytest.raises(ValueError):
        verify_s3_form(matrix4, words[:2], engine=engine)


@pytest.mark.parametrize("seed", SEEDS)
def test_b_version(engine, seed):
    G = random_b_matrix(4, random.Random(seed))
    assert verify_b_version(G, engine).passed


@pytest.mark.parametrize("seed", SEEDS)
def test_script_l_identities(engine, seed):
    G = random_b_matrix(4, random.Random(seed))
    assert verify_script_l(G, engine).passed
    degenerate = jacobi_to_matrix(coords_with_zero_delta(random.Random(seed)))
    report = verify_script_l(degenerate, engine)
    assert report.passed
    assert "script-L degenerate value 2" in {r.name for r in report.results}


def test_function_identities(engine):
    results = verify_function(Fraction(1, 3), Fraction(5, 2), 7, engine)
    assert [r.name for r in results] == ["F symmetry", "F closed form", "pentagon", "inversion"]
    assert all(r.passed for r in results)


def test_s3_word_parsing():
    assert S3Word.parse("s2s1") == S3Word((2, 1))
    assert S3Word.parse("σ1σ2") == S3Word((1, 2))
    assert S3Word.parse("id") == S3Word(())
    assert str(S3Word((1, 2, 1))) == "s1s2s1"
    for bad in ("s1s1", "x1", "s3", "s1s"):
        with pytest.raises(ValueError):
            S3Word.parse(bad)


def test_s3_group_structure():
    s1, s2 = S3Word((1,)), S3Word((2,))
    assert s1 * s1 == S3Word(())
    assert s1 * s2 * s1 == s2 * s1 * s2
    assert S3Word((2, 1, 2)) * S3Word(()) == S3Word((1, 2, 1))
    assert len({w.permutation for w in S3_ELEMENTS}) == 6
    assert len(S3_WORDS) == 7
    assert [w.sign for w in S3_ELEMENTS] == [1, -1, -1, 1, 1, -1]


def _report(n=4, seed=0, results=()):
    return IdentityReport(n=n, trials=1, seed=seed, precision_bits=128, results=tuple(results))


def test_merge_takes_worst_residual():
    a = _report(seed=3, results=[exact_check("b", True), exact_result("a", Fraction(1, 4))])
    b = _report(seed=1, results=[exact_result("a", Fraction(1, 2)), exact_check("c", True)])
    merged = merge_reports([a, b])
    assert merged.trials == 2
    assert merged.seed == 1
    assert [r.name for r in merged.results] == ["a", "b", "c"]
    assert merged.results[0].max_residual == Fraction(1, 2)
    assert not merged.passed
    assert merge_reports([b, a]).to_document() == merged.to_document()


def test_merge_errors():
    with pytest.raises(ValueError):
        merge_reports([])
    with pytest.raises(ValueError):
        merge_reports([_report(n=4), _report(n=5)])


def test_report_document(engine):
    report = _report(results=[
        exact_check("exact one", True),
        numeric_result("numeric one", engine.to_bigfloat(Fraction(1, 2 ** 90)), engine.default_tolerance()),
    ])
    document = report.to_document()
    assert document["pass"] is True
    assert "elapsed_seconds" not in document
    assert document["identities"][0]["max_residual"] == "0"
    assert IdentityReport.from_document(document).to_document() == document
    timed = replace(report, elapsed=1.23456)
    assert timed.to_document(with_timing=True)["elapsed_seconds"] == 1.235
