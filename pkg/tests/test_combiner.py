import json
from fractions import Fraction

import pytest

from tpdilog.combiner import ReportCombiner, render_html, render_markdown
from tpdilog.identities import IdentityReport, exact_check, exact_result


def make_report(seed=0, broken=False, elapsed=None):
    results = [exact_check("alpha", True), exact_result("beta", Fraction(1, 3) if broken else 0)]
    return IdentityReport(n=4, trials=1, seed=seed, precision_bits=128, results=tuple(results), elapsed=elapsed)


def test_markdown_lists_failures_first():
    text = render_markdown(make_report(broken=True))
    assert text.startswith("# Identity Report - n=4")
    assert "**Status: FAIL** (1/2 identities hold)" in text
    assert "## Failing identities" in text
    assert "- `beta`: residual 1/3 > 0" in text
    table = text[text.index("| Identity |"):]
    assert table.index("beta") < table.index("alpha")
    assert "Elapsed" not in text


def test_markdown_for_passing_report():
    text = render_markdown(make_report(elapsed=2.5), title="Nightly")
    assert text.startswith("# Nightly")
    assert "**Status: PASS**" in text
    assert "Failing identities" not in text
    assert "Elapsed: 2.500s" in text


def test_html_renders_table():
    html = render_html(render_markdown(make_report()), "Digest")
    assert "<title>Digest</title>" in html
    assert "<table>" in html
    assert "<h1>" in html


def test_combine_files(tmp_path):
    combiner = ReportCombiner(tmp_path / "reports")
    paths = []
    for seed, broken in ((2, False), (1, True)):
        path = tmp_path / f"r{seed}.json"
        combiner.write_json(make_report(seed, broken), path)
        paths.append(path)
    merged = combiner.combine(paths)
    assert merged.trials == 2
    assert merged.seed == 1
    assert not merged.passed
    assert [r.name for r in merged.failures] == ["beta"]

    markdown_path = combiner.write_markdown(merged)
    html_path = combiner.write_html(merged)
    assert markdown_path.endswith("report-n4.md")
    assert (tmp_path / "reports" / "report-n4.html").exists()
    assert html_path.endswith("report-n4.html")


def test_write_json_returns_canonical_text(tmp_path):
    combiner = ReportCombiner(tmp_path)
    text = combiner.write_json(make_report(), None)
    assert text.endswith("\n")
    assert list(json.loads(text)) == sorted(json.loads(text))
    assert not list(tmp_path.iterdir())


def test_combine_errors(tmp_path):
    combiner = ReportCombiner(tmp_path)
    with pytest.raises(ValueError):
        combiner.combine([])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 4}))
    with pytest.raises(ValueError):
        combiner.combine([bad])
