"""
Report combiner - Merges verification reports and renders a digest.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Union

import markdown

from .identities import IdentityReport, IdentityResult, merge_reports
from .utils.jsonio import read_document, write_document

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

HTML_TEMPLATE = """
<html>
<head>
    <meta charset="utf-8">
    <title>{title}</title>
    <style>
        body {{ font-family: -apple-system, BlinkMacSystemFont, "Segoe UI", Roboto, Helvetica, Arial, sans-serif; line-height: 1.6; color: #333; max-width: 900px; margin: 0 auto; padding: 20px; }}
        h1 {{ color: #1a1a1a; border-bottom: 2px solid #eee; padding-bottom: 10px; }}
        h2 {{ color: #2c3e50; margin-top: 30px; border-bottom: 1px solid #eee; }}
        table {{ border-collapse: collapse; width: 100%; }}
        th, td {{ border: 1px solid #eee; padding: 4px 8px; text-align: left; }}
        th {{ background-color: #f8f8f8; }}
        code {{ background-color: #f8f8f8; padding: 2px 4px; border-radius: 4px; font-family: monospace; }}
        hr {{ border: 0; border-top: 1px solid #eee; margin: 30px 0; }}
    </style>
</head>
<body>
    {body}
</body>
</html>
"""


def render_markdown(report: IdentityReport, title: Optional[str] = None) -> str:
    """Digest of one report: header, summary, failures first, then the full table."""
    title = title or f"Identity Report - n={report.n}"
    failures = report.failures
    lines = []

    # Header
    lines.append(f"# {title}")
    lines.append("")
    lines.append(f"*{report.trials} trial(s), seed {report.seed}, {report.precision_bits}-bit precision*")
    lines.append("")
    status = "PASS" if report.passed else "FAIL"
    lines.append(f"**Status: {status}** ({len(report.results) - len(failures)}/{len(report.results)} identities hold)")
    lines.append("")
    if report.elapsed is not None:
        lines.append(f"Elapsed: {report.elapsed:.3f}s")
        lines.append("")

    if failures:
        lines.append("## Failing identities")
        lines.append("")
        for result in failures:
            document = result.to_document()
            lines.append(f"- `{result.name}`: residual {document['max_residual']} > {document['tolerance']}")
        lines.append("")
        lines.append("---")
        lines.append("")

    lines.append("## All identities")
    lines.append("")
    lines.append("| Identity | Max residual | Tolerance | Kind | Result |")
    lines.append("|---|---|---|---|---|")
    for result in _failures_first(report.results):
        document = result.to_document()
        kind = "exact" if result.exact else "numeric"
        verdict = "pass" if result.passed else "**FAIL**"
        lines.append(f"| {result.name} | {document['max_residual']} | {document['tolerance']} | {kind} | {verdict} |")
    lines.append("")
    lines.append("---")
    lines.append("")
    lines.append(f"*End of report for n={report.n}*")
    return "\n".join(lines) + "\n"


def render_html(markdown_text: str, title: str = "Identity Report") -> str:
    html_content = markdown.markdown(markdown_text, extensions=["tables"])
    return HTML_TEMPLATE.format(title=title, body=html_content)


def _failures_first(results: Iterable[IdentityResult]) -> List[IdentityResult]:
    return sorted(results, key=lambda r: (r.passed, r.name))


class ReportCombiner:
    """Combines report files from several runs into one report and digest."""

    def __init__(self, output_dir: PathLike = "reports"):
        self.output_dir = Path(output_dir)

    def load(self, paths: Iterable[PathLike]) -> List[IdentityReport]:
        reports = []
        for path in paths:
            try:
                reports.append(IdentityReport.from_document(read_document(path)))
            except (KeyError, TypeError) as e:
                logger.error(f"Malformed report file {path}: {e}")
                raise ValueError(f"{path} is not an identity report: missing or invalid field {e}") from e
            logger.info(f"Loaded report: {path}")
        return reports

    def combine(self, paths: Iterable[PathLike]) -> IdentityReport:
        paths = list(paths)
        if not paths:
            raise ValueError("report-merge needs at least one report file")
        report = merge_reports(self.load(paths))
        logger.info(f"Merged {len(paths)} reports: {report.trials} trials, {len(report.failures)} failing identities")
        return report

    def _resolve(self, path: Optional[PathLike], default_name: str) -> Path:
        if path is not None:
            return Path(path)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / default_name

    def write_markdown(self, report: IdentityReport, path: Optional[PathLike] = None) -> str:
        """Save the markdown digest; returns the path written."""
        target = self._resolve(path, f"report-n{report.n}.md")
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(render_markdown(report), encoding="utf-8")
        logger.info(f"Markdown digest saved to: {target}")
        return str(target)

    def write_html(self, report: IdentityReport, path: Optional[PathLike] = None) -> str:
        target = self._resolve(path, f"report-n{report.n}.html")
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(render_html(render_markdown(report), f"Identity Report - n={report.n}"), encoding="utf-8")
        logger.info(f"HTML digest saved to: {target}")
        return str(target)

    def write_json(self, report: IdentityReport, path: Optional[PathLike] = None) -> str:
        """Canonical JSON of the report, also written to path unless it is None or '-'."""
        return write_document(report.to_document(with_timing=report.elapsed is not None), path)
