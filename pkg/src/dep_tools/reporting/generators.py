"""
Report Format Generators
========================

Markdown presentation of convergence and benchmark reports.
"""

from pathlib import Path
from typing import Any, Dict, List

from dep_tools.utils.debug_logger import debug_log


class MarkdownGenerator:
    """Generates Markdown-formatted reports."""

    def generate(self, master_data: Dict[str, Any], output_path: Path) -> Path:
        """
        Generate Markdown report from master data.

        Args:
            master_data: Master report as written to ``report.json``
            output_path: Path to save markdown file

        Returns:
            Path to generated markdown file
        """
        debug_log.cli(f"Generating Markdown report: {output_path}")

        kind = master_data.get("kind")
        result = master_data.get("result", {})
        sections = [self._generate_header(master_data)]
        if kind == "convlab":
            sections += [
                self._generate_convlab_summary(result),
                self._generate_convlab_table(result.get("reports", [])),
            ]
        elif kind == "bench":
            sections += [
                self._generate_bench_table(result.get("results", [])),
            ]
        sections.append(self._generate_environment(master_data))

        content = "\n\n".join(filter(None, sections)) + "\n"
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(content, encoding='utf-8')
        return output_path

    def _generate_header(self, data: Dict[str, Any]) -> str:
        metadata = data.get("metadata", {})
        title = {
            "convlab": "Convergence Experiment",
            "bench": "Training Benchmark",
        }.get(data.get("kind", ""), "Report")
        return f"""# DEP-TOOLS {title}

**Run ID:** {metadata.get("run_id", "unknown")}
**Date:** {metadata.get("timestamp", "unknown")}
**Version:** {metadata.get("dep_tools_version", "unknown")}"""

    def _generate_convlab_summary(self, result: Dict[str, Any]) -> str:
        spec = result.get("spec", {})
        status = "✅ all worst-case bounds hold" if result.get("bounds_hold") else "❌ bound violated"
        return f"""## Summary

Synthetic corpus of **{spec.get('n_sentences', '?')}** sentences, lengths
{spec.get('min_length', '?')}..{spec.get('max_length', '?')}, target margin {spec.get('delta', '?')}.

- Measured margin: **{self._number(result.get('delta'))}**
- Radius: **{self._number(result.get('radius'))}**
- Status: {status}"""

    def _generate_convlab_table(self, reports: List[Dict[str, Any]]) -> str:
        if not reports:
            return ""
        rows = [
            "## Runs",
            "",
            "| Mode | k | Steps | Full | Partial | Updates | Worst bound | Optimal bound | Verdict |",
            "|------|---|-------|------|---------|---------|-------------|---------------|---------|",
        ]
        for report in reports:
            if not report.get("separable"):
                verdict = report.get("note", "")
            else:
                verdict = self._verdict(report.get("worst_verdict"))
                if report.get("generalized_verdict") is not None:
                    verdict += f" / partial {self._verdict(report['generalized_verdict'])}"
            rows.append(
                f"| {report['mode']} | {report['k']} | {report['steps_observed']} "
                f"| {report['full_steps']} | {report['partial_steps']} "
                f"| {report['total_updates']} | {self._number(report['bound_worst'])} "
                f"| {self._number(report['bound_optimal'])} | {verdict} |"
            )
        return "\n".join(rows)

    def _generate_bench_table(self, results: List[Dict[str, Any]]) -> str:
        if not results:
            return "## Results\n\nNo benchmark rows."
        rows = [
            "## Speed up and time per pass",
            "",
            "Time per pass is the median first pass of independent runs from zero weights,"
            " after one untimed warm-up run.",
            "",
            "| Mode | k | Speed up (time/pass) | Peak memory | Held-out UAS |",
            "|------|---|----------------------|-------------|--------------|",
        ]
        for row in results:
            uas = row.get("heldout_uas")
            rows.append(
                f"| {row['mode']} | {row['k']} "
                f"| {row['speedup']:.1f}x({row['seconds_per_pass']:.1f}s) "
                f"| {row['peak_memory'] / 2**20:.1f} MB "
                f"| {'-' if uas is None else f'{100 * uas:.2f}'} |"
            )
        return "\n".join(rows)

    def _generate_environment(self, data: Dict[str, Any]) -> str:
        env = data.get("metadata", {}).get("environment", {})
        if not env:
            return ""
        return f"""## Environment

- Platform: {env.get('platform', 'unknown')}
- Python: {env.get('python_version', 'unknown')}
- CPUs: {env.get('cpu_count', 'unknown')}"""

    @staticmethod
    def _verdict(value: Any) -> str:
        return "PASS" if value else "FAIL"

    @staticmethod
    def _number(value: Any) -> str:
        if isinstance(value, float):
            return f"{value:.6g}"
        return str(value)
