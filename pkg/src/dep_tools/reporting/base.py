"""
Base Report Generator
=====================

Versioned report directories for convergence experiments and benchmarks.
Each run gets ``<output_dir>/<timestamp>/`` holding ``report.json`` (the
single source of truth), ``manifest.json`` and a Markdown presentation;
``<output_dir>/latest`` points at the newest run.
"""

import json
import os
import platform
import re
import shutil
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from dep_tools import __version__, config
from dep_tools.utils.debug_logger import debug_log

REPORT_KINDS = ("convlab", "bench")
# result key holding the tabular rows of each kind
TABLE_ROWS = {"convlab": "reports", "bench": "results"}

RUN_DIR_FORMAT = "%Y%m%d_%H%M%S_%f"
# only directories named like this are ever removed by cleanup
RUN_DIR_PATTERN = re.compile(r"^\d{8}_\d{6}_\d{6}$")


@dataclass
class ReportConfig:
    """Configuration for report generation"""
    output_dir: Path = field(default_factory=lambda: Path(config.REPORT_DIR))
    keep_history: int = 10
    generate_markdown: bool = True


class ReportGenerator:
    """Writes one report run for a convlab or bench result"""

    def __init__(self, report_config: Optional[ReportConfig] = None):
        self.config = report_config or ReportConfig()
        self.timestamp = datetime.now()
        self.run_id = str(uuid.uuid4())
        self.report_dir = self._setup_report_directory()

    def _setup_report_directory(self) -> Path:
        """Create the run directory and repoint ``latest``"""
        name = self.timestamp.strftime(RUN_DIR_FORMAT)
        run_dir = self.config.output_dir / name
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "presentation").mkdir(exist_ok=True)

        latest_link = self.config.output_dir / "latest"
        if latest_link.is_symlink() or latest_link.exists():
            latest_link.unlink()
        latest_link.symlink_to(run_dir.name)

        debug_log.cli(f"Report directory created: {run_dir}")
        return run_dir

    def generate_reports(self, kind: str, data: Dict[str, Any]) -> Dict[str, Path]:
        """
        Write all report files for one result.

        Args:
            kind: "convlab" or "bench"
            data: the result's ``to_dict()`` payload

        Returns:
            Dictionary mapping report types to file paths
        """
        if kind not in REPORT_KINDS:
            raise ValueError(f"unknown report kind {kind!r}")

        master = self._create_master_report(kind, data)
        report_paths = {"report": self._save_json_report("report.json", master)}
        report_paths["table"] = self._save_table(kind, data)

        if self.config.generate_markdown:
            from dep_tools.reporting.generators import MarkdownGenerator
            report_paths["markdown"] = MarkdownGenerator().generate(
                master, self.report_dir / "presentation" / "report.md"
            )

        report_paths["manifest"] = self._save_json_report(
            "manifest.json", self._create_manifest(report_paths)
        )
        self._update_history(kind, master)
        self._cleanup_old_reports()

        debug_log.cli(f"Report generation complete: {len(report_paths)} files", extra={
            'directory': str(self.report_dir),
        })
        return report_paths

    def _create_master_report(self, kind: str, data: Dict[str, Any]) -> Dict[str, Any]:
        return {
            "kind": kind,
            "version": "1.0.0",
            "metadata": self._create_metadata(),
            "result": data,
        }

    def _create_metadata(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "timestamp": self.timestamp.isoformat(),
            "dep_tools_version": __version__,
            "environment": {
                "platform": platform.system().lower(),
                "python_version": platform.python_version(),
                "hostname": platform.node(),
                "cpu_count": os.cpu_count(),
            },
        }

    def _create_manifest(self, report_paths: Dict[str, Path]) -> Dict[str, Any]:
        files = {}
        for report_type, path in report_paths.items():
            if path.exists():
                files[report_type] = {
                    "path": str(path.relative_to(self.report_dir)),
                    "size_bytes": path.stat().st_size,
                }
        return {
            "run_id": self.run_id,
            "timestamp": self.timestamp.isoformat(),
            "files": files,
            "report_directory": str(self.report_dir),
        }

    def _save_table(self, kind: str, data: Dict[str, Any]) -> Path:
        """One CSV row per benchmark cell or convergence run"""
        rows = data.get(TABLE_ROWS[kind], [])
        filepath = self.report_dir / f"{TABLE_ROWS[kind]}.csv"
        pd.DataFrame(rows).to_csv(filepath, index=False)
        return filepath

    def _save_json_report(self, filename: str, data: Dict[str, Any]) -> Path:
        filepath = self.report_dir / filename
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, default=str)
        debug_log.cli(f"Saved report: {filepath}")
        return filepath

    def _update_history(self, kind: str, master: Dict[str, Any]) -> None:
        """Append this run to ``history.json``, keeping the last N runs"""
        history_file = self.config.output_dir / "history.json"
        if history_file.exists():
            with open(history_file, encoding='utf-8') as f:
                history = json.load(f)
        else:
            history = {"runs": []}

        history["runs"].append({
            "run_id": self.run_id,
            "timestamp": self.timestamp.isoformat(),
            "directory": self.report_dir.name,
            "kind": kind,
        })
        history["runs"] = history["runs"][-self.config.keep_history:]

        with open(history_file, 'w', encoding='utf-8') as f:
            json.dump(history, f, indent=2)

    def _cleanup_old_reports(self) -> None:
        """Remove run directories beyond the retention limit; other entries are left alone"""
        report_dirs = [
            d for d in self.config.output_dir.iterdir()
            if d.is_dir() and not d.is_symlink() and RUN_DIR_PATTERN.match(d.name)
        ]
        report_dirs.sort(key=lambda d: d.name)
        while len(report_dirs) > self.config.keep_history:
            shutil.rmtree(report_dirs.pop(0))
