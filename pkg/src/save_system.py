import csv
import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Sequence, Union

from .integrator.stiff_integrator import Trajectory
from .settings import ExperimentConfig

if TYPE_CHECKING:
    from .harness.experiment import ErrorReport

logger = logging.getLogger(__name__)

PLOT_SCRIPT = "plot_contours.py"
ERRORS_FILE = "errors.csv"
REPORT_FILE = "report.txt"
CONFIG_FILE = "config.json"


def field_file(name: str) -> str:
    return f"fields_{name}.csv"


def suite_file(kind: str) -> str:
    return f"suite_{kind}.json"


def _fmt(value: Any) -> str:
    # repr gives the shortest string that round-trips a double
    return repr(float(value)) if isinstance(value, float) else str(value)


class ResultWriter:
    """Writes experiment results into one output directory."""

    def __init__(self, output_directory: Union[str, Path] = "results"):
        self.output_directory = Path(output_directory)
        try:
            self.output_directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            # Every later write fails and reports False.
            logger.error(f"Cannot create output directory {self.output_directory}: {e}")
        else:
            logger.debug(f"Result writer initialized with directory: {self.output_directory}")

    def write_csv(self, filename: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> bool:
        """UTF-8, LF line endings, one header row."""
        path = self.output_directory / filename
        try:
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                for row in rows:
                    writer.writerow([_fmt(v) for v in row])
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            return False
        logger.info(f"Wrote {path}")
        return True

    def write_fields(self, name: str, trajectory: Trajectory) -> bool:
        """Space-time field: columns t, x_0..x_{m-1}."""
        if not trajectory.states:
            return self.write_csv(field_file(name), ["t"], [])
        m = trajectory.states[0].grid.m
        header = ["t"] + [f"x_{j}" for j in range(m)]
        rows = ([t] + [float(v) for v in state.values]
                for t, state in zip(trajectory.times, trajectory.states))
        return self.write_csv(field_file(name), header, rows)

    def write_text(self, filename: str, text: str) -> bool:
        path = self.output_directory / filename
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            return False
        logger.info(f"Wrote {path}")
        return True

    def write_json(self, filename: str, data: Dict[str, Any]) -> bool:
        return self.write_text(filename, json.dumps(data, indent=2, sort_keys=True) + "\n")

    def write_comparison(self, cfg: ExperimentConfig, report: "ErrorReport") -> bool:
        """All files of a comparison run; False if any of them failed."""
        ok = self.write_json(CONFIG_FILE, cfg.to_dict())
        for name, trajectory in report.fields.items():
            ok = self.write_fields(name, trajectory) and ok
        ok = self.write_csv(ERRORS_FILE, ["t", "scheme", "L2", "Linf"], report.error_rows()) and ok
        ok = self.write_text(REPORT_FILE, format_report(cfg, report)) and ok
        if cfg.plot_script:
            ok = self.write_text(PLOT_SCRIPT, plot_script(list(report.fields), cfg)) and ok
        return ok

    def write_suite(self, kind: str, summary: Dict[str, Any]) -> bool:
        return self.write_json(suite_file(kind), summary)


def format_report(cfg: ExperimentConfig, report: "ErrorReport") -> str:
    lines = [
        "Comparison of holistic discretisations against the spectral reference",
        f"config_hash: {report.config_hash}",
        f"R: {_fmt(cfg.R)}  m: {cfg.m}  L: {_fmt(cfg.L)}  gamma: {_fmt(cfg.gamma)}",
        f"initial condition: {cfg.ic.kind} (amplitude {_fmt(cfg.ic.amplitude)})",
        f"t_end: {_fmt(cfg.t_end)}  output times: {len(cfg.resolved_output_times())}",
        f"tolerances: rel {_fmt(report.rel_tol)}  abs {_fmt(report.abs_tol)}",
        f"oracle: N={report.oracle_n} status={report.oracle_status.value} "
        f"resolved={report.oracle_resolved} "
        f"top_energy_fraction={_fmt(report.oracle_top_energy_fraction)} "
        f"accepted_steps={report.oracle_accepted_steps}",
        "",
        f"{'scheme':<14}{'status':<16}{'max L2':>24}{'max Linf':>24}{'peak Linf':>24}{'steps':>8}{'rejected':>10}",
    ]
    for entry in report.schemes:
        lines.append(
            f"{entry.scheme:<14}{entry.status.value:<16}{_fmt(entry.max_l2):>24}"
            f"{_fmt(entry.max_linf):>24}{_fmt(entry.peak_linf):>24}"
            f"{entry.accepted_steps:>8}{entry.rejected_steps:>10}"
        )
    lines.append("")
    lines.append("result: " + ("success" if report.succeeded
                               else f"FAILED ({', '.join(report.failed_schemes) or 'oracle'})"))
    return "\n".join(lines) + "\n"


def plot_script(names: List[str], cfg: ExperimentConfig) -> str:
    """Stand-alone matplotlib script drawing contours of every field file."""
    files = ", ".join(repr(field_file(name)) for name in names)
    return f'''"""Contour plots of the fields written next to this script.

Run with: python {PLOT_SCRIPT}   (needs numpy and matplotlib)
"""
import csv
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent
FILES = [{files}]
L = {cfg.L!r}
CONTOUR_INTERVAL = {cfg.contour_interval!r}
X_MAX = L / 2  # the solution is antisymmetric; show [0, L/2]


def load(name):
    with open(HERE / name, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))[1:]
    data = np.array([[float(v) for v in row] for row in rows])
    t, u = data[:, 0], data[:, 1:]
    m = u.shape[1]
    x = np.arange(m + 1) * L / m
    return x, t, np.hstack([u, u[:, :1]])


def main():
    fields = [(name, *load(name)) for name in FILES]
    top = max(np.abs(u).max() for _, _, _, u in fields)
    top = CONTOUR_INTERVAL * np.ceil(top / CONTOUR_INTERVAL)
    levels = np.arange(-top, top + CONTOUR_INTERVAL, CONTOUR_INTERVAL)
    fig, ax = plt.subplots(figsize=(6, 5))
    styles = ["solid", "dotted", "dashdot", "dashed", (0, (1, 4))]
    for i, (name, x, t, u) in enumerate(fields):
        ax.contour(x, t, u, levels=levels, linestyles=[styles[i % len(styles)]], colors="k")
        ax.plot([], [], color="k", linestyle=styles[i % len(styles)], label=name)
    ax.set_xlim(0, X_MAX)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.legend()
    fig.savefig(HERE / "contours.png", dpi=150)


if __name__ == "__main__":
    main()
'''
