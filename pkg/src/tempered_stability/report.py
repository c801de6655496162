"""
File outputs of the command-line tools: curve and trajectory CSVs, JSON
reports, the audit trail, run manifests and condition-curve figures.

Every writer is deterministic: reals carry 17 significant digits, JSON
keys are sorted, non-finite reals are spelled ``"inf"`` / ``"nan"`` and no
timestamps are recorded, so repeated runs produce byte-identical files.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from . import __version__
from .criteria.audit import AuditNote
from .exceptions import GridError
from .utils.validators import OutputValidator

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

COMMANDS = ("check", "simulate", "verify", "reproduce")

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite reals for ``json.dumps``."""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Path):
        return value.as_posix()
    return value


def write_json(path: PathLike, payload: Mapping[str, Any]) -> Path:
    """Write ``payload`` as sorted, indented JSON with a trailing newline."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_curve_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write a ``t,bound,threshold`` curve table.

    Raises:
        GridError: If the table fails validation
    """
    if not OutputValidator.validate_curve_frame(frame):
        raise GridError(f"refusing to write invalid curve table to {path}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote {len(frame)} curve rows to {path}")
    return path


def write_trajectory_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write a ``t,y1..yn,norm_inf`` trajectory table.

    Raises:
        GridError: If the table fails validation
    """
    if not OutputValidator.validate_trajectory_frame(frame):
        raise GridError(f"refusing to write invalid trajectory table to {path}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote {len(frame)} trajectory rows to {path}")
    return path


def curve_frame(
    times: Sequence[float], bounds: Sequence[float], threshold: float
) -> pd.DataFrame:
    """Curve table from raw samples."""
    times = np.asarray(times, dtype=float)
    return pd.DataFrame(
        {
            "t": times,
            "bound": np.asarray(bounds, dtype=float),
            "threshold": np.full(len(times), float(threshold)),
        }
    )


def format_audit(sections: Iterable[Tuple[str, Sequence[AuditNote]]]) -> str:
    """Plain-text audit trail, one heading per section and one line per note.

    Discrepancies are counted in each heading so they stand out.
    """
    lines = []
    for title, notes in sections:
        flagged = sum(1 for note in notes if note.classification == "discrepancy")
        lines.append(f"== {title} ({len(notes)} notes, {flagged} discrepancies) ==")
        lines.extend(str(note) for note in notes)
        lines.append("")
    return "\n".join(lines)


def write_audit(
    path: PathLike, sections: Iterable[Tuple[str, Sequence[AuditNote]]]
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_audit(sections), encoding="utf-8")
    logger.debug(f"Wrote audit trail to {path}")
    return path


@dataclass
class RunManifest:
    """What a CLI run did and how it ended.

    Attributes:
        command: ``check``, ``simulate``, ``verify`` or ``reproduce``
        input_path: Configuration file or bundled example name
        output_dir: Directory the run wrote to
        tolerance_overrides: ``--tolerance`` values as given
        exit_code: 0 stable/success, 2 inconclusive, 1 error
        outputs: Files written, relative to ``output_dir``
        version: Package version that produced the run
    """

    command: str
    input_path: str
    output_dir: str
    tolerance_overrides: Dict[str, str] = field(default_factory=dict)
    exit_code: int = 0
    outputs: list = field(default_factory=list)
    version: str = __version__

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"command must be one of {COMMANDS}, got {self.command!r}")

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input_path": self.input_path,
            "output_dir": self.output_dir,
            "tolerance_overrides": dict(sorted(self.tolerance_overrides.items())),
            "exit_code": self.exit_code,
            "outputs": sorted(self.outputs),
            "version": self.version,
        }

    def write(self) -> Path:
        """Write ``manifest.json`` into the output directory."""
        if self.exit_code not in (0, 1, 2):
            raise ValueError(f"exit_code must be 0, 1 or 2, got {self.exit_code}")
        return write_json(Path(self.output_dir) / "manifest.json", self.to_dict())


def plot_curves(
    path: PathLike,
    title: str,
    curves: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
    threshold: float,
) -> Path:
    """Render condition curves against their threshold as a PNG.

    Non-finite samples are dropped from the plotted lines; the y-axis is
    capped a little above the threshold so the crossing stays readable.

    Args:
        path: Output PNG path
        title: Figure title
        curves: (label, times, bounds) triples
        threshold: epsilon / xi
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 5))
    for label, times, bounds in curves:
        times = np.asarray(times, dtype=float)
        bounds = np.asarray(bounds, dtype=float)
        finite = np.isfinite(bounds)
        ax.plot(times[finite], bounds[finite], linewidth=2.0, label=label)

    ax.axhline(threshold, linestyle="--", color="#555555", linewidth=1.2, label="epsilon/xi")
    ax.set_ylim(0.0, 1.5 * threshold)
    ax.set_title(title)
    ax.set_xlabel("t")
    ax.set_ylabel("bound")
    ax.grid(True, alpha=0.25)
    ax.legend()
    fig.tight_layout()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # no Software/date metadata: keeps the PNG bytes repeatable
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    logger.debug(f"Wrote figure {path}")
    return path


def relative_outputs(out: Path, written: Iterable[Optional[Path]]) -> list:
    """Paths of ``written`` relative to ``out``, POSIX style."""
    return [p.relative_to(out).as_posix() for p in written if p is not None]
