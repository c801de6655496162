"""
Initial history functions omega on [-tau, 0].
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..exceptions import FieldDiagnostic, ValidationError

logger = logging.getLogger(__name__)

HISTORY_KINDS = ("constant_vector", "coswave_plus_constant", "sampled")


def _as_tuple(values: ArrayLike) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.ravel(np.asarray(values, dtype=float)))


@dataclass(frozen=True)
class HistoryFunction:
    """Continuous initial function omega on [-tau, 0].

    Kinds and their payload:

    - ``constant_vector``: ``value`` (one entry per component)
    - ``coswave_plus_constant``: ``amplitude``, ``frequency``, ``offset``;
      component i is ``amplitude[i] * cos(frequency[i] * t) + offset[i]``
    - ``sampled``: ``times`` (increasing) and ``values`` (one row per time),
      linearly interpolated in between

    Use the ``constant``, ``coswave`` and ``sampled`` constructors.
    """

    kind: str
    value: Tuple[float, ...] = ()
    amplitude: Tuple[float, ...] = ()
    frequency: Tuple[float, ...] = ()
    offset: Tuple[float, ...] = ()
    times: Tuple[float, ...] = ()
    values: Tuple[Tuple[float, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        problems = self._diagnose()
        if problems:
            raise ValidationError("invalid history", problems)

    def _diagnose(self) -> List[FieldDiagnostic]:
        if self.kind not in HISTORY_KINDS:
            return [FieldDiagnostic("history.kind", f"must be one of {HISTORY_KINDS}")]

        problems = []
        if self.kind == "constant_vector":
            if not self.value:
                problems.append(FieldDiagnostic("history.value", "must be non-empty"))
            payload = {"value": self.value}
        elif self.kind == "coswave_plus_constant":
            n = len(self.amplitude)
            if n == 0:
                problems.append(FieldDiagnostic("history.amplitude", "must be non-empty"))
            for name in ("frequency", "offset"):
                if len(getattr(self, name)) != n:
                    problems.append(
                        FieldDiagnostic(f"history.{name}", f"must have {n} entries")
                    )
            payload = {
                "amplitude": self.amplitude,
                "frequency": self.frequency,
                "offset": self.offset,
            }
        else:
            if not self.times:
                problems.append(FieldDiagnostic("history.times", "must be non-empty"))
            if len(self.values) != len(self.times):
                problems.append(
                    FieldDiagnostic("history.values", "needs one row per sample time")
                )
            elif self.values and len({len(row) for row in self.values}) != 1:
                problems.append(
                    FieldDiagnostic("history.values", "rows must share one dimension")
                )
            if any(b <= a for a, b in zip(self.times, self.times[1:])):
                problems.append(
                    FieldDiagnostic("history.times", "must be strictly increasing")
                )
            payload = {
                "times": self.times,
                "values": tuple(v for row in self.values for v in row),
            }

        for name, entries in payload.items():
            if not all(math.isfinite(v) for v in entries):
                problems.append(FieldDiagnostic(f"history.{name}", "must be finite"))
        return problems

    @classmethod
    def constant(cls, value: ArrayLike) -> "HistoryFunction":
        return cls("constant_vector", value=_as_tuple(value))

    @classmethod
    def coswave(
        cls, amplitude: ArrayLike, frequency: ArrayLike, offset: ArrayLike
    ) -> "HistoryFunction":
        return cls(
            "coswave_plus_constant",
            amplitude=_as_tuple(amplitude),
            frequency=_as_tuple(frequency),
            offset=_as_tuple(offset),
        )

    @classmethod
    def sampled(cls, times: ArrayLike, values: ArrayLike) -> "HistoryFunction":
        table = np.atleast_2d(np.asarray(values, dtype=float))
        if np.ndim(values) == 1:
            table = table.T
        return cls(
            "sampled",
            times=_as_tuple(times),
            values=tuple(tuple(float(v) for v in row) for row in table),
        )

    @property
    def dimension(self) -> int:
        if self.kind == "constant_vector":
            return len(self.value)
        if self.kind == "coswave_plus_constant":
            return len(self.amplitude)
        return len(self.values[0])

    def covers(self, tau: float) -> List[FieldDiagnostic]:
        """Diagnostics if a sampled table does not span [-tau, 0]."""
        if self.kind != "sampled":
            return []
        slack = 1e-12 * max(1.0, tau)
        if self.times[0] > -tau + slack or self.times[-1] < -slack:
            return [
                FieldDiagnostic(
                    "history.times",
                    f"samples span [{self.times[0]}, {self.times[-1]}], "
                    f"need [-{tau}, 0]",
                )
            ]
        return []

    def __call__(self, t: float) -> NDArray[np.float64]:
        """omega(t) for a scalar time t in [-tau, 0]."""
        if self.kind == "constant_vector":
            return np.array(self.value)
        if self.kind == "coswave_plus_constant":
            return np.array(self.amplitude) * np.cos(np.array(self.frequency) * t) + np.array(
                self.offset
            )
        table = np.array(self.values)
        times = np.array(self.times)
        return np.array([np.interp(t, times, table[:, i]) for i in range(table.shape[1])])

    @property
    def at_zero(self) -> NDArray[np.float64]:
        """omega(0), the initial state of the mild solution."""
        return self(0.0)


def _coswave_sup(amplitude: float, frequency: float, offset: float, tau: float) -> float:
    # extrema of a cos(w t) + c on [-tau, 0] sit at the ends or where w t = -k pi
    w = abs(frequency)
    candidates = [0.0, -tau]
    if w > 0:
        k_max = int(math.floor(w * tau / math.pi))
        candidates.extend(-k * math.pi / w for k in range(1, k_max + 1))
    return max(abs(amplitude * math.cos(w * t) + offset) for t in candidates)


def history_sup_norm(history: HistoryFunction, tau: float) -> float:
    """||omega||_C = sup over [-tau, 0] of the infinity norm of omega(t).

    Closed-form kinds are evaluated analytically; sampled histories use the
    largest sample (the linear interpolant attains its maximum at a node).

    Example:
        >>> h = HistoryFunction.coswave([0.01, 0.0], [math.pi, 0.0], [0.0, 0.01])
        >>> history_sup_norm(h, 0.2)
        0.01
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if history.kind == "constant_vector":
        return float(np.max(np.abs(history.value)))
    if history.kind == "coswave_plus_constant":
        return max(
            _coswave_sup(a, w, c, tau)
            for a, w, c in zip(history.amplitude, history.frequency, history.offset)
        )
    times = np.array(history.times)
    table = np.array(history.values)
    inside = (times >= -tau) & (times <= 0.0)
    rows = table[inside] if inside.any() else table
    edges = np.array([history(-tau), history(0.0)])
    return float(max(np.max(np.abs(rows)), np.max(np.abs(edges))))
