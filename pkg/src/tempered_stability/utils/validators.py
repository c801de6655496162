"""
Validation of the tables written by the command-line tools.
"""

import logging

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


class OutputValidator:
    """Collection of checks run on curve and trajectory tables before export."""

    @staticmethod
    def validate_curve_frame(df: pd.DataFrame) -> bool:
        """Validate a criterion curve table.

        Args:
            df: DataFrame with columns t, bound, threshold

        Returns:
            True if valid, False otherwise

        Validation checks:
            - Required columns exist
            - DataFrame not empty
            - Times finite, nonnegative and strictly increasing
            - Bounds nonnegative or +inf (the overflow sentinel), never NaN
            - Single positive threshold
        """
        required_columns = ["t", "bound", "threshold"]

        if not all(col in df.columns for col in required_columns):
            missing = [col for col in required_columns if col not in df.columns]
            logger.error(f"Missing required columns: {missing}")
            return False

        if df.empty:
            logger.error("Curve table is empty")
            return False

        times = df["t"].to_numpy(dtype=float)
        if not np.all(np.isfinite(times)) or times[0] < 0:
            logger.error("Curve times must be finite and nonnegative")
            return False
        if np.any(np.diff(times) <= 0):
            logger.error("Curve times are not strictly increasing")
            return False

        bounds = df["bound"].to_numpy(dtype=float)
        if np.any(np.isnan(bounds)) or np.any(bounds < 0):
            logger.error("Found NaN or negative bound values")
            return False

        thresholds = df["threshold"].unique()
        if len(thresholds) != 1 or not thresholds[0] > 0:
            logger.error(f"Expected one positive threshold, got {thresholds.tolist()}")
            return False

        logger.debug(f"Curve table validation passed (shape: {df.shape})")
        return True

    @staticmethod
    def validate_trajectory_frame(df: pd.DataFrame) -> bool:
        """Validate a trajectory table (columns t, y1..yn, norm_inf).

        Returns:
            True if valid, False otherwise
        """
        state_cols = [col for col in df.columns if col.startswith("y")]
        if "t" not in df.columns or "norm_inf" not in df.columns or not state_cols:
            logger.error(f"Trajectory table has unexpected columns: {list(df.columns)}")
            return False

        if df.empty:
            logger.error("Trajectory table is empty")
            return False

        if np.any(np.diff(df["t"].to_numpy(dtype=float)) <= 0):
            logger.error("Trajectory times are not strictly increasing")
            return False

        values = df[state_cols + ["norm_inf"]].to_numpy(dtype=float)
        if not np.all(np.isfinite(values)):
            logger.error("Found non-finite trajectory values")
            return False

        expected = np.max(np.abs(df[state_cols].to_numpy(dtype=float)), axis=1)
        if not np.array_equal(expected, df["norm_inf"].to_numpy(dtype=float)):
            logger.error("norm_inf column does not match the state columns")
            return False

        logger.debug(f"Trajectory table validation passed (shape: {df.shape})")
        return True
