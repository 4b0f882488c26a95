"""IoU cost matrices, gated linear assignment and detection score splitting."""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core_types import BBox, Detection, iou_matrix
from .module_registry import module_registry

module_registry.register_module(
    name="association",
    description="Cost matrix and linear assignment",
    logger_name="cbyte.association",
    debug_flag="--debug-association",
    category="core",
)

log = module_registry.get_module_info("association")["logger"]


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Row-major track x detection costs, c_ij = 1 - IoU."""

    values: np.ndarray

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def cols(self) -> int:
        return int(self.values.shape[1])


@dataclass
class Assignment:
    """Matched (row, col) pairs plus the rows and cols left unmatched."""

    pairs: List[Tuple[int, int]] = field(default_factory=list)
    unmatched_rows: List[int] = field(default_factory=list)
    unmatched_cols: List[int] = field(default_factory=list)


def cost_matrix(track_boxes: Sequence[BBox], det_boxes: Sequence[BBox]) -> CostMatrix:
    """Build the 1 - IoU cost between every predicted track box and detection box."""
    return CostMatrix(1.0 - iou_matrix(track_boxes, det_boxes))


def solve_assignment(costs: np.ndarray, max_cost: float = np.inf) -> Assignment:
    """
    Minimum-cost one-to-one matching on an arbitrary rectangular cost array.

    Entries above `max_cost` are never returned as pairs. The solver sees them
    at a flat penalty larger than any in-gate total, so the result has the
    most in-gate pairs possible and, among those, the lowest cost.
    """
    costs = np.asarray(costs, dtype=np.float64)
    rows, cols = costs.shape if costs.ndim == 2 else (0, 0)
    if rows == 0 or cols == 0:
        return Assignment([], list(range(rows)), list(range(cols)))

    gated = costs > max_cost
    solver_costs = costs
    if gated.any():
        penalty = 1.0 + 2 * min(rows, cols) * np.abs(costs[~gated]).max(initial=0.0)
        solver_costs = np.where(gated, penalty, costs)
    row_ind, col_ind = linear_sum_assignment(solver_costs)

    pairs = [(int(r), int(c)) for r, c in zip(row_ind, col_ind) if not gated[r, c]]
    matched_rows = {r for r, _ in pairs}
    matched_cols = {c for _, c in pairs}
    return Assignment(
        pairs,
        [r for r in range(rows) if r not in matched_rows],
        [c for c in range(cols) if c not in matched_cols],
    )


def linear_assignment(c: CostMatrix, max_cost: float) -> Assignment:
    """Gated minimum-cost matching of tracks (rows) to detections (cols)."""
    if not 0.0 <= max_cost <= 1.0:
        raise ValueError(f"max_cost must be in [0, 1], got {max_cost}")
    assignment = solve_assignment(c.values, max_cost)
    log.debug(
        "Assigned %d pairs on %dx%d costs (gate %.2f)", len(assignment.pairs), c.rows, c.cols, max_cost
    )
    return assignment


def split_detections(
    detections: Sequence[Detection], tau_high: float, tau_low: float
) -> Tuple[List[Detection], List[Detection]]:
    """
    Split detections into high (score >= tau_high) and low (tau_low <= score < tau_high).

    Detections below tau_low are dropped. Input order is kept within each list.
    """
    if not 0.0 <= tau_low <= tau_high <= 1.0:
        raise ValueError(f"expected 0 <= tau_low <= tau_high <= 1, got {tau_low}, {tau_high}")
    high = [d for d in detections if d.score >= tau_high]
    low = [d for d in detections if tau_low <= d.score < tau_high]
    return high, low
