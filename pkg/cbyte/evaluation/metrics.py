"""CLEAR-MOT and identity (IDF1/IDP/IDR) metrics over frame-grouped MOT records."""

from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..association import solve_assignment
from ..core_types import iou_matrix
from ..module_registry import module_registry
from ..mot_format import FrameRecords, MotRecord

module_registry.register_module(
    name="metrics",
    description="CLEAR-MOT and identity metrics",
    logger_name="cbyte.metrics",
    debug_flag="--debug-metrics",
    category="evaluation",
)

log = module_registry.get_module_info("metrics")["logger"]

DEFAULT_IOU_GATE = 0.5


@dataclass(frozen=True)
class ClearMetrics:
    fp: int
    fn: int
    idsw: int
    gt_count: int
    matches: int

    @property
    def mota(self) -> float:
        """1 - (FP + FN + IDSW) / GT; 0 when there is no ground truth."""
        if self.gt_count == 0:
            return 0.0
        return 1.0 - (self.fp + self.fn + self.idsw) / self.gt_count


@dataclass(frozen=True)
class IdentityMetrics:
    idtp: int
    idfp: int
    idfn: int

    @property
    def idp(self) -> float:
        return _ratio(self.idtp, self.idtp + self.idfp)

    @property
    def idr(self) -> float:
        return _ratio(self.idtp, self.idtp + self.idfn)

    @property
    def idf1(self) -> float:
        return _ratio(2 * self.idtp, 2 * self.idtp + self.idfp + self.idfn)


@dataclass(frozen=True)
class MetricsReport:
    """Combined tracking accuracy and identity report."""

    mota: float
    idf1: float
    idp: float
    idr: float
    fp: int
    fn: int
    idsw: int
    gt_count: int
    idtp: int
    idfp: int
    idfn: int

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)

    def key_value_lines(self) -> List[str]:
        """Machine-readable `KEY=value` lines."""
        return [
            f"MOTA={self.mota:.3f}",
            f"IDF1={self.idf1:.3f}",
            f"IDP={self.idp:.3f}",
            f"IDR={self.idr:.3f}",
            f"FP={self.fp}",
            f"FN={self.fn}",
            f"IDSW={self.idsw}",
            f"GT={self.gt_count}",
            f"IDTP={self.idtp}",
            f"IDFP={self.idfp}",
            f"IDFN={self.idfn}",
        ]

    def format_table(self, title: str = "") -> str:
        """Human-readable two-row table."""
        headers = ["MOTA", "IDF1", "IDP", "IDR", "FP", "FN", "IDSW"]
        values = [
            f"{100 * self.mota:.1f}%",
            f"{100 * self.idf1:.1f}%",
            f"{100 * self.idp:.1f}%",
            f"{100 * self.idr:.1f}%",
            str(self.fp),
            str(self.fn),
            str(self.idsw),
        ]
        widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
        lines = [title] if title else []
        lines.append("  ".join(h.rjust(w) for h, w in zip(headers, widths)))
        lines.append("  ".join(v.rjust(w) for v, w in zip(values, widths)))
        return "\n".join(lines)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def _frame(records: FrameRecords, frame: int) -> List[MotRecord]:
    return sorted(records.get(frame, []), key=lambda r: (r.track_id, r.left, r.top, r.width, r.height))


def clear_metrics(gt: FrameRecords, results: FrameRecords, iou_gate: float = DEFAULT_IOU_GATE) -> ClearMetrics:
    """
    Frame-by-frame CLEAR-MOT matching.

    Each ground-truth identity keeps its last matched result id while the pair
    stays within the IoU gate; the rest are matched by gated linear assignment
    on 1 - IoU. An ID switch is counted when a ground-truth identity is matched
    to a different result id than its last match.
    """
    max_cost = 1.0 - iou_gate
    last_match: Dict[int, int] = {}
    fp = fn = idsw = gt_count = matches = 0

    for frame in sorted(set(gt) | set(results)):
        gts = _frame(gt, frame)
        hyps = _frame(results, frame)
        gt_count += len(gts)
        ious = iou_matrix([g.box for g in gts], [h.box for h in hyps])
        hyp_index = {h.track_id: j for j, h in enumerate(hyps)}

        pairs: List[Tuple[int, int]] = []
        used_gt, used_hyp = set(), set()
        for i, g in enumerate(gts):
            j = hyp_index.get(last_match.get(g.track_id, -1))
            if j is not None and j not in used_hyp and ious[i, j] >= iou_gate:
                pairs.append((i, j))
                used_gt.add(i)
                used_hyp.add(j)

        free_gt = [i for i in range(len(gts)) if i not in used_gt]
        free_hyp = [j for j in range(len(hyps)) if j not in used_hyp]
        fresh = solve_assignment(1.0 - ious[np.ix_(free_gt, free_hyp)], max_cost)
        for r, c in fresh.pairs:
            i, j = free_gt[r], free_hyp[c]
            gt_id, hyp_id = gts[i].track_id, hyps[j].track_id
            if gt_id in last_match and last_match[gt_id] != hyp_id:
                idsw += 1
            pairs.append((i, j))

        for i, j in pairs:
            last_match[gts[i].track_id] = hyps[j].track_id
        matches += len(pairs)
        fn += len(gts) - len(pairs)
        fp += len(hyps) - len(pairs)

    return ClearMetrics(fp=fp, fn=fn, idsw=idsw, gt_count=gt_count, matches=matches)


def identity_overlaps(
    gt: FrameRecords, results: FrameRecords, iou_gate: float = DEFAULT_IOU_GATE
) -> Tuple[List[int], List[int], np.ndarray, int, int]:
    """
    Count, for every (gt id, result id) pair, the frames where their boxes overlap by at least the gate.

    Returns:
        (gt ids, result ids, overlap counts, total gt records, total result records)
    """
    counts: Dict[Tuple[int, int], int] = defaultdict(int)
    gt_ids, hyp_ids = set(), set()
    total_gt = total_hyp = 0
    for frame in sorted(set(gt) | set(results)):
        gts = _frame(gt, frame)
        hyps = _frame(results, frame)
        total_gt += len(gts)
        total_hyp += len(hyps)
        gt_ids.update(g.track_id for g in gts)
        hyp_ids.update(h.track_id for h in hyps)
        ious = iou_matrix([g.box for g in gts], [h.box for h in hyps])
        for i, j in zip(*np.nonzero(ious >= iou_gate)):
            counts[(gts[i].track_id, hyps[j].track_id)] += 1

    gt_list, hyp_list = sorted(gt_ids), sorted(hyp_ids)
    overlap = np.zeros((len(gt_list), len(hyp_list)), dtype=np.int64)
    gt_pos = {g: i for i, g in enumerate(gt_list)}
    hyp_pos = {h: j for j, h in enumerate(hyp_list)}
    for (g, h), n in counts.items():
        overlap[gt_pos[g], hyp_pos[h]] = n
    return gt_list, hyp_list, overlap, total_gt, total_hyp


def id_metrics(gt: FrameRecords, results: FrameRecords, iou_gate: float = DEFAULT_IOU_GATE) -> IdentityMetrics:
    """
    Identity metrics from a global one-to-one matching of gt and result trajectories.

    Minimizing IDFP + IDFN is the same as maximizing the matched overlap
    count, which is solved as an assignment on (max overlap - overlap).
    """
    _, _, overlap, total_gt, total_hyp = identity_overlaps(gt, results, iou_gate)
    idtp = 0
    if overlap.size:
        assignment = solve_assignment(overlap.max() - overlap)
        idtp = int(sum(overlap[r, c] for r, c in assignment.pairs))
    return IdentityMetrics(idtp=idtp, idfp=total_hyp - idtp, idfn=total_gt - idtp)


def frame_ranges_disjoint(gt: FrameRecords, results: FrameRecords) -> bool:
    """True when both inputs are non-empty and share no frame range."""
    if not gt or not results:
        return False
    return max(gt) < min(results) or max(results) < min(gt)


def evaluate(gt: FrameRecords, results: FrameRecords, iou_gate: float = DEFAULT_IOU_GATE) -> MetricsReport:
    """Compute CLEAR and identity metrics over the union of frames."""
    if frame_ranges_disjoint(gt, results):
        log.warning(
            "Ground truth frames %d-%d and result frames %d-%d do not overlap; scoring over their union",
            min(gt),
            max(gt),
            min(results),
            max(results),
        )
    clear = clear_metrics(gt, results, iou_gate)
    ident = id_metrics(gt, results, iou_gate)
    return MetricsReport(
        mota=clear.mota,
        idf1=ident.idf1,
        idp=ident.idp,
        idr=ident.idr,
        fp=clear.fp,
        fn=clear.fn,
        idsw=clear.idsw,
        gt_count=clear.gt_count,
        idtp=ident.idtp,
        idfp=ident.idfp,
        idfn=ident.idfn,
    )
