"""Privacy-utility sweep: classification accuracy and biometric leakage as
functions of the quantization resolution.

For each resolution the whole labeled population is re-quantized, pushed
through the full classification pipeline, and pooled for the leakage
estimate. Accuracy here is CLC classification accuracy, not identity
verification performance; the output headers say so explicitly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .complexity import NgramModel
from .entropy_spectral import leakage_estimate
from .errors import InvalidResolutionList
from .events import Session, quantize_session
from .pipeline import analyze_session

CSV_HEADER = ["r_ms", "accuracy", "pooled_entropy_bits", "mi_proxy_bits"]


@dataclass(frozen=True)
class SweepRow:
    r_ms: int
    accuracy: float  # CLC classification accuracy, not identity EER
    pooled_entropy_bits: float
    mi_proxy_bits: float


def sweep(
    r_values,
    population: list[tuple[Session, str]],
    model: NgramModel | None = None,
    tau: float | None = None,
) -> list[SweepRow]:
    """One row per resolution over a labeled (session, label) population.

    ``r_values`` must be unique positive integers sorted ascending; labels
    are 'composition' or 'transcription'.
    """
    r_values = list(r_values)
    if not r_values:
        raise InvalidResolutionList("need at least one resolution")
    if any((not isinstance(r, int)) or isinstance(r, bool) or r < 1 for r in r_values):
        raise InvalidResolutionList(f"resolutions must be positive integers: {r_values}")
    if sorted(set(r_values)) != r_values:
        raise InvalidResolutionList(f"resolutions must be unique and ascending: {r_values}")
    if not population:
        raise InvalidResolutionList("population is empty")

    kwargs = {} if tau is None else {"tau": tau}
    rows = []
    for r in r_values:
        correct = 0
        for session, label in population:
            a = analyze_session(session, model=model, r=r, with_spectrum=False, **kwargs)
            correct += a.clc_report.verdict == label
        leak = leakage_estimate([quantize_session(s, r) for s, _ in population], r=r)
        rows.append(
            SweepRow(
                r_ms=int(r),
                accuracy=correct / len(population),
                pooled_entropy_bits=leak.pooled_entropy_bits,
                mi_proxy_bits=leak.mi_proxy_bits,
            )
        )
    return rows


def to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [row.r_ms, f"{row.accuracy:.6f}", f"{row.pooled_entropy_bits:.6f}",
             f"{row.mi_proxy_bits:.6f}"]
        )
    return buf.getvalue()
