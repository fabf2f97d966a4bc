"""cogsig: keystroke-timing evidence that a text was composed, not copied.

The toolkit measures the Cognitive Load Correlation (rank correlation
between per-word content complexity and the pause preceding each word),
segments writing phases, quantizes timing for privacy, synthesizes honest
and adversarial sessions, and emits tamper-evident evidence records.
"""

from .clc import ClcReport, classify, compute_clc, pair_latency_complexity, power
from .complexity import NgramModel, profile_document, surprisal, train_ngram
from .entropy_spectral import IkiHistogram, iki_entropy, leakage_estimate, spectral_slope
from .events import (
    IkiSeries,
    KeystrokeEvent,
    Session,
    compute_ikis,
    parse_log,
    quantize,
    quantize_session,
    reconstruct_text,
    serialize,
)
from .pipeline import analyze_session, report_dict
from .segmentation import detect_bursts, revision_stats, segment_phases
from .synth import SynthConfig, synth_composition, synth_forgery, synth_transcription
from .verify import (
    BaselineProfile,
    EvidenceRecord,
    build_evidence,
    calibrate_baseline,
    commit,
    consistency_check,
    verify_commitment,
)

__version__ = "0.1.0"
