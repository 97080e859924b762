"""Randomized labeling trial loop: issue trials, accept responses, persist records.

A trial shows a uniformly drawn validation image at a uniformly drawn width
in 1..28.  Responses are selections in {-1, 0..9}; -1 ("can't recognize")
counts as an error everywhere downstream.  Records go to an append-only
line-delimited JSON log, one complete line per record, which is the sole
source of truth for analytics.
"""

import json
import random
import threading
import time
import uuid
import warnings
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .dataset import ExampleSet, sample_example
from .errors import (
    DomainError,
    DuplicateResponse,
    InvalidSelection,
    LogParseError,
    UnknownTrial,
)
from .resample import count_object_pixels, downsample_area

__all__ = [
    "LOG_FIELDS",
    "Trial",
    "TrialRecord",
    "TrialRunner",
    "load_log",
    "make_trial",
]

RESOLUTION_MIN = 1
RESOLUTION_MAX = 28
SELECTION_MIN = -1
SELECTION_MAX = 9
DEFAULT_PENDING_TIMEOUT_S = 15 * 60.0

LOG_FIELDS = (
    "trial_id",
    "session_id",
    "ts_utc",
    "dataset_index",
    "true_label",
    "resolution",
    "object_pixels",
    "selection",
    "elapsed_ms",
    "correct",
)


@dataclass(frozen=True)
class Trial:
    """A pending presentation; the true label stays server-side."""

    trial_id: str
    session_id: str
    dataset_index: int
    true_label: int
    resolution: int
    object_pixels: int
    issued_at: str  # ISO 8601 UTC


@dataclass(frozen=True)
class TrialRecord:
    """One answered trial, exactly as persisted in the log."""

    trial_id: str
    session_id: str
    ts_utc: str
    dataset_index: int
    true_label: int
    resolution: int
    object_pixels: int
    selection: int
    elapsed_ms: float
    correct: bool

    def to_json(self) -> str:
        payload = asdict(self)
        return json.dumps({name: payload[name] for name in LOG_FIELDS})

    @classmethod
    def from_json(cls, line: str) -> "TrialRecord":
        payload = json.loads(line)
        if not isinstance(payload, dict) or set(payload) != set(LOG_FIELDS):
            raise ValueError(f"record fields {sorted(payload)} != {sorted(LOG_FIELDS)}")
        record = cls(**payload)
        record.validate()
        return record

    def validate(self) -> None:
        if not RESOLUTION_MIN <= self.resolution <= RESOLUTION_MAX:
            raise ValueError(f"resolution {self.resolution} outside [1, 28]")
        if not 0 <= self.true_label <= 9:
            raise ValueError(f"true_label {self.true_label} outside 0..9")
        if not SELECTION_MIN <= self.selection <= SELECTION_MAX:
            raise ValueError(f"selection {self.selection} outside -1..9")
        if not 0 <= self.object_pixels <= self.resolution**2:
            raise ValueError(
                f"object_pixels {self.object_pixels} outside [0, {self.resolution**2}]"
            )
        if self.elapsed_ms < 0:
            raise ValueError(f"elapsed_ms {self.elapsed_ms} negative")
        if self.correct != (self.selection == self.true_label):
            raise ValueError("correct flag inconsistent with selection and true_label")


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def make_trial(
    split: ExampleSet,
    rng: random.Random,
    session_id: str,
) -> tuple[Trial, np.ndarray]:
    """Draw one randomized trial and its display image.

    The example index and the target width are drawn independently and
    uniformly; the display image is the original down-sampled to that width.
    Given the same seeded rng the (dataset_index, resolution) sequence is
    reproducible; trial ids and timestamps are not part of that contract.
    """
    example = sample_example(split, rng)
    resolution = rng.randint(RESOLUTION_MIN, RESOLUTION_MAX)
    display = downsample_area(example.image, resolution)
    trial = Trial(
        trial_id=uuid.uuid4().hex,
        session_id=session_id,
        dataset_index=example.dataset_index,
        true_label=example.label,
        resolution=resolution,
        object_pixels=count_object_pixels(display),
        issued_at=_utc_now(),
    )
    return trial, display


class TrialRunner:
    """Owns the pending-trial registry and the append-only record log.

    Many sessions may generate and answer trials concurrently; per-session
    random streams are derived from the base seed so one labeler's sequence
    is reproducible and independent of the others.  Pending trials expire
    after pending_timeout_s and are dropped without a record.
    """

    def __init__(
        self,
        split: ExampleSet,
        log_path: str | Path,
        seed: int | None = None,
        pending_timeout_s: float = DEFAULT_PENDING_TIMEOUT_S,
    ):
        self.split = split
        self.log_path = Path(log_path)
        self._seed = seed
        self._timeout = pending_timeout_s
        self._lock = threading.Lock()
        self._log_lock = threading.Lock()
        self._pending: dict[str, tuple[Trial, float]] = {}
        self._answered: set[str] = set()
        self._rngs: dict[str, random.Random] = {}

    def _session_rng(self, session_id: str) -> random.Random:
        rng = self._rngs.get(session_id)
        if rng is None:
            if self._seed is None:
                rng = random.Random()
            else:
                rng = random.Random(f"{self._seed}:{session_id}")
            self._rngs[session_id] = rng
        return rng

    def _prune_expired(self, now: float) -> None:
        expired = [tid for tid, (_, deadline) in self._pending.items() if deadline < now]
        for tid in expired:
            del self._pending[tid]

    def pending_count(self) -> int:
        with self._lock:
            return len(self._pending)

    def next_trial(self, session_id: str) -> tuple[Trial, np.ndarray]:
        """Issue a new pending trial for the given session."""
        with self._lock:
            rng = self._session_rng(session_id)
            trial, display = make_trial(self.split, rng, session_id)
            self._prune_expired(time.monotonic())
            self._pending[trial.trial_id] = (trial, time.monotonic() + self._timeout)
        return trial, display

    def record_response(self, trial_id: str, selection: int, elapsed_ms: float) -> TrialRecord:
        """Answer a pending trial and append the record to the log exactly once.

        Raises:
            InvalidSelection: selection outside {-1, 0..9}.
            DomainError: negative elapsed_ms.
            DuplicateResponse: the trial already has a record.
            UnknownTrial: the id is not pending (never issued or expired).
        """
        if not isinstance(selection, int) or isinstance(selection, bool):
            raise InvalidSelection(f"selection must be an integer, got {selection!r}")
        if not SELECTION_MIN <= selection <= SELECTION_MAX:
            raise InvalidSelection(f"selection {selection} outside -1..9")
        if not isinstance(elapsed_ms, (int, float)) or isinstance(elapsed_ms, bool):
            raise DomainError(f"elapsed_ms must be a number, got {elapsed_ms!r}")
        if elapsed_ms < 0:
            raise DomainError(f"elapsed_ms {elapsed_ms} negative")
        with self._lock:
            if trial_id in self._answered:
                raise DuplicateResponse(f"trial {trial_id} already answered")
            self._prune_expired(time.monotonic())
            entry = self._pending.pop(trial_id, None)
            if entry is None:
                raise UnknownTrial(f"trial {trial_id} is not pending")
            trial = entry[0]
            record = TrialRecord(
                trial_id=trial.trial_id,
                session_id=trial.session_id,
                ts_utc=trial.issued_at,
                dataset_index=trial.dataset_index,
                true_label=trial.true_label,
                resolution=trial.resolution,
                object_pixels=trial.object_pixels,
                selection=selection,
                elapsed_ms=elapsed_ms,
                correct=selection == trial.true_label,
            )
            self._append(record)
            self._answered.add(trial_id)
        return record

    def _append(self, record: TrialRecord) -> None:
        # One complete line per write call, flushed, under a dedicated lock:
        # readers never observe a torn record.
        line = record.to_json() + "\n"
        with self._log_lock:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()

    def snapshot_records(self) -> list[TrialRecord]:
        """All records currently in the log, read under the writer lock."""
        with self._log_lock:
            if not self.log_path.exists():
                return []
            return load_log(self.log_path)


def load_log(path: str | Path, strict: bool = True) -> list[TrialRecord]:
    """Read a trial log back into records, in append order.

    With strict=True the first malformed line raises LogParseError carrying
    its line number; with strict=False malformed lines are skipped and each
    is reported as a UserWarning with its line number.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(TrialRecord.from_json(line))
            except (json.JSONDecodeError, TypeError, ValueError) as exc:
                error = LogParseError(number, str(exc))
                if strict:
                    raise error from exc
                warnings.warn(f"skipping malformed trial-log {error}", stacklevel=2)
    return records
