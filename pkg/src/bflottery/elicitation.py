"""Recover interval utilities from three-way preference queries.

A session asks the decision maker to compare one fixed target set against a
sequence of reference gambles, each paying the best outcome with a known
chance ``u`` and the worst otherwise.  Every answer tightens one or both of
two brackets: one around the target's lower utility ``u_a`` and one around
its upper utility ``1 - v_a``.  Bisection drives both brackets below the
requested tolerance, so a full run needs at most ``2*ceil(log2(1/eps)) + 2``
queries.

Answer semantics against a reference gamble at level ``u``:

* ``target_preferred``   means ``u <= u_a``  (so also ``u <= 1 - v_a``),
* ``probe_preferred``    means ``u >= 1 - v_a``  (so also ``u >= u_a``),
* ``incomparable``       means ``u_a < u < 1 - v_a``.

At a boundary where both hold the target wins; synthetic responders below
follow the same convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import ceil, log2
from typing import Iterable, Mapping, Optional

from .errors import (
    InconsistentResponsesError,
    StaleQueryError,
    ValidationError,
)
from .lottery import ReferenceLottery
from .utility import ExplicitTable, UtilityAssessment

BRACKET_FUZZ = 1e-12


class DmResponse(str, Enum):
    TARGET_PREFERRED = "target_preferred"
    PROBE_PREFERRED = "probe_preferred"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Query:
    """One question: target set versus a reference gamble at ``probe_u``."""

    seq: int
    target: frozenset
    probe_u: float


def _entry(seq: int, probe_u: float, response: DmResponse) -> dict:
    return {"seq": seq, "probe_u": probe_u, "response": response.value}


class ElicitationSession:
    """Bisection dialogue for one target set.

    The session owns the query schedule.  ``next_query`` is idempotent: it
    keeps returning the same pending query until ``record`` answers it, which
    makes retries over a network safe.  ``record`` refuses answers that
    would make the transcript self-contradictory and leaves the state
    untouched, so the same query can be answered again.
    """

    def __init__(self, target: Iterable[str], epsilon: float = 0.005):
        target = frozenset(target)
        if not target:
            raise ValidationError("target set must not be empty")
        if not isinstance(epsilon, (int, float)) or not 0 < epsilon < 0.5:
            raise ValidationError(f"epsilon must lie in (0, 0.5), got {epsilon!r}")
        self.target = target
        self.epsilon = float(epsilon)
        self.u_lo, self.u_hi = 0.0, 1.0
        self.p_lo, self.p_hi = 0.0, 1.0
        self.transcript: list[dict] = []
        self._setters: dict[str, Optional[int]] = dict.fromkeys(
            ("u_lo", "u_hi", "p_lo", "p_hi")
        )
        self._pending: Optional[Query] = None
        self._seq = 0

    # ------------------------------------------------------------- schedule

    @property
    def done(self) -> bool:
        return (
            self.u_hi - self.u_lo <= self.epsilon
            and self.p_hi - self.p_lo <= self.epsilon
        )

    @property
    def max_queries(self) -> int:
        return 2 * ceil(log2(1.0 / self.epsilon)) + 2

    def next_query(self) -> Optional[Query]:
        if self._pending is not None:
            return self._pending
        if self.done:
            return None
        if self._seq == 0:
            probe = 0.0
        elif self._seq == 1:
            probe = 1.0
        elif self.u_hi - self.u_lo > self.epsilon:
            probe = (self.u_lo + self.u_hi) / 2.0
        else:
            probe = (self.p_lo + self.p_hi) / 2.0
        self._pending = Query(self._seq, self.target, probe)
        return self._pending

    # ------------------------------------------------------------- answers

    def record(self, seq: int, response: DmResponse | str) -> None:
        query = self._pending
        if query is None or seq != query.seq:
            expected = "none" if query is None else str(query.seq)
            raise StaleQueryError(f"expected answer to query {expected}, got {seq}")
        response = DmResponse(response)
        u = query.probe_u

        # Work out the tightened brackets first; commit only if they are
        # still an interval.  "raises" maps each bound to its new value and
        # remembers who moved it.
        new = {"u_lo": self.u_lo, "u_hi": self.u_hi,
               "p_lo": self.p_lo, "p_hi": self.p_hi}
        if response is DmResponse.TARGET_PREFERRED:
            moved = [("u_lo", max), ("p_lo", max)]
        elif response is DmResponse.PROBE_PREFERRED:
            moved = [("u_hi", min), ("p_hi", min)]
        else:
            moved = [("u_hi", min), ("p_lo", max)]
        setters = dict(self._setters)
        for bound, pick in moved:
            tightened = pick(new[bound], u)
            if tightened != new[bound]:
                setters[bound] = seq
            new[bound] = tightened

        for lo, hi in (("u_lo", "u_hi"), ("p_lo", "p_hi"), ("u_lo", "p_hi")):
            if new[lo] > new[hi] + BRACKET_FUZZ:
                entries = [_entry(seq, u, response)]
                for culprit in (setters[lo], setters[hi]):
                    if culprit is not None and culprit != seq:
                        entries.extend(
                            e for e in self.transcript if e["seq"] == culprit
                        )
                raise InconsistentResponsesError(
                    f"answer at probe {u:g} puts {lo}={new[lo]:g} above "
                    f"{hi}={new[hi]:g}",
                    entries=tuple(entries),
                )

        self.u_lo, self.u_hi = new["u_lo"], new["u_hi"]
        self.p_lo, self.p_hi = new["p_lo"], new["p_hi"]
        self._setters = setters
        self.transcript.append(_entry(seq, u, response))
        self._pending = None
        self._seq += 1

    # -------------------------------------------------------------- results

    def brackets(self) -> dict:
        return {
            "lower": (self.u_lo, self.u_hi),
            "upper": (self.p_lo, self.p_hi),
        }

    def recovered(self) -> ReferenceLottery:
        """Midpoint estimate once both brackets are tight enough."""
        if not self.done:
            raise ValidationError(
                "session is not finished; keep answering queries"
            )
        u = (self.u_lo + self.u_hi) / 2.0
        upper = (self.p_lo + self.p_hi) / 2.0
        if upper < u:
            # Only bracket noise can cross the midpoints; collapse to a
            # scalar attitude.
            u = upper = min(max((u + upper) / 2.0, 0.0), 1.0)
        return ReferenceLottery(u, 1.0 - upper, upper - u)

    # -------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        return {
            "target": sorted(self.target),
            "epsilon": self.epsilon,
            "brackets": {
                "u_lo": self.u_lo, "u_hi": self.u_hi,
                "p_lo": self.p_lo, "p_hi": self.p_hi,
            },
            "setters": dict(self._setters),
            "seq": self._seq,
            "transcript": list(self.transcript),
            "pending": None if self._pending is None else {
                "seq": self._pending.seq,
                "probe_u": self._pending.probe_u,
            },
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "ElicitationSession":
        try:
            session = cls(payload["target"], payload["epsilon"])
            b = payload["brackets"]
            session.u_lo, session.u_hi = float(b["u_lo"]), float(b["u_hi"])
            session.p_lo, session.p_hi = float(b["p_lo"]), float(b["p_hi"])
            session._setters = {
                k: (None if v is None else int(v))
                for k, v in payload["setters"].items()
            }
            session._seq = int(payload["seq"])
            session.transcript = [
                _entry(int(e["seq"]), float(e["probe_u"]), DmResponse(e["response"]))
                for e in payload["transcript"]
            ]
            pending = payload["pending"]
            if pending is not None:
                session._pending = Query(
                    int(pending["seq"]), session.target, float(pending["probe_u"])
                )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed session payload: {exc}") from exc
        return session


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    lower_bracket: tuple[float, float]
    upper_bracket: tuple[float, float]
    conflicts: tuple[dict, ...]


def check_consistency(transcript: Iterable[Mapping]) -> ConsistencyReport:
    """Replay a transcript and report whether any attitude explains it.

    Unlike :meth:`ElicitationSession.record` this never raises; conflicting
    entries are collected so a caller can show them to the decision maker.
    """
    u_lo, u_hi = 0.0, 1.0
    p_lo, p_hi = 0.0, 1.0
    setters: dict[str, Optional[dict]] = dict.fromkeys(
        ("u_lo", "u_hi", "p_lo", "p_hi")
    )
    conflicts: list[dict] = []

    def note(*entries):
        for e in entries:
            if e is not None and e not in conflicts:
                conflicts.append(dict(e))

    for raw in transcript:
        entry = _entry(
            int(raw["seq"]), float(raw["probe_u"]), DmResponse(raw["response"])
        )
        u = entry["probe_u"]
        response = DmResponse(entry["response"])
        if response is DmResponse.TARGET_PREFERRED:
            moves = [("u_lo", max), ("p_lo", max)]
        elif response is DmResponse.PROBE_PREFERRED:
            moves = [("u_hi", min), ("p_hi", min)]
        else:
            moves = [("u_hi", min), ("p_lo", max)]
        bounds = {"u_lo": u_lo, "u_hi": u_hi, "p_lo": p_lo, "p_hi": p_hi}
        for bound, pick in moves:
            if pick(bounds[bound], u) != bounds[bound]:
                bounds[bound] = pick(bounds[bound], u)
                setters[bound] = entry
        for lo, hi in (("u_lo", "u_hi"), ("p_lo", "p_hi"), ("u_lo", "p_hi")):
            if bounds[lo] > bounds[hi] + BRACKET_FUZZ:
                note(setters[lo], setters[hi], entry)
        u_lo, u_hi = bounds["u_lo"], bounds["u_hi"]
        p_lo, p_hi = bounds["p_lo"], bounds["p_hi"]

    return ConsistencyReport(
        consistent=not conflicts,
        lower_bracket=(u_lo, u_hi),
        upper_bracket=(p_lo, p_hi),
        conflicts=tuple(conflicts),
    )


@dataclass(frozen=True)
class SyntheticDm:
    """Scripted decision maker holding a true attitude toward one set."""

    u: float
    v: float

    def answer(self, query: Query) -> DmResponse:
        if query.probe_u <= self.u:
            return DmResponse.TARGET_PREFERRED
        if query.probe_u >= 1.0 - self.v:
            return DmResponse.PROBE_PREFERRED
        return DmResponse.INCOMPARABLE


def run_synthetic(
    dm: SyntheticDm, target: Iterable[str], epsilon: float = 0.005
) -> ElicitationSession:
    session = ElicitationSession(target, epsilon)
    while (query := session.next_query()) is not None:
        session.record(query.seq, dm.answer(query))
    return session


def recover_table(
    truth: UtilityAssessment, epsilon: float = 0.005
) -> UtilityAssessment:
    """Re-elicit every non-singleton subset of a known assessment.

    Singletons are fixed by their utilities, so only the genuinely
    ambiguous sets get a dialogue.  Mostly useful for demos and for
    validating the query schedule end to end.
    """
    labels = truth.outcomes.frame.labels
    entries = {}
    for bits in range(1, 1 << len(labels)):
        if bits.bit_count() < 2:
            continue
        members = frozenset(l for i, l in enumerate(labels) if bits >> i & 1)
        true_triple = truth.focal_utility(members)
        dm = SyntheticDm(true_triple.u, true_triple.v)
        got = run_synthetic(dm, members, epsilon).recovered()
        entries[members] = (got.u, got.v, got.w)
    return UtilityAssessment(
        truth.outcomes,
        dict(truth.singleton_utilities),
        ExplicitTable(entries),
        normalized=truth.normalized,
    )


def solve_indices(
    recovered: ReferenceLottery, u_best: float = 1.0, u_worst: float = 0.0
) -> tuple[float, float]:
    """Back out the pessimism pair (alpha, beta) from a recovered triple.

    ``u = alpha*u_worst + (1-alpha)*u_best`` and likewise for the upper
    bound with beta.  The span must be positive and the recovered values
    must sit inside it, up to bisection noise.
    """
    span = u_best - u_worst
    if not span > 0:
        raise ValidationError(
            f"need u_best > u_worst to invert, got span {span:g}"
        )
    upper = 1.0 - recovered.v
    alpha = (u_best - recovered.u) / span
    beta = (u_best - upper) / span
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not -1e-9 <= value <= 1.0 + 1e-9:
            raise ValidationError(
                f"{name}={value:g} falls outside [0, 1]; the recovered "
                f"utilities do not fit between u_worst and u_best"
            )
    alpha = min(max(alpha, 0.0), 1.0)
    beta = min(max(beta, 0.0), 1.0)
    return alpha, beta
