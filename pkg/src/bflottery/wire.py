"""JSON shapes for frames, mass assignments, lotteries, and assessments.

Sets travel as lists of outcome labels; any order is accepted on the way in,
frame order is used on the way out.  A mass assignment may carry its frame
inline (``{"id": ..., "labels": [...]}``) or refer to a known one by id
string.  Each parser names the offending spot in its error message, since
payloads usually arrive over the wire from someone else's code.
"""

from __future__ import annotations

from typing import Mapping, Optional, Union

from .bpa import Bpa
from .errors import ValidationError
from .frames import Frame, Subset
from .lottery import (
    BfLottery,
    CompoundLottery,
    OutcomeOrder,
    ReferenceLottery,
)
from .utility import (
    ConstantIndex,
    ExplicitTable,
    PairwiseIndex,
    UtilityAssessment,
    UtilityInterval,
)

FrameRegistry = Mapping[str, Frame]


def _require(payload, key: str, where: str):
    if not isinstance(payload, Mapping):
        raise ValidationError(
            f"{where}: expected an object, got {type(payload).__name__}"
        )
    if key not in payload:
        raise ValidationError(f"{where}: missing key {key!r}")
    return payload[key]


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _labels(value, where: str) -> list[str]:
    if isinstance(value, str) or not isinstance(value, (list, tuple)):
        raise ValidationError(f"{where}: expected a list of labels")
    out = []
    for i, label in enumerate(value):
        if not isinstance(label, str):
            raise ValidationError(f"{where}[{i}]: labels must be strings")
        out.append(label)
    if len(set(out)) != len(out):
        raise ValidationError(f"{where}: duplicate labels")
    return out


def _members(frame: Frame, value, where: str) -> Subset:
    labels = _labels(value, where)
    try:
        return frame.subset(labels)
    except (ValidationError, KeyError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


# ----------------------------------------------------------------- frames


def frame_to_dict(frame: Frame) -> dict:
    return {"id": frame.id, "labels": list(frame.labels)}


def frame_from_dict(payload, where: str = "frame") -> Frame:
    id_ = _require(payload, "id", where)
    if not isinstance(id_, str):
        raise ValidationError(f"{where}.id: expected a string")
    labels = _labels(_require(payload, "labels", where), f"{where}.labels")
    return Frame(id_, tuple(labels))


def _resolve_frame(ref, registry: Optional[FrameRegistry], where: str) -> Frame:
    if isinstance(ref, str):
        if registry is None or ref not in registry:
            raise ValidationError(f"{where}: unknown frame id {ref!r}")
        return registry[ref]
    return frame_from_dict(ref, where)


# ------------------------------------------------------- mass assignments


def bpa_to_dict(m: Bpa, *, frame_ref: bool = False) -> dict:
    """``frame_ref=True`` names the frame by id instead of embedding it."""
    return {
        "frame": m.frame.id if frame_ref else frame_to_dict(m.frame),
        "focal": [
            {"set": list(subset.members()), "mass": mass}
            for subset, mass in m.focal()
        ],
    }


def bpa_from_dict(
    payload,
    registry: Optional[FrameRegistry] = None,
    *,
    frame: Optional[Frame] = None,
    where: str = "bpa",
) -> Bpa:
    """Parse a mass assignment, resolving its frame if given by id.

    ``frame`` supplies a default when the payload has no "frame" key, and
    is checked against the payload's frame when both are present.
    """
    if isinstance(payload, Mapping) and "frame" in payload:
        local = dict(registry) if registry else {}
        if frame is not None:
            local.setdefault(frame.id, frame)
        parsed = _resolve_frame(payload["frame"], local, f"{where}.frame")
        if frame is not None and parsed != frame:
            raise ValidationError(
                f"{where}.frame: got {parsed.id!r} where {frame.id!r} was required"
            )
        frame = parsed
    if frame is None:
        raise ValidationError(f"{where}: missing key 'frame'")
    rows = _require(payload, "focal", where)
    if not isinstance(rows, (list, tuple)):
        raise ValidationError(f"{where}.focal: expected a list")
    masses: dict[Subset, float] = {}
    for i, row in enumerate(rows):
        spot = f"{where}.focal[{i}]"
        subset = _members(frame, _require(row, "set", spot), f"{spot}.set")
        if subset in masses:
            raise ValidationError(f"{spot}.set: duplicate focal set")
        masses[subset] = _num(_require(row, "mass", spot), f"{spot}.mass")
    try:
        return Bpa(frame, masses)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------- lotteries


def order_to_dict(order: OutcomeOrder) -> dict:
    return {"frame": frame_to_dict(order.frame), "ranking": list(order.ranking)}


def order_from_dict(
    payload, registry: Optional[FrameRegistry] = None, where: str = "outcomes"
) -> OutcomeOrder:
    frame = _resolve_frame(_require(payload, "frame", where), registry, f"{where}.frame")
    ranking = _labels(_require(payload, "ranking", where), f"{where}.ranking")
    try:
        return OutcomeOrder(frame, tuple(ranking))
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def lottery_to_dict(lot: BfLottery) -> dict:
    return {
        "outcomes": order_to_dict(lot.outcomes),
        "bpa": bpa_to_dict(lot.m, frame_ref=True),
    }


def lottery_from_dict(
    payload, registry: Optional[FrameRegistry] = None, where: str = "lottery"
) -> BfLottery:
    order = order_from_dict(_require(payload, "outcomes", where), registry, f"{where}.outcomes")
    m = bpa_from_dict(
        _require(payload, "bpa", where),
        registry,
        frame=order.frame,
        where=f"{where}.bpa",
    )
    return BfLottery(order, m)


def compound_to_dict(compound: CompoundLottery) -> dict:
    return {
        "inner": [lottery_to_dict(lot) for lot in compound.inner],
        "outer": bpa_to_dict(compound.outer),
    }


def compound_from_dict(
    payload, registry: Optional[FrameRegistry] = None, where: str = "compound"
) -> CompoundLottery:
    rows = _require(payload, "inner", where)
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ValidationError(f"{where}.inner: expected a non-empty list")
    inner = tuple(
        lottery_from_dict(row, registry, f"{where}.inner[{i}]")
        for i, row in enumerate(rows)
    )
    outer = bpa_from_dict(_require(payload, "outer", where), registry, where=f"{where}.outer")
    try:
        return CompoundLottery(inner, outer)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


AnyLottery = Union[BfLottery, CompoundLottery]


def any_lottery_from_dict(
    payload, registry: Optional[FrameRegistry] = None, where: str = "lottery"
) -> AnyLottery:
    """A payload with an "inner" key is a compound, otherwise a plain lottery."""
    if isinstance(payload, Mapping) and "inner" in payload:
        return compound_from_dict(payload, registry, where)
    return lottery_from_dict(payload, registry, where)


def any_lottery_to_dict(lot: AnyLottery) -> dict:
    if isinstance(lot, CompoundLottery):
        return compound_to_dict(lot)
    return lottery_to_dict(lot)


# -------------------------------------------------------------- assessments


def _ordered_sets(frame: Frame, sets):
    def key(members: frozenset):
        return (len(members), sorted(frame.index(l) for l in members))

    return sorted(sets, key=key)


def assessment_to_dict(a: UtilityAssessment) -> dict:
    frame = a.outcomes.frame
    model = a.model
    if isinstance(model, ExplicitTable):
        entries = []
        for members in _ordered_sets(frame, model.entries):
            u, v, w = model.entries[members]
            ordered = sorted(members, key=frame.index)
            entries.append({"set": ordered, "u": u, "v": v, "w": w})
        kind: dict = {"kind": "table", "entries": entries}
    elif isinstance(model, PairwiseIndex):
        pairs = []
        for worst, best in sorted(
            model.indices, key=lambda p: (frame.index(p[0]), frame.index(p[1]))
        ):
            alpha, beta = model.indices[(worst, best)]
            pairs.append({"worst": worst, "best": best, "alpha": alpha, "beta": beta})
        kind = {"kind": "pairwise_index", "pairs": pairs}
    elif isinstance(model, ConstantIndex):
        kind = {"kind": "constant_index", "alpha": model.alpha, "beta": model.beta}
    else:
        raise ValidationError(f"cannot serialize model {type(model).__name__}")
    return {
        "outcomes": order_to_dict(a.outcomes),
        "singleton_utilities": {
            label: a.singleton_utilities[label] for label in frame.labels
        },
        "model": kind,
        "normalized": a.normalized,
    }


def _model_from_dict(payload, where: str):
    kind = _require(payload, "kind", where)
    if kind == "table":
        rows = _require(payload, "entries", where)
        if not isinstance(rows, (list, tuple)):
            raise ValidationError(f"{where}.entries: expected a list")
        entries = {}
        for i, row in enumerate(rows):
            spot = f"{where}.entries[{i}]"
            members = frozenset(_labels(_require(row, "set", spot), f"{spot}.set"))
            if members in entries:
                raise ValidationError(f"{spot}.set: duplicate entry")
            entries[members] = tuple(
                _num(_require(row, field, spot), f"{spot}.{field}")
                for field in ("u", "v", "w")
            )
        return ExplicitTable(entries)
    if kind == "pairwise_index":
        rows = _require(payload, "pairs", where)
        if not isinstance(rows, (list, tuple)):
            raise ValidationError(f"{where}.pairs: expected a list")
        pairs = {}
        for i, row in enumerate(rows):
            spot = f"{where}.pairs[{i}]"
            worst = _require(row, "worst", spot)
            best = _require(row, "best", spot)
            if not isinstance(worst, str) or not isinstance(best, str):
                raise ValidationError(f"{spot}: outcome labels must be strings")
            if (worst, best) in pairs:
                raise ValidationError(f"{spot}: duplicate pair")
            pairs[(worst, best)] = (
                _num(_require(row, "alpha", spot), f"{spot}.alpha"),
                _num(_require(row, "beta", spot), f"{spot}.beta"),
            )
        return PairwiseIndex(pairs)
    if kind == "constant_index":
        return ConstantIndex(
            _num(_require(payload, "alpha", where), f"{where}.alpha"),
            _num(_require(payload, "beta", where), f"{where}.beta"),
        )
    raise ValidationError(f"{where}.kind: unknown model kind {kind!r}")


def assessment_from_dict(
    payload, registry: Optional[FrameRegistry] = None, where: str = "assessment"
) -> UtilityAssessment:
    order = order_from_dict(
        _require(payload, "outcomes", where), registry, f"{where}.outcomes"
    )
    raw = _require(payload, "singleton_utilities", where)
    if not isinstance(raw, Mapping):
        raise ValidationError(f"{where}.singleton_utilities: expected an object")
    singles = {
        str(label): _num(value, f"{where}.singleton_utilities[{label!r}]")
        for label, value in raw.items()
    }
    model = _model_from_dict(_require(payload, "model", where), f"{where}.model")
    normalized = payload.get("normalized", True)
    if not isinstance(normalized, bool):
        raise ValidationError(f"{where}.normalized: expected true or false")
    try:
        return UtilityAssessment(order, singles, model, normalized=normalized)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


# ------------------------------------------------------------------ results


def reference_to_dict(triple: ReferenceLottery) -> dict:
    return {"u": triple.u, "v": triple.v, "w": triple.w}


def interval_to_dict(interval: UtilityInterval) -> dict:
    return {"lower": interval.lo, "upper": interval.hi}
