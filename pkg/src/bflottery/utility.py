"""Interval-valued utilities for set-valued lotteries.

A utility assessment fixes a cardinal scale on single outcomes (best 1,
worst 0) and, for each focal outcome set, a reference triple (u, v, w):
the decision maker holds the set equivalent to a two-point lottery putting
mass u on the best outcome overall, v on the worst, and w on the undecided
pair.  Any lottery then reduces to one such triple by linearity, and its
worth is the interval [u, 1 - v].

Triples can be given three ways: an explicit table per focal set, a
pessimism/optimism index pair per (worst, best) outcome pair, or one
constant index pair.  Under an index pair,

    u_a     = alpha * u_worst(a) + (1 - alpha) * u_best(a)
    1 - v_a = beta  * u_worst(a) + (1 - beta)  * u_best(a)

with 0 <= beta <= alpha <= 1, so alpha = beta = 1 collapses the interval to
the lower (min-based) Choquet value, alpha = beta = 0 to the upper, and
(alpha, beta) = (1, 0) spreads it across the full Choquet envelope.

Comparisons follow the interval order: L is at least as good as L' when
u >= u' and v <= v'.  Ties at 1e-9 count as equal; strictly nested
intervals are incomparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Union

from .bpa import Bpa, combine_dempster, conditional_embedding, marginalize
from .errors import ValidationError
from .frames import Frame, ProductFrame, Subset
from .lottery import BfLottery, OutcomeOrder, ReferenceLottery

INDIFFERENCE_TOLERANCE = 1e-9
ANCHOR_TOLERANCE = 1e-9
JAFFRAY_W_TOLERANCE = 1e-12


class PreferenceVerdict(str, Enum):
    """Outcome of comparing two lotteries under an interval order."""

    STRICTLY_PREFERRED = "strictly_preferred"
    STRICTLY_DISPREFERRED = "strictly_dispreferred"
    INDIFFERENT = "indifferent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class UtilityInterval:
    """A closed interval of utility values."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValidationError("interval endpoints must be finite")
        if self.lo > self.hi + 1e-12:
            raise ValidationError(f"interval [{self.lo!r}, {self.hi!r}] is inverted")

    @property
    def width(self) -> float:
        return max(0.0, self.hi - self.lo)

    def __contains__(self, value: float) -> bool:
        return self.lo - 1e-12 <= value <= self.hi + 1e-12


@dataclass(frozen=True)
class ExplicitTable:
    """Reference triples listed directly per outcome set.

    Keys are frozensets of outcome labels.  Only the sets that actually turn
    up as focal sets need entries; singletons never need one because their
    triple is forced by the singleton utilities.
    """

    entries: Mapping[frozenset, tuple[float, float, float]]

    def __post_init__(self) -> None:
        fixed = {
            frozenset(key): (float(u), float(v), float(w))
            for key, (u, v, w) in dict(self.entries).items()
        }
        object.__setattr__(self, "entries", fixed)

    kind = "table"


@dataclass(frozen=True)
class PairwiseIndex:
    """Index pairs keyed by the (worst, best) outcome pair of a set."""

    indices: Mapping[tuple[str, str], tuple[float, float]]

    def __post_init__(self) -> None:
        fixed = {}
        for (worst, best), (alpha, beta) in dict(self.indices).items():
            _check_indices(alpha, beta)
            fixed[(worst, best)] = (float(alpha), float(beta))
        object.__setattr__(self, "indices", fixed)

    kind = "pairwise_index"


@dataclass(frozen=True)
class ConstantIndex:
    """One pessimism/optimism index pair used for every outcome set."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        _check_indices(self.alpha, self.beta)

    kind = "constant_index"


def _check_indices(alpha: float, beta: float) -> None:
    if not (0.0 <= beta <= alpha <= 1.0):
        raise ValidationError(
            f"indices must satisfy 0 <= beta <= alpha <= 1, got "
            f"alpha={alpha!r}, beta={beta!r}"
        )


Model = Union[ExplicitTable, PairwiseIndex, ConstantIndex]


class UtilityAssessment:
    """Singleton utilities plus a rule for the triples of larger sets.

    In normalized form the best outcome has utility 1, the worst 0, and the
    scale decreases weakly along the ranking.  ``affine_transform`` returns
    assessments in unnormalized form, where those anchor checks are off but
    every comparison still behaves identically.
    """

    __slots__ = ("outcomes", "singleton_utilities", "model", "normalized", "_triples")

    def __init__(
        self,
        outcomes: OutcomeOrder,
        singleton_utilities: Mapping[str, float],
        model: Model,
        normalized: bool = True,
    ) -> None:
        self.outcomes = outcomes
        self.singleton_utilities = {
            lab: float(u) for lab, u in dict(singleton_utilities).items()
        }
        self.model = model
        self.normalized = bool(normalized)
        self._triples: dict[int, ReferenceLottery] = {}
        self._validate()

    def _validate(self) -> None:
        frame = self.outcomes.frame
        missing = set(frame.labels) - set(self.singleton_utilities)
        if missing:
            raise ValidationError(f"no utility for outcomes {sorted(missing)}")
        extra = set(self.singleton_utilities) - set(frame.labels)
        if extra:
            raise ValidationError(f"utilities for unknown outcomes {sorted(extra)}")
        for lab, u in self.singleton_utilities.items():
            if not math.isfinite(u):
                raise ValidationError(f"utility of {lab!r} must be finite")
        ranked = [self.singleton_utilities[lab] for lab in self.outcomes.ranking]
        for better, worse in zip(ranked, ranked[1:]):
            if better < worse - ANCHOR_TOLERANCE:
                raise ValidationError(
                    "singleton utilities must decrease weakly along the ranking"
                )
        if self.normalized:
            if abs(ranked[0] - 1.0) > ANCHOR_TOLERANCE:
                raise ValidationError("the best outcome must have utility 1")
            if abs(ranked[-1]) > ANCHOR_TOLERANCE:
                raise ValidationError("the worst outcome must have utility 0")
        if isinstance(self.model, ExplicitTable):
            self._validate_table()
        elif isinstance(self.model, PairwiseIndex):
            for worst, best in self.model.indices:
                frame.index(worst)
                frame.index(best)

    def _validate_table(self) -> None:
        frame = self.outcomes.frame
        for key, (u, v, w) in self.model.entries.items():
            subset = frame.subset(key)
            if subset.is_empty:
                raise ValidationError("the empty set cannot be assessed")
            total = math.fsum((u, v, w))
            if abs(total - 1.0) > ANCHOR_TOLERANCE:
                raise ValidationError(
                    f"triple for {sorted(key)} sums to {total!r}, expected 1"
                )
            if self.normalized and (
                min(u, v, w) < -ANCHOR_TOLERANCE or max(u, v, w) > 1 + ANCHOR_TOLERANCE
            ):
                raise ValidationError(
                    f"triple for {sorted(key)} leaves the unit simplex"
                )
            if w < -ANCHOR_TOLERANCE:
                raise ValidationError(f"triple for {sorted(key)} has negative w")
            if len(key) == 1:
                (label,) = key
                u_o = self.singleton_utilities[label]
                if abs(u - u_o) > ANCHOR_TOLERANCE or abs(w) > ANCHOR_TOLERANCE:
                    raise ValidationError(
                        f"table entry for singleton {label!r} disagrees with its "
                        "singleton utility"
                    )

    def focal_utility(self, subset) -> ReferenceLottery:
        """The reference triple the assessment assigns to an outcome set.

        Singletons always get (u, 1 - u, 0) from their singleton utility.
        """
        frame = self.outcomes.frame
        if isinstance(subset, Subset):
            if subset.frame != frame:
                raise ValidationError("subset is not on the assessed outcome frame")
            bits = subset.bits
        elif isinstance(subset, int):
            bits = Subset(frame, subset).bits
        else:
            bits = frame.subset(subset).bits
        if bits == 0:
            raise ValidationError("the empty set has no utility triple")
        cached = self._triples.get(bits)
        if cached is None:
            cached = self._triple_for(bits)
            self._triples[bits] = cached
        return cached

    def _triple_for(self, bits: int) -> ReferenceLottery:
        frame = self.outcomes.frame
        if bits.bit_count() == 1:
            label = frame.labels[bits.bit_length() - 1]
            u = self.singleton_utilities[label]
            return ReferenceLottery(u, 1.0 - u, 0.0)
        subset = Subset(frame, bits)
        if isinstance(self.model, ExplicitTable):
            key = frozenset(subset.members())
            try:
                u, v, w = self.model.entries[key]
            except KeyError:
                raise ValidationError(
                    f"no assessed triple for outcome set {sorted(key)}"
                ) from None
            return ReferenceLottery(u, v, w)
        worst = self.outcomes.worst_of(subset)
        best = self.outcomes.best_of(subset)
        if isinstance(self.model, PairwiseIndex):
            try:
                alpha, beta = self.model.indices[(worst, best)]
            except KeyError:
                raise ValidationError(
                    f"no index pair assessed for (worst={worst!r}, best={best!r})"
                ) from None
        else:
            alpha, beta = self.model.alpha, self.model.beta
        u_w = self.singleton_utilities[worst]
        u_b = self.singleton_utilities[best]
        u = alpha * u_w + (1.0 - alpha) * u_b
        upper = beta * u_w + (1.0 - beta) * u_b
        return ReferenceLottery(u, 1.0 - upper, upper - u)


# --------------------------------------------------------------- reduction


def reduce_to_reference(lottery: BfLottery, assessment: UtilityAssessment) -> ReferenceLottery:
    """Reduce a lottery to its equivalent two-point reference lottery.

    Closed form: each aggregate component is the mass-weighted sum of the
    corresponding component over focal sets.
    """
    _check_pair(lottery, assessment)
    triples = [
        (mass, assessment.focal_utility(bits))
        for bits, mass in lottery.m.focal_bits().items()
    ]
    return ReferenceLottery(
        math.fsum(mass * t.u for mass, t in triples),
        math.fsum(mass * t.v for mass, t in triples),
        math.fsum(mass * t.w for mass, t in triples),
    )


def reduce_to_reference_oracle(
    lottery: BfLottery, assessment: UtilityAssessment
) -> ReferenceLottery:
    """Reduce by the explicit evidential construction instead of closed form.

    Builds a frame with one element per focal set, a Bayesian BPA assigning
    each element that set's mass, embeds each set's reference triple as a
    conditional BPA over the (best, worst) pair, combines everything, and
    marginalizes onto the pair.  Slow but direct; kept as a diagnostics
    path for cross-checking :func:`reduce_to_reference`.

    Requires a normalized assessment, since triples act as masses here.
    """
    _check_pair(lottery, assessment)
    if not assessment.normalized:
        raise ValidationError("the construction needs a normalized assessment")
    order = assessment.outcomes
    focals = list(lottery.m.focal_bits().items())
    tags = Frame("focal-sets", tuple(f"a{i + 1}" for i in range(len(focals))))
    pair = Frame("reference-pair", (order.best, order.worst))
    joint = ProductFrame((("tag", tags), ("ref", pair)))
    mixture = Bpa(
        tags, {tags.singleton(f"a{i + 1}"): mass for i, (_, mass) in enumerate(focals)}
    )
    parts = []
    for i, (bits, _) in enumerate(focals):
        t = assessment.focal_utility(bits)
        cond = Bpa(
            pair,
            {
                pair.singleton(order.best): t.u,
                pair.singleton(order.worst): t.v,
                pair.full(): t.w,
            },
        )
        parts.append(
            conditional_embedding(cond, joint, given="tag", value=f"a{i + 1}", target="ref")
        )
    joined = combine_dempster(mixture, *parts)
    reduced = marginalize(joined.bpa, ["ref"])
    return ReferenceLottery(
        reduced.mass(pair.singleton(order.best)),
        reduced.mass(pair.singleton(order.worst)),
        reduced.mass(pair.full()),
    )


def _check_pair(lottery: BfLottery, assessment: UtilityAssessment) -> None:
    if lottery.outcomes != assessment.outcomes:
        raise ValidationError(
            "lottery and assessment describe different outcome orders"
        )


# ------------------------------------------------------------- evaluation


def interval_utility(lottery: BfLottery, assessment: UtilityAssessment) -> UtilityInterval:
    """The utility interval [u, 1 - v] of the reduced reference lottery."""
    r = reduce_to_reference(lottery, assessment)
    return UtilityInterval(r.u, 1.0 - r.v)


def jaffray_utility(lottery: BfLottery, assessment: UtilityAssessment) -> float:
    """The scalar utility available when every focal triple has w = 0.

    With no undecided mass anywhere the interval collapses to a point and
    ordinary expected-utility arithmetic applies.  Raises otherwise.
    """
    _check_pair(lottery, assessment)
    parts = []
    for bits, mass in lottery.m.focal_bits().items():
        t = assessment.focal_utility(bits)
        if t.w > JAFFRAY_W_TOLERANCE:
            members = tuple(Subset(lottery.m.frame, bits).members())
            raise ValidationError(
                f"scalar utility undefined: outcome set {members} has w={t.w!r}"
            )
        parts.append(mass * t.u)
    return math.fsum(parts)


def _utilities_of(source) -> Mapping[str, float]:
    if isinstance(source, UtilityAssessment):
        return source.singleton_utilities
    return dict(source)


def choquet_lower(lottery: BfLottery, utilities) -> float:
    """Mass-weighted worst-case utility: each set contributes its minimum."""
    u = _utilities_of(utilities)
    order = lottery.outcomes
    return math.fsum(
        mass * min(u[lab] for lab in Subset(order.frame, bits).members())
        for bits, mass in lottery.m.focal_bits().items()
    )


def choquet_upper(lottery: BfLottery, utilities) -> float:
    """Mass-weighted best-case utility: each set contributes its maximum."""
    u = _utilities_of(utilities)
    order = lottery.outcomes
    return math.fsum(
        mass * max(u[lab] for lab in Subset(order.frame, bits).members())
        for bits, mass in lottery.m.focal_bits().items()
    )


def pignistic_transform(m: Bpa) -> Bpa:
    """Spread each focal mass uniformly over its elements."""
    if not isinstance(m.frame, Frame):
        raise ValidationError("the pignistic transform applies to plain frames")
    pooled: dict[int, list[float]] = {}
    for bits, mass in m.focal_bits().items():
        share = mass / bits.bit_count()
        rest = bits
        while rest:
            low = rest & -rest
            pooled.setdefault(low, []).append(share)
            rest ^= low
    return Bpa._from_normalized(m.frame, {b: math.fsum(ws) for b, ws in pooled.items()})


def pignistic_utility(lottery: BfLottery, utilities) -> float:
    """Expected utility under the pignistic (uniform-spread) probability."""
    u = _utilities_of(utilities)
    order = lottery.outcomes
    parts = []
    for bits, mass in lottery.m.focal_bits().items():
        members = Subset(order.frame, bits).members()
        parts.append(mass * math.fsum(u[lab] for lab in members) / len(members))
    return math.fsum(parts)


# ------------------------------------------------------------- comparison


def _cmp(x: float, y: float) -> int:
    if abs(x - y) <= INDIFFERENCE_TOLERANCE:
        return 0
    return 1 if x > y else -1


def _interval_verdict(du: int, dv: int) -> PreferenceVerdict:
    if du == 0 and dv == 0:
        return PreferenceVerdict.INDIFFERENT
    if du >= 0 and dv <= 0:
        return PreferenceVerdict.STRICTLY_PREFERRED
    if du <= 0 and dv >= 0:
        return PreferenceVerdict.STRICTLY_DISPREFERRED
    return PreferenceVerdict.INCOMPARABLE


def compare(
    a: BfLottery,
    b: BfLottery,
    assessment: UtilityAssessment,
    mode: str = "interval",
) -> PreferenceVerdict:
    """Compare two lotteries under one assessment.

    The default interval order prefers ``a`` when its reduced triple has
    both a larger u and a smaller v.  ``mode="strong"`` uses the stricter
    relation that prefers ``a`` only when a's guaranteed value u clears b's
    optimistic value 1 - v; nested or overlapping intervals then come out
    incomparable far more often.
    """
    ra = reduce_to_reference(a, assessment)
    rb = reduce_to_reference(b, assessment)
    if mode == "interval":
        return _interval_verdict(_cmp(ra.u, rb.u), _cmp(ra.v, rb.v))
    if mode == "strong":
        forward = _cmp(ra.u, 1.0 - rb.v)
        backward = _cmp(rb.u, 1.0 - ra.v)
        if forward >= 0 and backward >= 0:
            return PreferenceVerdict.INDIFFERENT
        if forward >= 0:
            return PreferenceVerdict.STRICTLY_PREFERRED
        if backward >= 0:
            return PreferenceVerdict.STRICTLY_DISPREFERRED
        return PreferenceVerdict.INCOMPARABLE
    raise ValidationError(f"unknown comparison mode {mode!r}")


def interval_bound_dominance(a: BfLottery, b: BfLottery, utilities) -> PreferenceVerdict:
    """Compare by the Choquet envelope alone.

    ``a`` dominates when both its lower and upper bounds are at least b's.
    Coarser than the interval order: it needs no set-level assessment, and
    whenever it reaches a verdict the interval order reaches a compatible
    one under any index-based refinement.
    """
    u = _utilities_of(utilities)
    d_lo = _cmp(choquet_lower(a, u), choquet_lower(b, u))
    d_hi = _cmp(choquet_upper(a, u), choquet_upper(b, u))
    return _interval_verdict(d_lo, -d_hi)


def affine_transform(
    assessment: UtilityAssessment, scale: float, shift: float
) -> UtilityAssessment:
    """Rescale the utility axis by ``scale * u + shift`` with scale > 0.

    Singleton utilities map directly; explicit triples keep their w (scaled)
    and move u and 1 - v as interval endpoints; index pairs are scale-free
    and stay put.  The result is unnormalized unless the transform is the
    identity, and every comparison verdict is preserved.
    """
    if scale <= 0.0 or not math.isfinite(scale) or not math.isfinite(shift):
        raise ValidationError("scale must be positive and finite, shift finite")
    new_singletons = {
        lab: scale * u + shift for lab, u in assessment.singleton_utilities.items()
    }
    model = assessment.model
    if isinstance(model, ExplicitTable):
        new_entries = {}
        for key, (u, v, w) in model.entries.items():
            new_u = scale * u + shift
            new_w = scale * max(w, 0.0)
            new_entries[key] = (new_u, 1.0 - new_u - new_w, new_w)
        model = ExplicitTable(new_entries)
    identity = scale == 1.0 and shift == 0.0
    return UtilityAssessment(
        assessment.outcomes,
        new_singletons,
        model,
        normalized=assessment.normalized and identity,
    )
