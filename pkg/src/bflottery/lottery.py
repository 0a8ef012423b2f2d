"""Lotteries whose uncertainty is a mass assignment over outcome sets.

A lottery here is a ranked outcome frame together with a BPA on it: the mass
on a set is evidence that the prize lies somewhere in that set, with no
commitment to how it splits inside.  Acts map states to outcome sets and
push a state BPA forward onto outcomes; compound lotteries put a BPA over a
frame of inner lotteries and reduce through a joint frame via conditional
embedding, combination, and marginalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .bpa import Bpa, combine_dempster, conditional_embedding, marginalize
from .errors import FrameMismatchError, ValidationError
from .frames import Frame, ProductFrame, Subset

TRIPLE_TOLERANCE = 1e-9

CHOICE_VAR = "lottery"
OUTCOME_VAR = "outcome"


@dataclass(frozen=True)
class OutcomeOrder:
    """A frame of prizes ranked from best to worst.

    ``ranking`` is a permutation of the frame's labels with the best outcome
    first and the worst last; best and worst must be distinct, so at least
    two outcomes are required.  Ties in value are expressed later through
    equal singleton utilities, not through the ranking itself.
    """

    frame: Frame
    ranking: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranking", tuple(self.ranking))
        if sorted(self.ranking) != sorted(self.frame.labels):
            raise ValidationError(
                f"ranking must be a permutation of frame {self.frame.id!r} labels"
            )
        if len(self.ranking) < 2:
            raise ValidationError("an outcome order needs at least two outcomes")
        object.__setattr__(
            self, "_rank", {lab: i for i, lab in enumerate(self.ranking)}
        )

    @property
    def best(self) -> str:
        return self.ranking[0]

    @property
    def worst(self) -> str:
        return self.ranking[-1]

    def rank(self, label: str) -> int:
        """Position in the ranking; smaller is better."""
        try:
            return self._rank[label]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"label {label!r} is not a ranked outcome") from None

    def best_of(self, subset: Subset) -> str:
        self._check(subset)
        return min(subset.members(), key=self.rank)

    def worst_of(self, subset: Subset) -> str:
        self._check(subset)
        return max(subset.members(), key=self.rank)

    def _check(self, subset: Subset) -> None:
        if subset.frame != self.frame:
            raise FrameMismatchError("subset is not on the ranked outcome frame")
        if subset.is_empty:
            raise ValidationError("the empty outcome set has no best or worst element")


@dataclass(frozen=True)
class BfLottery:
    """A ranked outcome frame plus a BPA describing where the prize lies."""

    outcomes: OutcomeOrder
    m: Bpa

    def __post_init__(self) -> None:
        if self.m.frame != self.outcomes.frame:
            raise FrameMismatchError(
                "the lottery's BPA must live on its outcome frame"
            )


@dataclass(frozen=True)
class Act:
    """A mapping from states to nonempty outcome sets.

    Deterministic acts take each state to a single outcome; nondeterministic
    ones leave a set of possible prizes per state.
    """

    states: Frame
    outcomes: OutcomeOrder
    mapping: Mapping[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        fixed: dict[str, tuple[str, ...]] = {}
        for state, prizes in dict(self.mapping).items():
            self.states.index(state)
            image = (prizes,) if isinstance(prizes, str) else tuple(prizes)
            if not image:
                raise ValidationError(f"act maps state {state!r} to no outcome")
            for label in image:
                self.outcomes.frame.index(label)
            fixed[state] = image
        missing = set(self.states.labels) - set(fixed)
        if missing:
            raise ValidationError(f"act is undefined on states {sorted(missing)}")
        object.__setattr__(self, "mapping", fixed)

    def image_bits(self, state_bits: int) -> int:
        """The union of outcome images over a state subset, as a bitmask."""
        out_frame = self.outcomes.frame
        bits = 0
        for i, state in enumerate(self.states.labels):
            if state_bits >> i & 1:
                for label in self.mapping[state]:
                    bits |= 1 << out_frame.index(label)
        return bits


def pushforward(m: Bpa, act: Act) -> BfLottery:
    """Carry a state BPA through an act onto its outcome frame.

    Each focal set of states is mapped to the union of its states' images;
    masses of focal sets with the same image accumulate.
    """
    if m.frame != act.states:
        raise FrameMismatchError("the BPA must live on the act's state frame")
    pooled: dict[int, list[float]] = {}
    for bits, mass in m.focal_bits().items():
        pooled.setdefault(act.image_bits(bits), []).append(mass)
    out = Bpa._from_normalized(
        act.outcomes.frame, {b: math.fsum(ws) for b, ws in pooled.items()}
    )
    return BfLottery(act.outcomes, out)


@dataclass(frozen=True)
class ReferenceLottery:
    """A two-point lottery over the best and worst outcomes.

    ``u`` is the mass on the best outcome, ``v`` on the worst, and ``w`` the
    unassigned remainder on the pair.  In the standard normalized setting
    all three lie in [0, 1]; after an affine utility rescale ``u`` and ``v``
    may leave that range, so only ``w >= 0`` and the unit sum are enforced.
    """

    u: float
    v: float
    w: float = 0.0

    def __post_init__(self) -> None:
        for name, value in (("u", self.u), ("v", self.v), ("w", self.w)):
            if not math.isfinite(value):
                raise ValidationError(f"reference component {name} must be finite")
        if self.w < -TRIPLE_TOLERANCE:
            raise ValidationError(f"reference remainder w={self.w!r} is negative")
        if self.w < 0.0:
            object.__setattr__(self, "w", 0.0)
        total = math.fsum((self.u, self.v, self.w))
        if abs(total - 1.0) > TRIPLE_TOLERANCE:
            raise ValidationError(f"reference triple sums to {total!r}, expected 1")

    def as_lottery(self, best: str = "best", worst: str = "worst") -> BfLottery:
        """The triple as an explicit lottery on a fresh two-outcome frame.

        Only meaningful in the normalized setting where u, v, w are masses.
        """
        frame = Frame("reference", (best, worst))
        order = OutcomeOrder(frame, (best, worst))
        return BfLottery(
            order, Bpa(frame, {best: self.u, worst: self.v, frame.full(): self.w})
        )


def lottery_frame(count: int, id: str = "L") -> Frame:
    """A frame with one element per inner lottery, labeled by index."""
    if count < 1:
        raise ValidationError("a compound lottery needs at least one inner lottery")
    return Frame(id, tuple(f"L{i + 1}" for i in range(count)))


@dataclass(frozen=True)
class CompoundLottery:
    """A BPA over which inner lottery applies, each on a shared outcome frame.

    ``outer`` lives on a frame with exactly one element per inner lottery,
    in order; :func:`lottery_frame` builds a suitable one.
    """

    inner: tuple[BfLottery, ...]
    outer: Bpa

    def __post_init__(self) -> None:
        object.__setattr__(self, "inner", tuple(self.inner))
        if not self.inner:
            raise ValidationError("a compound lottery needs at least one inner lottery")
        first = self.inner[0].outcomes
        if any(lot.outcomes != first for lot in self.inner[1:]):
            raise ValidationError("all inner lotteries must share one outcome order")
        if not isinstance(self.outer.frame, Frame):
            raise ValidationError("the outer BPA must live on a plain choice frame")
        if self.outer.frame.size != len(self.inner):
            raise ValidationError(
                f"outer frame has {self.outer.frame.size} elements for "
                f"{len(self.inner)} inner lotteries"
            )
        if self.outer.frame == first.frame:
            raise ValidationError("the choice frame must be distinct from the outcomes")

    @property
    def outcomes(self) -> OutcomeOrder:
        return self.inner[0].outcomes

    @classmethod
    def build(
        cls,
        inner: Sequence[BfLottery],
        outer_masses: Iterable[tuple[Iterable[int], float]],
    ) -> "CompoundLottery":
        """Assemble from inner lotteries and masses over index sets.

        ``outer_masses`` pairs collections of zero-based inner indices with
        masses; the choice frame is synthesized with labels L1, L2, ...
        """
        frame = lottery_frame(len(tuple(inner)))
        assignments = []
        for indices, mass in outer_masses:
            labels = [frame.labels[i] for i in indices]
            assignments.append((frame.subset(labels), mass))
        return cls(tuple(inner), Bpa(frame, assignments))


def reduce_compound(compound: CompoundLottery) -> BfLottery:
    """Collapse a compound lottery to a plain one on the outcome frame.

    Each inner lottery's BPA is embedded into the joint (choice, outcome)
    frame conditionally on its own choice element; the embeddings and the
    outer BPA are Dempster-combined and the result marginalized onto
    outcomes.  The construction is conflict-free, so no mass is lost.
    """
    choice = compound.outer.frame
    out_frame = compound.outcomes.frame
    joint = ProductFrame(((CHOICE_VAR, choice), (OUTCOME_VAR, out_frame)))
    parts = [
        conditional_embedding(
            lot.m, joint, given=CHOICE_VAR, value=choice.labels[i], target=OUTCOME_VAR
        )
        for i, lot in enumerate(compound.inner)
    ]
    joined = combine_dempster(compound.outer, *parts)
    reduced = marginalize(joined.bpa, [OUTCOME_VAR])
    return BfLottery(compound.outcomes, reduced)
