"""Basic probability assignments over bitmask frames.

A BPA maps focal subsets to strictly positive masses that sum to one, with
no mass on the empty set.  Belief and plausibility are the usual lower and
upper envelopes.  Dempster's rule is implemented as the product-intersection
fold with renormalization; the renormalization constant K is reported next
to the combined BPA because a small K is itself diagnostic information.

Masses are accumulated with ``math.fsum`` so that results do not depend on
focal-set iteration order; combination is therefore exactly commutative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union

from .errors import FrameMismatchError, TotalConflictError, ValidationError
from .frames import Frame, ProductFrame, Space, Subset, project, vacuous_extend

MASS_SUM_TOLERANCE = 1e-9
CONFLICT_CUTOFF = 1e-12

FocalKey = Union[Subset, int, Iterable]


class BpaKind(str, Enum):
    """Structural classes of a BPA, from most to least specific."""

    VACUOUS = "vacuous"
    DETERMINISTIC = "deterministic"
    BAYESIAN = "bayesian"
    CONSONANT = "consonant"
    GENERAL = "general"


class Bpa:
    """An immutable basic probability assignment on a frame.

    Construct with a mapping or iterable of ``(subset, mass)`` pairs, where a
    subset may be given as a :class:`Subset`, a raw bitmask, or an iterable
    of element labels.  Zero masses are dropped, negative masses are
    rejected, and the total must come out within ``1e-9`` of one; it is then
    renormalized so the stored masses sum to one exactly.
    """

    __slots__ = ("frame", "_mass")

    def __init__(self, frame: Space, masses) -> None:
        if not isinstance(frame, (Frame, ProductFrame)):
            raise ValidationError("frame must be a Frame or ProductFrame")
        items = masses.items() if isinstance(masses, Mapping) else masses
        staged: dict[int, float] = {}
        for key, value in items:
            bits = _as_bits(frame, key)
            mass = float(value)
            if math.isnan(mass) or mass < 0.0:
                raise ValidationError(f"mass {value!r} is not a non-negative number")
            if bits == 0 and mass > 0.0:
                raise ValidationError("the empty set cannot carry mass")
            if bits in staged:
                raise ValidationError(
                    f"duplicate focal set {Subset(frame, bits)!r} in mass assignment"
                )
            if mass > 0.0:
                staged[bits] = mass
        if not staged:
            raise ValidationError("a BPA needs at least one focal set with positive mass")
        total = math.fsum(staged.values())
        if abs(total - 1.0) > MASS_SUM_TOLERANCE:
            raise ValidationError(f"masses sum to {total!r}, expected 1 within 1e-9")
        scaled = {bits: mass / total for bits, mass in staged.items()}
        # Pin the largest mass so the stored values sum to one exactly.
        top = max(scaled, key=lambda b: (scaled[b], b))
        scaled[top] = 1.0 - math.fsum(m for b, m in scaled.items() if b != top)
        self.frame = frame
        self._mass = scaled

    @classmethod
    def _from_normalized(cls, frame: Space, mapping: dict[int, float]) -> "Bpa":
        """Internal fast path for algebra whose output is normalized already.

        Skipping re-renormalization keeps identities like vacuous neutrality
        bit-for-bit exact instead of exact-within-an-ulp.
        """
        assert all(bits and mass > 0.0 for bits, mass in mapping.items())
        assert abs(math.fsum(mapping.values()) - 1.0) <= MASS_SUM_TOLERANCE
        out = object.__new__(cls)
        out.frame = frame
        out._mass = mapping
        return out

    # Constructors for the common shapes.

    @classmethod
    def vacuous(cls, frame: Space) -> "Bpa":
        return cls(frame, {frame.full(): 1.0})

    @classmethod
    def deterministic(cls, frame: Space, subset: FocalKey) -> "Bpa":
        return cls(frame, [(subset, 1.0)])

    @classmethod
    def bayesian(cls, frame: Frame, probabilities: Mapping[str, float]) -> "Bpa":
        return cls(frame, [(frame.singleton(lab), p) for lab, p in probabilities.items()])

    # Accessors.

    def mass(self, subset: FocalKey) -> float:
        return self._mass.get(_as_bits(self.frame, subset), 0.0)

    def focal(self) -> tuple[tuple[Subset, float], ...]:
        """Focal sets with their masses, smallest sets first, then by bit order."""
        order = sorted(self._mass, key=lambda b: (b.bit_count(), b))
        return tuple((Subset(self.frame, b), self._mass[b]) for b in order)

    def focal_bits(self) -> Mapping[int, float]:
        """The raw bitmask-to-mass view. Treat as read-only."""
        return self._mass

    def __len__(self) -> int:
        return len(self._mass)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bpa):
            return NotImplemented
        return self.frame == other.frame and self._mass == other._mass

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{{{', '.join(map(str, s.members()))}}}: {m:.6g}" for s, m in self.focal()
        )
        return f"Bpa({self.frame.id!r}, {parts})"

    def belief(self, subset: FocalKey) -> float:
        """Total mass committed to subsets of ``subset``."""
        target = _as_bits(self.frame, subset)
        return math.fsum(m for b, m in self._mass.items() if b & ~target == 0)

    def plausibility(self, subset: FocalKey) -> float:
        """Total mass not ruled out by ``subset``."""
        target = _as_bits(self.frame, subset)
        return math.fsum(m for b, m in self._mass.items() if b & target)

    def classify(self) -> BpaKind:
        """The most specific structural class this BPA belongs to."""
        full = (1 << self.frame.size) - 1
        if len(self._mass) == 1:
            only = next(iter(self._mass))
            return BpaKind.VACUOUS if only == full else BpaKind.DETERMINISTIC
        if all(b.bit_count() == 1 for b in self._mass):
            return BpaKind.BAYESIAN
        chain = sorted(self._mass, key=lambda b: b.bit_count())
        if all(a & ~b == 0 for a, b in zip(chain, chain[1:])):
            return BpaKind.CONSONANT
        return BpaKind.GENERAL

    def combine(self, other: "Bpa") -> "Bpa":
        """Dempster combination, discarding the K diagnostic."""
        return combine_dempster(self, other).bpa


def _as_bits(frame: Space, key: FocalKey) -> int:
    if isinstance(key, Subset):
        if key.frame != frame:
            raise FrameMismatchError(
                f"subset on frame {key.frame.id!r} used with frame {frame.id!r}"
            )
        return key.bits
    if isinstance(key, int):
        if key >> frame.size:
            raise ValidationError(f"bits 0x{key:x} outside frame {frame.id!r}")
        return key
    if isinstance(frame, Frame) and isinstance(key, str):
        return 1 << frame.index(key)
    return frame.subset(key).bits


@dataclass(frozen=True)
class DempsterSum:
    """A combined BPA together with its renormalization constant.

    ``k`` is one minus the mass the product assignment put on the empty set.
    For a fold over several operands it is the product of the stepwise
    constants.  K near zero means the sources were almost fully conflicting.
    """

    bpa: Bpa
    k: float


def combine_dempster(first: Bpa, *rest: Bpa) -> DempsterSum:
    """Combine BPAs by Dempster's rule.

    Operands on different frames are aligned first: a BPA whose frame is a
    factor of the other's product frame (or a product over a subset of its
    factors) is vacuously extended; two product frames are merged over the
    union of their factors.  Raises :class:`TotalConflictError` when the
    renormalization constant falls to ``1e-12`` or below.
    """
    out = first
    k = 1.0
    for m in rest:
        out, step = _combine_pair(out, m)
        k *= step
    return DempsterSum(out, k)


def _combine_pair(m1: Bpa, m2: Bpa) -> tuple[Bpa, float]:
    m1, m2 = _aligned(m1, m2)
    pooled: dict[int, list[float]] = {}
    voided: list[float] = []
    for b1, w1 in m1._mass.items():
        for b2, w2 in m2._mass.items():
            meet = b1 & b2
            if meet:
                pooled.setdefault(meet, []).append(w1 * w2)
            else:
                voided.append(w1 * w2)
    k = 1.0 - math.fsum(voided)
    if k <= CONFLICT_CUTOFF:
        raise TotalConflictError(
            f"operands are fully conflicting (K={k!r}); Dempster combination undefined",
            k=k,
        )
    combined = {bits: math.fsum(ws) / k for bits, ws in pooled.items()}
    return Bpa._from_normalized(m1.frame, combined), k


def _aligned(m1: Bpa, m2: Bpa) -> tuple[Bpa, Bpa]:
    if m1.frame == m2.frame:
        return m1, m2
    f1, f2 = m1.frame, m2.frame
    if isinstance(f1, ProductFrame) or isinstance(f2, ProductFrame):
        joint = _union_frame(f1, f2)
        return _extended(m1, joint), _extended(m2, joint)
    raise FrameMismatchError(
        f"cannot combine BPAs on unrelated frames {f1.id!r} and {f2.id!r}; "
        "declare a product frame and extend them explicitly"
    )


def _union_frame(f1: Space, f2: Space) -> ProductFrame:
    base = f1 if isinstance(f1, ProductFrame) else f2
    other = f2 if base is f1 else f1
    factors = list(base.factors)
    names = {name for name, _ in factors}
    if isinstance(other, ProductFrame):
        for name, frame in other.factors:
            if name in names:
                if dict(factors)[name] != frame:
                    raise FrameMismatchError(
                        f"factor {name!r} differs between {f1.id!r} and {f2.id!r}"
                    )
            else:
                factors.append((name, frame))
        return ProductFrame(tuple(factors)) if len(factors) != len(base.factors) else base
    hits = [name for name, frame in factors if frame == other]
    if len(hits) != 1:
        raise FrameMismatchError(
            f"frame {other.id!r} matches {len(hits)} factors of {base.id!r}; "
            "cannot align implicitly"
        )
    return base


def _extended(m: Bpa, onto: ProductFrame, var: str | None = None) -> Bpa:
    if m.frame == onto:
        return m
    return Bpa._from_normalized(
        onto,
        {
            vacuous_extend(Subset(m.frame, bits), onto, var).bits: mass
            for bits, mass in m._mass.items()
        },
    )


def marginalize(m: Bpa, targets: Sequence[str]) -> Bpa:
    """Transfer each focal mass to its projection onto the target factors.

    Masses of focal sets with the same projection pile up.  The result lives
    on the single factor frame when one target is given, otherwise on the
    product of the kept factors in declaration order.
    """
    if not isinstance(m.frame, ProductFrame):
        raise ValidationError("marginalize needs a BPA on a product frame")
    pooled: dict[Subset, list[float]] = {}
    for bits, mass in m._mass.items():
        image = project(Subset(m.frame, bits), targets)
        pooled.setdefault(image, []).append(mass)
    out_frame = next(iter(pooled)).frame
    return Bpa._from_normalized(
        out_frame, {s.bits: math.fsum(ws) for s, ws in pooled.items()}
    )


def conditional_embedding(
    conditional: Bpa,
    joint: ProductFrame,
    given: str,
    value: str,
    target: str | None = None,
) -> Bpa:
    """Embed a conditional BPA into a joint frame with no extra commitment.

    ``conditional`` describes a variable when ``given == value`` holds.  Each
    focal set ``b`` becomes ``({value} x b) | (complement({value}) x rest)``
    on the joint frame: inside the condition it asserts ``b``, outside it
    asserts nothing.  Marginalizing the result onto either variable alone
    gives a vacuous BPA, and combining with certainty in ``given == value``
    then marginalizing onto the target variable recovers ``conditional``.
    """
    given_frame = joint.factor(given)
    if target is None:
        hits = [
            name
            for name, frame in joint.factors
            if name != given and frame == conditional.frame
        ]
        if len(hits) != 1:
            raise ValidationError(
                f"cannot infer the embedded variable in {joint.id!r}; pass target"
            )
        target = hits[0]
    elif joint.factor(target) != conditional.frame:
        raise FrameMismatchError(
            f"factor {target!r} of {joint.id!r} does not carry the conditional's frame"
        )
    inside = vacuous_extend(given_frame.singleton(value), joint, given).bits
    outside = ((1 << joint.size) - 1) ^ inside
    out: dict[int, float] = {}
    for bits, mass in conditional._mass.items():
        lifted = vacuous_extend(Subset(conditional.frame, bits), joint, target).bits
        embedded = (lifted & inside) | outside
        out[embedded] = mass
    return Bpa._from_normalized(joint, out)
