"""Frames of discernment and subsets encoded as bitmasks.

A frame is an ordered collection of distinct outcome labels.  A subset of a
frame is stored as a machine integer in which bit ``i`` is set exactly when
element ``i`` belongs to the subset, so all set algebra compiles down to
integer bitwise operations.  That representation stays cheap on joint frames
with up to a few million elements, which is what evidence combination over
product frames needs.

Product frames enumerate label tuples in row-major order over the declared
factor order: the last factor varies fastest.  ``ProductFrame.index_of`` and
``ProductFrame.element_at`` convert between joint indices and tuples, and
:func:`project` / :func:`vacuous_extend` move subsets between a product frame
and its factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import FrameMismatchError, ValidationError

MAX_FRAME_SIZE = 24
MAX_JOINT_SIZE = 1 << 24


def _iter_bit_indices(bits: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``bits`` in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Frame:
    """An ordered frame of discernment with at most 24 elements.

    Element order is meaningful: it fixes bit positions in subset masks and
    the serialization order of focal sets.  Frames are immutable; two frames
    are interchangeable only if both id and labels agree.
    """

    id: str
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.id or not isinstance(self.id, str):
            raise ValidationError("frame id must be a non-empty string")
        if not 1 <= len(self.labels) <= MAX_FRAME_SIZE:
            raise ValidationError(
                f"frame {self.id!r} must have between 1 and {MAX_FRAME_SIZE} "
                f"elements, got {len(self.labels)}"
            )
        if any(not isinstance(lab, str) or not lab for lab in self.labels):
            raise ValidationError(f"frame {self.id!r} labels must be non-empty strings")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"frame {self.id!r} labels must be distinct")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"label {label!r} is not in frame {self.id!r}") from None

    def element_at(self, i: int) -> str:
        return self.labels[i]

    def subset(self, members: Iterable[str]) -> "Subset":
        bits = 0
        for label in members:
            bits |= 1 << self.index(label)
        return Subset(self, bits)

    def singleton(self, label: str) -> "Subset":
        return Subset(self, 1 << self.index(label))

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def full(self) -> "Subset":
        return Subset(self, (1 << self.size) - 1)

    def __repr__(self) -> str:
        return f"Frame({self.id!r}, {list(self.labels)!r})"


@dataclass(frozen=True)
class ProductFrame:
    """The Cartesian product of named factor frames.

    Factors are (variable name, frame) pairs.  Joint elements are tuples of
    factor labels, indexed row-major over the declared order, so for factors
    X then Y the element index is ``ix * |Y| + iy`` and Y varies fastest.
    """

    factors: tuple[tuple[str, Frame], ...]

    def __post_init__(self) -> None:
        factors = tuple((name, frame) for name, frame in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise ValidationError("a product frame needs at least one factor")
        names = [name for name, _ in factors]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate factor names in product frame: {names}")
        for name, frame in factors:
            if not isinstance(frame, Frame):
                raise ValidationError(f"factor {name!r} must be a Frame")
            if not name or not isinstance(name, str):
                raise ValidationError("factor names must be non-empty strings")
        size = 1
        for _, frame in factors:
            size *= frame.size
        if size > MAX_JOINT_SIZE:
            raise ValidationError(
                f"joint frame would have {size} elements, above the cap of {MAX_JOINT_SIZE}"
            )
        strides = []
        acc = 1
        for _, frame in reversed(factors):
            strides.append(acc)
            acc *= frame.size
        object.__setattr__(self, "_strides", tuple(reversed(strides)))
        object.__setattr__(self, "_size", size)

    @property
    def id(self) -> str:
        return "*".join(name for name, _ in self.factors)

    @property
    def size(self) -> int:
        return self._size  # type: ignore[attr-defined]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.factors)

    def factor(self, name: str) -> Frame:
        for fname, frame in self.factors:
            if fname == name:
                return frame
        raise ValidationError(f"no factor named {name!r} in product frame {self.id!r}")

    def position(self, name: str) -> int:
        for i, (fname, _) in enumerate(self.factors):
            if fname == name:
                return i
        raise ValidationError(f"no factor named {name!r} in product frame {self.id!r}")

    def index_of(self, element: Sequence[str]) -> int:
        if len(element) != len(self.factors):
            raise ValidationError(
                f"expected a {len(self.factors)}-tuple, got {len(element)} labels"
            )
        idx = 0
        for (name, frame), stride, label in zip(self.factors, self._strides, element):  # type: ignore[attr-defined]
            idx += frame.index(label) * stride
        return idx

    def element_at(self, i: int) -> tuple[str, ...]:
        if not 0 <= i < self.size:
            raise ValidationError(f"joint index {i} out of range")
        coords = []
        for _, frame in reversed(self.factors):
            i, c = divmod(i, frame.size)
            coords.append(frame.labels[c])
        return tuple(reversed(coords))

    def subset(self, members: Iterable[Sequence[str]]) -> "Subset":
        bits = 0
        for element in members:
            bits |= 1 << self.index_of(element)
        return Subset(self, bits)

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def full(self) -> "Subset":
        return Subset(self, (1 << self.size) - 1)

    def __repr__(self) -> str:
        inner = ", ".join(f"{name}={frame.id}" for name, frame in self.factors)
        return f"ProductFrame({inner})"


Space = Union[Frame, ProductFrame]


def _same_space(a: Space, b: Space) -> bool:
    return a == b


@dataclass(frozen=True)
class Subset:
    """A subset of a frame, held as a bitmask over element positions."""

    frame: Space
    bits: int

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or self.bits < 0:
            raise ValidationError("subset bits must be a non-negative integer")
        if self.bits >> self.frame.size:
            raise ValidationError(
                f"bits 0x{self.bits:x} fall outside frame {self.frame.id!r} "
                f"of size {self.frame.size}"
            )

    def _check(self, other: "Subset") -> None:
        if not isinstance(other, Subset):
            raise TypeError(f"expected a Subset, got {type(other).__name__}")
        if not _same_space(self.frame, other.frame):
            raise FrameMismatchError(
                f"subsets live on different frames: {self.frame.id!r} vs {other.frame.id!r}"
            )

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.frame, self.bits | other.bits)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.frame, self.bits & other.bits)

    def __sub__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.frame, self.bits & ~other.bits)

    def __xor__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.frame, self.bits ^ other.bits)

    def complement(self) -> "Subset":
        return Subset(self.frame, ((1 << self.frame.size) - 1) ^ self.bits)

    def __invert__(self) -> "Subset":
        return self.complement()

    def issubset(self, other: "Subset") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: "Subset") -> bool:
        return self.issubset(other)

    def __ge__(self, other: "Subset") -> bool:
        other._check(self)
        return other.issubset(self)

    def intersects(self, other: "Subset") -> bool:
        self._check(other)
        return self.bits & other.bits != 0

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == (1 << self.frame.size) - 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def indices(self) -> Iterator[int]:
        return _iter_bit_indices(self.bits)

    def members(self):
        """The subset's elements, in frame order.

        Labels for a plain frame, label tuples for a product frame.
        """
        return tuple(self.frame.element_at(i) for i in self.indices())

    def __iter__(self):
        return iter(self.members())

    def __contains__(self, element) -> bool:
        if isinstance(self.frame, Frame):
            i = self.frame.index(element)
        else:
            i = self.frame.index_of(element)
        return bool(self.bits >> i & 1)

    def __repr__(self) -> str:
        shown = ", ".join(map(str, self.members()))
        return f"Subset({self.frame.id!r}, {{{shown}}})"


def project(subset: Subset, targets: Sequence[str]) -> Subset:
    """Project a product-frame subset onto some of its factors.

    The image keeps the factors named in ``targets``, in the product frame's
    own declaration order.  With a single target the result lives on that
    factor's plain frame.
    """
    frame = subset.frame
    if not isinstance(frame, ProductFrame):
        raise ValidationError("project needs a subset of a product frame")
    wanted = set(targets)
    if not wanted:
        raise ValidationError("project needs at least one target factor")
    if len(wanted) != len(targets):
        raise ValidationError(f"duplicate target factors: {list(targets)}")
    positions = [i for i, (name, _) in enumerate(frame.factors) if name in wanted]
    if len(positions) != len(wanted):
        known = {name for name, _ in frame.factors}
        raise ValidationError(f"unknown target factors: {sorted(wanted - known)}")

    kept = tuple(frame.factors[i] for i in positions)
    if len(kept) == len(frame.factors):
        return subset
    out_space: Space = kept[0][1] if len(kept) == 1 else ProductFrame(kept)

    sizes = [f.size for _, f in frame.factors]
    out_strides = []
    acc = 1
    for i in reversed(positions):
        out_strides.append((i, acc))
        acc *= sizes[i]
    out_strides.reverse()

    out_bits = 0
    for joint in _iter_bit_indices(subset.bits):
        coords = [0] * len(sizes)
        rem = joint
        for i in range(len(sizes) - 1, -1, -1):
            rem, coords[i] = divmod(rem, sizes[i])
        out_bits |= 1 << sum(coords[i] * s for i, s in out_strides)
    return Subset(out_space, out_bits)


def vacuous_extend(subset: Subset, onto: ProductFrame, var: str | None = None) -> Subset:
    """Cylinder a subset onto a larger product frame.

    The source may be a plain frame (then ``var`` names the factor it fills,
    and may be omitted when only one factor carries that frame) or a product
    frame whose factors all appear in ``onto``.  The result contains every
    joint element whose projection onto the source factors lies in ``subset``.
    """
    if not isinstance(onto, ProductFrame):
        raise ValidationError("vacuous_extend targets a product frame")
    source = subset.frame

    if isinstance(source, Frame):
        if var is None:
            hits = [name for name, f in onto.factors if f == source]
            if len(hits) != 1:
                raise ValidationError(
                    f"cannot infer which factor of {onto.id!r} holds frame "
                    f"{source.id!r}; pass var explicitly"
                )
            var = hits[0]
        elif onto.factor(var) != source:
            raise FrameMismatchError(
                f"factor {var!r} of {onto.id!r} is not the subset's frame {source.id!r}"
            )
        src_positions = [onto.position(var)]

        def src_coords(member_index: int) -> tuple[int, ...]:
            return (member_index,)

    else:
        by_name = dict(onto.factors)
        for name, f in source.factors:
            if name not in by_name:
                raise FrameMismatchError(f"factor {name!r} missing from {onto.id!r}")
            if by_name[name] != f:
                raise FrameMismatchError(
                    f"factor {name!r} differs between {source.id!r} and {onto.id!r}"
                )
        src_positions = [onto.position(name) for name, _ in source.factors]
        src_sizes = [f.size for _, f in source.factors]

        def src_coords(member_index: int) -> tuple[int, ...]:
            coords = []
            for size in reversed(src_sizes):
                member_index, c = divmod(member_index, size)
                coords.append(c)
            return tuple(reversed(coords))

    onto_strides = onto._strides  # type: ignore[attr-defined]
    free = [i for i in range(len(onto.factors)) if i not in src_positions]
    free_offsets = [0]
    for i in free:
        stride = onto_strides[i]
        size = onto.factors[i][1].size
        free_offsets = [base + c * stride for base in free_offsets for c in range(size)]

    out_bits = 0
    for member in _iter_bit_indices(subset.bits):
        base = sum(
            c * onto_strides[p] for p, c in zip(src_positions, src_coords(member))
        )
        for off in free_offsets:
            out_bits |= 1 << (base + off)
    return Subset(onto, out_bits)
