"""Codings of naturals: canonical finite sets, Cantor pairing, joins, and
finite stage-indexed enumerations standing in for c.e. sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Mapping

from .errors import HorizonExceeded, InvalidInput


@dataclass(frozen=True)
class Horizon:
    """Finite truncation of omega: stage count and element bound."""

    stages: int
    elements: int

    def __post_init__(self):
        if self.stages < 2:
            raise InvalidInput(f"horizon needs at least 2 stages, got {self.stages}")
        if self.elements < 1:
            raise InvalidInput(f"horizon needs at least 1 element, got {self.elements}")


def canonical_set(n: int) -> frozenset[int]:
    """Return D_n, the finite set whose characteristic bits spell n."""
    if n < 0:
        raise InvalidInput(f"canonical index must be a natural, got {n}")
    out = []
    x = 0
    while n:
        if n & 1:
            out.append(x)
        n >>= 1
        x += 1
    return frozenset(out)


def canonical_index(members: Iterable[int]) -> int:
    n = 0
    for x in set(members):
        if x < 0:
            raise InvalidInput(f"negative member {x}")
        n |= 1 << x
    return n


def pair(x: int, y: int) -> int:
    """Cantor pairing <x, y> = (x+y)(x+y+1)/2 + y."""
    if x < 0 or y < 0:
        raise InvalidInput(f"pair needs naturals, got ({x}, {y})")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise InvalidInput(f"unpair needs a natural, got {z}")
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def join(evens: Iterable[int], odds: Iterable[int]) -> frozenset[int]:
    """E (+) S = {2x | x in E} | {2x+1 | x in S}."""
    return frozenset(2 * x for x in evens) | frozenset(2 * x + 1 for x in odds)


def split(joined: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
    """Inverse of :func:`join`."""
    joined = tuple(joined)
    return (frozenset(z // 2 for z in joined if z % 2 == 0),
            frozenset(z // 2 for z in joined if z % 2 == 1))


@dataclass(frozen=True)
class Enumeration:
    """A finite listing of naturals with the stage at which each one appears.

    ``listing[j]`` is the value of the listing function at argument j; it
    becomes visible at ``stages[j]`` (by default ``j``), i.e. it is a member
    at every stage strictly greater than its entry stage.
    """

    listing: tuple[int, ...]
    stages: tuple[int, ...] | None = None
    injective: bool = True
    _first: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        listing = tuple(int(v) for v in self.listing)
        stages = (tuple(range(len(listing))) if self.stages is None
                  else tuple(int(s) for s in self.stages))
        if len(stages) != len(listing):
            raise InvalidInput("listing and stages differ in length")
        if any(v < 0 for v in listing):
            raise InvalidInput("enumerations list naturals only")
        if any(b < a for a, b in zip(stages, stages[1:])) or any(s < 0 for s in stages):
            raise InvalidInput("entry stages must be non-decreasing naturals")
        first = {}
        for v, s in zip(listing, stages):
            if v in first:
                if self.injective:
                    raise InvalidInput(f"value {v} repeats in an injective listing")
                continue
            first[v] = s
        object.__setattr__(self, "listing", listing)
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "_first", first)

    @classmethod
    def from_set(cls, values: Iterable[int]) -> Enumeration:
        return cls(tuple(sorted(set(values))))

    @classmethod
    def from_entries(cls, entries: Mapping[int, int]) -> Enumeration:
        """Build from a map value -> entry stage; ties listed by value."""
        order = sorted(entries.items(), key=lambda kv: (kv[1], kv[0]))
        return cls(tuple(v for v, _ in order), tuple(s for _, s in order))

    def __len__(self):
        return len(self.listing)

    def __iter__(self):
        return iter(self.listing)

    def __contains__(self, x):
        return x in self._first

    def value(self, j: int) -> int:
        """The listing function at argument j."""
        if not 0 <= j < len(self.listing):
            raise HorizonExceeded(f"listing undefined at argument {j} (length {len(self.listing)})")
        return self.listing[j]

    def entry_stage(self, x: int) -> int | None:
        return self._first.get(x)

    def member_at(self, x: int, stage: int) -> bool:
        s = self._first.get(x)
        return s is not None and s < stage

    def members(self, stage: int | None = None) -> frozenset[int]:
        if stage is None:
            return frozenset(self._first)
        return frozenset(v for v, s in self._first.items() if s < stage)

    @property
    def last_stage(self) -> int:
        """Least stage at which the whole listing is visible."""
        return self.stages[-1] + 1 if self.stages else 0

    def validate(self, h: Horizon) -> None:
        bad = [v for v in self.listing if v >= h.elements]
        if bad:
            raise InvalidInput(f"values {bad} exceed horizon bound {h.elements}")
        if self.stages and self.stages[-1] >= h.stages:
            raise InvalidInput(f"entry stage {self.stages[-1]} beyond horizon {h.stages}")


def member_at(E, x: int, stage: int, h: Horizon | None = None) -> bool:
    """Whether x has been enumerated into E before ``stage``."""
    if h is not None and stage > h.stages:
        raise HorizonExceeded(f"stage {stage} exceeds horizon of {h.stages} stages")
    return E.member_at(x, stage)
