"""Instances, shift vectors and the union-cardinality objective."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class InstanceError(ValueError):
    """Raised for malformed instances (empty family, empty set, duplicate label)."""


class ShiftDomainError(ValueError):
    """Shift vector keys do not match the instance labels."""

    def __init__(self, missing: Iterable[str], extra: Iterable[str]):
        self.missing = sorted(missing)
        self.extra = sorted(extra)
        parts = []
        if self.missing:
            parts.append(f"missing labels {self.missing}")
        if self.extra:
            parts.append(f"extra labels {self.extra}")
        super().__init__("shift vector domain mismatch: " + ", ".join(parts))


def check_int64(value: int, what: str = "value") -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{what} must be an integer, got {value!r}")
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"{what} {value} does not fit in a signed 64-bit integer")
    return value


@dataclass(frozen=True, eq=False)
class Instance:
    """An ordered family of non-empty finite integer sets indexed by string labels."""

    labels: tuple[str, ...]
    sets: Mapping[str, frozenset[int]]

    def __post_init__(self):
        if not self.labels:
            raise InstanceError("instance has no labels")
        if len(set(self.labels)) != len(self.labels):
            seen = set()
            dup = next(l for l in self.labels if l in seen or seen.add(l))
            raise InstanceError(f"duplicate label {dup!r}")
        if set(self.sets) != set(self.labels):
            raise InstanceError("set map keys must equal the label sequence")
        for label in self.labels:
            xs = self.sets[label]
            if not xs:
                raise InstanceError(f"set {label!r} is empty")
            for x in xs:
                check_int64(x, f"element of {label!r}")

    @classmethod
    def from_sets(cls, family: Mapping[str, Iterable[int]] | Iterable[tuple[str, Iterable[int]]]) -> Instance:
        items = list(family.items()) if isinstance(family, Mapping) else list(family)
        labels = tuple(str(label) for label, _ in items)
        if len(set(labels)) != len(labels):
            seen = set()
            dup = next(l for l in labels if l in seen or seen.add(l))
            raise InstanceError(f"duplicate label {dup!r}")
        sets = {str(label): frozenset(xs) for label, xs in items}
        return cls(labels, sets)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.labels == other.labels and all(
            self.sets[a] == other.sets[a] for a in self.labels
        )

    def __hash__(self):
        return hash((self.labels, tuple(self.sets[a] for a in self.labels)))

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, label: str) -> frozenset[int]:
        return self.sets[label]

    def items(self):
        return ((a, self.sets[a]) for a in self.labels)

    def universe(self) -> frozenset[int]:
        """The union of all sets, unshifted."""
        return frozenset().union(*self.sets.values())

    def total_size(self) -> int:
        return sum(len(xs) for xs in self.sets.values())

    def max_size(self) -> int:
        return max(len(xs) for xs in self.sets.values())


@dataclass(frozen=True)
class Objective:
    value: int
    union: frozenset[int]


def check_shifts(instance: Instance, shifts: Mapping[str, int]) -> None:
    keys = set(shifts)
    labels = set(instance.labels)
    if keys != labels:
        raise ShiftDomainError(labels - keys, keys - labels)
    for label, t in shifts.items():
        check_int64(t, f"shift of {label!r}")
        xs = instance.sets[label]
        check_int64(min(xs) + t, f"shifted element of {label!r}")
        check_int64(max(xs) + t, f"shifted element of {label!r}")


def evaluate(instance: Instance, shifts: Mapping[str, int]) -> Objective:
    """Cardinality of the union of ``X_a + t_a`` over all labels, plus the union."""
    check_shifts(instance, shifts)
    union: set[int] = set()
    for label, xs in instance.items():
        t = shifts[label]
        union.update(x + t for x in xs)
    return Objective(len(union), frozenset(union))


def normalize(shifts: Mapping[str, int], labels: Iterable[str] | None = None) -> dict[str, int]:
    """Translate ``shifts`` so the first label is 0.

    The first label is taken from ``labels`` when given, else from the
    mapping's own iteration order. The result follows the same order.
    """
    order = list(labels) if labels is not None else list(shifts)
    if not order:
        return {}
    base = shifts[order[0]]
    return {a: check_int64(shifts[a] - base, f"normalized shift of {a!r}") for a in order}


def translate(shifts: Mapping[str, int], u: int) -> dict[str, int]:
    return {a: t + u for a, t in shifts.items()}


def difference_set(instance: Instance) -> frozenset[int]:
    """``U - U`` where ``U`` is the union of the unshifted sets."""
    u = sorted(instance.universe())
    return frozenset(x - y for x in u for y in u)


class BitUnion:
    """Union cardinality via Python-int bitmasks.

    Each set is stored as a mask relative to its own minimum; a shift
    is a left shift against a common floor, so ``floor`` must be no
    greater than any shifted element that will be evaluated.
    """

    def __init__(self, instance: Instance, floor: int):
        self.labels = instance.labels
        self.floor = floor
        self.mins = []
        self.masks = []
        for label in instance.labels:
            xs = instance.sets[label]
            lo = min(xs)
            mask = 0
            for x in xs:
                mask |= 1 << (x - lo)
            self.mins.append(lo)
            self.masks.append(mask)

    def placed(self, index: int, t: int) -> int:
        """Mask of set ``index`` translated by ``t``."""
        return self.masks[index] << (self.mins[index] + t - self.floor)

    def size(self, shifts: Iterable[int]) -> int:
        acc = 0
        for i, t in enumerate(shifts):
            acc |= self.masks[i] << (self.mins[i] + t - self.floor)
        return acc.bit_count()
