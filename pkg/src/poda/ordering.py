"""Entity-type permutations and order instructions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .corpus import TypeRegistry
from .rng import Xoshiro256StarStar

# Full enumeration is refused above this many permutations (7! by default);
# callers with larger registries sample instead.
DEFAULT_ENUMERATION_CAP = 5040


class OrderingError(ValueError):
    pass


@dataclass(frozen=True)
class TypePermutation:
    """A permutation of the registry's label set."""

    order: tuple[str, ...]
    registry: TypeRegistry

    def __post_init__(self) -> None:
        if sorted(self.order) != sorted(self.registry.labels):
            raise OrderingError(
                f"{self.order} is not a permutation of {self.registry.labels}"
            )

    def render(self) -> str:
        return ", ".join(self.order)

    def rank_of(self, label: str) -> int:
        return self.order.index(label)


@dataclass(frozen=True)
class OrderInstruction:
    """Either a type-order instruction or the canonical left-to-right one."""

    permutation: Optional[TypePermutation] = None

    @property
    def kind(self) -> str:
        return "left-to-right" if self.permutation is None else "type-order"

    def key(self) -> str:
        """Stable identity used for duplicate detection and example ids."""
        if self.permutation is None:
            return "left-to-right"
        return self.permutation.render()


LEFT_TO_RIGHT = OrderInstruction(permutation=None)


def enumerate_type_permutations(
    registry: TypeRegistry, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[TypePermutation]:
    """All l! permutations, lexicographic by label sequence."""
    total = math.factorial(registry.size)
    if total > cap:
        raise OrderingError(
            f"{registry.size}! = {total} permutations exceeds cap {cap}; "
            "use sample_type_permutations instead"
        )
    return [
        TypePermutation(order=perm, registry=registry)
        for perm in itertools.permutations(sorted(registry.labels))
    ]


def sample_type_permutations(
    registry: TypeRegistry, n: int, seed: int
) -> list[TypePermutation]:
    """n distinct seeded Fisher-Yates draws; deterministic given seed."""
    total = math.factorial(registry.size)
    if n > total:
        raise OrderingError(f"cannot draw {n} distinct permutations, only {total} exist")
    rng = Xoshiro256StarStar(seed)
    seen: set[tuple[str, ...]] = set()
    out: list[TypePermutation] = []
    while len(out) < n:
        order = list(registry.labels)
        rng.shuffle(order)
        key = tuple(order)
        if key in seen:
            continue
        seen.add(key)
        out.append(TypePermutation(order=key, registry=registry))
    return out
