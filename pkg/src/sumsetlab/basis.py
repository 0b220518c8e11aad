"""Symbolic descriptions of additive bases and their enumeration up to a bound."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Union

from .errors import InvalidParameterError

U64_MAX = 2**64 - 1
MAX_BOUND = 2**32


def polygonal_value(k: int, x: int) -> int:
    """Return the x-th k-gonal number ((k-2)x^2 - (k-4)x) / 2, indexed from x = 0."""
    if k < 3:
        raise InvalidParameterError(f"polygonal order k must be >= 3, got {k}")
    if x < 0:
        raise InvalidParameterError(f"index x must be nonnegative, got {x}")
    value = ((k - 2) * x * x - (k - 4) * x) // 2
    if value > U64_MAX:
        raise InvalidParameterError(f"polygonal_value({k}, {x}) overflows 64 bits")
    return value


def polygonal_count(k: int, bound: int) -> int:
    """Number of indices x >= 0 with polygonal_value(k, x) <= bound."""
    if bound < 0:
        return 0
    # positive root of (k-2)x^2 - (k-4)x - 2*bound = 0, then fix up rounding
    a, b = k - 2, k - 4
    x = (b + isqrt(b * b + 8 * a * bound)) // (2 * a)
    while x > 0 and ((a * x * x - b * x) // 2) > bound:
        x -= 1
    while (a * (x + 1) ** 2 - b * (x + 1)) // 2 <= bound:
        x += 1
    return x + 1


def _check_strict(values: tuple[int, ...], what: str) -> None:
    for v in values:
        if v < 0:
            raise InvalidParameterError(f"{what} contains negative value {v}")
    for a, b in zip(values, values[1:]):
        if a >= b:
            raise InvalidParameterError(f"{what} must be strictly increasing ({a} then {b})")


@dataclass(frozen=True)
class Polygonal:
    k: int

    def __post_init__(self) -> None:
        if self.k < 3:
            raise InvalidParameterError(f"polygonal order k must be >= 3, got {self.k}")

    def __str__(self) -> str:
        return f"poly:{self.k}"


@dataclass(frozen=True)
class Explicit:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        _check_strict(self.values, "explicit basis")

    def __str__(self) -> str:
        return "set:" + ",".join(map(str, self.values))


@dataclass(frozen=True)
class Augmented:
    base: "BasisSpec"
    finite_set: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "finite_set", tuple(int(v) for v in self.finite_set))
        _check_strict(self.finite_set, "augmentation set")
        if isinstance(self.base, Augmented):
            raise InvalidParameterError("augmentation nests one level only")

    @classmethod
    def prefix(cls, base: "BasisSpec", cutoff: int) -> "Augmented":
        """base ∪ {0, 1, ..., cutoff - 1}."""
        return cls(base, tuple(range(cutoff)))

    def __str__(self) -> str:
        return f"aug:{self.base}+set:" + ",".join(map(str, self.finite_set))


BasisSpec = Union[Polygonal, Explicit, Augmented]


def _check_bound(bound: int) -> None:
    if bound < 0:
        raise InvalidParameterError(f"bound must be nonnegative, got {bound}")
    if bound > MAX_BOUND:
        raise InvalidParameterError(f"bound {bound} exceeds supported maximum 2^32")


def enumerate_basis(spec: BasisSpec, bound: int) -> list[int]:
    """All elements of ``spec`` in [0, bound], strictly increasing."""
    _check_bound(bound)
    if isinstance(spec, Polygonal):
        return [polygonal_value(spec.k, x) for x in range(polygonal_count(spec.k, bound))]
    if isinstance(spec, Explicit):
        return [v for v in spec.values if v <= bound]
    if isinstance(spec, Augmented):
        merged = set(enumerate_basis(spec.base, bound))
        merged.update(v for v in spec.finite_set if v <= bound)
        return sorted(merged)
    raise TypeError(f"not a basis spec: {spec!r}")


def contains_zero(spec: BasisSpec) -> bool:
    if isinstance(spec, Polygonal):
        return True
    if isinstance(spec, Explicit):
        return bool(spec.values) and spec.values[0] == 0
    return contains_zero(spec.base) or (bool(spec.finite_set) and spec.finite_set[0] == 0)


def to_bitmap(spec: BasisSpec, bound: int):
    from .engine import IntervalBitmap

    return IntervalBitmap.from_members(bound, enumerate_basis(spec, bound))


def parse_spec(text: str) -> BasisSpec:
    """Parse the CLI basis syntax: ``poly:k``, ``set:a,b,c``, ``aug:<spec>+set:a,b,c``."""
    text = text.strip()
    if text.startswith("aug:"):
        body = text[4:]
        base_text, sep, extra = body.rpartition("+")
        if not sep:
            raise InvalidParameterError(f"bad token {text!r}: aug needs '<spec>+set:...'")
        if not extra.startswith("set:"):
            raise InvalidParameterError(f"bad token {extra!r}: augmentation must be a set: list")
        base = parse_spec(base_text)
        return Augmented(base, _parse_ints(extra[4:]))
    if text.startswith("poly:"):
        return Polygonal(_parse_int(text[5:]))
    if text.startswith("set:"):
        return Explicit(_parse_ints(text[4:]))
    raise InvalidParameterError(f"bad token {text!r}: expected poly:, set: or aug:")


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InvalidParameterError(f"bad token {token!r}: not an integer") from None


def _parse_ints(body: str) -> tuple[int, ...]:
    if not body:
        return ()
    values = []
    for token in body.split(","):
        if ".." in token:
            lo, _, hi = token.partition("..")
            values.extend(range(_parse_int(lo), _parse_int(hi) + 1))
        else:
            values.append(_parse_int(token))
    return tuple(sorted(set(values)))
