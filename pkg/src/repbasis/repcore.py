"""Pair-sum counting over finite integer sets and prescribed-count targets.

Everything here is exact integer arithmetic except the density comparison,
which guards its float evaluation with an explicit margin.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import EmptySetError

# Sentinel for "no finite bound at this n".  A plain float keeps min(),
# comparisons and JSON handling unsurprising.
INFINITY = math.inf

# Strict comparisons against sqrt(x)/phi(x) must clear this margin before a
# float verdict is trusted; ties and hairline wins count as failures.
DENSITY_MARGIN = 1e-9


def is_infinite(value) -> bool:
    return value == INFINITY


def _encode_count(value):
    return "inf" if is_infinite(value) else int(value)


def _decode_count(raw, *, what: str):
    if raw == "inf":
        return INFINITY
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ValueError(f"{what} must be an integer or \"inf\", got {raw!r}")
    return raw


@dataclass(frozen=True, eq=True)
class RepTarget:
    """Prescribed representation counts: explicit on |n| <= window_radius, a
    constant default outside.

    The default must be >= 1 (or INFINITY), so only finitely many integers can
    be assigned zero.
    """

    window_radius: int
    values: Mapping[int, int | float]
    default: int | float = 1

    def __post_init__(self):
        w = self.window_radius
        if isinstance(w, bool) or not isinstance(w, int) or w < 0:
            raise ValueError("window_radius must be a non-negative integer")
        d = self.default
        if isinstance(d, bool) or not (d == INFINITY or (isinstance(d, int) and d >= 1)):
            raise ValueError("default must be an integer >= 1 or INFINITY")
        expected = set(range(-w, w + 1))
        if set(self.values) != expected:
            raise ValueError("values must cover exactly the integers with |n| <= window_radius")
        for n, v in self.values.items():
            if not (v == INFINITY or (isinstance(v, int) and not isinstance(v, bool) and v >= 0)):
                raise ValueError(f"value at n={n} must be a non-negative integer or INFINITY")
        object.__setattr__(self, "values", dict(self.values))

    @classmethod
    def constant(cls, value) -> "RepTarget":
        return cls(0, {0: value}, value)

    def value(self, n: int):
        if -self.window_radius <= n <= self.window_radius:
            return self.values[n]
        return self.default

    def zero_points(self) -> list[int]:
        """All n with target value 0 (necessarily inside the window)."""
        return sorted(n for n, v in self.values.items() if v == 0)

    def max_finite(self, radius: int):
        """Largest finite prescribed value on [-radius, radius], or None
        when every value there is INFINITY."""
        candidates = [v for n, v in self.values.items() if abs(n) <= radius]
        if radius > self.window_radius:
            candidates.append(self.default)
        finite = [v for v in candidates if not is_infinite(v)]
        return max(finite) if finite else None

    def to_dict(self) -> dict:
        return {
            "window": self.window_radius,
            "values": {str(n): _encode_count(v) for n, v in sorted(self.values.items())},
            "default": _encode_count(self.default),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RepTarget":
        if not isinstance(data, dict):
            raise ValueError("target must be a JSON object")
        try:
            window = data["window"]
            raw_values = data["values"]
            default = data["default"]
        except KeyError as exc:
            raise ValueError(f"target is missing key {exc.args[0]!r}") from None
        if not isinstance(raw_values, dict):
            raise ValueError("target values must be an object")
        values = {}
        for key, raw in raw_values.items():
            try:
                n = int(key)
            except (TypeError, ValueError):
                raise ValueError(f"target value key {key!r} is not an integer") from None
            values[n] = _decode_count(raw, what=f"value at n={n}")
        return cls(window, values, _decode_count(default, what="default"))


@dataclass(frozen=True, eq=True)
class FiniteBasis:
    """A finite set of integers, stored strictly increasing.

    Zero is representable (verification has to inspect corrupted stage sets),
    but every construction step rejects and never produces it.
    """

    elements: tuple[int, ...] = ()

    def __post_init__(self):
        els = self.elements
        for e in els:
            if isinstance(e, bool) or not isinstance(e, int):
                raise ValueError(f"elements must be integers, got {e!r}")
        if any(els[i] >= els[i + 1] for i in range(len(els) - 1)):
            raise ValueError("elements must be strictly increasing")

    @classmethod
    def from_iterable(cls, items: Iterable[int]) -> "FiniteBasis":
        return cls(tuple(sorted(set(items))))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, value: int) -> bool:
        i = bisect_left(self.elements, value)
        return i < len(self.elements) and self.elements[i] == value

    def max_abs(self) -> int:
        if not self.elements:
            return 0
        return max(-self.elements[0], self.elements[-1])

    def union(self, extra: Iterable[int]) -> "FiniteBasis":
        return FiniteBasis.from_iterable((*self.elements, *extra))


def rep_function(A: FiniteBasis, n: int) -> int:
    """Number of unordered pairs a <= b in A with a + b = n."""
    count = 0
    for a in A.elements:
        if 2 * a > n:
            break
        if (n - a) in A:
            count += 1
    return count


def sum_counter(A: FiniteBasis) -> Counter:
    """Multiplicity of every realized pair sum a <= b over A."""
    counts: Counter = Counter()
    els = A.elements
    for i, a in enumerate(els):
        for b in els[i:]:
            counts[a + b] += 1
    return counts


def rep_profile(A: FiniteBasis) -> dict[int, int]:
    """Pair-sum counts over the canonical window [-2*max|a|, 2*max|a|].

    Every n in the window appears, zeros included.  The window has
    4*max|a| + 1 entries, so this is meant for small sets.
    """
    if not A.elements:
        raise EmptySetError("rep_profile needs a non-empty set")
    reach = 2 * A.max_abs()
    profile = {n: 0 for n in range(-reach, reach + 1)}
    profile.update(sum_counter(A))
    return profile


def counting(A: FiniteBasis, y, x) -> int:
    """Number of elements of A in the closed interval [y, x]."""
    if y > x:
        return 0
    els = A.elements
    return bisect_right(els, x) - bisect_left(els, y)


def d0_of(f: RepTarget) -> int:
    """Smallest positive d such that f(n) >= 1 whenever |n| >= d."""
    zeros = f.zero_points()
    if not zeros:
        return 1
    return max(abs(n) for n in zeros) + 1


class TargetSequence:
    """Deterministic enumeration u_1, u_2, ... hitting every n exactly f(n)
    times in the limit.

    Round t scans n = 0, 1, -1, ..., t, -t and emits n when
    min(f(n), t) still exceeds the number of earlier emissions of n.
    Prefixes are stable: growing the sequence never rewrites older terms.
    A sequence caches its emissions, so share one per owner.
    """

    def __init__(self, source: RepTarget):
        self.source = source
        self._emitted: list[int] = []
        self._counts: Counter = Counter()
        self._round = 0

    def _advance_round(self) -> None:
        self._round += 1
        t = self._round
        for n in self._spiral(t):
            bound = min(self.source.value(n), t)
            if bound > self._counts[n]:
                self._emitted.append(n)
                self._counts[n] += 1

    @staticmethod
    def _spiral(t: int) -> Iterator[int]:
        yield 0
        for m in range(1, t + 1):
            yield m
            yield -m

    def prefix(self, m: int) -> list[int]:
        """The first m terms (m >= 0)."""
        if m < 0:
            raise ValueError("prefix length must be non-negative")
        while len(self._emitted) < m:
            self._advance_round()
        return self._emitted[:m]


def target_prefix(f: RepTarget, m: int) -> list[int]:
    return TargetSequence(f).prefix(m)


_PHI_KINDS = ("log2", "ln", "pow", "clog")


@dataclass(frozen=True, eq=True)
class PhiSpec:
    """Growth function for the density requirement sqrt(x)/phi(x).

    Grammar: "log2" -> log2(x+2); "ln" -> ln(x+2); "pow:<eps>" -> x**eps with
    0 < eps < 1/2; "clog:<c>" -> c*ln(x+2) with c > 0.  Parameters are exact
    rationals.  Every admissible phi tends to infinity.
    """

    kind: str
    parameter: Fraction | None = None

    def __post_init__(self):
        if self.kind not in _PHI_KINDS:
            raise ValueError(f"unknown phi kind {self.kind!r}")
        if self.kind in ("log2", "ln"):
            if self.parameter is not None:
                raise ValueError(f"phi kind {self.kind!r} takes no parameter")
        elif self.kind == "pow":
            if self.parameter is None or not (0 < self.parameter < Fraction(1, 2)):
                raise ValueError("pow exponent must satisfy 0 < eps < 1/2")
        elif self.kind == "clog":
            if self.parameter is None or self.parameter <= 0:
                raise ValueError("clog coefficient must be positive")

    @classmethod
    def parse(cls, text: str) -> "PhiSpec":
        if not isinstance(text, str):
            raise ValueError("phi spec must be a string")
        head, sep, tail = text.partition(":")
        if not sep:
            return cls(head)
        try:
            parameter = Fraction(tail)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad phi parameter {tail!r}") from None
        return cls(head, parameter)

    def __str__(self) -> str:
        if self.parameter is None:
            return self.kind
        return f"{self.kind}:{self.parameter}"

    def evaluate(self, x) -> float:
        """phi(x) for x >= 0, as a float.  Handles arbitrarily large ints."""
        if x < 0:
            raise ValueError("phi is evaluated on non-negative x")
        if self.kind == "log2":
            return math.log2(x + 2)
        if self.kind == "ln":
            return math.log(x + 2)
        if self.kind == "clog":
            return float(self.parameter) * math.log(x + 2)
        # pow: route through exp/log so huge integers do not overflow float pow
        if x == 0:
            return 0.0
        return math.exp(float(self.parameter) * math.log(x))


def real_sqrt(x) -> float:
    if x < 0:
        raise ValueError("sqrt of negative value")
    try:
        return math.sqrt(x)
    except OverflowError:
        return math.exp(0.5 * math.log(x))


def density_demand(x, phi: PhiSpec) -> float:
    """The bar sqrt(x)/phi(x) that a count must strictly exceed."""
    return real_sqrt(x) / phi.evaluate(x)


def density_exceeds(count: int, x, phi: PhiSpec) -> bool:
    """Strict count > sqrt(x)/phi(x), trusted only past the float margin."""
    return count > density_demand(x, phi) + DENSITY_MARGIN
