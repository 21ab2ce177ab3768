"""Sidon sets in [1, n]: greedy and algebraic constructions.

A Sidon set has all pairwise sums a + b (a <= b) distinct.  The density
machinery needs, for a given ambient bound n, a Sidon subset D of [1, n]
with 4*|D|**2 > n, i.e. |D| > sqrt(n)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DensityUnreachableError, InputTooSmallError


@dataclass(frozen=True, eq=True)
class SidonSet:
    """A Sidon set together with the ambient bound it was built for."""

    elements: tuple[int, ...]
    ambient_n: int

    def __post_init__(self):
        els = self.elements
        if any(els[i] >= els[i + 1] for i in range(len(els) - 1)):
            raise ValueError("elements must be strictly increasing")
        if els and (els[0] < 1 or els[-1] > self.ambient_n):
            raise ValueError("elements must lie in [1, ambient_n]")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def density_ok(self) -> bool:
        """Exact check 4*|D|**2 > n."""
        return 4 * len(self.elements) ** 2 > self.ambient_n


def is_sidon(items: Iterable[int]) -> bool:
    """True when all pairwise sums of the distinct values are distinct."""
    els = sorted(set(items))
    seen = set()
    for i, a in enumerate(els):
        for b in els[i:]:
            s = a + b
            if s in seen:
                return False
            seen.add(s)
    return True


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def greedy_sidon(n: int) -> SidonSet:
    """First-fit Sidon set: scan 1..n, keep every value that preserves the
    distinct-sums property.  Prefix-monotone in n."""
    if n < 1:
        raise InputTooSmallError("greedy construction needs n >= 1")
    ladder = SidonLadder()
    ladder.advance(n)
    return SidonSet(tuple(ladder.greedy_prefix()), n)


def erdos_turan_sidon(n: int) -> SidonSet:
    """Sidon set {2pk + (k*k mod p) + 1 : 0 <= k < p} for the largest prime
    p with 2*p*p <= n.  Needs n >= 8 so that p = 2 is admissible."""
    if n < 8:
        raise InputTooSmallError("algebraic construction needs n >= 8")
    p = 2
    q = 3
    while 2 * q * q <= n:
        if _is_prime(q):
            p = q
        q += 1
    return SidonSet(_et_elements(p), n)


def _et_elements(p: int) -> tuple[int, ...]:
    # max element 2p(p-1) + ((p-1)^2 mod p) + 1 <= 2p^2 - p, inside [1, n]
    return tuple(2 * p * k + (k * k) % p + 1 for k in range(p))


def sidon_for_density(n: int) -> SidonSet:
    """The larger of the two constructions, which must beat sqrt(n)/2.

    Raises DensityUnreachableError when even the better set has
    4*|D|**2 <= n.
    """
    best = greedy_sidon(n)
    if n >= 8:
        algebraic = erdos_turan_sidon(n)
        if len(algebraic) > len(best):
            best = algebraic
    if not best.density_ok():
        raise DensityUnreachableError(
            f"no known Sidon set in [1, {n}] has more than sqrt(n)/2 elements"
        )
    return best


class SidonLadder:
    """Incremental view of both constructions as the ambient bound grows.

    The admissible-x scans call advance(n) with n increasing one step at a
    time; recomputing either construction from scratch per step would be
    quadratic overall.  The greedy set is extended in place (first-fit is
    prefix-monotone) and the algebraic prime ratchets forward.
    """

    def __init__(self):
        self._greedy: list[int] = []
        self._sums = bytearray(1)
        self._candidate = 1
        self._prime = 0
        self._next_q = 2
        self._n = 0

    def advance(self, n: int) -> None:
        if n < self._n:
            raise ValueError("ladder only moves forward")
        while self._candidate <= n:
            self._try_add(self._candidate)
            self._candidate += 1
        while 2 * self._next_q * self._next_q <= n:
            if _is_prime(self._next_q):
                self._prime = self._next_q
            self._next_q += 1
        self._n = n

    def _try_add(self, c: int) -> None:
        sums = self._sums
        top = len(sums)
        for e in self._greedy:
            s = c + e
            if s < top and sums[s]:
                return
        if 2 * c < top and sums[2 * c]:
            return
        need = 2 * c + 1
        if need > top:
            sums.extend(bytearray(need - top))
        for e in self._greedy:
            sums[c + e] = 1
        sums[2 * c] = 1
        self._greedy.append(c)

    def greedy_prefix(self) -> list[int]:
        return list(self._greedy)

    def best_size(self) -> int:
        """Size of the better construction at the current bound."""
        return max(len(self._greedy), self._prime)

    def best_elements(self) -> SidonSet:
        """Materialize the better construction (algebraic wins ties only if
        strictly larger, matching sidon_for_density)."""
        if self._prime > len(self._greedy):
            return SidonSet(_et_elements(self._prime), self._n)
        return SidonSet(tuple(self._greedy), self._n)
