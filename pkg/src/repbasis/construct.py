"""Staged construction of nested integer sets with prescribed pair-sum counts.

A run alternates two moves.  An extension stage adjoins a pair {-c, c+u}
so the next target value u gains one representation.  A densification
stage adjoins a dilated Sidon set so the element count inside [-x, x]
beats sqrt(x)/phi(x) at a recorded checkpoint x.  Both moves keep every
pair-sum count at or below the prescribed bound f.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass

from .errors import MalformedTraceError, PhiTooSlowError, PreconditionViolatedError
from .repcore import (
    FiniteBasis,
    PhiSpec,
    RepTarget,
    TargetSequence,
    counting,
    d0_of,
    density_exceeds,
    sum_counter,
    target_prefix,
)
from .sidon import SidonLadder, SidonSet

DEFAULT_SEARCH_CAP = 10**9
SEARCH_CAP_ENV = "REPBASIS_SEARCH_CAP"

KIND_BASE = "BASE"
KIND_EXTENSION = "TARGET_EXTENSION"
KIND_DENSIFICATION = "DENSIFICATION"


def resolve_search_cap(cap: int | None = None) -> int:
    """Explicit argument, else the REPBASIS_SEARCH_CAP env var, else 10**9."""
    if cap is None:
        raw = os.environ.get(SEARCH_CAP_ENV)
        if raw is None:
            return DEFAULT_SEARCH_CAP
        try:
            cap = int(raw)
        except ValueError:
            raise ValueError(f"{SEARCH_CAP_ENV} must be a positive integer, got {raw!r}") from None
    if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
        raise ValueError(f"search cap must be a positive integer, got {cap!r}")
    return cap


def _as_phi(phi: PhiSpec | str) -> PhiSpec:
    if isinstance(phi, str):
        return PhiSpec.parse(phi)
    if not isinstance(phi, PhiSpec):
        raise TypeError(f"phi must be a PhiSpec or a spec string, got {type(phi).__name__}")
    return phi


def expected_m_covered(index: int) -> int:
    # base covers u_1; stages 2l and 2l+1 both certify the first l+1 targets
    return (index + 2) // 2


def expected_kind(index: int) -> str:
    if index == 1:
        return KIND_BASE
    return KIND_EXTENSION if index % 2 == 0 else KIND_DENSIFICATION


@dataclass(frozen=True, eq=True)
class StageRecord:
    """One stage of a construction: the set after the move, what was added,
    and the density checkpoint when the stage certifies one."""

    index: int
    kind: str
    set: FiniteBasis
    added: FiniteBasis
    m_covered: int
    x: int | None = None


@dataclass(frozen=True, eq=True)
class ConstructionTrace:
    f: RepTarget
    phi: PhiSpec
    u_prefix: tuple[int, ...]
    stages: tuple[StageRecord, ...]

    def final_set(self) -> FiniteBasis:
        return self.stages[-1].set

    def checkpoints(self) -> list[tuple[int, int, FiniteBasis]]:
        """(stage index, x, stage set) for every stage that records an x."""
        return [(s.index, s.x, s.set) for s in self.stages if s.x is not None]


def _reject_bad_pair_counts(A: FiniteBasis, f: RepTarget, context: str) -> Counter:
    counts = sum_counter(A)
    for n in sorted(counts):
        fv = f.value(n)
        if counts[n] > fv:
            raise PreconditionViolatedError(
                f"{context}: pair-sum count {counts[n]} exceeds prescribed {fv} at n={n}",
                witness=n,
            )
    return counts


def _reject_zero_member(A: FiniteBasis, context: str) -> None:
    if 0 in A:
        raise PreconditionViolatedError(f"{context}: 0 must not be an element", witness=0)


def _density_search(
    phi: PhiSpec,
    scale: int,
    extra_count: int,
    min_x: int | None,
    cap: int,
    context: str,
) -> tuple[int, int, SidonSet]:
    """Smallest n >= 1 such that x = scale*n clears every admission rule:
    x > min_x when given, the best Sidon set D in [1, n] has 4|D|^2 > n,
    and extra_count + |D| strictly beats sqrt(x)/phi(x).

    Returns (n, x, D).  Raises PhiTooSlowError once x would pass cap.
    """
    ladder = SidonLadder()
    n = 1 if min_x is None else min_x // scale + 1
    while True:
        x = scale * n
        if x > cap:
            raise PhiTooSlowError(
                f"{context}: no x <= {cap} (step {scale}) reaches "
                f"count > sqrt(x)/phi(x) with phi={phi}",
                cap=cap,
            )
        ladder.advance(n)
        size = ladder.best_size()
        if 4 * size * size > n and density_exceeds(extra_count + size, x, phi):
            return n, x, ladder.best_elements()
        n += 1


def base_case(
    f: RepTarget, phi: PhiSpec | str, *, search_cap: int | None = None
) -> StageRecord:
    """First stage: a dilated Sidon set plus the pair {-c, c+u_1}.

    Scans n = 1, 2, ... and keeps the first stage whose element count in
    [-x, x], x = 3*alpha*n, strictly beats sqrt(x)/phi(x).
    """
    phi = _as_phi(phi)
    cap = resolve_search_cap(search_cap)
    u1 = target_prefix(f, 1)[0]
    d0 = d0_of(f)
    c = 4 * d0 if u1 >= 0 else -4 * d0
    alpha = abs(2 * c + 2 * u1)
    scale = 3 * alpha
    n, x, D = _density_search(phi, scale, 2, None, cap, "base stage scan")
    A1 = FiniteBasis.from_iterable([scale * d for d in D] + [-c, c + u1])
    # the dilation spreads D past both tag elements, so nothing collides
    assert len(A1) == len(D) + 2 and counting(A1, -x, x) == len(A1)
    return StageRecord(index=1, kind=KIND_BASE, set=A1, added=A1, m_covered=1, x=x)


def extend_target(A: FiniteBasis, f: RepTarget, u: TargetSequence, m: int) -> FiniteBasis:
    """Extend A so target u_{m+1} gains a representation.

    Requires that A already covers the first m targets, never exceeds f,
    and omits 0; violations raise PreconditionViolatedError with the
    offending integer as witness.  When u_{m+1} is already covered the
    set is returned unchanged.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    prefix = u.prefix(m + 1)
    target = prefix[-1]
    _reject_zero_member(A, "extension")
    counts = _reject_bad_pair_counts(A, f, "extension")
    needed_before = Counter(prefix[:m])
    for n in sorted(needed_before):
        if counts[n] < needed_before[n]:
            raise PreconditionViolatedError(
                f"extension: first {m} targets not covered at n={n} "
                f"(have {counts[n]}, need {needed_before[n]})",
                witness=n,
            )
    if counts[target] >= prefix.count(target):
        return A
    d = max(d0_of(f), abs(target), A.max_abs())
    c = 4 * d + 1 if target >= 0 else -(4 * d + 1)
    return A.union((-c, c + target))


def densify(
    A: FiniteBasis,
    f: RepTarget,
    phi: PhiSpec | str,
    M: int,
    *,
    search_cap: int | None = None,
) -> tuple[FiniteBasis, int]:
    """Adjoin a dilated Sidon set so the count in [-x, x] beats
    sqrt(x)/phi(x) at some checkpoint x > M.

    x runs over multiples of 5T, T = max(d0, max|a|); the first multiple
    whose counted density clears the bar is kept.  Returns (B, x).
    """
    phi = _as_phi(phi)
    cap = resolve_search_cap(search_cap)
    if M < 1:
        raise PreconditionViolatedError(f"densification: M must be >= 1, got {M}")
    _reject_zero_member(A, "densification")
    _reject_bad_pair_counts(A, f, "densification")
    T = max(d0_of(f), A.max_abs())
    scale = 5 * T
    n, x, D = _density_search(phi, scale, len(A), M, cap, "densification scan")
    B = A.union(scale * d for d in D)
    # every new element lands in (max|a|, x], so the union count is exact
    assert len(B) == len(A) + len(D) and counting(B, -x, x) == len(B)
    return B, x


def build(
    f: RepTarget,
    phi: PhiSpec | str,
    L: int,
    *,
    search_cap: int | None = None,
) -> ConstructionTrace:
    """Run the base stage plus L extension/densification rounds.

    Produces 2L+1 stages and L+1 checkpoints; stage 2l covers target
    u_{l+1} and stage 2l+1 certifies checkpoint x_{l+1} > x_l.

    phi may be given as a spec string such as "log2" or "pow:1/4".
    """
    if not isinstance(L, int) or isinstance(L, bool) or L < 1:
        raise ValueError(f"stage count L must be an integer >= 1, got {L!r}")
    phi = _as_phi(phi)
    cap = resolve_search_cap(search_cap)
    useq = TargetSequence(f)
    u_prefix = tuple(useq.prefix(L + 1))
    base = base_case(f, phi, search_cap=cap)
    stages = [base]
    current = base.set
    x_prev = base.x
    for l in range(1, L + 1):
        extended = extend_target(current, f, useq, l)
        stages.append(
            StageRecord(
                index=2 * l,
                kind=KIND_EXTENSION,
                set=extended,
                added=_difference(extended, current),
                m_covered=l + 1,
            )
        )
        current = extended
        dense, x = densify(current, f, phi, x_prev, search_cap=cap)
        stages.append(
            StageRecord(
                index=2 * l + 1,
                kind=KIND_DENSIFICATION,
                set=dense,
                added=_difference(dense, current),
                m_covered=l + 1,
                x=x,
            )
        )
        current = dense
        x_prev = x
    return ConstructionTrace(f=f, phi=phi, u_prefix=u_prefix, stages=tuple(stages))


def _difference(bigger: FiniteBasis, smaller: FiniteBasis) -> FiniteBasis:
    return FiniteBasis(tuple(e for e in bigger if e not in smaller))


def validate_trace_structure(trace: ConstructionTrace) -> None:
    """Shape rules every trace object must satisfy before semantic checks.

    Raises MalformedTraceError; semantic violations (densities, coverage,
    nesting) are the verify module's job and come back as report entries.
    """
    stages = trace.stages
    if not stages:
        raise MalformedTraceError("trace has no stages")
    if len(stages) % 2 == 0:
        raise MalformedTraceError("trace must end on a checkpoint stage (odd stage count)")
    for pos, s in enumerate(stages, start=1):
        if s.index != pos:
            raise MalformedTraceError(f"stage at position {pos} carries index {s.index}")
        if s.kind != expected_kind(pos):
            raise MalformedTraceError(
                f"stage {pos} kind {s.kind!r} does not match position (want {expected_kind(pos)!r})"
            )
        if (s.x is not None) != (pos % 2 == 1):
            raise MalformedTraceError(f"stage {pos} must carry x exactly when its index is odd")
        if s.x is not None and s.x < 1:
            raise MalformedTraceError(f"stage {pos} checkpoint x must be positive, got {s.x}")
        if s.m_covered != expected_m_covered(pos):
            raise MalformedTraceError(
                f"stage {pos} m_covered {s.m_covered} does not match position "
                f"(want {expected_m_covered(pos)})"
            )
    want_targets = (len(stages) + 1) // 2
    if len(trace.u_prefix) != want_targets:
        raise MalformedTraceError(
            f"u_prefix length {len(trace.u_prefix)} does not match stage count "
            f"(want {want_targets})"
        )


def trace_to_dict(trace: ConstructionTrace) -> dict:
    stages = []
    for s in trace.stages:
        entry: dict = {
            "index": s.index,
            "kind": s.kind,
            "set": list(s.set),
            "added": list(s.added),
        }
        if s.x is not None:
            entry["x"] = s.x
        stages.append(entry)
    return {
        "f": trace.f.to_dict(),
        "phi": str(trace.phi),
        "u_prefix": list(trace.u_prefix),
        "stages": stages,
    }


def trace_dumps(trace: ConstructionTrace) -> str:
    """Canonical text form: sorted keys, two-space indent, one trailing
    newline.  Identical traces serialize to identical bytes."""
    return json.dumps(trace_to_dict(trace), sort_keys=True, indent=2) + "\n"


def _require_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedTraceError(f"{what} must be an integer, got {value!r}")
    return value


def _int_list(raw, what: str) -> list[int]:
    if not isinstance(raw, list):
        raise MalformedTraceError(f"{what} must be a list")
    return [_require_int(v, f"{what} entry") for v in raw]


def _strict_basis(raw, what: str) -> FiniteBasis:
    values = _int_list(raw, what)
    if any(values[i] >= values[i + 1] for i in range(len(values) - 1)):
        raise MalformedTraceError(f"{what} must be strictly increasing")
    return FiniteBasis(tuple(values))


def trace_from_dict(data) -> ConstructionTrace:
    """Parse and structurally validate the canonical trace mapping."""
    if not isinstance(data, dict):
        raise MalformedTraceError("trace must be a JSON object")
    required = {"f", "phi", "u_prefix", "stages"}
    if set(data) != required:
        missing = required - set(data)
        extra = set(data) - required
        parts = []
        if missing:
            parts.append(f"missing {sorted(missing)}")
        if extra:
            parts.append(f"unexpected {sorted(extra)}")
        raise MalformedTraceError("trace keys: " + "; ".join(parts))
    try:
        f = RepTarget.from_dict(data["f"])
    except ValueError as exc:
        raise MalformedTraceError(f"bad target function: {exc}") from None
    if not isinstance(data["phi"], str):
        raise MalformedTraceError("phi must be a string")
    try:
        phi = PhiSpec.parse(data["phi"])
    except ValueError as exc:
        raise MalformedTraceError(f"bad phi: {exc}") from None
    u_prefix = tuple(_int_list(data["u_prefix"], "u_prefix"))
    raw_stages = data["stages"]
    if not isinstance(raw_stages, list) or not raw_stages:
        raise MalformedTraceError("stages must be a non-empty list")
    stages = []
    for pos, raw in enumerate(raw_stages, start=1):
        if not isinstance(raw, dict):
            raise MalformedTraceError(f"stage {pos} must be an object")
        allowed = {"index", "kind", "set", "added", "x"}
        if not set(raw) <= allowed:
            raise MalformedTraceError(
                f"stage {pos} has unexpected keys {sorted(set(raw) - allowed)}"
            )
        for key in ("index", "kind", "set", "added"):
            if key not in raw:
                raise MalformedTraceError(f"stage {pos} is missing {key!r}")
        index = _require_int(raw["index"], f"stage {pos} index")
        if not isinstance(raw["kind"], str):
            raise MalformedTraceError(f"stage {pos} kind must be a string")
        x = _require_int(raw["x"], f"stage {pos} x") if "x" in raw else None
        stages.append(
            StageRecord(
                index=index,
                kind=raw["kind"],
                set=_strict_basis(raw["set"], f"stage {pos} set"),
                added=_strict_basis(raw["added"], f"stage {pos} added"),
                m_covered=expected_m_covered(index),
                x=x,
            )
        )
    trace = ConstructionTrace(f=f, phi=phi, u_prefix=u_prefix, stages=tuple(stages))
    validate_trace_structure(trace)
    return trace


def trace_loads(text: str) -> ConstructionTrace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTraceError(f"trace is not valid JSON: {exc}") from None
    return trace_from_dict(data)
