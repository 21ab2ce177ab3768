"""Brute-force oracles for every claim a construction trace makes.

Nothing here reuses the construction's intermediate quantities (c, d, T,
or the Sidon set).  Each check re-derives its verdict from the stage
sets, the checkpoints, and the prescribed function alone, so agreement
with the builder is evidence rather than tautology.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .construct import (
    KIND_BASE,
    KIND_DENSIFICATION,
    KIND_EXTENSION,
    ConstructionTrace,
    validate_trace_structure,
)
from .errors import PreconditionViolatedError
from .repcore import (
    FiniteBasis,
    counting,
    density_demand,
    density_exceeds,
    is_infinite,
    rep_function,
    sum_counter,
    target_prefix,
)

# condition names, numbered as the stage invariants they certify
COND_PAIR_BOUND = "condition_1_pair_bound"
COND_COVERAGE = "condition_2_coverage"
COND_DENSITY = "condition_3_density"
COND_ZERO_FREE = "condition_4_zero_free"
COND_NESTING = "nesting"
COND_MONOTONE = "checkpoint_monotone"
COND_U_PREFIX = "u_prefix_consistency"


@dataclass(frozen=True, eq=True)
class CheckResult:
    condition: str
    stage: int | None
    passed: bool
    witness: int | None
    detail: str

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "stage": self.stage,
            "passed": self.passed,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass(frozen=True, eq=True)
class InvariantReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _ok(condition: str, stage: int | None, detail: str = "") -> CheckResult:
    return CheckResult(condition, stage, True, None, detail)


def _fail(condition: str, stage: int | None, witness: int | None, detail: str) -> CheckResult:
    return CheckResult(condition, stage, False, witness, detail)


def check_invariants(trace: ConstructionTrace) -> InvariantReport:
    """Re-verify the four per-stage invariants plus trace-global coherence.

    Structural defects (bad indices, misplaced checkpoints) raise
    MalformedTraceError; semantic violations come back as failed entries
    with a concrete integer witness.
    """
    validate_trace_structure(trace)
    f, phi, u_prefix = trace.f, trace.phi, trace.u_prefix
    checks: list[CheckResult] = []
    seen_x: list[tuple[int, int]] = []
    prev: FiniteBasis | None = None
    for s in trace.stages:
        if 0 in s.set:
            checks.append(_fail(COND_ZERO_FREE, s.index, 0, "0 is an element of the stage set"))
        else:
            checks.append(_ok(COND_ZERO_FREE, s.index))

        checks.append(_composition_check(s.index, prev, s.set, s.added))

        counts = sum_counter(s.set)
        bad = sorted(n for n, r in counts.items() if r > f.value(n))
        if bad:
            n = bad[0]
            checks.append(
                _fail(
                    COND_PAIR_BOUND,
                    s.index,
                    n,
                    f"rep count {counts[n]} exceeds prescribed {f.value(n)} at n={n}",
                )
            )
        else:
            checks.append(_ok(COND_PAIR_BOUND, s.index, "pair-sum counts within bounds"))

        need = Counter(u_prefix[: s.m_covered])
        short = sorted(n for n in need if counts[n] < need[n])
        if short:
            n = short[0]
            checks.append(
                _fail(
                    COND_COVERAGE,
                    s.index,
                    n,
                    f"target n={n} needs {need[n]} representations, set gives {counts[n]}",
                )
            )
        else:
            checks.append(_ok(COND_COVERAGE, s.index, f"first {s.m_covered} targets covered"))

        if s.x is not None:
            cnt = counting(s.set, -s.x, s.x)
            demand = density_demand(s.x, phi)
            if density_exceeds(cnt, s.x, phi):
                checks.append(
                    _ok(COND_DENSITY, s.index, f"count {cnt} > sqrt(x)/phi(x) = {demand:.6f}")
                )
            else:
                checks.append(
                    _fail(
                        COND_DENSITY,
                        s.index,
                        s.x,
                        f"count {cnt} does not clear sqrt(x)/phi(x) = {demand:.6f} at x={s.x}",
                    )
                )
            seen_x.append((s.index, s.x))
        prev = s.set

    monotone_fail = next(
        (
            (idx, x)
            for (_, x_prev), (idx, x) in zip(seen_x, seen_x[1:])
            if x <= x_prev
        ),
        None,
    )
    if monotone_fail:
        idx, x = monotone_fail
        checks.append(_fail(COND_MONOTONE, idx, x, f"checkpoint x={x} does not increase"))
    else:
        checks.append(_ok(COND_MONOTONE, None, "checkpoints strictly increase"))

    expected_prefix = tuple(target_prefix(f, len(u_prefix)))
    if expected_prefix != u_prefix:
        pos = next(i for i, (a, b) in enumerate(zip(expected_prefix, u_prefix)) if a != b)
        checks.append(
            _fail(
                COND_U_PREFIX,
                None,
                u_prefix[pos],
                f"u_prefix[{pos}] is {u_prefix[pos]}, enumeration gives {expected_prefix[pos]}",
            )
        )
    else:
        checks.append(_ok(COND_U_PREFIX, None, "u_prefix matches the deterministic enumeration"))

    return InvariantReport(tuple(checks))


def _composition_check(
    index: int,
    prev: FiniteBasis | None,
    current: FiniteBasis,
    added: FiniteBasis,
) -> CheckResult:
    if index == 1:
        if current.elements != added.elements:
            witness = next(
                iter(set(current.elements) ^ set(added.elements)),
                None,
            )
            return _fail(COND_NESTING, index, witness, "base stage must list itself as added")
        return _ok(COND_NESTING, index, "base stage added equals its set")
    assert prev is not None
    prev_set = set(prev.elements)
    overlap = prev_set & set(added.elements)
    if overlap:
        w = min(overlap)
        return _fail(COND_NESTING, index, w, f"added element {w} already present before stage {index}")
    union = prev_set | set(added.elements)
    current_set = set(current.elements)
    if union != current_set:
        w = min(union ^ current_set)
        return _fail(
            COND_NESTING,
            index,
            w,
            f"stage {index} set is not the previous set plus its added elements (mismatch at {w})",
        )
    return _ok(COND_NESTING, index, "stage extends the previous set by exactly its added elements")


@dataclass(frozen=True, eq=True)
class DecompositionReport:
    kind: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def check_decomposition(A: FiniteBasis, added, kind: str) -> DecompositionReport:
    """Rebuild the three parts of 2B, B = A plus the added elements, and
    test the disjointness and piecewise count claims for the given kind.

    For an extension the covered target u (the sum of the two added
    elements) may legitimately appear among the old pair sums; its count
    rises by exactly one and it is exempt from the disjointness demand.
    """
    added_tuple = tuple(sorted(added))
    if not added_tuple:
        raise PreconditionViolatedError("decomposition needs a nonempty added list")
    if kind not in (KIND_EXTENSION, KIND_DENSIFICATION):
        raise ValueError(f"kind must be {KIND_EXTENSION!r} or {KIND_DENSIFICATION!r}, got {kind!r}")
    if kind == KIND_EXTENSION and len(added_tuple) != 2:
        raise PreconditionViolatedError(
            f"an extension adjoins exactly two elements, got {len(added_tuple)}"
        )
    u = added_tuple[0] + added_tuple[1] if kind == KIND_EXTENSION else None

    old_sums = sum_counter(A)
    cross = Counter(a + t for a in A for t in added_tuple)
    self_part = Counter(s + t for s, t in combinations_with_replacement(added_tuple, 2))
    checks: list[CheckResult] = []

    checks.append(_unique_part_check("cross_part_unique", cross))
    checks.append(_unique_part_check("self_part_unique", self_part))
    checks.append(_disjoint_check("old_cross_disjoint", old_sums, cross, exempt=None))
    checks.append(_disjoint_check("cross_self_disjoint", cross, self_part, exempt=None))
    checks.append(_disjoint_check("old_self_disjoint", old_sums, self_part, exempt=u))

    B = A.union(added_tuple)
    actual = sum_counter(B)
    support = sorted(set(old_sums) | set(cross) | set(self_part))
    mismatch = None
    for n in support:
        if kind == KIND_EXTENSION and n == u:
            expected = old_sums[n] + 1
        elif n in old_sums:
            expected = old_sums[n]
        else:
            expected = 1
        if actual[n] != expected:
            mismatch = (n, expected, actual[n])
            break
    if mismatch:
        n, expected, got = mismatch
        checks.append(
            _fail(
                "piecewise_formula",
                None,
                n,
                f"rep count at n={n} is {got}, piecewise formula gives {expected}",
            )
        )
    else:
        checks.append(_ok("piecewise_formula", None, "piecewise counts match brute force"))

    return DecompositionReport(kind=kind, checks=tuple(checks))


def _unique_part_check(name: str, part: Counter) -> CheckResult:
    repeated = sorted(n for n, k in part.items() if k > 1)
    if repeated:
        n = repeated[0]
        return _fail(name, None, n, f"sum {n} realized {part[n]} times within one part")
    return _ok(name, None, "all sums within the part are distinct")


def _disjoint_check(name: str, left: Counter, right: Counter, exempt: int | None) -> CheckResult:
    overlap = set(left) & set(right)
    if exempt is not None:
        overlap.discard(exempt)
    if overlap:
        n = min(overlap)
        detail = f"sum {n} appears in both parts"
        if exempt is not None:
            detail += f" (only {exempt} is exempt)"
        return _fail(name, None, n, detail)
    detail = "parts share no sum"
    if exempt is not None:
        detail += f" besides the covered target {exempt}"
    return _ok(name, None, detail)


def upper_bound_check(A: FiniteBasis, x: int, r: int) -> bool:
    """Exact pigeonhole sanity bound: with k elements in [-x, x], the
    k(k+1)/2 pair sums land in [-2x, 2x], so k(k+1)/2 <= r(4x+1) whenever
    every rep count is at most r."""
    k = counting(A, -x, x)
    return k * (k + 1) // 2 <= r * (4 * x + 1)


@dataclass(frozen=True, eq=True)
class EqualityEntry:
    n: int
    stage: int
    required: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.actual == self.required

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "stage": self.stage,
            "required": self.required,
            "actual": self.actual,
            "ok": self.ok,
        }


@dataclass(frozen=True, eq=True)
class EqualityReport:
    entries: tuple[EqualityEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[EqualityEntry]:
        return [e for e in self.entries if not e.ok]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "entries": [e.to_dict() for e in self.entries]}


def check_equality_coverage(trace: ConstructionTrace) -> EqualityReport:
    """Exact equality where the target is exhausted.

    A finite value f(n) is exhausted once the covered prefix contains n
    exactly f(n) times; the final stage must then give n exactly f(n)
    representations.  Prescribed zeros are exhausted from the start and
    are checked against every stage.
    """
    validate_trace_structure(trace)
    final = trace.stages[-1]
    covered = Counter(trace.u_prefix[: final.m_covered])
    entries: list[EqualityEntry] = []
    for n in sorted(covered):
        fv = trace.f.value(n)
        if not is_infinite(fv) and covered[n] == fv:
            entries.append(
                EqualityEntry(n=n, stage=final.index, required=fv, actual=rep_function(final.set, n))
            )
    for n in trace.f.zero_points():
        for s in trace.stages:
            entries.append(
                EqualityEntry(n=n, stage=s.index, required=0, actual=rep_function(s.set, n))
            )
    return EqualityReport(tuple(entries))


@dataclass(frozen=True, eq=True)
class VerificationReport:
    invariants: InvariantReport
    decompositions: tuple[tuple[int, DecompositionReport], ...]
    equality: EqualityReport
    upper_bounds: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return (
            self.invariants.passed
            and all(rep.passed for _, rep in self.decompositions)
            and self.equality.passed
            and all(c.passed for c in self.upper_bounds)
        )

    def failures(self) -> list[str]:
        out = []
        for c in self.invariants.failures():
            out.append(f"{c.condition} stage={c.stage} witness={c.witness}: {c.detail}")
        for idx, rep in self.decompositions:
            for c in rep.failures():
                out.append(f"decomposition stage={idx} {c.condition} witness={c.witness}: {c.detail}")
        for e in self.equality.failures():
            out.append(
                f"equality n={e.n} stage={e.stage}: rep count {e.actual}, prescribed {e.required}"
            )
        for c in self.upper_bounds:
            if not c.passed:
                out.append(f"{c.condition} stage={c.stage} witness={c.witness}: {c.detail}")
        return out

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "invariants": self.invariants.to_dict(),
            "decompositions": [
                {"stage": idx, **rep.to_dict()} for idx, rep in self.decompositions
            ],
            "equality": self.equality.to_dict(),
            "upper_bounds": [c.to_dict() for c in self.upper_bounds],
        }


def verify_trace(trace: ConstructionTrace) -> VerificationReport:
    """Full oracle bundle: invariants, per-stage decompositions, exhausted
    equalities, and the pigeonhole bound at every (stage, checkpoint) pair."""
    invariants = check_invariants(trace)
    decompositions = []
    prev = None
    for s in trace.stages:
        if s.kind != KIND_BASE and len(s.added) > 0:
            decompositions.append((s.index, check_decomposition(prev, s.added, s.kind)))
        prev = s.set

    equality = check_equality_coverage(trace)

    upper_bounds: list[CheckResult] = []
    checkpoints = [x for _, x, _ in trace.checkpoints()]
    for s in trace.stages:
        for x in checkpoints:
            r = trace.f.max_finite(2 * x)
            if r is None:
                continue
            ok = upper_bound_check(s.set, x, r)
            k = counting(s.set, -x, x)
            detail = f"k={k}, k(k+1)/2={k * (k + 1) // 2}, bound r(4x+1)={r * (4 * x + 1)}"
            if ok:
                upper_bounds.append(_ok("upper_bound", s.index, detail))
            else:
                upper_bounds.append(_fail("upper_bound", s.index, x, detail))
    return VerificationReport(
        invariants=invariants,
        decompositions=tuple(decompositions),
        equality=equality,
        upper_bounds=tuple(upper_bounds),
    )
