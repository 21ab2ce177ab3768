"""Acceptance battery: eight end-to-end criteria over the full parameter
matrix, each reported as a single pass/fail line in the terminal summary.

The matrix crosses four prescribed functions with two growth functions and
three construction depths.  Cells whose demanded density provably outruns
what any admissible move can add stop with PHI_TOO_SLOW; those cells are
counted and reported rather than silently skipped, so criterion 1 states
the honest coverage of the implementation.
"""

import copy
import itertools
import time

import pytest

from repbasis import (
    INFINITY,
    KIND_BASE,
    PhiSpec,
    PhiTooSlowError,
    RepTarget,
    SidonLadder,
    build,
    check_decomposition,
    check_equality_coverage,
    check_invariants,
    density_exceeds,
    erdos_turan_sidon,
    greedy_sidon,
    is_sidon,
    rep_function,
    rep_profile,
    sidon_for_density,
    trace_dumps,
    trace_from_dict,
    trace_loads,
    trace_to_dict,
    upper_bound_check,
)
from repbasis.sidon import _is_prime

F_CASES = (
    ("all_ones", RepTarget.constant(1)),
    ("all_twos", RepTarget.constant(2)),
    ("zero_window", RepTarget(2, {n: 0 for n in range(-2, 3)}, 1)),
    ("infinite_origin", RepTarget(0, {0: INFINITY}, 1)),
)
PHI_CASES = (
    ("log2", PhiSpec.parse("log2")),
    ("pow:1/4", PhiSpec.parse("pow:1/4")),
)
ROUNDS = (1, 3, 6)

MATRIX_BUDGET_SECONDS = 60.0
PROFILE_RADIUS_LIMIT = 10**4


@pytest.fixture(scope="module")
def matrix():
    """Build every cell once; value is a trace or the PhiTooSlowError."""
    results = {}
    started = time.monotonic()
    for (fname, f), (pname, phi), rounds in itertools.product(
        F_CASES, PHI_CASES, ROUNDS
    ):
        try:
            outcome = build(f, phi, rounds)
        except PhiTooSlowError as exc:
            outcome = exc
        results[(fname, pname, rounds)] = outcome
    elapsed = time.monotonic() - started
    return results, elapsed


def _traces(matrix_results):
    return {
        key: value
        for key, value in matrix_results.items()
        if not isinstance(value, PhiTooSlowError)
    }


def _phi_of(key):
    return dict(PHI_CASES)[key[1]]


def _f_of(key):
    return dict(F_CASES)[key[0]]


def test_criterion_1_parameter_matrix(matrix, record_criterion):
    results, elapsed = matrix
    built = _traces(results)
    verified = {key for key, trace in built.items() if check_invariants(trace).passed}
    blocked = sorted(key for key in results if key not in built)
    ok = len(verified) == len(results) and elapsed < MATRIX_BUDGET_SECONDS
    record_criterion(
        f"criterion 1 (parameter matrix): {'PASS' if ok else 'FAIL'} - "
        f"{len(verified)}/{len(results)} cells built and verified in {elapsed:.1f}s; "
        f"{len(blocked)} stalled with PHI_TOO_SLOW"
    )
    assert elapsed < MATRIX_BUDGET_SECONDS
    assert len(verified) == len(built), "a built trace failed its own invariants"
    assert not blocked, (
        "these cells cannot reach their demanded density within any "
        f"practical search cap and stop with PHI_TOO_SLOW: {blocked}. "
        "After a round ending at checkpoint x the working radius grows to "
        "about 4x, so the next densification scans checkpoints x' = 5Tn "
        "with T ~ 4x and supplies about sqrt(n) fresh Sidon elements "
        "against a demand of sqrt(x')/phi(x'); the first admissible x' "
        "must therefore satisfy phi(x') > sqrt(20x). With phi = log2(x+2) "
        "that means x' > 2**sqrt(20x); with phi = x**(1/4) it means "
        "x' > (20x)**2, so checkpoints at least square every round "
        "(measured: 490, then 3.2e8, then past the 1e9 cap on the first "
        "admissible step). Raising the cap only moves the abort later."
    )


def test_criterion_2_density_margin(matrix, record_criterion):
    results, _ = matrix
    violations = []
    checked = 0
    for key, trace in _traces(results).items():
        phi = _phi_of(key)
        for index, x, stage_set in trace.checkpoints():
            count = sum(1 for e in stage_set if -x <= e <= x)
            checked += 1
            if not density_exceeds(count, x, phi):
                violations.append((key, index, x))
            if phi.kind == "pow":
                # exact integer form of count > x**((q-2p)/(2q))
                p, q = phi.parameter.numerator, phi.parameter.denominator
                if count ** (2 * q) <= x ** (q - 2 * p):
                    violations.append((key, index, x, "exact"))
    ok = not violations
    record_criterion(
        f"criterion 2 (density margin): {'PASS' if ok else 'FAIL'} - "
        f"{checked} checkpoints strictly beat sqrt(x)/phi(x)"
    )
    assert not violations


def test_criterion_3_upper_bound(matrix, record_criterion):
    results, _ = matrix
    failures = []
    pairs = 0
    for key, trace in _traces(results).items():
        f = _f_of(key)
        checkpoints = [x for _, x, _ in trace.checkpoints()]
        for stage in trace.stages:
            for x in checkpoints:
                r = f.max_finite(2 * x)
                pairs += 1
                if r is None or not upper_bound_check(stage.set, x, r):
                    failures.append((key, stage.index, x))
    ok = not failures
    record_criterion(
        f"criterion 3 (upper bound): {'PASS' if ok else 'FAIL'} - "
        f"{pairs} stage-checkpoint pairs satisfy k(k+1)/2 <= r(4x+1)"
    )
    assert not failures


def test_criterion_4_decomposition(matrix, record_criterion):
    results, _ = matrix
    failures = []
    stages_checked = 0
    profiles_checked = 0
    for key, trace in _traces(results).items():
        prev = None
        for stage in trace.stages:
            if stage.kind != KIND_BASE and len(stage.added) > 0:
                stages_checked += 1
                report = check_decomposition(prev, stage.added, stage.kind)
                if not report.passed:
                    failures.append((key, stage.index, [c.condition for c in report.failures()]))
            if stage.set.max_abs() <= PROFILE_RADIUS_LIMIT:
                profiles_checked += 1
                profile = rep_profile(stage.set)
                bad = [n for n, k in profile.items() if rep_function(stage.set, n) != k]
                if bad:
                    failures.append((key, stage.index, f"profile mismatch at {bad[0]}"))
            prev = stage.set
    ok = not failures
    record_criterion(
        f"criterion 4 (decomposition oracle): {'PASS' if ok else 'FAIL'} - "
        f"{stages_checked} stage decompositions disjoint and piecewise-exact, "
        f"{profiles_checked} full profiles cross-checked"
    )
    assert not failures


def test_criterion_5_sidon_battery(record_criterion):
    grid = sorted(set(range(8, 5001, 97)) | {16, 4999, 5000})
    ladder = SidonLadder()
    previous = ()
    failures = []
    for n in grid:
        ladder.advance(n)
        prefix = tuple(ladder.greedy_prefix())
        if prefix[: len(previous)] != previous:
            failures.append((n, "greedy prefix rewrote history"))
        if not is_sidon(prefix):
            failures.append((n, "greedy set not Sidon"))
        previous = prefix

        algebraic = erdos_turan_sidon(n)
        if not is_sidon(algebraic.elements):
            failures.append((n, "algebraic set not Sidon"))
        if algebraic.elements and not (
            1 <= algebraic.elements[0] and algebraic.elements[-1] <= n
        ):
            failures.append((n, "algebraic set leaves [1, n]"))
        p = max(q for q in range(2, n) if 2 * q * q <= n and _is_prime(q))
        if len(algebraic) != p:
            failures.append((n, "algebraic size is not the ratcheted prime"))

        if n >= 16:
            best = sidon_for_density(n)
            if 4 * len(best) ** 2 <= n:
                failures.append((n, "density target missed"))

    for n in (8, grid[len(grid) // 2], 5000):
        if greedy_sidon(n).elements != tuple(ladder.greedy_prefix()[: len(greedy_sidon(n))]):
            failures.append((n, "fresh greedy disagrees with incremental ladder"))

    ok = not failures
    record_criterion(
        f"criterion 5 (sidon battery): {'PASS' if ok else 'FAIL'} - "
        f"{len(grid)} ambient bounds in [8, 5000] checked"
    )
    assert not failures


def test_criterion_6_sandwich(matrix, record_criterion):
    results, _ = matrix
    failures = []

    # deep all-ones build: a faster-growing admissible phi keeps every
    # densification within one step, so six rounds complete quickly
    trace = build(RepTarget.constant(1), PhiSpec.parse("pow:0.45"), 6, search_cap=10**10)
    if trace.stages[-1].x != 1569726420:
        failures.append(f"final checkpoint {trace.stages[-1].x}")
    if not check_invariants(trace).passed:
        failures.append("six-round invariants")
    report = check_equality_coverage(trace)
    want = {(n, trace.stages[-1].index, 1, 1) for n in (0, 1, -1, 2, -2, 3, -3)}
    got = {(e.n, e.stage, e.required, e.actual) for e in report.entries}
    if got != want:
        failures.append(f"exhausted-target entries {sorted(got)}")

    zeros = results[("zero_window", "log2", 1)]
    zero_report = check_equality_coverage(zeros)
    zero_entries = [e for e in zero_report.entries if e.required == 0]
    if len(zero_entries) != 15 or not all(e.ok for e in zero_entries):
        failures.append("prescribed zeros drifted")

    ok = not failures
    record_criterion(
        f"criterion 6 (exact sandwich): {'PASS' if ok else 'FAIL'} - "
        f"7 exhausted targets hit exactly once after 6 rounds; "
        f"15 prescribed zeros stay unrepresented"
    )
    assert not failures, failures


def test_criterion_7_determinism(matrix, record_criterion, tmp_path):
    results, _ = matrix
    failures = []
    for fname, f in (("all_ones", RepTarget.constant(1)),
                     ("zero_window", dict(F_CASES)["zero_window"])):
        for pname, phi in PHI_CASES:
            first = trace_dumps(build(f, phi, 1))
            second = trace_dumps(build(f, phi, 1))
            if first != second:
                failures.append((fname, pname, "rebuild differs"))
            if trace_dumps(trace_loads(first)) != first:
                failures.append((fname, pname, "round trip differs"))
            if results[(fname, pname, 1)] != trace_loads(first):
                failures.append((fname, pname, "matrix build differs"))

    path = tmp_path / "trace.json"
    canonical = trace_dumps(build(RepTarget.constant(1), PhiSpec.parse("log2"), 1))
    path.write_text(canonical)
    if trace_dumps(trace_loads(path.read_text())) != canonical:
        failures.append("file round trip differs")

    ok = not failures
    record_criterion(
        f"criterion 7 (determinism): {'PASS' if ok else 'FAIL'} - "
        f"byte-identical rebuilds and serialization round trips"
    )
    assert not failures, failures


def test_criterion_8_mutation_detection(matrix, record_criterion):
    results, _ = matrix
    base = trace_to_dict(results[("all_ones", "pow:1/4", 1)])

    def detected(mutate, condition, witness):
        data = copy.deepcopy(base)
        mutate(data)
        report = check_invariants(trace_from_dict(data))
        hits = {(c.condition, c.witness) for c in report.failures()}
        return not report.passed and (condition, witness) in hits

    outcomes = {
        "insert zero": detected(
            lambda d: d["stages"][2].__setitem__(
                "set", sorted(d["stages"][2]["set"] + [0])
            ),
            "condition_4_zero_free",
            0,
        ),
        "drop added element": detected(
            lambda d: d["stages"][1]["set"].remove(-97),
            "nesting",
            -97,
        ),
        "inflate checkpoint": detected(
            lambda d: d["stages"][2].__setitem__("x", d["stages"][2]["x"] * 10),
            "condition_3_density",
            4900,
        ),
    }
    ok = all(outcomes.values())
    record_criterion(
        f"criterion 8 (mutation detection): {'PASS' if ok else 'FAIL'} - "
        f"{sum(outcomes.values())}/3 corruptions rejected with a named witness"
    )
    assert ok, outcomes
