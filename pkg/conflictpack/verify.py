# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Randomized property checks of the kernels against the exact oracles.

Trial ``i`` draws its instances from ``random.Random(seed + i)`` so a failing trial can be
replayed on its own.
"""
import collections
import dataclasses
import logging
import random
import typing

from conflictpack import oracle
from conflictpack._dense import packing
from conflictpack.btw import kernel as kernel_btw
from conflictpack.exceptions import ConflictPackError, PreconditionError
from conflictpack.fast import kernel as kernel_fast
from conflictpack.instances import (
    BetweennessSet,
    DenseTripletSet,
    KernelReport,
    KernelVerdict,
    ParamInstance,
    ProblemKind,
    Tournament,
    generate_planted,
    generate_random,
    object_count,
)
from conflictpack.rti import kernel as kernel_rti

logger = logging.getLogger(__name__)

SOUNDNESS = "sound"


@dataclasses.dataclass(frozen=True)
class PropertyTally:
    """Outcome of one property over all trials.

    Attributes:
        name: the property.
        passed: number of checks that held.
        total: number of checks.
    """

    name: str
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        """Tell whether every check held."""
        return self.passed == self.total


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    """Outcome of a verification run.

    Attributes:
        problem: the problem verified.
        tallies: one tally per property, in check order.
        max_ratio: the largest ``|V|/k`` over Reduced kernels with a positive budget.
        failures: one line per failed check.
    """

    problem: ProblemKind
    tallies: tuple[PropertyTally, ...]
    max_ratio: float
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        """Tell whether every property held."""
        return all(tally.ok for tally in self.tallies)

    def summary_lines(self) -> list[str]:
        """Render the report.

        Returns:
            The soundness line with the size ratio, then one line per property and per
            failure.
        """
        counts = {tally.name: tally for tally in self.tallies}
        sound = counts.get(SOUNDNESS, PropertyTally(SOUNDNESS, 0, 0))
        lines = [f"{sound.passed}/{sound.total} sound, max |V|/k ratio {self.max_ratio:g}"]
        lines.extend(f"{t.name} {t.passed}/{t.total}" for t in self.tallies)
        lines.extend(f"failed {failure}" for failure in self.failures)
        return lines


class _Recorder:
    """Accumulate property checks."""

    def __init__(self) -> None:
        """Initialize empty counters."""
        self.passed: collections.Counter[str] = collections.Counter()
        self.total: collections.Counter[str] = collections.Counter()
        self.failures: list[str] = []
        self.max_ratio = 0.0

    def check(self, name: str, holds: bool, context: str) -> None:
        """Count one check.

        Args:
            name: the property.
            holds: whether the check held.
            context: the instance description used in failure lines.
        """
        self.total[name] += 1
        if holds:
            self.passed[name] += 1
        else:
            logger.warning("property %s failed on %s", name, context)
            self.failures.append(f"{name} {context}")

    def observe(self, report: KernelReport) -> None:
        """Track the size ratio of a kernel.

        Args:
            report: the kernelization report.
        """
        reduced = report.reduced
        if report.verdict is KernelVerdict.REDUCED and reduced.k > 0:
            self.max_ratio = max(self.max_ratio, reduced.payload.n / reduced.k)

    def report(self, problem: ProblemKind) -> VerificationReport:
        """Freeze the counters.

        Args:
            problem: the problem verified.

        Returns:
            The verification report.
        """
        return VerificationReport(
            problem=problem,
            tallies=tuple(
                PropertyTally(name=name, passed=self.passed[name], total=total)
                for name, total in self.total.items()
            ),
            max_ratio=self.max_ratio,
            failures=tuple(self.failures),
        )


def _decision(inst: ParamInstance) -> bool:
    """Decide an oracle-sized instance exactly.

    Args:
        inst: the instance.

    Returns:
        True if its optimum is within the budget.
    """
    return oracle.solve_exact(inst.payload).optimum <= inst.k


def _kernel_decision(report: KernelReport) -> bool:
    if report.verdict is KernelVerdict.TRIVIAL_NO:
        return False
    return _decision(report.reduced)


def _draw(
    kind: ProblemKind, rng: random.Random, n_range: tuple[int, int], k_range: tuple[int, int]
) -> tuple[int, int]:
    n = rng.randint(*n_range)
    return n, min(rng.randint(*k_range), object_count(kind, n))


def _check_kernel(
    recorder: _Recorder,
    report: KernelReport,
    bound: int,
    split_rule: str,
    context: str,
) -> None:
    """Check soundness, size and optimum splits of a kernel of an oracle-sized instance.

    Args:
        recorder: the recorder.
        report: the kernelization report.
        bound: the kernel size factor.
        split_rule: the safe-partition rule tag.
        context: the instance description.
    """
    recorder.observe(report)
    recorder.check(
        SOUNDNESS, _decision(report.original) == _kernel_decision(report), context
    )
    if report.verdict is KernelVerdict.REDUCED:
        recorder.check(
            "kernel-size", report.reduced.payload.n <= bound * report.reduced.k, context
        )
    for step in report.rule_trace:
        if step.rule != split_rule or step.before is None or step.after is None:
            continue
        before = oracle.solve_exact(step.before).optimum
        after = oracle.solve_exact(step.after).optimum
        recorder.check("optimum-split", before == step.dk + after, context)


def _verify_fast(recorder: _Recorder, trial: int, seed: int) -> None:
    rng = random.Random(seed)
    n, k = _draw(ProblemKind.FAST, rng, (3, 9), (0, 5))
    generate = generate_planted if trial % 2 == 0 else generate_random
    inst = generate(ProblemKind.FAST, n, k, seed)
    context = f"trial={trial} n={n} k={k}"
    t = typing.cast(Tournament, inst.payload)
    _check_kernel(recorder, kernel_fast.kernelize_fast(inst), 4, "RULE2", context)
    optimum = oracle.exact_fast_dp(t).optimum
    recorder.check(
        "packing-bound", len(kernel_fast.greedy_triangle_packing(t)) <= optimum, context
    )
    reduced, _ = kernel_fast.rule_irrelevant_vertex(t)
    found = kernel_fast.greedy_triangle_packing(reduced)
    ordered = kernel_fast.nice_ordering(reduced, found)
    recorder.check(
        "confinement",
        all(
            tail in found.covered and head in found.covered
            for tail, head in kernel_fast.backward_arcs(ordered)
        ),
        context,
    )
    n, k = _draw(ProblemKind.FAST, rng, (10, 40), (1, 8))
    large = kernel_fast.kernelize_fast(generate_planted(ProblemKind.FAST, n, k, seed))
    recorder.observe(large)
    context = f"trial={trial} n={n} k={k} planted"
    recorder.check("planted-yes", large.verdict is KernelVerdict.REDUCED, context)
    if large.verdict is KernelVerdict.REDUCED:
        recorder.check("kernel-size", large.reduced.payload.n <= 4 * large.reduced.k, context)


def _verify_rti(recorder: _Recorder, trial: int, seed: int) -> None:
    rng = random.Random(seed)
    n, k = _draw(ProblemKind.RTI, rng, (4, 7), (0, 3))
    generate = generate_planted if trial % 2 == 0 else generate_random
    inst = generate(ProblemKind.RTI, n, k, seed)
    context = f"trial={trial} n={n} k={k}"
    r = typing.cast(DenseTripletSet, inst.payload)
    _check_kernel(recorder, kernel_rti.kernelize_rti(inst), 5, "RULE4", context)
    optimum = oracle.exact_rti_enumerate(r).optimum
    recorder.check(
        "packing-bound", len(kernel_rti.conflict_packing_rti(r)) <= optimum, context
    )
    reduced, _ = kernel_rti.rule_irrelevant_leaf(r)
    found = kernel_rti.conflict_packing_rti(reduced)
    embedded = kernel_rti.nice_tree(reduced, found)
    recorder.check(
        "confinement",
        all(
            set(triple) <= found.covered
            for triple in kernel_rti.inconsistent_triplets(embedded)
        ),
        context,
    )
    n, k = _draw(ProblemKind.RTI, rng, (8, 30), (1, 5))
    large = kernel_rti.kernelize_rti(generate_planted(ProblemKind.RTI, n, k, seed))
    recorder.observe(large)
    context = f"trial={trial} n={n} k={k} planted"
    recorder.check("planted-yes", large.verdict is KernelVerdict.REDUCED, context)
    if large.verdict is KernelVerdict.REDUCED:
        recorder.check("kernel-size", large.reduced.payload.n <= 5 * large.reduced.k, context)


def _verify_btw(recorder: _Recorder, trial: int, seed: int) -> None:
    rng = random.Random(seed)
    generate = generate_planted if trial % 2 == 0 else generate_random
    n = rng.randint(5, 8)
    k = rng.randint(0, (n - 1) // 5)
    inst = generate(ProblemKind.BTW, n, k, seed)
    context = f"trial={trial} n={n} k={k}"
    b = typing.cast(BetweennessSet, inst.payload)
    optimum = oracle.exact_btw_enumerate(b).optimum
    edition = kernel_btw.solve_small_k(b, k)
    recorder.check("small-k", (edition is not None) == (optimum <= k), context)
    if edition is not None:
        recorder.check(
            "edition",
            len(edition) <= k
            and not isinstance(
                kernel_btw.consistent_ordering_btw(b.with_choices(edition)),
                packing.Conflict,
            ),
            context,
        )
    _check_kernel(recorder, kernel_btw.kernelize_btw(inst), 5, "", context)
    recorder.check(
        "packing-bound", len(kernel_btw.conflict_packing_btw(b)) <= optimum, context
    )
    n, k = _draw(ProblemKind.BTW, rng, (6, 9), (0, 3))
    planted = typing.cast(
        BetweennessSet, generate_planted(ProblemKind.BTW, n, k, seed).payload
    )
    found = kernel_btw.conflict_packing_btw(planted)
    ordered = kernel_btw.nice_ordering_btw(planted, found)
    recorder.check(
        "confinement",
        all(
            set(triple) <= found.covered
            for triple in kernel_btw.inconsistent_triplets(ordered)
        ),
        f"trial={trial} n={n} k={k} planted",
    )
    n, k = _draw(ProblemKind.BTW, rng, (5, 20), (0, 5))
    gated = kernel_btw.kernelize_btw(generate(ProblemKind.BTW, n, k, seed))
    recorder.observe(gated)
    recorder.check(
        "kernel-gate",
        gated.reduced == kernel_btw.TRIVIAL_NO
        if gated.verdict is KernelVerdict.TRIVIAL_NO
        else gated.reduced.payload.n <= 5 * gated.reduced.k,
        f"trial={trial} n={n} k={k}",
    )


_CHECKS: dict[ProblemKind, typing.Callable[[_Recorder, int, int], None]] = {
    ProblemKind.FAST: _verify_fast,
    ProblemKind.RTI: _verify_rti,
    ProblemKind.BTW: _verify_btw,
}


def run_verification(problem: ProblemKind, trials: int, seed: int) -> VerificationReport:
    """Run the randomized property checks.

    Args:
        problem: the problem to verify.
        trials: number of trials, at least 1.
        seed: base seed; trial ``i`` uses ``seed + i``.

    Returns:
        The per-property tallies.

    Raises:
        PreconditionError: if ``trials`` is not positive.
        ConflictPackError: if a kernel invariant breaks, with the failing trial.
    """
    if trials < 1:
        raise PreconditionError(f"trials must be positive, got {trials}")
    recorder = _Recorder()
    for trial in range(trials):
        try:
            _CHECKS[problem](recorder, trial, seed + trial)
        except ConflictPackError as exc:
            logger.error("trial %d seed %d: %s", trial, seed + trial, exc.msg)
            raise
    result = recorder.report(problem)
    logger.info("verified %s over %d trials: ok=%s", problem.value, trials, result.ok)
    return result
