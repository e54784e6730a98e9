"""Lie-closure construction and numeric membership certification.

The closure of a generator set under the traceless bracket is built breadth
first: each new bracket is Cayley-Hamilton-reduced at the working matrix size,
discarded if its degree exceeds the degree cap, deduplicated by canonical
form, and kept only when it enlarges the numeric span of values on a fixed
pool of traceless rank-one points.  Function equality on the variety is
certified numerically (the rank-condition ideal has no tractable symbolic
normal form at this scale), so a membership failure is always reported as
"not found at depth d", never as non-membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .bracket import bracket_traceless
from .cm import PointEvaluator, sample_cm
from .poly import TRACELESS, TracePolynomial
from .span import SpanTracker, enumerate_trace_monomials, lstsq_fit
from .words import FIRST, SECOND

MEMBERSHIP_POOL_STREAM = 1_000_000  # index offset for fresh certification points
RECHECK_STREAM = 2_000_000

Tree = tuple  # ("gen", generator_index) | ("br", left_element_index, right_element_index)


class PoolTooSmallError(RuntimeError):
    pass


def standard_generators() -> list[TracePolynomial]:
    """tr A^2, tr B^2, tr A^3, (tr AB)^2."""
    return [
        TracePolynomial.trace(((FIRST, 2),), TRACELESS),
        TracePolynomial.trace(((SECOND, 2),), TRACELESS),
        TracePolynomial.trace(((FIRST, 3),), TRACELESS),
        TracePolynomial.trace(((FIRST, 1), (SECOND, 1)), TRACELESS) ** 2,
    ]


def reduce_pipeline(
    p: TracePolynomial, n_value: int, normalize: bool = True
) -> TracePolynomial:
    """Canonical post-bracket reduction: CH-reduce, collapse n, renormalize.

    The exact rescaling by the largest coefficient magnitude keeps nested
    brackets' coefficients O(1), so evaluation noise stays far below the
    span test's rank threshold.  Membership targets skip the rescaling so
    certificates refer to the target exactly as given."""
    reduced = p.cayley_hamilton_reduce(n_value).specialize_n(n_value)
    if not normalize or reduced.is_zero():
        return reduced
    peak = max(abs(c.evaluate(n_value)) for _, c in reduced.items())
    if peak == 0:
        return reduced
    return reduced * (1 / peak)


@dataclass
class LieClosureBasis:
    generators: list[TracePolynomial]
    elements: list[TracePolynomial]
    trees: list[Tree]
    levels: list[int]
    depth_cap: int
    degree_cap: int
    n_value: int
    seed: int
    pool_size: int
    rank_threshold: float = 1e-10

    def evaluate_tree(self, tree: Tree) -> TracePolynomial:
        """Re-run the bracket/reduction pipeline recorded in a provenance tree."""
        kind = tree[0]
        if kind == "gen":
            return reduce_pipeline(self.generators[tree[1]], self.n_value)
        if kind == "br":
            left = self.elements[tree[1]]
            right = self.elements[tree[2]]
            return reduce_pipeline(bracket_traceless(left, right), self.n_value)
        raise ValueError(f"unknown tree node {tree!r}")

    def verify_trees(self) -> bool:
        return all(
            self.evaluate_tree(tree) == elem
            for tree, elem in zip(self.trees, self.elements)
        )


def default_depth_cap(n_value: int) -> int:
    return 8 if n_value <= 2 else 10


def build_closure(
    generators: Iterable[TracePolynomial],
    depth_cap: int,
    degree_cap: int,
    n_value: int,
    seed: int = 0,
    pool_size: Optional[int] = None,
    rank_threshold: float = 1e-10,
) -> LieClosureBasis:
    """Breadth-first nested bracketing with numeric span pruning."""
    generators = list(generators)
    for g in generators:
        if g.mode != TRACELESS:
            raise ValueError("closure generators must be traceless-mode polynomials")
    monomials = enumerate_trace_monomials(degree_cap, TRACELESS)
    if pool_size is None:
        pool_size = 4 * min(len(monomials), 250)
    pool = [
        PointEvaluator(sample_cm(n_value, traceless=True, seed=seed, index=i))
        for i in range(pool_size)
    ]
    tracker = SpanTracker(pool_size, tol=rank_threshold)
    # every element lives in the span of degree<=cap monomial functions on the
    # variety; their numeric rank on the pool caps the attainable basis size.
    # Monomials that vanish identically on the variety (e.g. odd power traces
    # at n=2) evaluate to cancellation noise and must not count as directions.
    mono_rows = []
    for m in monomials:
        pairs = [ev.poly_value_and_magnitude(m) for ev in pool]
        values = np.array([v for v, _ in pairs], dtype=complex)
        magnitude = max(mag for _, mag in pairs)
        if np.abs(values).max() > rank_threshold * magnitude:
            mono_rows.append(values / np.linalg.norm(values))
    mono_sv = np.linalg.svd(np.array(mono_rows), compute_uv=False)
    span_dimension = int((mono_sv > rank_threshold * mono_sv[0]).sum())

    basis = LieClosureBasis(
        generators=generators,
        elements=[],
        trees=[],
        levels=[],
        depth_cap=depth_cap,
        degree_cap=degree_cap,
        n_value=n_value,
        seed=seed,
        pool_size=pool_size,
    )
    seen: set = set()

    def try_add(p: TracePolynomial, tree: Tree, level: int) -> bool:
        if p.is_zero() or p.degree() > degree_cap:
            return False
        key = p.canonical_key()
        if key in seen:
            return False
        seen.add(key)
        pairs = [ev.poly_value_and_magnitude(p) for ev in pool]
        values = np.array([v for v, _ in pairs], dtype=complex)
        magnitudes = max(m for _, m in pairs)
        if np.abs(values).max() <= rank_threshold * magnitudes:
            # vanishes on the variety up to cancellation noise (a rank-condition
            # relation); its normalized value row would be rounding noise
            return False
        if not tracker.add(values):
            return False
        if 4 * (len(basis.elements) + 1) > pool_size:
            raise PoolTooSmallError(
                f"point pool of size {pool_size} is too small for degree cap "
                f"{degree_cap} (basis reached {len(basis.elements) + 1} elements; "
                f"need pool >= 4x basis size)"
            )
        basis.elements.append(p)
        basis.trees.append(tree)
        basis.levels.append(level)
        return True

    for gi, g in enumerate(generators):
        try_add(reduce_pipeline(g, n_value), ("gen", gi), 0)

    level = 1
    while level <= depth_cap and len(basis.elements) < span_dimension:
        added = False
        count = len(basis.elements)
        pairs = [
            (i, j)
            for j in range(count)
            for i in range(j)
            if max(basis.levels[i], basis.levels[j]) == level - 1
        ]
        for i, j in pairs:
            ei, ej = basis.elements[i], basis.elements[j]
            di = ei.degree()
            dj = ej.degree()
            if di + dj - 2 > degree_cap:
                continue  # bracket degree is exact; cannot come back under the cap
            candidate = reduce_pipeline(bracket_traceless(ei, ej), n_value)
            if try_add(candidate, ("br", i, j), level):
                added = True
                if len(basis.elements) >= span_dimension:
                    break  # span of degree<=cap functions is saturated
        if not added:
            break
        level += 1
    return basis


# ----------------------------------------------------------------------
# membership certificates
# ----------------------------------------------------------------------

@dataclass
class MembershipCertificate:
    target: TracePolynomial
    status: str  # "member" | "not_found_at_depth" | "inconclusive"
    coefficients: list[complex]
    residual: float
    sample_count: int
    condition: float
    depth_cap: int
    tolerance: float = 1e-8

    @property
    def valid(self) -> bool:
        return self.status == "member" and self.residual < self.tolerance


def _fresh_evaluators(basis: LieClosureBasis, count: int, stream: int) -> list[PointEvaluator]:
    return [
        PointEvaluator(
            sample_cm(basis.n_value, traceless=True, seed=basis.seed, index=stream + i)
        )
        for i in range(count)
    ]


class MembershipChecker:
    """Shares one fresh-point pool and element value matrix across targets."""

    def __init__(
        self,
        basis: LieClosureBasis,
        sample_count: Optional[int] = None,
        tolerance: float = 1e-8,
        max_condition: float = 1e12,
    ):
        self.basis = basis
        self.tolerance = tolerance
        self.max_condition = max_condition
        if sample_count is None:
            sample_count = max(2 * len(basis.elements), 64)
        self.sample_count = sample_count
        self.evaluators = _fresh_evaluators(basis, sample_count, MEMBERSHIP_POOL_STREAM)
        self.rows = [
            [ev.poly_value(e) for e in basis.elements] for ev in self.evaluators
        ]

    def check(self, target: TracePolynomial) -> MembershipCertificate:
        basis = self.basis
        if target.mode != TRACELESS:
            raise ValueError("membership targets must be traceless-mode polynomials")
        if target.degree() > basis.degree_cap:
            raise ValueError(
                f"target degree {target.degree()} exceeds basis degree cap {basis.degree_cap}"
            )
        reduced = reduce_pipeline(target, basis.n_value, normalize=False)
        b = [ev.poly_value(reduced) for ev in self.evaluators]
        scale = max(1.0, max((abs(v) for v in b), default=0.0))
        residual, coeffs, cond = lstsq_fit(self.rows, b, scale=scale)
        if cond > self.max_condition:
            status = "inconclusive"
        elif residual < self.tolerance:
            status = "member"
        else:
            status = "not_found_at_depth"
        return MembershipCertificate(
            target=target,
            status=status,
            coefficients=[complex(c) for c in coeffs],
            residual=residual,
            sample_count=self.sample_count,
            condition=cond,
            depth_cap=basis.depth_cap,
            tolerance=self.tolerance,
        )


def check_membership(
    target: TracePolynomial,
    basis: LieClosureBasis,
    sample_count: Optional[int] = None,
    tolerance: float = 1e-8,
    max_condition: float = 1e12,
) -> MembershipCertificate:
    """Least-squares fit of the target against basis-element values on fresh points."""
    return MembershipChecker(basis, sample_count, tolerance, max_condition).check(target)


def recheck_certificate(
    cert: MembershipCertificate, basis: LieClosureBasis, factor: int = 10
) -> float:
    """Residual of the certified combination on factor-times fresh points."""
    count = factor * cert.sample_count
    evs = _fresh_evaluators(basis, count, RECHECK_STREAM)
    reduced = reduce_pipeline(cert.target, basis.n_value, normalize=False)
    worst = 0.0
    for ev in evs:
        target_val = ev.poly_value(reduced)
        combo = sum(
            c * ev.poly_value(e) for c, e in zip(cert.coefficients, basis.elements)
        )
        scale = max(1.0, abs(target_val))
        worst = max(worst, abs(combo - target_val) / scale)
    return worst
