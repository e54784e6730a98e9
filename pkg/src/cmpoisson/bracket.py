"""Exact Poisson brackets of trace polynomials via cyclic-word splicing.

Two brackets are implemented for the symplectic form tr(dX wedge dY):

* bracket_standard -- plain (X, Y) mode:
      {tr V, tr W} = sum_{x in V, y in W} tr(V_x W_y)
                   - sum_{y in V, x in W} tr(V_y W_x)
  where V_x runs over the splice cuts of V at each occurrence of the letter.

* bracket_traceless -- traceless (A, B) mode, with the 1/n correction coming
  from dA/dX = id - (1/n) tr:
      {tr V, tr W} = sum_{a in V, b in W} [tr(V_a W_b) - (1/n) tr(V_a) tr(W_b)]
                   - sum_{b in V, a in W} [tr(V_b W_a) - (1/n) tr(V_b) tr(W_a)]
  The central symbols tr X, tr Y satisfy {tr X, tr Y} = n and Poisson-commute
  with every trace word, which makes to_traceless an exact Poisson map.

Both brackets extend to products by the Leibniz rule and are antisymmetric;
results are returned in canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .poly import PLAIN, TRACELESS, TracePolynomial
from .ring import QnCoeff
from .words import FIRST, SECOND, CyclicWord, canonicalize, splice_cuts

RawTerm = tuple[QnCoeff, tuple[int, int], tuple[CyclicWord, ...]]


def _word_bracket_terms(v: CyclicWord, w: CyclicWord, corrected: bool) -> list[RawTerm]:
    """Raw (uncanonicalized) terms of {tr v, tr w} at the single-factor level."""
    terms: list[RawTerm] = []
    v_first = splice_cuts(v, FIRST)
    v_second = splice_cuts(v, SECOND)
    w_first = splice_cuts(w, FIRST)
    w_second = splice_cuts(w, SECOND)
    for sign, v_cuts, w_cuts in ((1, v_first, w_second), (-1, v_second, w_first)):
        for v_cut, mv in v_cuts:
            for w_cut, mw in w_cuts:
                mult = QnCoeff.of(sign * mv * mw)
                terms.append((mult, (0, 0), (canonicalize(v_cut.concat(w_cut)),)))
                if corrected:
                    terms.append(
                        (
                            mult.times_n_power(-1) * -1,
                            (0, 0),
                            (canonicalize(v_cut), canonicalize(w_cut)),
                        )
                    )
    return terms


@lru_cache(maxsize=65536)
def _word_bracket(v: CyclicWord, w: CyclicWord, mode: str) -> TracePolynomial:
    corrected = mode == TRACELESS
    return TracePolynomial(
        mode, [((central, factors), c) for c, central, factors in _word_bracket_terms(v, w, corrected)]
    )


def _poly_bracket(f: TracePolynomial, g: TracePolynomial, mode: str) -> TracePolynomial:
    out = TracePolynomial.zero(mode)
    for (cen_f, fac_f), cf in f.items():
        for (cen_g, fac_g), cg in g.items():
            scale = cf * cg
            # word-word contributions (Leibniz over the trace factors)
            for i, v in enumerate(fac_f):
                rest_f = fac_f[:i] + fac_f[i + 1:]
                for j, w in enumerate(fac_g):
                    rest_g = fac_g[:j] + fac_g[j + 1:]
                    env_key = ((cen_f[0] + cen_g[0], cen_f[1] + cen_g[1]), rest_f + rest_g)
                    env = TracePolynomial(mode, [(env_key, scale)])
                    out = out + env * _word_bracket(v, w, mode)
            # central-central contribution: {tr X, tr Y} = n
            if mode == TRACELESS:
                ax, ay = cen_f
                bx, by = cen_g
                weight = ax * by - ay * bx
                if weight:
                    central = (ax + bx - 1, ay + by - 1)
                    key = (central, fac_f + fac_g)
                    out = out + TracePolynomial(
                        mode, [(key, scale * QnCoeff.of(weight, 1))]
                    )
    return out


def bracket_standard(f: TracePolynomial, g: TracePolynomial) -> TracePolynomial:
    """Exact Poisson bracket on plain (X, Y) trace polynomials."""
    if f.mode != PLAIN or g.mode != PLAIN:
        raise ValueError("bracket_standard expects plain-mode polynomials")
    return _poly_bracket(f, g, PLAIN)


def bracket_traceless(f: TracePolynomial, g: TracePolynomial) -> TracePolynomial:
    """Exact corrected Poisson bracket on traceless (A, B) trace polynomials."""
    if f.mode != TRACELESS or g.mode != TRACELESS:
        raise ValueError("bracket_traceless expects traceless-mode polynomials")
    return _poly_bracket(f, g, TRACELESS)


def bracket(f: TracePolynomial, g: TracePolynomial) -> TracePolynomial:
    """Mode-dispatching bracket."""
    if f.mode != g.mode:
        raise ValueError(f"mode mismatch: {f.mode} vs {g.mode}")
    return _poly_bracket(f, g, f.mode)


def bracket_raw_terms(f: TracePolynomial, g: TracePolynomial) -> list[RawTerm]:
    """Single-factor bracket terms before canonical mode reduction.

    Only meaningful for single-monomial, single-factor inputs; used by the
    CLI to display the splice formula before tr A = tr B = 0 is applied.
    """
    if f.mode != g.mode:
        raise ValueError(f"mode mismatch: {f.mode} vs {g.mode}")
    corrected = f.mode == TRACELESS
    merged: dict[tuple, QnCoeff] = {}
    for (cen_f, fac_f), cf in f.items():
        for (cen_g, fac_g), cg in g.items():
            if len(fac_f) != 1 or len(fac_g) != 1 or cen_f != (0, 0) or cen_g != (0, 0):
                raise ValueError("raw display is defined for single trace factors only")
            for c, central, factors in _word_bracket_terms(fac_f[0], fac_g[0], corrected):
                key = (central, tuple(sorted(factors, key=lambda w: (w.degree(), w.runs))))
                acc = merged.get(key, QnCoeff.zero()) + c * cf * cg
                if acc.is_zero():
                    merged.pop(key, None)
                else:
                    merged[key] = acc
    return [(c, central, factors) for (central, factors), c in merged.items()]


def jacobi_check(f: TracePolynomial, g: TracePolynomial, h: TracePolynomial) -> TracePolynomial:
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}}; identically zero."""
    return bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))


# ----------------------------------------------------------------------
# pinned identity catalog
# ----------------------------------------------------------------------

EXACT = "exact"
LEADING = "leading-mod-degree"


@dataclass(frozen=True)
class BracketCatalogEntry:
    """One pinned bracket identity.

    kind 'exact': bracket(lhs, rhs) == expected in canonical form, n symbolic.
    kind 'leading-mod-degree': the straightened bracket truncated above
    degree_bound equals expected, and the full difference restricts on the
    rank-condition variety to a function of degree <= degree_bound
    (certified by least-squares fitting on sampled points).
    """

    id: str
    lhs: TracePolynomial
    rhs: TracePolynomial
    expected: TracePolynomial
    kind: str
    degree_bound: Optional[int] = None
    mode: str = TRACELESS


@dataclass
class CatalogEntryResult:
    id: str
    status: str  # "pass" | "fail"
    detail: str = ""
    symbolic_difference: str = ""
    fit_residual: Optional[float] = None


@dataclass
class CatalogReport:
    n_value: int
    sample_count: int
    results: list[CatalogEntryResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.results)


def leading_part(exact_bracket: TracePolynomial, degree_bound: int) -> TracePolynomial:
    """Straightened part of the bracket above the degree bound."""
    return exact_bracket.truncate_below_degree(degree_bound).straighten()


def fit_tail_on_variety(
    diff: TracePolynomial,
    reference: TracePolynomial,
    degree_bound: int,
    evaluators,
) -> float:
    """Least-squares residual of diff against the full monomial basis of
    degree <= degree_bound, evaluated on rank-one variety points.

    A small residual certifies that diff restricts on the variety to a
    function of degree <= degree_bound; the scale is set by the reference
    polynomial's values."""
    from .span import enumerate_trace_monomials, lstsq_fit

    target = [ev.poly_value(diff) for ev in evaluators]
    if degree_bound >= 0:
        basis = enumerate_trace_monomials(degree_bound, diff.mode)
    else:
        basis = []
    matrix = [[ev.poly_value(b) for b in basis] for ev in evaluators]
    scale = max(
        1.0, max((abs(ev.poly_value(reference)) for ev in evaluators), default=1.0)
    )
    residual, _, _ = lstsq_fit(matrix, target, scale=scale)
    return residual


def verify_catalog(
    entries: Iterable[BracketCatalogEntry],
    n_value: int,
    sample_count: int,
    seed: int = 0,
    fit_tolerance: float = 1e-8,
) -> CatalogReport:
    """Check every catalog entry; exact entries symbolically, leading entries
    symbolically on the straightened top part plus numerically on the variety."""
    from .grammar import format_polynomial
    from .cm import sample_cm, PointEvaluator

    report = CatalogReport(n_value=n_value, sample_count=sample_count)
    evaluators: list[PointEvaluator] | None = None

    def get_evaluators() -> list[PointEvaluator]:
        nonlocal evaluators
        if evaluators is None:
            pts = [
                sample_cm(n_value, traceless=True, seed=seed, index=i)
                for i in range(sample_count)
            ]
            evaluators = [PointEvaluator(p) for p in pts]
        return evaluators

    for entry in entries:
        computed = bracket(entry.lhs, entry.rhs)
        if entry.kind == EXACT:
            diff = computed - entry.expected
            if diff.is_zero():
                report.results.append(CatalogEntryResult(entry.id, "pass"))
            else:
                report.results.append(
                    CatalogEntryResult(
                        entry.id,
                        "fail",
                        detail="exact identity failed",
                        symbolic_difference=format_polynomial(diff),
                    )
                )
            continue
        if entry.kind != LEADING:
            raise ValueError(f"unknown catalog kind {entry.kind!r}")
        bound = entry.degree_bound
        if bound is None:
            raise ValueError(f"entry {entry.id}: leading kind needs degree_bound")
        lead = leading_part(computed, bound)
        sym_diff = lead - entry.expected.straighten()
        if not sym_diff.is_zero():
            report.results.append(
                CatalogEntryResult(
                    entry.id,
                    "fail",
                    detail="straightened leading part mismatch",
                    symbolic_difference=format_polynomial(sym_diff),
                )
            )
            continue
        # numeric variety-residual certification of the lower-degree tail
        diff = computed - entry.expected
        residual = fit_tail_on_variety(diff, computed, bound, get_evaluators())
        if residual < fit_tolerance:
            report.results.append(
                CatalogEntryResult(entry.id, "pass", fit_residual=residual)
            )
        else:
            report.results.append(
                CatalogEntryResult(
                    entry.id,
                    "fail",
                    detail=f"variety residual {residual:.3e} above {fit_tolerance:.1e}",
                    fit_residual=residual,
                )
            )
    return report
