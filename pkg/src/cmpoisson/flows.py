"""The four explicit symplectic automorphism families and a Hamiltonian integrator.

With A = X - (tr X/n) I, B = Y - (tr Y/n) I, the families and their
Hamiltonian functions (for the vector-field convention
V_H = sum dH/dY_jk d/dX_kj - dH/dX_jk d/dY_kj, i.e. dF/dt = {F, H}) are

    shearB     (X, Y) -> (X, Y - 2t A)                               H = tr A^2
    shearA     (X, Y) -> (X + 2t B, Y)                               H = tr B^2
    cubicShear (X, Y) -> (X, Y - 3t A^2 + (3t/n) tr(A^2) I)          H = tr A^3
    scaling    (X, Y) -> (A e^{2tu} + tr X/n I, B e^{-2tu} + tr Y/n I), u = tr AB,
                                                                     H = (tr AB)^2

Each formula is the global flow of its Hamiltonian on
M_n + M_n, so it is holomorphic symplectic everywhere and restricts to the
traceless rank-one locus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cm import (
    CMPoint,
    MatrixPair,
    numeric_gradient,
    rank_residual,
    symplectic_pullback_residual,
    trace_residual,
)
from .poly import TRACELESS, TracePolynomial
from .words import FIRST, SECOND

FAMILY_IDS = ("shearB", "shearA", "cubicShear", "scaling")


@dataclass(frozen=True)
class FlowFamily:
    id: str
    t: complex

    def __post_init__(self):
        if self.id not in FAMILY_IDS:
            raise ValueError(f"unknown family {self.id!r}; choose from {FAMILY_IDS}")


def family_hamiltonian(fam: FlowFamily | str) -> TracePolynomial:
    """The generating Hamiltonian of a family: tr A^2, tr B^2, tr A^3, (tr AB)^2."""
    fam_id = fam.id if isinstance(fam, FlowFamily) else fam
    if fam_id == "shearB":
        return TracePolynomial.trace(((FIRST, 2),), TRACELESS)
    if fam_id == "shearA":
        return TracePolynomial.trace(((SECOND, 2),), TRACELESS)
    if fam_id == "cubicShear":
        return TracePolynomial.trace(((FIRST, 3),), TRACELESS)
    if fam_id == "scaling":
        return TracePolynomial.trace(((FIRST, 1), (SECOND, 1)), TRACELESS) ** 2
    raise ValueError(f"unknown family {fam_id!r}")


def family_map(fam: FlowFamily) -> Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Closed-form point map of a family on ambient matrix pairs."""
    t = fam.t

    def mapper(X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = X.shape[0]
        eye = np.eye(n, dtype=complex)
        A = X - (np.trace(X) / n) * eye
        B = Y - (np.trace(Y) / n) * eye
        if fam.id == "shearB":
            return X, Y - 2 * t * A
        if fam.id == "shearA":
            return X + 2 * t * B, Y
        if fam.id == "cubicShear":
            A2 = A @ A
            return X, Y - 3 * t * A2 + (3 * t / n) * np.trace(A2) * eye
        # split form: tr X, tr Y are conserved and A, B scale by exp(+-2tu);
        # the equivalent X + A(e^c - 1) cancels catastrophically when e^c ~ 0
        w = np.exp(2 * t * np.trace(A @ B))
        return A * w + (np.trace(X) / n) * eye, B / w + (np.trace(Y) / n) * eye

    return mapper


def conditioned_scaling_map(
    t: complex, u0: complex
) -> Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """The scaling family composed with the exact symplectic renormalization
    (X, Y) -> (s^-1 A + (tr X/n) I, s B + (tr Y/n) I), s = exp(2 t u0).

    For any scalar s that map preserves tr(dX ^ dY) exactly (tr dA = 0 kills
    the cross terms), so the composition is symplectic iff the family is.
    Evaluating the composition in split form keeps every value scale O(1)
    near a point with tr AB = u0, which is what makes the finite-difference
    pullback residual resolvable at large |t|."""

    def mapper(X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = X.shape[0]
        eye = np.eye(n, dtype=complex)
        A = X - (np.trace(X) / n) * eye
        B = Y - (np.trace(Y) / n) * eye
        w = np.exp(2 * t * (np.trace(A @ B) - u0))
        return A * w + (np.trace(X) / n) * eye, B / w + (np.trace(Y) / n) * eye

    return mapper


def apply_family(
    fam: FlowFamily,
    pt: CMPoint,
    rank_tol: float = 1e-9,
    trace_tol: float = 1e-10,
) -> CMPoint:
    """Apply a family's closed form; the image must stay on the traceless locus."""
    Xp, Yp = family_map(fam)(pt.pair.X, pt.pair.Y)
    return CMPoint.from_matrices(
        Xp,
        Yp,
        pt.traceless,
        pt.seed,
        pt.index,
        pt.lambda_const,
        rank_tol=rank_tol,
        trace_tol=trace_tol,
    )


def hamiltonian_vector_field(h: TracePolynomial, pt_like: CMPoint) -> tuple[np.ndarray, np.ndarray]:
    """dX/dtau = (dh/dY)^T, dY/dtau = -(dh/dX)^T (so that dF/dtau = {F, h})."""
    dX, dY = numeric_gradient(h, pt_like)
    return dY.T, -dX.T


def ode_flow(
    h: TracePolynomial,
    pt: CMPoint,
    t: complex,
    steps: int,
    return_error: bool = False,
):
    """Integrate the Hamiltonian flow of h from 0 to t with fixed-step RK4.

    With return_error=True also integrates at half the step size and returns
    the Richardson error estimate |z_fine - z_coarse| / 15 (max entry).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")

    def integrate(num_steps: int) -> tuple[np.ndarray, np.ndarray]:
        X = pt.pair.X.copy()
        Y = pt.pair.Y.copy()
        dt = t / num_steps

        def field(Xc: np.ndarray, Yc: np.ndarray):
            shadow = CMPoint(
                MatrixPair(pt.pair.n, Xc, Yc),
                pt.traceless,
                0.0,
                0.0,
                pt.seed,
                pt.index,
                pt.lambda_const,
            )
            vx, vy = hamiltonian_vector_field(h, shadow)
            return dt * vx, dt * vy

        for _ in range(num_steps):
            k1x, k1y = field(X, Y)
            k2x, k2y = field(X + k1x / 2, Y + k1y / 2)
            k3x, k3y = field(X + k2x / 2, Y + k2y / 2)
            k4x, k4y = field(X + k3x, Y + k3y)
            X = X + (k1x + 2 * k2x + 2 * k3x + k4x) / 6
            Y = Y + (k1y + 2 * k2y + 2 * k3y + k4y) / 6
            if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
                raise FloatingPointError("non-finite state during integration")
        return X, Y

    X1, Y1 = integrate(steps)
    out = CMPoint.from_matrices(
        X1, Y1, pt.traceless, pt.seed, pt.index, pt.lambda_const, validate=False
    )
    if not return_error:
        return out
    X2, Y2 = integrate(2 * steps)
    err = float(max(np.abs(X2 - X1).max(), np.abs(Y2 - Y1).max()) / 15.0)
    return out, err


@dataclass
class FlowCheckRecord:
    family: str
    t: complex
    n: int
    point_id: int
    symplectic_residual: float
    rank_residual: float
    trace_residual: float
    passed: bool


@dataclass
class FlowReport:
    records: list[FlowCheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


def _scaling_image_rank_residual(fam: FlowFamily, pt: CMPoint) -> float:
    """Rank residual of the scaling image via the split commutator.

    [A w, B/w] entries are sums of same-scale products, so this resolves at
    any |t|; forming the commutator from the stored image matrices would mix
    the e^{+-2tu} scales with the trace parts and drown in absorption."""
    n = pt.pair.n
    eye = np.eye(n, dtype=complex)
    A = pt.pair.X - (np.trace(pt.pair.X) / n) * eye
    B = pt.pair.Y - (np.trace(pt.pair.Y) / n) * eye
    w = np.exp(2 * fam.t * np.trace(A @ B))
    Ap = A * w
    Bp = B / w
    m = Ap @ Bp - Bp @ Ap + pt.lambda_const * eye
    s = np.linalg.svd(m, compute_uv=False)
    if len(s) < 2 or s[0] == 0.0:
        return 0.0
    return float(s[1] / s[0])


def certify_symplectic(
    fam_or_map,
    pts: list[CMPoint],
    h: float = 1e-4,
    symplectic_tol: float = 1e-7,
    rank_tol: float = 1e-9,
    trace_tol: float = 1e-10,
    label: str | None = None,
) -> FlowReport:
    """Certify that a family (or raw point map) is symplectic and preserves the
    rank condition and the traceless locus on the given sample points."""
    if isinstance(fam_or_map, FlowFamily):
        mapper = family_map(fam_or_map)
        name = fam_or_map.id
        t = fam_or_map.t
    else:
        mapper = fam_or_map
        name = label or getattr(fam_or_map, "__name__", "map")
        t = complex("nan")
    report = FlowReport()
    for idx, pt in enumerate(pts):
        residual_map = mapper
        if isinstance(fam_or_map, FlowFamily) and fam_or_map.id == "scaling":
            # measure through the exact symplectic renormalization so the
            # residual stays resolvable when |t tr AB| is large
            n = pt.pair.n
            eye = np.eye(n, dtype=complex)
            A = pt.pair.X - (np.trace(pt.pair.X) / n) * eye
            B = pt.pair.Y - (np.trace(pt.pair.Y) / n) * eye
            residual_map = conditioned_scaling_map(fam_or_map.t, np.trace(A @ B))
        res = symplectic_pullback_residual(residual_map, pt, h)
        Xp, Yp = mapper(pt.pair.X, pt.pair.Y)
        image = MatrixPair(pt.pair.n, np.asarray(Xp, complex), np.asarray(Yp, complex))
        if isinstance(fam_or_map, FlowFamily) and fam_or_map.id == "scaling":
            rres = _scaling_image_rank_residual(fam_or_map, pt)
        else:
            rres = rank_residual(image, pt.lambda_const)
        tres = trace_residual(image) if pt.traceless else 0.0
        ok = res < symplectic_tol and rres < rank_tol and tres < trace_tol
        report.records.append(
            FlowCheckRecord(name, t, pt.pair.n, idx, res, rres, tres, ok)
        )
    return report
