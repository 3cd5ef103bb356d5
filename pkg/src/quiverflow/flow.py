"""Time integration of the negative gradient flow of f = ||Phi - alpha||^2,
the paired group flow on the complexified gauge group, and the sigma
monotonicity monitor.

The integrator is an explicit embedded Dormand-Prince 5(4) pair with an extra
acceptance gate enforcing monotone decrease of f, which guarantees the
Lyapunov property the convergence theory relies on. The group flow is
co-integrated with the same pair and the same factor-2 time scale as the
gradient flow, so that g(t) . A(0) tracks the flow trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .quiver import Quiver, StabilityParam, rank
from .repspace import (
    GaugeElement,
    Representation,
    act,
    f_value,
    grad_norm,
    neg_gradient,
    shifted_moment,
)

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


class FlowError(RuntimeError):
    pass


class StepUnderflowError(FlowError):
    """min_step reached without an acceptable step; carries the last state."""

    def __init__(self, message, t, state):
        super().__init__(message)
        self.t = t
        self.state = state


@dataclass(frozen=True)
class FlowConfig:
    grad_tol: float = 1e-8
    max_time: float = 1e4
    initial_step: float = 1e-2
    min_step: float = 1e-13
    max_step: float = 5.0
    safety: float = 0.9
    rtol: float = 1e-10
    atol: float = 1e-12
    sample_stride: int = 10
    drift_tol: float = 1e-5
    # a gradient dip below saddle_tol followed by a 10x rise marks a flyby of
    # a non-minimal critical point; finite precision cannot track the
    # measure-zero stratum all the way down to grad_tol
    saddle_tol: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step <= self.max_step):
            raise ValueError("require 0 < min_step <= initial_step <= max_step")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")


@dataclass
class FlowSample:
    t: float
    f: float
    grad_norm: float
    sigma: float | None = None
    phi_c_norm: float | None = None


@dataclass
class FlowResult:
    final: Representation
    final_f: float
    final_grad_norm: float
    elapsed: float
    trajectory: list[FlowSample]
    converged: bool
    n_steps: int
    warnings: list[str] = field(default_factory=list)
    # state at the first locked gradient dip (saddle flyby), if any
    dip_state: Representation | None = None
    dip_t: float | None = None
    dip_grad_norm: float | None = None
    dip_f: float | None = None


_F_MONOTONE_TOL = 1e-10


def _dp_step(rhs, y, h):
    k = [rhs(y)]
    for i in range(1, 7):
        yi = y + h * sum(a * ki for a, ki in zip(_A[i], k))
        k.append(rhs(yi))
    y5 = y + h * sum(b * ki for b, ki in zip(_B5, k) if b != 0.0)
    err = h * sum((b5 - b4) * ki for b5, b4, ki in zip(_B5, _B4, k))
    return y5, float(np.linalg.norm(err))


@dataclass
class _LoopOut:
    y: np.ndarray
    t: float
    converged: bool
    n_steps: int
    dip_y: np.ndarray | None = None
    dip_t: float | None = None
    dip_g: float | None = None
    dip_f: float | None = None


def _adaptive_loop(rhs, y0, cfg: FlowConfig, f_of, gnorm_of, on_sample) -> _LoopOut:
    """Shared adaptive stepping loop.

    on_sample(t, y, f, gnorm) is called on the initial state, every
    sample_stride-th accepted step, and the final state. The first state
    whose running-minimum gradient norm drops below saddle_tol and is later
    exceeded tenfold gets locked as the dip record (saddle flyby)."""
    t = 0.0
    y = y0.astype(complex)
    h = cfg.initial_step
    fs = f_of(y)
    g = gnorm_of(y)
    on_sample(t, y, fs, g)
    n_accepted = 0
    run_min = (g, y, t, fs)
    dip = None
    while True:
        if g < cfg.grad_tol:
            converged = True
            break
        if t >= cfg.max_time:
            converged = False
            break
        h = min(h, cfg.max_step, cfg.max_time - t)
        # overflow in a rejected trial step is harmless: a non-finite error
        # estimate fails the acceptance test below and the step is halved
        with np.errstate(over="ignore", invalid="ignore"):
            y_new, err = _dp_step(rhs, y, h)
            scale = cfg.atol + cfg.rtol * max(np.linalg.norm(y), np.linalg.norm(y_new))
            f_new = f_of(y_new)
        if not np.isfinite(err) or not np.isfinite(f_new):
            err = np.inf
        if err <= scale and f_new <= fs + _F_MONOTONE_TOL * (1.0 + fs):
            t += h
            y = y_new
            fs = f_new
            g = gnorm_of(y)
            n_accepted += 1
            if g < run_min[0]:
                run_min = (g, y, t, fs)
            elif dip is None and run_min[0] < cfg.saddle_tol and g > 10 * run_min[0]:
                dip = run_min
            if n_accepted % cfg.sample_stride == 0:
                on_sample(t, y, fs, g)
            if err > 0:
                h *= min(5.0, max(0.2, cfg.safety * (scale / err) ** 0.2))
            else:
                h *= 5.0
        else:
            if err <= scale or not np.isfinite(err):
                h *= 0.5
            else:
                h *= max(0.1, min(0.5, cfg.safety * (scale / err) ** 0.2))
            if h < cfg.min_step:
                raise StepUnderflowError(
                    f"step size underflow at t={t:.6g} (f={fs:.6g})", t, y
                )
    on_sample(t, y, fs, g)
    out = _LoopOut(y=y, t=t, converged=converged, n_steps=n_accepted)
    if dip is not None:
        out.dip_g, out.dip_y, out.dip_t, out.dip_f = dip
    return out


def _shapes(q: Quiver, dims) -> list[tuple[int, int]]:
    return [(dims[in_i], dims[out_i]) for out_i, in_i in q.edge_indices()]


# raw-matrix kernels used inside the integrator loops; they bypass the
# validating Representation constructor, which is far too slow to run seven
# times per step
def _fast_H(edges, dims, a_f, mats):
    H = [-a * np.eye(d, dtype=complex) for a, d in zip(a_f, dims)]
    for (out_i, in_i), m in zip(edges, mats):
        H[in_i] -= 0.5 * (m @ m.conj().T)
        H[out_i] += 0.5 * (m.conj().T @ m)
    return H


def _fast_neg_grad(edges, H, mats):
    return [2.0 * (H[in_i] @ m - m @ H[out_i]) for (out_i, in_i), m in zip(edges, mats)]


def _fast_f(H) -> float:
    return float(sum(np.sum(np.abs(b) ** 2) for b in H))


def _fast_norm(mats) -> float:
    return float(np.sqrt(sum(np.sum(np.abs(m) ** 2) for m in mats)))


def _pack(mats: Sequence[np.ndarray]) -> np.ndarray:
    if not mats:
        return np.zeros(0, dtype=complex)
    return np.concatenate([m.ravel() for m in mats])


def _unpack(y: np.ndarray, shapes: Sequence[tuple[int, int]]) -> list[np.ndarray]:
    out = []
    pos = 0
    for r, c in shapes:
        out.append(y[pos : pos + r * c].reshape(r, c))
        pos += r * c
    return out


def integrate_flow(
    q: Quiver,
    A0: Representation,
    a: StabilityParam,
    cfg: FlowConfig = FlowConfig(),
    extra: Callable[[Representation], float] | None = None,
) -> FlowResult:
    """Integrate dA/dt = -grad f from A0 until ||grad f|| < grad_tol or
    max_time. `extra`, if given, is evaluated on each sample and recorded in
    the phi_c_norm field of the trajectory."""
    shapes = _shapes(q, A0.dims)
    edges = q.edge_indices()
    dims = A0.dims
    a_f = [float(x) for x in a]

    def to_rep(y):
        return A0.with_mats(_unpack(y, shapes))

    def rhs(y):
        mats = _unpack(y, shapes)
        return _pack(_fast_neg_grad(edges, _fast_H(edges, dims, a_f, mats), mats))

    def f_of(y):
        return _fast_f(_fast_H(edges, dims, a_f, _unpack(y, shapes)))

    def gnorm_of(y):
        mats = _unpack(y, shapes)
        return _fast_norm(_fast_neg_grad(edges, _fast_H(edges, dims, a_f, mats), mats))

    samples: list[FlowSample] = []

    def on_sample(t, y, fs, g):
        s = FlowSample(t=t, f=fs, grad_norm=g)
        if extra is not None:
            s.phi_c_norm = extra(to_rep(y))
        samples.append(s)

    lo = _adaptive_loop(
        rhs, _pack(A0.mats), cfg, f_of=f_of, gnorm_of=gnorm_of, on_sample=on_sample
    )
    final = to_rep(lo.y)
    return FlowResult(
        final=final,
        final_f=f_value(q, final, a),
        final_grad_norm=grad_norm(q, final, a),
        elapsed=lo.t,
        trajectory=samples,
        converged=lo.converged,
        n_steps=lo.n_steps,
        dip_state=to_rep(lo.dip_y) if lo.dip_y is not None else None,
        dip_t=lo.dip_t,
        dip_grad_norm=lo.dip_g,
        dip_f=lo.dip_f,
    )


def integrate_group_flow(
    q: Quiver,
    A0: Representation,
    a: StabilityParam,
    cfg: FlowConfig = FlowConfig(),
) -> tuple[FlowResult, GaugeElement, list[tuple[float, list[np.ndarray]]]]:
    """Co-integrate the gradient flow A(t) and the gauge curve g(t) solving
    dg/dt g^{-1} = 2 H(A(t)), g(0) = id.

    Returns the flow result, the final gauge element, and the sampled gauge
    curve. A drift warning is attached to the result if ||g(t).A0 - A(t)||
    exceeds drift_tol at any sample."""
    shapes = _shapes(q, A0.dims)
    gshapes = [(d, d) for d in A0.dims]
    n_rep = sum(r * c for r, c in shapes)
    edges = q.edge_indices()
    dims = A0.dims
    a_f = [float(x) for x in a]

    def split(y):
        A = A0.with_mats(_unpack(y[:n_rep], shapes))
        g = _unpack(y[n_rep:], gshapes)
        return A, g

    def rhs(y):
        mats = _unpack(y[:n_rep], shapes)
        g = _unpack(y[n_rep:], gshapes)
        H = _fast_H(edges, dims, a_f, mats)
        dA = _fast_neg_grad(edges, H, mats)
        dg = [2.0 * Hl @ gl for Hl, gl in zip(H, g)]
        return np.concatenate([_pack(dA), _pack(dg)])

    samples: list[FlowSample] = []
    gauge_curve: list[tuple[float, list[np.ndarray]]] = []
    max_drift = [0.0]

    def on_sample(t, y, fs, g):
        A, gb = split(y)
        drift = float(
            np.sqrt(sum(np.sum(np.abs(m1 - m2) ** 2) for m1, m2 in
                        zip(act(GaugeElement(gb), A0).mats, A.mats)))
        )
        max_drift[0] = max(max_drift[0], drift)
        samples.append(FlowSample(t=t, f=fs, grad_norm=g))
        gauge_curve.append((t, [b.copy() for b in gb]))

    def f_of(y):
        return _fast_f(_fast_H(edges, dims, a_f, _unpack(y[:n_rep], shapes)))

    def gnorm_of(y):
        mats = _unpack(y[:n_rep], shapes)
        return _fast_norm(_fast_neg_grad(edges, _fast_H(edges, dims, a_f, mats), mats))

    y0 = np.concatenate([_pack(A0.mats), _pack([np.eye(d, dtype=complex) for d in A0.dims])])
    lo = _adaptive_loop(rhs, y0, cfg, f_of=f_of, gnorm_of=gnorm_of, on_sample=on_sample)
    A_final, g_final = split(lo.y)
    result = FlowResult(
        final=A_final,
        final_f=f_value(q, A_final, a),
        final_grad_norm=grad_norm(q, A_final, a),
        elapsed=lo.t,
        trajectory=samples,
        converged=lo.converged,
        n_steps=lo.n_steps,
    )
    if max_drift[0] > cfg.drift_tol:
        result.warnings.append(f"gauge drift {max_drift[0]:.3g} exceeds drift_tol")
    return result, GaugeElement(g_final), gauge_curve


def sigma(h_blocks: Sequence[np.ndarray], total_rank: int) -> float:
    """sigma(h) = tr h + tr h^{-1} - 2 rank, from Hermitian eigenvalues.

    Requires each block positive-definite Hermitian; >= 0 with equality iff
    h = id."""
    acc = 0.0
    for b in h_blocks:
        if b.size == 0:
            continue
        w = np.linalg.eigvalsh(b)
        if w.min() <= 0:
            raise FlowError("sigma requires positive-definite blocks")
        acc += float(np.sum(w) + np.sum(1.0 / w))
    return acc - 2.0 * total_rank


def sigma_from_gauge(gbar_blocks: Sequence[np.ndarray], total_rank: int) -> float:
    """sigma of h = gbar^{-1} (gbar*)^{-1}, computed from singular values of
    gbar (eigenvalues of h are the inverse squared singular values)."""
    acc = 0.0
    for b in gbar_blocks:
        if b.size == 0:
            continue
        s = np.linalg.svd(b, compute_uv=False)
        acc += float(np.sum(s**2) + np.sum(1.0 / s**2))
    return acc - 2.0 * total_rank


@dataclass
class SigmaTrace:
    samples: list[tuple[float, float]]
    g1_curve: list[tuple[float, list[np.ndarray]]]
    g2_curve: list[tuple[float, list[np.ndarray]]]
    max_forward_increase: float
    converged: bool


def paired_flow_sigma(
    q: Quiver,
    A0: Representation,
    g0: GaugeElement,
    a: StabilityParam,
    cfg: FlowConfig = FlowConfig(),
) -> SigmaTrace:
    """Run the group flow jointly from A0 and from g0 . A0, form
    gbar(t) = g2(t) g0 g1(t)^{-1}, and sample sigma(h(t)) with
    h = gbar^{-1}(gbar*)^{-1}. The two flows share time steps, so the samples
    are exactly aligned."""
    B0 = act(g0, A0)
    shapes = _shapes(q, A0.dims)
    gshapes = [(d, d) for d in A0.dims]
    n_rep = sum(r * c for r, c in shapes)
    n_g = sum(d * d for d in A0.dims)
    total = rank(A0.dims)

    edges = q.edge_indices()
    dims = A0.dims
    a_f = [float(x) for x in a]

    def split(y):
        A1 = _unpack(y[:n_rep], shapes)
        g1 = _unpack(y[n_rep : n_rep + n_g], gshapes)
        A2 = _unpack(y[n_rep + n_g : 2 * n_rep + n_g], shapes)
        g2 = _unpack(y[2 * n_rep + n_g :], gshapes)
        return A1, g1, A2, g2

    def rhs(y):
        A1, g1, A2, g2 = split(y)
        H1 = _fast_H(edges, dims, a_f, A1)
        H2 = _fast_H(edges, dims, a_f, A2)
        return np.concatenate(
            [
                _pack(_fast_neg_grad(edges, H1, A1)),
                _pack([2.0 * Hl @ gl for Hl, gl in zip(H1, g1)]),
                _pack(_fast_neg_grad(edges, H2, A2)),
                _pack([2.0 * Hl @ gl for Hl, gl in zip(H2, g2)]),
            ]
        )

    samples: list[tuple[float, float]] = []
    g1_curve: list[tuple[float, list[np.ndarray]]] = []
    g2_curve: list[tuple[float, list[np.ndarray]]] = []

    def on_sample(t, y, fs, g):
        A1, g1, A2, g2 = split(y)
        gbar = [
            b2 @ b0 @ np.linalg.solve(b1, np.eye(b1.shape[0], dtype=complex))
            for b2, b0, b1 in zip(g2, g0.blocks, g1)
        ]
        samples.append((t, sigma_from_gauge(gbar, total)))
        g1_curve.append((t, [b.copy() for b in g1]))
        g2_curve.append((t, [b.copy() for b in g2]))

    ident = _pack([np.eye(d, dtype=complex) for d in A0.dims])
    y0 = np.concatenate([_pack(A0.mats), ident, _pack(B0.mats), ident])

    def f_of(y):
        A1, _, A2, _ = split(y)
        return _fast_f(_fast_H(edges, dims, a_f, A1)) + _fast_f(_fast_H(edges, dims, a_f, A2))

    def gnorm_of(y):
        A1, _, A2, _ = split(y)
        g1 = _fast_norm(_fast_neg_grad(edges, _fast_H(edges, dims, a_f, A1), A1))
        g2 = _fast_norm(_fast_neg_grad(edges, _fast_H(edges, dims, a_f, A2), A2))
        return max(g1, g2)

    lo = _adaptive_loop(rhs, y0, cfg, f_of, gnorm_of, on_sample)
    converged = lo.converged
    increase = 0.0
    for (_, s1), (_, s2) in zip(samples, samples[1:]):
        increase = max(increase, s2 - s1)
    return SigmaTrace(
        samples=samples,
        g1_curve=g1_curve,
        g2_curve=g2_curve,
        max_forward_increase=increase,
        converged=converged,
    )
