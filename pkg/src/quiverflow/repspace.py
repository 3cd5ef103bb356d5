"""Complex-matrix representations of a quiver, the unitary/complexified gauge
actions, the moment map, the norm-square functional f and its gradient.

Conventions: the real inner product on the representation space is
Re tr(X* Y) summed over edges. Moment values are stored as the per-vertex
Hermitian matrices H_l = i*Phi_l(A) - a_l*id, whose eigenvalues at critical
points are minus the slopes of the splitting pieces. The negative gradient
carries an overall factor 2 so that it is the exact Euclidean gradient of f
(validated by finite differences in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quiver import Quiver, QuiverError, StabilityParam


@dataclass(frozen=True)
class Representation:
    """One complex matrix per edge, of shape v_in(a) x v_out(a)."""

    quiver: Quiver
    dims: tuple[int, ...]
    mats: tuple[np.ndarray, ...]

    def __init__(self, quiver: Quiver, dims: Sequence[int], mats: Sequence[np.ndarray]):
        dims = quiver.check_dims(dims)
        if len(mats) != len(quiver.edges):
            raise QuiverError("one matrix per edge required")
        clean = []
        for (out_i, in_i), m in zip(quiver.edge_indices(), mats):
            m = np.asarray(m, dtype=complex)
            if m.shape != (dims[in_i], dims[out_i]):
                raise QuiverError(
                    f"matrix shape {m.shape} does not match ({dims[in_i]}, {dims[out_i]})"
                )
            if not np.all(np.isfinite(m)):
                raise QuiverError("matrix entries must be finite")
            clean.append(m)
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mats", tuple(clean))

    @classmethod
    def zero(cls, quiver: Quiver, dims: Sequence[int]) -> "Representation":
        dims = quiver.check_dims(dims)
        mats = [
            np.zeros((dims[in_i], dims[out_i]), dtype=complex)
            for out_i, in_i in quiver.edge_indices()
        ]
        return cls(quiver, dims, mats)

    @classmethod
    def random(
        cls, quiver: Quiver, dims: Sequence[int], rng: np.random.Generator, scale: float = 1.0
    ) -> "Representation":
        dims = quiver.check_dims(dims)
        mats = []
        for out_i, in_i in quiver.edge_indices():
            shape = (dims[in_i], dims[out_i])
            mats.append(scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)))
        return cls(quiver, dims, mats)

    def norm(self) -> float:
        return float(np.sqrt(sum(np.sum(np.abs(m) ** 2) for m in self.mats)))

    def with_mats(self, mats: Sequence[np.ndarray]) -> "Representation":
        return Representation(self.quiver, self.dims, mats)


def rep_inner(x: Sequence[np.ndarray], y: Sequence[np.ndarray]) -> float:
    """Real inner product Re tr(X* Y), summed over edges."""
    return float(sum(np.real(np.vdot(a, b)) for a, b in zip(x, y)))


@dataclass(frozen=True)
class GaugeElement:
    """Per-vertex invertible complex matrix; set unitary=True for elements of
    the compact group."""

    blocks: tuple[np.ndarray, ...]
    unitary: bool = False

    def __init__(self, blocks: Sequence[np.ndarray], unitary: bool = False,
                 cond_bound: float = 1e12, unitary_tol: float = 1e-8):
        blocks = tuple(np.asarray(b, dtype=complex) for b in blocks)
        for b in blocks:
            if b.shape[0] != b.shape[1]:
                raise QuiverError("gauge blocks must be square")
            if b.size and np.linalg.cond(b) > cond_bound:
                raise QuiverError("gauge block is numerically singular")
            if unitary and b.size:
                if np.linalg.norm(b.conj().T @ b - np.eye(b.shape[0])) > unitary_tol:
                    raise QuiverError("block fails the unitarity tolerance")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "unitary", unitary)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "GaugeElement":
        return cls([np.eye(d, dtype=complex) for d in dims], unitary=True)

    def inverse_blocks(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linalg.inv(b) for b in self.blocks)


@dataclass(frozen=True)
class LieElement:
    """Per-vertex complex matrix u_l (an element of the gauge Lie algebra or
    its complexification)."""

    blocks: tuple[np.ndarray, ...]
    skew_hermitian: bool = False

    def __init__(self, blocks: Sequence[np.ndarray], skew_hermitian: bool = False,
                 tol: float = 1e-8):
        blocks = tuple(np.asarray(b, dtype=complex) for b in blocks)
        for b in blocks:
            if b.shape[0] != b.shape[1]:
                raise QuiverError("Lie algebra blocks must be square")
            if skew_hermitian and b.size:
                if np.linalg.norm(b + b.conj().T) > tol:
                    raise QuiverError("block fails the skew-hermitian tolerance")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "skew_hermitian", skew_hermitian)


@dataclass(frozen=True)
class ShiftedMoment:
    """Per-vertex Hermitian matrices H_l = i(Phi_l(A) - alpha_l id)."""

    blocks: tuple[np.ndarray, ...]

    def norm_sq(self) -> float:
        return float(sum(np.sum(np.abs(b) ** 2) for b in self.blocks))


def moment(q: Quiver, A: Representation) -> tuple[np.ndarray, ...]:
    """Per-vertex skew-Hermitian moment map blocks

        Phi_l = (i/2) ( sum_{in(a)=l} A_a A_a* - sum_{out(a)=l} A_a* A_a ).
    """
    blocks = [np.zeros((d, d), dtype=complex) for d in A.dims]
    for (out_i, in_i), m in zip(q.edge_indices(), A.mats):
        blocks[in_i] += 0.5j * (m @ m.conj().T)
        blocks[out_i] -= 0.5j * (m.conj().T @ m)
    return tuple(blocks)


def shifted_moment(q: Quiver, A: Representation, a: StabilityParam) -> ShiftedMoment:
    """H_l = i*Phi_l(A) - a_l*id (Hermitian)."""
    phi = moment(q, A)
    blocks = []
    for l, p in enumerate(phi):
        blocks.append(1j * p - float(a[l]) * np.eye(A.dims[l]))
    return ShiftedMoment(tuple(blocks))


def f_value(q: Quiver, A: Representation, a: StabilityParam) -> float:
    """f(A) = sum_l ||H_l||_F^2; zero exactly on the shifted level set."""
    return shifted_moment(q, A, a).norm_sq()


def neg_gradient(q: Quiver, A: Representation, a: StabilityParam) -> list[np.ndarray]:
    """Negative gradient of f at A, per edge:

        (-grad f)_a = 2 (H_{in(a)} A_a - A_a H_{out(a)}),

    which vanishes exactly at critical points."""
    H = shifted_moment(q, A, a).blocks
    out = []
    for (out_i, in_i), m in zip(q.edge_indices(), A.mats):
        out.append(2.0 * (H[in_i] @ m - m @ H[out_i]))
    return out


def grad_norm(q: Quiver, A: Representation, a: StabilityParam) -> float:
    g = neg_gradient(q, A, a)
    return float(np.sqrt(sum(np.sum(np.abs(m) ** 2) for m in g)))


def act(g: GaugeElement, A: Representation) -> Representation:
    """Gauge action A_a -> g_in(a) A_a g_out(a)^{-1} (for unitary g the
    inverse equals the adjoint, recovering conjugation)."""
    inv = g.inverse_blocks()
    mats = []
    for (out_i, in_i), m in zip(A.quiver.edge_indices(), A.mats):
        mats.append(g.blocks[in_i] @ m @ inv[out_i])
    return A.with_mats(mats)


def rho(A: Representation, u: LieElement) -> list[np.ndarray]:
    """Infinitesimal action: rho(A, u)_a = u_in(a) A_a - A_a u_out(a)."""
    out = []
    for (out_i, in_i), m in zip(A.quiver.edge_indices(), A.mats):
        out.append(u.blocks[in_i] @ m - m @ u.blocks[out_i])
    return out


def finite_difference_check(
    q: Quiver,
    dims: Sequence[int],
    a: StabilityParam,
    rng: np.random.Generator,
    n_points: int = 20,
    n_dirs: int = 20,
    h: float = 1e-5,
) -> float:
    """Max relative error between the analytic gradient pairing and a central
    finite difference of f over random points and directions."""
    worst = 0.0
    for _ in range(n_points):
        A = Representation.random(q, dims, rng)
        g = neg_gradient(q, A, a)
        gn = float(np.sqrt(sum(np.sum(np.abs(m) ** 2) for m in g)))
        for _ in range(n_dirs):
            d = Representation.random(q, dims, rng).mats
            dn = float(np.sqrt(sum(np.sum(np.abs(m) ** 2) for m in d)))
            d = [m / dn for m in d]
            plus = A.with_mats([m + h * x for m, x in zip(A.mats, d)])
            minus = A.with_mats([m - h * x for m, x in zip(A.mats, d)])
            fd = (f_value(q, plus, a) - f_value(q, minus, a)) / (2 * h)
            analytic = -rep_inner(g, d)
            err = abs(fd - analytic) / max(1.0, gn)
            worst = max(worst, err)
    return worst


def rho_adjoint(A: Representation, tangent: Sequence[np.ndarray]) -> LieElement:
    """Metric adjoint of rho(A, .): Re<rho(A,u), X> = Re<u, rho_adjoint(A,X)>."""
    blocks = [np.zeros((d, d), dtype=complex) for d in A.dims]
    for (out_i, in_i), m, x in zip(A.quiver.edge_indices(), A.mats, tangent):
        blocks[in_i] += x @ m.conj().T
        blocks[out_i] -= m.conj().T @ x
    return LieElement(tuple(blocks))
