"""Critical-point classification, flow-based Harder-Narasimhan typing,
constructed ground-truth HN instances, graded-object comparison through an
intertwiner oracle, and the numeric tangent-space codimension check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .flow import FlowConfig, FlowError, integrate_flow
from .quiver import (
    HNType,
    Quiver,
    QuiverError,
    StabilityParam,
    check_hn_type,
    degree,
    rank,
    shifted_param,
    slope,
    _sub_vectors,
)
from .repspace import Representation, f_value, grad_norm, shifted_moment


class ClassificationError(RuntimeError):
    pass


class ClusterAmbiguityError(ClassificationError):
    """Two eigenvalue clusters are separated by a gap in the ambiguous band
    [cluster_tol, 2*cluster_tol); retry with a different tolerance."""


class SlopeMismatchError(ClassificationError):
    """Eigenvalue clusters do not satisfy lambda = -slope: the input is not a
    critical point of this functional."""


class ConstructionError(RuntimeError):
    pass


@dataclass
class CriticalType:
    """Clusters ordered by increasing eigenvalue, i.e. strictly decreasing
    slope; bases[s][l] is an orthonormal basis (columns) of the s-th
    eigenspace at vertex l."""

    hn_type: HNType
    lambdas: tuple[float, ...]
    bases: tuple[tuple[np.ndarray, ...], ...]


@dataclass
class Filtration:
    """Nested per-vertex subspaces presented through orthonormal level bases:
    the i-th filtration step at vertex l is spanned by the columns of
    bases[0][l], ..., bases[i-1][l]."""

    hn_type: HNType
    bases: tuple[tuple[np.ndarray, ...], ...]

    def n_levels(self) -> int:
        return len(self.hn_type)

    def projection(self, level: int, vertex: int) -> np.ndarray:
        """Orthogonal projection onto the first `level` steps at `vertex`."""
        cols = [self.bases[s][vertex] for s in range(level)]
        d = self.bases[0][vertex].shape[0]
        if not cols:
            return np.zeros((d, d), dtype=complex)
        u = np.concatenate(cols, axis=1)
        return u @ u.conj().T

    def full_basis(self, vertex: int) -> np.ndarray:
        return np.concatenate([self.bases[s][vertex] for s in range(self.n_levels())], axis=1)

    @classmethod
    def coordinate(cls, dims: Sequence[int], hn_type: HNType) -> "Filtration":
        """The standard coordinate filtration: consecutive coordinate blocks."""
        levels = []
        offsets = [0] * len(dims)
        for part in hn_type:
            per_vertex = []
            for l, d in enumerate(dims):
                e = np.eye(d, dtype=complex)[:, offsets[l] : offsets[l] + part[l]]
                per_vertex.append(e)
                offsets[l] += part[l]
            levels.append(tuple(per_vertex))
        return cls(hn_type, tuple(levels))


def classify_critical(
    q: Quiver,
    A: Representation,
    a: StabilityParam,
    cluster_tol: float = 1e-4,
    grad_tol: float = 1e-8,
) -> CriticalType:
    """Classify a numerically critical representation by eigendecomposing the
    shifted moment blocks, clustering the eigenvalues across all vertices, and
    matching each cluster eigenvalue against minus the slope of its dimension
    vector."""
    if grad_norm(q, A, a) >= 10 * grad_tol:
        raise ClassificationError("input is not numerically critical")
    H = shifted_moment(q, A, a).blocks
    eigs, vecs = [], []
    for b in H:
        if b.size:
            w, u = np.linalg.eigh(b)
        else:
            w, u = np.zeros(0), np.zeros((0, 0), dtype=complex)
        eigs.append(w)
        vecs.append(u)
    all_eigs = np.sort(np.concatenate([w for w in eigs if w.size]))
    if all_eigs.size == 0:
        raise ClassificationError("empty representation space")

    # chain-cluster with threshold cluster_tol, then demand a 2*cluster_tol
    # separation between clusters so no silent misclustering is possible
    clusters: list[list[float]] = [[all_eigs[0]]]
    for x in all_eigs[1:]:
        if x - clusters[-1][-1] < cluster_tol:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    for c1, c2 in zip(clusters, clusters[1:]):
        gap = c2[0] - c1[-1]
        if gap < 2 * cluster_tol:
            raise ClusterAmbiguityError(
                f"eigenvalue gap {gap:.3g} in [{cluster_tol:.3g}, {2*cluster_tol:.3g}); "
                "change cluster_tol"
            )
    centers = [float(np.mean(c)) for c in clusters]

    n_v = q.n_vertices
    bases: list[list[np.ndarray]] = []
    hn_type = []
    for s, center in enumerate(centers):
        per_vertex = []
        part = []
        for l in range(n_v):
            sel = np.abs(eigs[l] - center) < cluster_tol * len(clusters[s])
            per_vertex.append(vecs[l][:, sel])
            part.append(int(np.count_nonzero(sel)))
        bases.append(per_vertex)
        hn_type.append(tuple(part))
    hn_type = tuple(hn_type)

    for center, part in zip(centers, hn_type):
        mu = float(slope(q, part, a))
        if abs(center + mu) >= 100 * cluster_tol:
            raise SlopeMismatchError(
                f"cluster eigenvalue {center:.6g} != -slope {-mu:.6g}: "
                "not a critical point of this functional"
            )

    # off-diagonal blocks of every edge matrix in the eigenbasis must vanish
    L = len(hn_type)
    for (out_i, in_i), m in zip(q.edge_indices(), A.mats):
        for s in range(L):
            for t in range(L):
                if s == t:
                    continue
                block = bases[s][in_i].conj().T @ m @ bases[t][out_i]
                if block.size and np.linalg.norm(block) >= cluster_tol:
                    raise ClassificationError(
                        "edge matrix has a non-vanishing off-diagonal block"
                    )
    return CriticalType(
        hn_type=hn_type,
        lambdas=tuple(centers),
        bases=tuple(tuple(b) for b in bases),
    )


def refine_critical(
    q: Quiver,
    A: Representation,
    a: StabilityParam,
    crit: CriticalType,
    cfg: FlowConfig = FlowConfig(),
) -> Representation:
    """Polish a near-critical representation into a genuine critical point of
    its type: rotate into the eigenbasis, drop the off-diagonal residue, and
    flow each diagonal block to the zero level of its slope-shifted
    functional (those flows have stable limits, so they converge fully)."""
    U = [np.concatenate([crit.bases[s][l] for s in range(len(crit.hn_type))], axis=1)
         for l in range(q.n_vertices)]
    offsets = []
    for l in range(q.n_vertices):
        off, acc = [], 0
        for part in crit.hn_type:
            off.append(acc)
            acc += part[l]
        off.append(acc)
        offsets.append(off)
    blocks_per_part: list[list[np.ndarray]] = []
    for s, part in enumerate(crit.hn_type):
        mats = []
        for (out_i, in_i), m in zip(q.edge_indices(), A.mats):
            rot = U[in_i].conj().T @ m @ U[out_i]
            r0, r1 = offsets[in_i][s], offsets[in_i][s + 1]
            c0, c1 = offsets[out_i][s], offsets[out_i][s + 1]
            mats.append(rot[r0:r1, c0:c1])
        B = Representation(q, part, mats)
        a_s = shifted_param(q, part, a)
        res = integrate_flow(q, B, a_s, cfg)
        if not res.converged:
            raise FlowError("diagonal block refinement did not converge")
        blocks_per_part.append(list(res.final.mats))
    out_mats = []
    for e_i, (out_i, in_i) in enumerate(q.edge_indices()):
        rot = np.zeros((A.dims[in_i], A.dims[out_i]), dtype=complex)
        for s in range(len(crit.hn_type)):
            r0, r1 = offsets[in_i][s], offsets[in_i][s + 1]
            c0, c1 = offsets[out_i][s], offsets[out_i][s + 1]
            rot[r0:r1, c0:c1] = blocks_per_part[s][e_i]
        out_mats.append(U[in_i] @ rot @ U[out_i].conj().T)
    return Representation(q, A.dims, out_mats)


def flow_to_critical(
    q: Quiver,
    A0: Representation,
    a: StabilityParam,
    cfg: FlowConfig = FlowConfig(),
    cluster_tol: float = 1e-4,
) -> tuple[Representation, CriticalType, "FlowResult"]:
    """Flow to the first critical point the trajectory identifies.

    In exact arithmetic the flow limit of a stratum point is a non-minimal
    critical point, but the stratum has positive codimension and roundoff
    ejects the numerical trajectory, which then drains to a lower stratum.
    The integrator therefore records the gradient dip of any such flyby; if
    one is present, the near-critical dip state is classified and polished
    into a genuine critical point, which is the faithful limit. Otherwise the
    converged endpoint is classified directly."""
    res = integrate_flow(q, A0, a, cfg)
    if res.dip_state is not None:
        try:
            crit = classify_critical(
                q, res.dip_state, a, cluster_tol, grad_tol=cfg.saddle_tol
            )
            A_ref = refine_critical(q, res.dip_state, a, crit, cfg)
            crit2 = classify_critical(q, A_ref, a, cluster_tol, cfg.grad_tol)
            if crit2.hn_type == crit.hn_type:
                return A_ref, crit2, res
        except (ClassificationError, FlowError, QuiverError):
            pass
    if not res.converged:
        raise FlowError(f"flow did not converge within max_time={cfg.max_time}")
    crit = classify_critical(q, res.final, a, cluster_tol, cfg.grad_tol)
    return res.final, crit, res


def hn_type_by_flow(
    q: Quiver,
    A0: Representation,
    a: StabilityParam,
    cfg: FlowConfig = FlowConfig(),
    cluster_tol: float = 1e-4,
) -> HNType:
    """Flow to a critical point and classify it: the analytic computation of
    the Harder-Narasimhan type."""
    return flow_to_critical(q, A0, a, cfg, cluster_tol)[1].hn_type


def slope_generic(q: Quiver, v: Sequence[int], a: StabilityParam) -> bool:
    """True when no proper nonzero sub-dimension-vector has the same slope as
    v; then semistable implies stable for this (q, v, a)."""
    v = q.check_dims(v)
    mu = slope(q, v, a)
    for w in _sub_vectors(v):
        if rank(w) == 0 or w == v:
            continue
        if slope(q, w, a) == mu:
            return False
    return True


def sample_semistable(
    q: Quiver,
    v: Sequence[int],
    a: StabilityParam,
    rng: np.random.Generator,
    cfg: FlowConfig = FlowConfig(),
    max_attempts: int = 30,
) -> Representation:
    """Rejection-sample a representation certified semistable by flowing it
    and accepting only a trivial limit type."""
    v = q.check_dims(v)
    for _ in range(max_attempts):
        B = Representation.random(q, v, rng)
        try:
            t = hn_type_by_flow(q, B, a, cfg)
        except (FlowError, ClassificationError):
            continue
        if len(t) == 1:
            return B
    raise ConstructionError(
        f"no semistable representation found for v={tuple(v)} in {max_attempts} attempts "
        "(the semistable locus is likely empty)"
    )


def _assemble_blocks(
    q: Quiver,
    dims: Sequence[int],
    hn_type: HNType,
    diag: Sequence[Representation],
    eta: Sequence[np.ndarray] | None,
) -> Representation:
    """Block-matrix assembly: diagonal blocks from `diag`, strictly upper
    blocks from `eta` (per-edge full matrices already laid out) when given."""
    offsets = []
    for l in range(q.n_vertices):
        off, acc = [], 0
        for part in hn_type:
            off.append(acc)
            acc += part[l]
        offsets.append(off)
    mats = []
    for e_i, (out_i, in_i) in enumerate(q.edge_indices()):
        m = (
            eta[e_i].copy()
            if eta is not None
            else np.zeros((dims[in_i], dims[out_i]), dtype=complex)
        )
        for s, B in enumerate(diag):
            r0 = offsets[in_i][s]
            c0 = offsets[out_i][s]
            blk = B.mats[e_i]
            m[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
        mats.append(m)
    return Representation(q, dims, mats)


def _upper_triangular_noise(
    q: Quiver,
    dims: Sequence[int],
    hn_type: HNType,
    rng: np.random.Generator,
    scale: float,
) -> list[np.ndarray]:
    """Per-edge matrices supported on the strictly upper blocks (maps from
    lower-slope summands into higher-slope ones, preserving the filtration)."""
    L = len(hn_type)
    offsets = []
    for l in range(q.n_vertices):
        off, acc = [], 0
        for part in hn_type:
            off.append(acc)
            acc += part[l]
        offsets.append(off)
    out = []
    for out_i, in_i in q.edge_indices():
        m = np.zeros((dims[in_i], dims[out_i]), dtype=complex)
        for j in range(L):
            for k in range(j + 1, L):
                r0, r1 = offsets[in_i][j], offsets[in_i][j] + hn_type[j][in_i]
                c0, c1 = offsets[out_i][k], offsets[out_i][k] + hn_type[k][out_i]
                shape = (r1 - r0, c1 - c0)
                if shape[0] and shape[1]:
                    m[r0:r1, c0:c1] = scale * (
                        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
                    )
        out.append(m)
    return out


def make_hn_example(
    q: Quiver,
    hn_type: HNType,
    a: StabilityParam,
    seed: int = 0,
    eta_scale: float = 0.5,
    require_stable: bool = False,
    cfg: FlowConfig = FlowConfig(),
    max_attempts: int = 30,
) -> tuple[Representation, Filtration]:
    """Ground-truth instance of a given HN type: block-upper-triangular with
    certified-semistable diagonal blocks (slopes strictly decreasing down the
    diagonal) and random extension blocks of relative size eta_scale. The
    returned filtration is the HN filtration by construction."""
    dims = tuple(sum(col) for col in zip(*hn_type))
    check_hn_type(q, dims, a, hn_type)
    rng = np.random.default_rng(seed)
    diag = []
    for part in hn_type:
        a_s = shifted_param(q, part, a)
        if require_stable and not slope_generic(q, part, a_s):
            raise ConstructionError(
                f"part {part} admits equal-slope subvectors: stability cannot be certified"
            )
        diag.append(sample_semistable(q, part, a_s, rng, cfg, max_attempts))
    diag_norm = max(1.0, max(B.norm() for B in diag))
    eta = _upper_triangular_noise(q, dims, hn_type, rng, eta_scale * diag_norm)
    A = _assemble_blocks(q, dims, hn_type, diag, eta)
    return A, Filtration.coordinate(dims, hn_type)


def make_critical_point(
    q: Quiver,
    hn_type: HNType,
    a: StabilityParam,
    seed: int = 0,
    cfg: FlowConfig = FlowConfig(),
    max_attempts: int = 30,
) -> tuple[Representation, Filtration]:
    """Numerically critical representation of the given type: block-diagonal
    with each block flowed onto the zero level of its slope-shifted
    functional."""
    dims = tuple(sum(col) for col in zip(*hn_type))
    check_hn_type(q, dims, a, hn_type)
    rng = np.random.default_rng(seed)
    diag = []
    for part in hn_type:
        a_s = shifted_param(q, part, a)
        B = sample_semistable(q, part, a_s, rng, cfg, max_attempts)
        res = integrate_flow(q, B, a_s, cfg)
        if not res.converged or res.final_f > 1e-12:
            raise ConstructionError(f"block of dimension {part} did not reach the zero level")
        diag.append(res.final)
    A = _assemble_blocks(q, dims, hn_type, diag, eta=None)
    return A, Filtration.coordinate(dims, hn_type)


def graded_object(
    q: Quiver,
    A: Representation,
    filt: Filtration,
    invariance_tol: float = 1e-8,
) -> Representation:
    """Block-diagonal representation of the successive filtration quotients,
    written in the filtration's orthonormal bases. Raises if the filtration is
    not invariant under A."""
    L = filt.n_levels()
    for level in range(1, L):
        for (out_i, in_i), m in zip(q.edge_indices(), A.mats):
            p_in = filt.projection(level, in_i)
            p_out = filt.projection(level, out_i)
            resid = (np.eye(p_in.shape[0]) - p_in) @ m @ p_out
            if resid.size and np.linalg.norm(resid) >= invariance_tol:
                raise QuiverError("filtration is not invariant under the representation")
    mats = []
    for (out_i, in_i), m in zip(q.edge_indices(), A.mats):
        blocks = [
            filt.bases[s][in_i].conj().T @ m @ filt.bases[s][out_i] for s in range(L)
        ]
        big = np.zeros((A.dims[in_i], A.dims[out_i]), dtype=complex)
        r = c = 0
        for b in blocks:
            big[r : r + b.shape[0], c : c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        mats.append(big)
    return Representation(q, A.dims, mats)


@dataclass
class HomSpace:
    """Basis of intertwiners psi with psi_in A_a = A'_a psi_out; each basis
    element is a tuple of per-vertex matrices."""

    basis: list[tuple[np.ndarray, ...]]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def hom_space(
    q: Quiver, B: Representation, C: Representation, rank_tol: float = 1e-10
) -> HomSpace:
    """Solve the homogeneous intertwining system by SVD nullspace."""
    bdims, cdims = B.dims, C.dims
    var_sizes = [cdims[l] * bdims[l] for l in range(q.n_vertices)]
    n_vars = sum(var_sizes)
    offs = np.concatenate([[0], np.cumsum(var_sizes)])
    rows = []
    for (out_i, in_i), mb, mc in zip(q.edge_indices(), B.mats, C.mats):
        n_eq = cdims[in_i] * bdims[out_i]
        if n_eq == 0:
            continue
        block = np.zeros((n_eq, n_vars), dtype=complex)
        # vec_r(psi_in @ mb) = (I kron mb^T) vec_r(psi_in)
        block[:, offs[in_i] : offs[in_i + 1]] = np.kron(np.eye(cdims[in_i]), mb.T)
        # vec_r(mc @ psi_out) = (mc kron I) vec_r(psi_out)
        block[:, offs[out_i] : offs[out_i + 1]] -= np.kron(mc, np.eye(bdims[out_i]))
        rows.append(block)
    if n_vars == 0:
        return HomSpace(basis=[])
    if rows:
        M = np.concatenate(rows, axis=0)
        _, s, vh = np.linalg.svd(M)
        cutoff = rank_tol * max(1.0, s[0] if s.size else 0.0)
        r = int(np.sum(s > cutoff))
        null = vh[r:].conj()
    else:
        null = np.eye(n_vars, dtype=complex)
    basis = []
    for row in null:
        psi = tuple(
            row[offs[l] : offs[l + 1]].reshape(cdims[l], bdims[l])
            for l in range(q.n_vertices)
        )
        basis.append(psi)
    return HomSpace(basis=basis)


@dataclass
class IsoResult:
    isomorphic: bool
    witness: tuple[np.ndarray, ...] | None
    trials: int


def is_isomorphic(
    q: Quiver,
    B: Representation,
    C: Representation,
    trials: int = 20,
    seed: int = 0,
    cond_bound: float = 1e8,
) -> IsoResult:
    """Randomized certificate test: sample elements of Hom(B, C) and accept
    when every vertex block is invertible. A positive answer carries an
    explicit witness; a negative answer is probabilistic."""
    if B.dims != C.dims:
        raise QuiverError("is_isomorphic requires equal dimension vectors")
    hom = hom_space(q, B, C)
    if hom.dimension == 0:
        return IsoResult(False, None, 0)
    rng = np.random.default_rng(seed)
    for k in range(trials):
        coeffs = rng.standard_normal(hom.dimension) + 1j * rng.standard_normal(hom.dimension)
        psi = tuple(
            sum(c * b[l] for c, b in zip(coeffs, hom.basis))
            for l in range(q.n_vertices)
        )
        ok = True
        for m in psi:
            if m.size == 0:
                continue
            s = np.linalg.svd(m, compute_uv=False)
            if s[-1] <= 0 or s[0] / s[-1] > cond_bound:
                ok = False
                break
        if ok:
            return IsoResult(True, psi, k + 1)
    return IsoResult(False, None, trials)


@dataclass
class GradedLimitReport:
    type_match: bool
    isomorphic: bool
    hom_dimension: int
    limit_f: float


def verify_graded_limit(
    q: Quiver,
    A0: Representation,
    a: StabilityParam,
    filt: Filtration,
    cfg: FlowConfig = FlowConfig(),
    cluster_tol: float = 1e-4,
    seed: int = 0,
) -> GradedLimitReport:
    """Flow A0 to its limit, build the graded object of the construction
    filtration, and compare: the limit must have the construction type and be
    isomorphic (as a quiver representation) to the graded object."""
    A_inf, crit, _ = flow_to_critical(q, A0, a, cfg, cluster_tol)
    graded = graded_object(q, A0, filt)
    iso = is_isomorphic(q, A_inf, graded, seed=seed)
    hom = hom_space(q, A_inf, graded)
    return GradedLimitReport(
        type_match=crit.hn_type == filt.hn_type,
        isomorphic=iso.isomorphic,
        hom_dimension=hom.dimension,
        limit_f=f_value(q, A_inf, a),
    )


class RankAmbiguityError(RuntimeError):
    pass


def tangent_decomposition(
    q: Quiver,
    A: Representation,
    a: StabilityParam,
    filt: Filtration,
    rank_tol: float = 1e-8,
    grad_tol: float = 1e-8,
) -> int:
    """Complex dimension of ker(rho_A^C)* intersected with the
    lower-triangular block subspace, at a critical A with critical filtration
    `filt`. Equals the combinatorial stratum codimension."""
    if grad_norm(q, A, a) >= 10 * grad_tol:
        raise ClassificationError("input is not numerically critical")
    L = filt.n_levels()
    # work in the filtration's orthonormal coordinates
    U = [filt.full_basis(l) for l in range(q.n_vertices)]
    mats = [
        U[in_i].conj().T @ m @ U[out_i]
        for (out_i, in_i), m in zip(q.edge_indices(), A.mats)
    ]
    dims = A.dims
    shapes = [(dims[in_i], dims[out_i]) for out_i, in_i in q.edge_indices()]
    n_rep = sum(r * c for r, c in shapes)

    def pack(ms):
        if n_rep == 0:
            return np.zeros(0, dtype=complex)
        return np.concatenate([m.ravel() for m in ms])

    # complex matrix of rho^C: one column per gauge basis element
    cols = []
    for l in range(q.n_vertices):
        for r in range(dims[l]):
            for c in range(dims[l]):
                img = []
                for (out_i, in_i), m in zip(q.edge_indices(), mats):
                    t = np.zeros(shapes[len(img)], dtype=complex)
                    if in_i == l:
                        t += np.outer(np.eye(dims[l])[:, r], m[c, :])
                    if out_i == l:
                        t -= np.outer(m[:, r], np.eye(dims[l])[c, :])
                    img.append(t)
                cols.append(pack(img))
    if cols:
        M = np.stack(cols, axis=1)
        Ufull, s, _ = np.linalg.svd(M, full_matrices=True)
        cutoff = rank_tol * max(1.0, s[0] if s.size else 0.0)
        if s.size and np.any((s > cutoff / 10) & (s < cutoff * 10)):
            raise RankAmbiguityError("singular value within a decade of the rank tolerance")
        r = int(np.sum(s > cutoff))
        N = Ufull[:, r:]
    else:
        N = np.eye(n_rep, dtype=complex)

    # lower-triangular coordinate mask: row block strictly below column block
    offsets = []
    for l in range(q.n_vertices):
        off, acc = [], 0
        for part in filt.hn_type:
            off.append(acc)
            acc += part[l]
        off.append(acc)
        offsets.append(off)

    def block_of(l, idx):
        for s_ in range(L):
            if offsets[l][s_] <= idx < offsets[l][s_ + 1]:
                return s_
        raise IndexError

    mask = []
    for (out_i, in_i), (nr, nc) in zip(q.edge_indices(), shapes):
        m = np.zeros((nr, nc), dtype=bool)
        for i in range(nr):
            for j in range(nc):
                m[i, j] = block_of(in_i, i) > block_of(out_i, j)
        mask.append(m)
    flat = np.concatenate([m.ravel() for m in mask]) if mask else np.zeros(0, dtype=bool)
    p = int(np.count_nonzero(flat))
    if p == 0 or N.shape[1] == 0:
        return 0
    P = np.eye(n_rep, dtype=complex)[:, flat]
    angles = np.linalg.svd(N.conj().T @ P, compute_uv=False)
    near_one = int(np.sum(angles > 1 - 1e-6))
    if np.any((angles > 1e-3) & (angles < 1 - 1e-3)):
        raise RankAmbiguityError("ambiguous principal angle between kernel and LT subspace")
    return near_one
