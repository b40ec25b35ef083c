"""Core computations on matrix algebras.

An algebra is stored as a linear basis of n x n matrices together with its
ambient dimension and a unitality flag.  The operations here cover generated
closure, commutants, transitivity certificates, minimal rank, strict
interpolation over the commutant division algebra, real spectral (Riesz)
projections, and idempotent lifting modulo a nilpotent ideal.

Everything is pure: randomized searches take an explicit seed so results are
reproducible and instances can be processed in parallel by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import (
    ClusterContainsZeroError,
    ClusterNotSeparatedError,
    NoConvergenceError,
    NoSolutionError,
    NotCommutativeError,
    NotTransitiveError,
    SearchExhaustedError,
    ShapeMismatchError,
)
from .numeric import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_vector,
    nullspace_of,
    orthonormal_rows,
    rank_of,
    solve_least_squares,
)

__all__ = [
    "MatrixAlgebra",
    "TransitivityReport",
    "generate_algebra",
    "commutant",
    "commutant_of_matrices",
    "is_transitive",
    "min_rank",
    "strict_interpolate",
    "independent_image",
    "riesz_projection",
    "lift_idempotent",
    "d_independent_subfamily",
    "expansion_residual",
]


@dataclass(frozen=True)
class MatrixAlgebra:
    """Linear basis of an algebra of n x n real matrices.

    ``basis`` elements are linearly independent as vectors in R^(n^2) and the
    span is expected to be closed under products; ``validate`` checks both.
    ``unital`` records whether the identity lies in the span.
    """

    ambient_dim: int
    basis: tuple
    unital: bool

    def __post_init__(self):
        mats = tuple(as_matrix(b, square=True) for b in self.basis)
        if any(m.shape != (self.ambient_dim, self.ambient_dim) for m in mats):
            raise ShapeMismatchError("basis elements must match the ambient dimension")
        object.__setattr__(self, "basis", mats)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def stack(self) -> np.ndarray:
        return np.stack(self.basis)

    def vec_basis(self) -> np.ndarray:
        n = self.ambient_dim
        return self.stack().reshape(self.dim, n * n)

    def element(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=float)
        return np.tensordot(c, self.stack(), axes=1)

    def contains(self, m, tol: Tolerance = DEFAULT_TOL):
        """Expand ``m`` in the basis; returns ``(coeffs, residual)``."""
        target = as_matrix(m, square=True).reshape(-1)
        coeffs, residual = solve_least_squares(self.vec_basis().T, target, tol)
        return coeffs, residual

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> float:
        """Check linear independence and product closure; returns the worst residual."""
        vecs = self.vec_basis()
        if orthonormal_rows(vecs, tol).shape[0] != self.dim:
            raise ShapeMismatchError("basis is linearly dependent")
        worst = 0.0
        for a in self.basis:
            for b in self.basis:
                _, res = self.contains(a @ b, tol)
                scale = max(1.0, float(np.linalg.norm(a @ b)))
                worst = max(worst, res / scale)
        if worst > tol.cutoff(1.0) * 1e3:
            raise ShapeMismatchError(
                f"basis span is not closed under products (residual {worst:.3e})"
            )
        if self.unital:
            _, res = self.contains(np.eye(self.ambient_dim), tol)
            if res / math.sqrt(self.ambient_dim) > tol.cutoff(1.0) * 1e3:
                raise ShapeMismatchError("unital flag set but identity not in span")
        return worst


@dataclass(frozen=True)
class TransitivityReport:
    """Outcome of the invariant-subspace probe.

    When ``transitive`` is False, ``witness`` is ``(x, W)``: a probe vector x
    and an orthonormal basis W (columns) of a proper invariant subspace.
    ``seed`` records the probe seed so the report is reproducible.
    """

    transitive: bool
    witness: Optional[tuple] = None
    seed: int = 0


def expansion_residual(m, basis_vecs: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> float:
    """Relative residual of expanding matrix ``m`` in the rows of ``basis_vecs``."""
    target = np.asarray(m, dtype=float).reshape(-1)
    scale = max(1.0, float(np.linalg.norm(target)))
    _, res = solve_least_squares(basis_vecs.T, target, tol)
    return res / scale


def generate_algebra(generators, include_identity: bool, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """Smallest algebra containing the generators (and the identity, if asked).

    Breadth-first word expansion: the span is extended by products
    span * generators with a rank-revealing re-orthonormalization each round
    until the dimension stabilizes (at most n^2).
    """
    mats = [as_matrix(g, square=True) for g in generators]
    if not mats:
        raise ShapeMismatchError("at least one generator is required")
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise ShapeMismatchError("generators must all be square of equal size")

    # Scale-normalize generators; this changes nothing about the generated
    # algebra but keeps long words from overflowing the rank cutoffs.
    gens = []
    for m in mats:
        nrm = float(np.linalg.norm(m))
        if nrm > tol.abs_eps:
            gens.append(m / nrm)
    if not gens:
        gens = [np.zeros((n, n))]

    seed_words = list(gens)
    if include_identity:
        seed_words.append(np.eye(n) / math.sqrt(n))
    span = orthonormal_rows(np.stack([w.reshape(-1) for w in seed_words]), tol)

    while span.shape[0] < n * n:
        current = span.reshape(-1, n, n)
        products = np.einsum("aij,bjk->abik", current, np.stack(gens))
        cand = products.reshape(-1, n * n)
        norms = np.linalg.norm(cand, axis=1)
        cand = cand[norms > tol.abs_eps] / norms[norms > tol.abs_eps, None]
        new_span = orthonormal_rows(np.vstack([span, cand]), tol)
        if new_span.shape[0] == span.shape[0]:
            span = new_span
            break
        span = new_span

    basis = tuple(row.reshape(n, n) for row in span)
    ident_res = expansion_residual(np.eye(n), span, tol)
    unital = ident_res <= tol.cutoff(1.0) * 1e3
    return MatrixAlgebra(ambient_dim=n, basis=basis, unital=unital)


# Inputs conjugated by a similarity of condition kappa carry commutator noise
# of order kappa^2 * machine-eps; budgeting for kappa up to 1e3 keeps genuine
# commutant directions (noise floor ~1e-7) clearly inside the nullspace while
# non-commuting directions stay many orders of magnitude above it.
_CONDITIONING_BUDGET = 1e3


def commutant_of_matrices(mats, tol: Tolerance = DEFAULT_TOL) -> list:
    """Orthonormal basis (trace form) of {X : XB = BX for every B in mats}.

    Computed as the common nullspace of the stacked maps X -> XB - BX.
    """
    mats = [as_matrix(m, square=True) for m in mats]
    if not mats:
        raise ShapeMismatchError("at least one matrix is required")
    n = mats[0].shape[0]
    eye = np.eye(n)
    blocks = []
    for b in mats:
        nrm = float(np.linalg.norm(b))
        bb = b / nrm if nrm > tol.abs_eps else b
        # row-major vec: vec(X B) = (I (x) B^T) vec X, vec(B X) = (B (x) I) vec X
        blocks.append(np.kron(eye, bb.T) - np.kron(bb, eye))
    stacked = np.vstack(blocks)
    _, s, vt = np.linalg.svd(stacked)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.cutoff(s[0] * _CONDITIONING_BUDGET)))
    null = vt[rank:]
    return [null[j].reshape(n, n) for j in range(null.shape[0])]


def commutant(algebra: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL) -> list:
    """Orthonormal basis of the commutant of the algebra.

    The commutant of the span equals the commutant of any generating subset,
    so for large bases a few pseudo-random combinations are used first and
    every candidate is verified against the full basis; offending basis
    elements are appended and the computation repeats until clean.
    """
    n = algebra.ambient_dim
    basis = list(algebra.basis)
    if len(basis) <= 6:
        gens = list(basis)
    else:
        rng = np.random.default_rng(12345)
        stack = algebra.stack()
        gens = [np.tensordot(rng.standard_normal(len(basis)), stack, axes=1)
                for _ in range(4)]

    while True:
        candidates = commutant_of_matrices(gens, tol) if gens else []
        offender = None
        for x in candidates:
            for b in basis:
                scale = max(1.0, float(np.linalg.norm(b))) * _CONDITIONING_BUDGET
                if np.linalg.norm(x @ b - b @ x) > tol.cutoff(scale) * n * 10:
                    offender = b
                    break
            if offender is not None:
                break
        if offender is None:
            return candidates
        gens.append(offender)


def _orbit_closure(algebra: MatrixAlgebra, x: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal rows spanning the smallest invariant subspace containing A x
    (and x itself when the algebra is unital)."""
    stack = algebra.stack()
    n = algebra.ambient_dim
    rows = stack @ x
    if algebra.unital:
        rows = np.vstack([rows, x[None, :]])
    norms = np.linalg.norm(rows, axis=1)
    rows = rows[norms > tol.abs_eps]
    if rows.size == 0:
        return np.zeros((0, n))
    span = orthonormal_rows(rows / np.linalg.norm(rows, axis=1)[:, None], tol)
    while 0 < span.shape[0] < n:
        imgs = np.einsum("bij,rj->bri", stack, span).reshape(-1, n)
        norms = np.linalg.norm(imgs, axis=1)
        imgs = imgs[norms > tol.abs_eps] / norms[norms > tol.abs_eps, None]
        new_span = orthonormal_rows(np.vstack([span, imgs]), tol)
        if new_span.shape[0] == span.shape[0]:
            break
        span = new_span
    return span


def is_transitive(algebra: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL,
                  trials: int = 8, seed: int = 0) -> TransitivityReport:
    """Invariant-subspace probe.

    Orbit closures are computed for every standard basis vector, for each
    kernel direction of each basis element, and for ``trials`` seeded random
    unit vectors.  Any deficient orbit closure is a proper invariant subspace
    and is re-verified directly before being reported as a witness.
    """
    n = algebra.ambient_dim
    probes = [np.eye(n)[i] for i in range(n)]
    for b in algebra.basis:
        null = nullspace_of(b, tol)
        probes.extend(null[:, j] for j in range(null.shape[1]))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        v = rng.standard_normal(n)
        probes.append(v / np.linalg.norm(v))

    stack = algebra.stack()
    for x in probes:
        span = _orbit_closure(algebra, x, tol)
        if span.shape[0] == n:
            continue
        if span.shape[0] == 0:
            # A x = 0 with x != 0: the line through x is invariant.
            witness = (x.copy(), (x / np.linalg.norm(x)).reshape(n, 1))
            return TransitivityReport(False, witness, seed)
        # Re-verify invariance of the deficient subspace directly.
        proj_out = np.eye(n) - span.T @ span
        leak = max(float(np.linalg.norm(proj_out @ (b @ span.T))) for b in stack)
        if leak > tol.cutoff(1.0) * n * 100:
            continue  # numerically unconfirmed; keep probing
        return TransitivityReport(False, (x.copy(), span.T.copy()), seed)
    return TransitivityReport(True, None, seed)


def strict_interpolate(algebra: MatrixAlgebra, pairs, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Element T of the algebra span with T x_i = y_i for all given pairs.

    The x's must be independent over the commutant division algebra; when the
    system is infeasible (e.g. some x_j is a commutant multiple of x_i with an
    incompatible target) NoSolutionError carries the attained residual.
    Among exact solutions the minimum-coefficient-norm one is returned.
    """
    if not pairs:
        raise ShapeMismatchError("at least one interpolation pair is required")
    n = algebra.ambient_dim
    stack = algebra.stack()
    rows = []
    rhs = []
    max_y = 0.0
    for x, y in pairs:
        xv = as_vector(x)
        yv = as_vector(y)
        if xv.size != n or yv.size != n:
            raise ShapeMismatchError("interpolation vectors must match the ambient dimension")
        rows.append((stack @ xv).T)  # columns indexed by basis element
        rhs.append(yv)
        max_y = max(max_y, float(np.linalg.norm(yv)))
    system = np.vstack(rows)
    target = np.concatenate(rhs)
    coeffs, _ = solve_least_squares(system, target, tol)
    t = algebra.element(coeffs)
    threshold = max(tol.abs_eps, tol.rel_eps * max_y)
    worst = max(float(np.linalg.norm(t @ as_vector(x) - as_vector(y))) for x, y in pairs)
    if worst > threshold:
        raise NoSolutionError(
            f"interpolation infeasible (residual {worst:.3e} > {threshold:.3e})",
            residual=worst,
        )
    return t


def d_independent_subfamily(vectors, units, tol: Tolerance = DEFAULT_TOL,
                            need: Optional[int] = None) -> list:
    """Greedy (input-order) selection of a subfamily independent over the commutant.

    ``units`` are the anti-involutive structure units ([] for the real type);
    the span grown is the module span {x, U x, ...} of the picked vectors.
    Returns the list of picked indices.
    """
    picked = []
    span = None
    for idx, x in enumerate(vectors):
        xv = as_vector(x)
        nrm = float(np.linalg.norm(xv))
        if nrm <= tol.abs_eps:
            continue
        if span is not None:
            resid = np.linalg.norm(xv - span.T @ (span @ xv))
            if resid <= tol.cutoff(1.0) * nrm * 1e3:
                continue
        picked.append(idx)
        orbit = [xv] + [u @ xv for u in units]
        block = np.stack([o / np.linalg.norm(o) for o in orbit])
        span = block if span is None else np.vstack([span, block])
        span = orthonormal_rows(span, tol)
        if need is not None and len(picked) == need:
            break
    return picked


def min_rank(algebra: MatrixAlgebra, structure, tol: Tolerance = DEFAULT_TOL) -> int:
    """Minimal rank of a nonzero element of a transitive algebra.

    Constructive reduction: pick any nonzero basis element T0, extract a
    commutant-module basis (z_1, ..., z_m) of its range, interpolate K in the
    algebra with T0 K z_1 = z_1 and T0 K z_i = 0, and return the rank of
    T0 K T0, cross-checked against the commutant dimension.
    """
    units = list(structure.units)
    t0 = next((b for b in algebra.basis if np.linalg.norm(b) > tol.abs_eps), None)
    if t0 is None:
        raise NotTransitiveError("zero algebra has no minimal rank")
    u, s, _ = np.linalg.svd(t0)
    r = int(np.count_nonzero(s > tol.cutoff(s[0])))
    range_basis = [u[:, j] for j in range(r)]
    picked = d_independent_subfamily(range_basis, units, tol)
    zs = [range_basis[i] for i in picked]
    expected = structure.commutant_dim
    if len(zs) * expected != r:
        raise NotTransitiveError(
            "range of the probe element is not a module over the recognized commutant"
        )
    x1, res = solve_least_squares(t0, zs[0], tol)
    if res > tol.cutoff(1.0) * 1e3:
        raise NotTransitiveError("cannot solve T0 x = z within the range of T0")
    pairs = [(zs[0], x1)] + [(z, np.zeros(algebra.ambient_dim)) for z in zs[1:]]
    try:
        k = strict_interpolate(algebra, pairs, tol)
    except NoSolutionError as exc:
        raise NotTransitiveError(
            f"interpolation for the minimal-rank reduction failed: {exc}"
        ) from exc
    result = rank_of(t0 @ k @ t0, tol)
    if result != expected:
        raise NotTransitiveError(
            f"constructed element has rank {result}, expected {expected}"
        )
    return result


def independent_image(algebra: MatrixAlgebra, vectors, tol: Tolerance = DEFAULT_TOL,
                      seed: int = 0, max_tries: int = 64) -> np.ndarray:
    """Element K of the algebra span mapping the given independent family to an
    independent family.

    The identity is tried first when the algebra is unital; otherwise random
    coefficient vectors are drawn (seeded) up to a retry bound.
    """
    vecs = [as_vector(v) for v in vectors]
    m = len(vecs)
    if m == 0:
        raise ShapeMismatchError("at least one vector is required")

    def works(k):
        images = np.stack([k @ v for v in vecs])
        return rank_of(images, tol) == m

    if algebra.unital:
        eye = np.eye(algebra.ambient_dim)
        if works(eye):
            return eye
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        k = algebra.element(rng.standard_normal(algebra.dim))
        if works(k):
            return k
    raise SearchExhaustedError(
        f"no element with independent images found in {max_tries} tries"
    )


def riesz_projection(t, cluster, tol: Tolerance = DEFAULT_TOL):
    """Real spectral projection for a conjugation-closed eigenvalue cluster.

    Computed from a sorted real Schur form; returns ``(P, residual)`` where
    ``residual`` is the least-squares distance from P to the span of
    T, T^2, ..., T^n (the non-unital algebra generated by T).  The cluster
    must exclude zero and be separated from the rest of the spectrum.
    """
    tm = as_matrix(t, square=True)
    n = tm.shape[0]
    cl = [complex(c) for c in cluster]
    if not cl:
        raise ClusterNotSeparatedError("empty cluster")
    for c in cl:
        if min(abs(c.conjugate() - d) for d in cl) > 1e-8 * max(1.0, abs(c)):
            raise ValueError("cluster must be closed under complex conjugation")

    eigs = np.linalg.eigvals(tm)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    cut = tol.cutoff(scale)
    if any(abs(c) <= 10 * cut for c in cl):
        raise ClusterContainsZeroError("cluster contains a point at (or touching) zero")

    dists = np.array([min(abs(lam - c) for c in cl) for lam in eigs])
    match_err = max(min(abs(lam - c) for lam in eigs) for c in cl)
    theta = max(10 * cut, 3 * match_err)
    matched = dists <= theta
    if not matched.any():
        raise ClusterNotSeparatedError("no eigenvalue matches the cluster")
    unmatched = dists[~matched]
    if unmatched.size:
        sep = float(unmatched.min())
        if sep < max(10 * cut, 3 * theta):
            raise ClusterNotSeparatedError(
                f"cluster separation {sep:.3e} below the required margin"
            )
    lam_in = eigs[matched]
    if np.min(np.abs(lam_in)) <= 10 * cut:
        raise ClusterContainsZeroError("a matched eigenvalue is numerically zero")

    if matched.all():
        proj = np.eye(n)
    else:
        lam_out = eigs[~matched]
        gap = min(abs(a - b) for a in lam_in for b in lam_out)

        def select(re, im):
            z = np.atleast_1d(np.asarray(re, dtype=float)) \
                + 1j * np.atleast_1d(np.asarray(im, dtype=float))
            d = np.min(np.abs(z[:, None] - lam_in[None, :]), axis=1)
            hit = d <= gap / 2
            return bool(hit[0]) if hit.size == 1 else hit

        r, q, sdim = scipy.linalg.schur(tm, output="real", sort=select)
        s = int(sdim)
        if s == 0 or s == n:
            raise ClusterNotSeparatedError("Schur reordering did not split the cluster")
        r11, r12, r22 = r[:s, :s], r[:s, s:], r[s:, s:]
        x = scipy.linalg.solve_sylvester(r11, -r22, r12)
        pr = np.zeros((n, n))
        pr[:s, :s] = np.eye(s)
        pr[:s, s:] = x
        proj = q @ pr @ q.T

    # Distance to the non-unital polynomial algebra of T.
    powers = []
    acc = np.eye(n)
    for _ in range(n):
        acc = acc @ tm
        col = acc.reshape(-1)
        powers.append(col / max(np.linalg.norm(col), tol.abs_eps))
    _, residual = solve_least_squares(np.stack(powers, axis=1), proj.reshape(-1), tol)
    return proj, residual


def lift_idempotent(comm_algebra: MatrixAlgebra, j_ideal, w, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Lift an idempotent-mod-ideal to an exact idempotent of a commutative algebra.

    Newton iteration P <- 3P^2 - 2P^3 starting from W converges quadratically
    modulo a nilpotent ideal; the bound ceil(log2 n) + 2 steps is enforced and
    the output is checked to differ from W by an ideal element.
    """
    n = comm_algebra.ambient_dim
    basis = comm_algebra.basis
    scale = max(1.0, max(float(np.linalg.norm(b)) for b in basis))
    for a in basis:
        for b in basis:
            if np.linalg.norm(a @ b - b @ a) > tol.cutoff(scale) * n * 10:
                raise NotCommutativeError("algebra is not commutative")

    wm = as_matrix(w, square=True)
    ideal = [as_matrix(j, square=True) for j in j_ideal]
    _, res = comm_algebra.contains(wm, tol)
    if res > tol.cutoff(max(1.0, float(np.linalg.norm(wm)))) * 1e3:
        raise ValueError("W does not lie in the span of the commutative algebra")
    ideal_vecs = (np.stack([j.reshape(-1) for j in ideal])
                  if ideal else np.zeros((0, n * n)))

    def in_ideal(m):
        if ideal_vecs.shape[0] == 0:
            return float(np.linalg.norm(m))
        return expansion_residual(m, ideal_vecs, tol)

    defect = wm @ wm - wm
    if in_ideal(defect) > tol.cutoff(1.0) * 1e3:
        raise ValueError("W^2 - W does not lie in the ideal span")
    for j in ideal:
        radius = float(np.max(np.abs(np.linalg.eigvals(j))))
        if radius > tol.cutoff(max(1.0, float(np.linalg.norm(j)))) * 1e3:
            raise ValueError("ideal basis element is not nilpotent")

    max_steps = math.ceil(math.log2(n)) + 2 if n > 1 else 2
    p = wm.copy()
    thresh = tol.cutoff(max(1.0, float(np.linalg.norm(wm))))
    for step in range(max_steps + 1):
        if np.linalg.norm(p @ p - p) <= thresh:
            break
        if step == max_steps:
            raise NoConvergenceError(
                f"idempotent iteration did not converge in {max_steps} steps"
            )
        p = 3 * (p @ p) - 2 * (p @ p @ p)
    if in_ideal(p - wm) > tol.cutoff(1.0) * 1e3:
        raise NoConvergenceError("lifted idempotent does not differ from W by an ideal element")
    return p
