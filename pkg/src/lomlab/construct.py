"""Builders for the model objects: partial complex structures, generic pairs,
quaternion group representations, group means, and the interpolation
functional solver.

A partial complex structure (PCS) is a square matrix S with S^2 = -I; its
commutant is a transitive algebra of complex type of dimension n^2/2.  A
quaternion group representation pi assigns the eight elements of the group
{+-1, +-i, +-j, +-k} matrices satisfying the defining relations; the algebra
commuting with pi is transitive of quaternion type of dimension n^2/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .division import Quaternion, left_mult_matrix, quat_mul
from .engine import MatrixAlgebra, commutant_of_matrices
from .errors import (
    BadScheduleError,
    NotComplementaryError,
    NotInvariantError,
    ShapeMismatchError,
    SingularSystemError,
    SingularTwistError,
)
from .numeric import DEFAULT_TOL, Tolerance, as_matrix, as_vector, rank_of, solve_least_squares

__all__ = [
    "GROUP_ELEMENTS",
    "GROUP_UNITS",
    "group_mult",
    "group_inverse",
    "CONJUGATION_BY_J",
    "PCSOperator",
    "GroupRep",
    "GenericPair",
    "build_pcs",
    "t_vf",
    "pcs_commutant_algebra",
    "generic_pair_pcs",
    "build_quaternion_rep",
    "twisted_rep",
    "group_mean",
    "solve_popolam",
    "rep_commutant_algebra",
]


GROUP_ELEMENTS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")

GROUP_UNITS = {
    "1": Quaternion(1, 0, 0, 0),
    "-1": Quaternion(-1, 0, 0, 0),
    "i": Quaternion(0, 1, 0, 0),
    "-i": Quaternion(0, -1, 0, 0),
    "j": Quaternion(0, 0, 1, 0),
    "-j": Quaternion(0, 0, -1, 0),
    "k": Quaternion(0, 0, 0, 1),
    "-k": Quaternion(0, 0, 0, -1),
}


def _label_of(q: Quaternion) -> str:
    for label, unit in GROUP_UNITS.items():
        if q.isclose(unit):
            return label
    raise ValueError(f"{q} is not a group unit")


def group_mult(a: str, b: str) -> str:
    return _label_of(quat_mul(GROUP_UNITS[a], GROUP_UNITS[b]))


def group_inverse(a: str) -> str:
    return _label_of(GROUP_UNITS[a].conjugate())


# The automorphism q -> j q j^{-1}: fixes +-1 and +-j, negates +-i and +-k.
CONJUGATION_BY_J = {
    "1": "1", "-1": "-1",
    "i": "-i", "-i": "i",
    "j": "j", "-j": "-j",
    "k": "-k", "-k": "k",
}


@dataclass(frozen=True)
class PCSOperator:
    """A matrix S with S^2 = -I, built from 2x2 blocks with prescribed norms.

    ``norm_schedule`` holds the per-plane spectral norms (the singular values
    of S at or above 1); ``cond`` reports the conditioning of the subspace
    decomposition when S came from a generic pair.
    """

    matrix: np.ndarray
    block_dims: tuple
    norm_schedule: tuple
    cond: Optional[float] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def anti_involution_residual(self) -> float:
        n = self.dim
        return float(np.linalg.norm(self.matrix @ self.matrix + np.eye(n)))

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        scale = max(1.0, float(np.linalg.norm(self.matrix)) ** 2)
        if self.anti_involution_residual() > tol.cutoff(scale) * self.dim * 10:
            raise ShapeMismatchError("S^2 + I is not numerically zero")
        eigs = np.linalg.eigvals(self.matrix)
        if np.min(np.abs(eigs.imag)) < tol.cutoff(1.0) * 10:
            raise ShapeMismatchError("S has a real eigenvalue")


@dataclass(frozen=True)
class GroupRep:
    """The eight operators of a quaternion group representation."""

    n: int
    pi: dict

    def __post_init__(self):
        mats = {g: as_matrix(self.pi[g], square=True) for g in GROUP_ELEMENTS}
        if any(m.shape != (self.n, self.n) for m in mats.values()):
            raise ShapeMismatchError("representation matrices must be n x n")
        object.__setattr__(self, "pi", mats)

    def homomorphism_residual(self) -> float:
        worst = 0.0
        for g in GROUP_ELEMENTS:
            for h in GROUP_ELEMENTS:
                gh = group_mult(g, h)
                worst = max(worst, float(np.linalg.norm(
                    self.pi[g] @ self.pi[h] - self.pi[gh])))
        return worst

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        eye = np.eye(self.n)
        scale = max(1.0, max(float(np.linalg.norm(m)) for m in self.pi.values()) ** 2)
        checks = [
            np.linalg.norm(self.pi["1"] - eye),
            np.linalg.norm(self.pi["-1"] + eye),
            self.homomorphism_residual(),
        ]
        if max(checks) > tol.cutoff(scale) * self.n * 100:
            raise ShapeMismatchError(
                f"group relations violated (residual {max(checks):.3e})"
            )


@dataclass(frozen=True)
class GenericPair:
    """Column bases of two complementary subspaces of the ambient space."""

    m_basis: np.ndarray
    n_basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m_basis", as_matrix(self.m_basis))
        object.__setattr__(self, "n_basis", as_matrix(self.n_basis))
        if self.m_basis.shape[0] != self.n_basis.shape[0]:
            raise ShapeMismatchError("subspace bases live in different ambient spaces")

    @property
    def ambient_dim(self) -> int:
        return self.m_basis.shape[0]

    def decomposition(self, tol: Tolerance = DEFAULT_TOL):
        """(P_M, P_N, cond): the two projections of the direct sum M + N = R^n."""
        n = self.ambient_dim
        p = self.m_basis.shape[1]
        q = self.n_basis.shape[1]
        if p + q != n:
            raise NotComplementaryError(
                f"subspace dimensions {p} + {q} do not fill the ambient space {n}"
            )
        joint = np.hstack([self.m_basis, self.n_basis])
        svals = np.linalg.svd(joint, compute_uv=False)
        if svals[-1] <= tol.cutoff(svals[0]):
            raise NotComplementaryError("subspaces intersect nontrivially")
        coords = np.linalg.solve(joint, np.eye(n))
        proj_m = self.m_basis @ coords[:p]
        proj_n = self.n_basis @ coords[p:]
        return proj_m, proj_n, float(svals[0] / svals[-1])


def build_pcs(block_count: int, norm_schedule) -> PCSOperator:
    """Direct sum of 2x2 blocks [[0, -s], [1/s, 0]]; each squares to -I and the
    m-th block has spectral norm s_m."""
    schedule = [float(s) for s in norm_schedule]
    if len(schedule) != block_count:
        raise BadScheduleError(
            f"schedule length {len(schedule)} != block count {block_count}"
        )
    if any(s < 1.0 for s in schedule):
        raise BadScheduleError("schedule entries must be >= 1")
    n = 2 * block_count
    s = np.zeros((n, n))
    for m, sm in enumerate(schedule):
        s[2 * m, 2 * m + 1] = -sm
        s[2 * m + 1, 2 * m] = 1.0 / sm
    return PCSOperator(matrix=s, block_dims=(2,) * block_count,
                       norm_schedule=tuple(schedule))


def t_vf(v, f, pcs: PCSOperator) -> np.ndarray:
    """Rank-2 operator v (x) f - Sv (x) (f o S); it commutes with S.

    ``v`` is a column vector and ``f`` a functional given as a row of
    coefficients; the adjoint of S acts on functionals as f -> f o S.
    """
    s = pcs.matrix
    vv = as_vector(v)
    fv = as_vector(f)
    if vv.size != s.shape[0] or fv.size != s.shape[0]:
        raise ShapeMismatchError("vector/functional dimensions must match S")
    return np.outer(vv, fv) - np.outer(s @ vv, fv @ s)


def pcs_commutant_algebra(pcs: PCSOperator, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """The algebra of all matrices commuting with S: transitive, complex type,
    dimension n^2/2."""
    basis = commutant_of_matrices([pcs.matrix], tol)
    return MatrixAlgebra(ambient_dim=pcs.dim, basis=tuple(basis), unital=True)


def generic_pair_pcs(pair: GenericPair, structure_unit, tol: Tolerance = DEFAULT_TOL) -> PCSOperator:
    """PCS acting as U on M and as -U on N, for complementary U-invariant M, N.

    The conditioning of the decomposition [M | N] is the finite shadow of how
    'generic' the pair is and is reported on the result.
    """
    u = as_matrix(structure_unit, square=True)
    n = pair.ambient_dim
    if u.shape[0] != n:
        raise ShapeMismatchError("structure unit must match the ambient dimension")
    proj_m, proj_n, cond = pair.decomposition(tol)
    for basis in (pair.m_basis, pair.n_basis):
        img = u @ basis
        leak = np.linalg.norm((np.eye(n) - basis @ np.linalg.pinv(basis)) @ img)
        if leak > tol.cutoff(max(1.0, float(np.linalg.norm(img)))) * n * 100:
            raise NotInvariantError("subspace is not invariant under the structure unit")
    s = u @ proj_m - u @ proj_n
    svals = np.linalg.svd(s, compute_uv=False)
    schedule = tuple(float(x) for x in svals[: n // 2])
    return PCSOperator(matrix=s, block_dims=(2,) * (n // 2),
                       norm_schedule=schedule, cond=cond)


def build_quaternion_rep(m: int, twists=None) -> GroupRep:
    """Direct sum of m copies of left multiplication on H, each conjugated by
    an invertible 4x4 change of basis."""
    if m < 1:
        raise ShapeMismatchError("at least one block is required")
    if twists is None:
        twists = [np.eye(4)] * m
    mats = [as_matrix(t, square=True) for t in twists]
    if len(mats) != m or any(t.shape != (4, 4) for t in mats):
        raise ShapeMismatchError("expected one 4x4 twist per block")
    inverses = []
    for t in mats:
        svals = np.linalg.svd(t, compute_uv=False)
        if svals[-1] <= 1e-12 * max(1.0, svals[0]):
            raise SingularTwistError("twist matrix is singular")
        inverses.append(np.linalg.inv(t))
    n = 4 * m
    pi = {}
    for g in GROUP_ELEMENTS:
        lg = left_mult_matrix(GROUP_UNITS[g])
        blocks = np.zeros((n, n))
        for b, (t, tinv) in enumerate(zip(mats, inverses)):
            blocks[4 * b:4 * b + 4, 4 * b:4 * b + 4] = t @ lg @ tinv
        pi[g] = blocks
    return GroupRep(n=n, pi=pi)


def twisted_rep(pair: GenericPair, tau: GroupRep, automorphism=None,
                tol: Tolerance = DEFAULT_TOL) -> GroupRep:
    """Representation acting as tau(g) on M and tau(alpha(g)) on N.

    ``alpha`` defaults to conjugation by j (so alpha(i) = -i); both subspaces
    of the pair must be invariant under every tau(g).
    """
    alpha = CONJUGATION_BY_J if automorphism is None else dict(automorphism)
    n = tau.n
    if pair.ambient_dim != n:
        raise ShapeMismatchError("pair and representation ambient dimensions differ")
    proj_m, proj_n, _ = pair.decomposition(tol)
    for basis in (pair.m_basis, pair.n_basis):
        pinv = np.linalg.pinv(basis)
        for g in GROUP_ELEMENTS:
            img = tau.pi[g] @ basis
            leak = np.linalg.norm((np.eye(n) - basis @ pinv) @ img)
            if leak > tol.cutoff(max(1.0, float(np.linalg.norm(img)))) * n * 100:
                raise NotInvariantError(
                    f"subspace is not invariant under tau({g})"
                )
    pi = {g: tau.pi[g] @ proj_m + tau.pi[alpha[g]] @ proj_n for g in GROUP_ELEMENTS}
    return GroupRep(n=n, pi=pi)


def group_mean(k, rep: GroupRep) -> np.ndarray:
    """Sum of pi(g) K pi(g)^{-1} over the group; commutes with every pi(g)."""
    km = as_matrix(k, square=True)
    if km.shape != (rep.n, rep.n):
        raise ShapeMismatchError("operator shape must match the representation")
    out = np.zeros_like(km)
    for g in GROUP_ELEMENTS:
        out += rep.pi[g] @ km @ rep.pi[group_inverse(g)]
    return out


def solve_popolam(x, rep: GroupRep, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Functional f with f(x) = 1/2 and f(pi(g^{-1}) x) = 0 for g = i, j, k.

    Returns the minimum-norm solution of the rank-4 linear system; for a
    genuine quaternion representation and x != 0 the system always has full
    rank, so degeneracy signals a malformed representation.
    """
    xv = as_vector(x)
    if xv.size != rep.n:
        raise ShapeMismatchError("vector dimension must match the representation")
    if np.linalg.norm(xv) <= tol.abs_eps:
        raise ValueError("x must be nonzero")
    rows = np.stack([
        xv,
        rep.pi[group_inverse("i")] @ xv,
        rep.pi[group_inverse("j")] @ xv,
        rep.pi[group_inverse("k")] @ xv,
    ])
    if rank_of(rows, tol) < 4:
        raise SingularSystemError("the four functional constraints are dependent")
    rhs = np.array([0.5, 0.0, 0.0, 0.0])
    f, residual = solve_least_squares(rows, rhs, tol)
    if residual > tol.cutoff(1.0) * 1e3:
        raise SingularSystemError("functional constraints are inconsistent")
    return f


def rep_commutant_algebra(rep: GroupRep, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """The algebra of all matrices commuting with the representation:
    transitive, quaternion type, dimension n^2/4."""
    # Commuting with pi(i) and pi(j) forces commuting with the whole group.
    basis = commutant_of_matrices([rep.pi["i"], rep.pi["j"]], tol)
    return MatrixAlgebra(ambient_dim=rep.n, basis=tuple(basis), unital=True)
