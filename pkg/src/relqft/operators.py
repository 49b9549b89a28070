"""Dense complex-matrix operator tools.

States, effects, tensor products, partial traces, commutants and unitary
representations of the toy group.  Everything is a plain numpy array; the
classes here only bundle arrays with the bookkeeping the rest of the
package needs (representation tables, subspace bases).
"""

from __future__ import annotations

import numpy as np

from relqft import lattice
from relqft.lattice import (
    FramePoint,
    GroupElement,
    LatticePoint,
    ModelParams,
    act,
    act_point,
)
from relqft.tolerances import SVD_CUTOFF, TOL_EQ, TOL_HERM, TOL_PSD, TOL_TRACE


class HermiticityError(ValueError):
    """Raised when an operation requires a Hermitian input."""


class SizeError(ValueError):
    """Raised on dimension mismatches or oversized tensor products."""


MAX_DIM = 4096  # guard for runaway tensor products


# ---------------------------------------------------------------------------
# elementary helpers

def dagger(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def eq_defect(A: np.ndarray, B: np.ndarray) -> float:
    """Largest entrywise deviation |A - B|."""
    return float(np.max(np.abs(np.asarray(A) - np.asarray(B)))) if np.size(A) else 0.0


def op_norm(A: np.ndarray) -> float:
    """Operator norm = largest singular value (exact for matrices)."""
    if min(A.shape) == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def herm_defect(A: np.ndarray) -> float:
    return eq_defect(A, dagger(A))


def is_hermitian(A: np.ndarray, tol: float = TOL_HERM) -> bool:
    return herm_defect(A) <= tol


def psd_gap(A: np.ndarray, tol_herm: float = TOL_HERM) -> float:
    """Minimum eigenvalue of a Hermitian matrix.

    A is accepted as positive semidefinite when psd_gap(A) >= -tol_psd.
    Non-Hermitian input is a usage error, not a numerical condition.
    """
    if not is_hermitian(A, tol_herm):
        raise HermiticityError(f"matrix is not Hermitian within {tol_herm}")
    H = (A + dagger(A)) / 2
    return float(np.linalg.eigvalsh(H)[0])


def is_state(rho: np.ndarray, tol_herm: float = TOL_HERM,
             tol_psd: float = TOL_PSD, tol_trace: float = TOL_TRACE) -> bool:
    return (
        is_hermitian(rho, tol_herm)
        and psd_gap(rho, tol_herm) >= -tol_psd
        and abs(np.trace(rho) - 1.0) <= tol_trace
    )


def is_effect(E: np.ndarray, tol_herm: float = TOL_HERM,
              tol_psd: float = TOL_PSD) -> bool:
    if not is_hermitian(E, tol_herm):
        return False
    eigs = np.linalg.eigvalsh((E + dagger(E)) / 2)
    return eigs[0] >= -tol_psd and eigs[-1] <= 1.0 + tol_psd


def tensor(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product, with a size guard."""
    d = A.shape[0] * B.shape[0]
    if d > MAX_DIM:
        raise SizeError(f"tensor product dimension {d} exceeds {MAX_DIM}")
    return np.kron(A, B)


def partial_trace_frame(O: np.ndarray, dimS: int, dimR: int) -> np.ndarray:
    """Trace over the second (frame) tensor factor of an S (x) R operator."""
    if O.shape != (dimS * dimR, dimS * dimR):
        raise SizeError(f"expected shape {(dimS * dimR,) * 2}, got {O.shape}")
    return np.einsum("arbr->ab", O.reshape(dimS, dimR, dimS, dimR))


def partial_trace_system(O: np.ndarray, dimS: int, dimR: int) -> np.ndarray:
    """Trace over the first (system) tensor factor."""
    if O.shape != (dimS * dimR, dimS * dimR):
        raise SizeError(f"expected shape {(dimS * dimR,) * 2}, got {O.shape}")
    return np.einsum("arav->rv", O.reshape(dimS, dimR, dimS, dimR))


def vec(A: np.ndarray) -> np.ndarray:
    """Row-major flattening; Tr[A^dag B] = vec(A)^dag vec(B)."""
    return np.asarray(A).reshape(-1)


def unvec(x: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(x).reshape(d, d)


# ---------------------------------------------------------------------------
# matrix subspaces and commutants

class AlgebraSubspace:
    """A subspace of d x d matrices, stored as an orthonormal basis.

    The basis is orthonormal for the Hilbert-Schmidt inner product, held as
    the columns of a d^2 x k matrix of flattened operators.  Closure under
    products and adjoints is checked on demand, not enforced, because the
    same container also carries plain generator spans.
    """

    def __init__(self, dim: int, basis_matrix: np.ndarray):
        self.dim = dim
        self.Q = basis_matrix  # d^2 x k, orthonormal columns

    @classmethod
    def from_spanning(cls, dim: int, ops, cutoff: float = SVD_CUTOFF) -> "AlgebraSubspace":
        ops = list(ops)
        if not ops:
            return cls(dim, np.zeros((dim * dim, 0), dtype=complex))
        M = np.stack([vec(A) for A in ops], axis=1)
        U, svals, _ = np.linalg.svd(M, full_matrices=False)
        if svals.size and svals[0] > 0:
            rank = int(np.sum(svals > cutoff * svals[0]))
        else:
            rank = 0
        return cls(dim, U[:, :rank])

    @property
    def subspace_dim(self) -> int:
        return self.Q.shape[1]

    def basis_ops(self) -> list[np.ndarray]:
        return [unvec(self.Q[:, j], self.dim) for j in range(self.subspace_dim)]

    def project(self, A: np.ndarray) -> np.ndarray:
        x = vec(A)
        return unvec(self.Q @ (dagger(self.Q) @ x), self.dim)

    def membership_defect(self, A: np.ndarray) -> float:
        """Entrywise distance from A to its projection onto the subspace."""
        return eq_defect(A, self.project(A))

    def contains(self, A: np.ndarray, tol: float = TOL_EQ) -> bool:
        return self.membership_defect(A) <= tol

    def containment_defect(self, other: "AlgebraSubspace") -> float:
        """Max membership defect of this subspace's basis in ``other``."""
        if self.subspace_dim == 0:
            return 0.0
        return max(other.membership_defect(B) for B in self.basis_ops())

    def equality_defect(self, other: "AlgebraSubspace") -> float:
        return max(self.containment_defect(other), other.containment_defect(self))

    def contains_identity(self, tol: float = TOL_EQ) -> bool:
        return self.contains(np.eye(self.dim, dtype=complex), tol)

    def is_adjoint_closed(self, tol: float = TOL_EQ) -> bool:
        return all(self.contains(dagger(B), tol) for B in self.basis_ops())

    def is_product_closed(self, tol: float = TOL_EQ) -> bool:
        ops = self.basis_ops()
        return all(self.contains(A @ B, tol) for A in ops for B in ops)


def commutant(ops, dim: int | None = None, cutoff: float = SVD_CUTOFF) -> AlgebraSubspace:
    """Basis of {X : [X, A] = 0 for all A}, via one SVD nullspace.

    The map X -> AX - XA has matrix kron(A, I) - kron(I, A.T) on row-major
    flattened X; stacking these for every generator and taking the joint
    nullspace gives the commutant.  Always contains the identity.
    """
    ops = list(ops)
    if dim is None:
        if not ops:
            raise ValueError("need ops or an explicit dim")
        dim = ops[0].shape[0]
    if not ops:
        return AlgebraSubspace(dim, np.eye(dim * dim, dtype=complex))
    d2 = dim * dim
    eye = np.eye(dim, dtype=complex)
    scale = max(max(float(np.linalg.norm(A)) for A in ops), 1e-300)

    # Gram operator of all the commutator maps at once: with
    # M_i = [A_i, .] on vectorized matrices, the nullspace of
    # G = sum_i M_i^dag M_i is the commutant.  The Kronecker expansion
    # below assembles G without ever stacking the maps, so memory stays
    # at one d^2 x d^2 block.  Aggregating before any rank decision
    # matters: a generator-by-generator sweep makes hard keep/cut calls
    # whose early errors compound over long generator lists.
    G = np.zeros((d2, d2), dtype=complex)
    left = np.zeros((dim, dim), dtype=complex)
    right = np.zeros((dim, dim), dtype=complex)
    for A in ops:
        Ad = dagger(A)
        left += Ad @ A
        right += A @ Ad
        G -= np.kron(Ad, A.T)
        G -= np.kron(A, np.conj(A))
    G += np.kron(left, eye)
    G += np.kron(eye, right.T)
    G = (G + dagger(G)) / 2.0
    evals, evecs = np.linalg.eigh(G)

    # Generous split: only directions clearly excluded are dropped here;
    # everything near the boundary is deferred to the unsquared pass, so
    # the squaring in G never decides a borderline case.  The generator
    # scale anchors the threshold because G is numerical dust whenever
    # every generator nearly commutes with everything.
    coarse = 1e-4
    tau = coarse * max(float(np.sqrt(max(evals[-1], 0.0))), scale)
    Q = evecs[:, evals <= tau * tau]
    k = Q.shape[1]
    if k == 0:
        return AlgebraSubspace(dim, Q)

    # Exact pass: one aggregate rank decision over the stacked commutator
    # maps restricted to the candidates.  Repeated QR accumulates the R
    # factor, which has the same singular structure as the full stack,
    # while never holding more than one d^2 x k block.
    X = Q.reshape(dim, dim, k)
    R = np.zeros((0, k), dtype=complex)
    for A in ops:
        C = np.einsum("ab,bck->ack", A, X) - np.einsum("abk,bc->ack", X, A)
        R = np.linalg.qr(np.concatenate([R, C.reshape(d2, k)], axis=0), mode="r")
    _, svals, Vh = np.linalg.svd(R, full_matrices=False)
    tolv = cutoff * max(svals[0] if svals.size else 0.0, scale)
    rank = int(np.sum(svals > tolv))
    return AlgebraSubspace(dim, Q @ dagger(Vh)[:, rank:])


def double_commutant(ops, dim: int | None = None,
                     cutoff: float = SVD_CUTOFF) -> AlgebraSubspace:
    """commutant(commutant(S)); the generated algebra for *-closed S."""
    first = commutant(ops, dim=dim, cutoff=cutoff)
    return commutant(first.basis_ops(), dim=first.dim, cutoff=cutoff)


# ---------------------------------------------------------------------------
# unitary representations

class UnitaryRep:
    """A unitary representation of the toy group, evaluated lazily.

    ``matrix_fn`` maps a GroupElement to its matrix; results are cached.
    Builders below cover the permutation representations (regular,
    spacetime, Lorentz), character representations, direct sums and tensor
    products, which is everything the workbench uses.
    """

    def __init__(self, params: ModelParams, dim: int, matrix_fn, label: str = "rep"):
        self.params = params
        self.dim = dim
        self._fn = matrix_fn
        self._cache: dict[GroupElement, np.ndarray] = {}
        self.label = label

    def __call__(self, g: GroupElement) -> np.ndarray:
        g = GroupElement(LatticePoint(*g.a), g.boost)
        if g not in self._cache:
            self._cache[g] = np.asarray(self._fn(g), dtype=complex)
        return self._cache[g]

    def translation(self, a: LatticePoint) -> np.ndarray:
        return self(GroupElement(LatticePoint(*a), 1))

    def homomorphism_defect(self, pairs) -> float:
        """max over (g, h) of |U(g)U(h) - U(gh)| entrywise."""
        worst = 0.0
        for g, h in pairs:
            gh = lattice.compose(g, h, self.params)
            worst = max(worst, eq_defect(self(g) @ self(h), self(gh)))
        return worst

    def conjugate(self, g: GroupElement, A: np.ndarray) -> np.ndarray:
        Ug = self(g)
        return Ug @ A @ dagger(Ug)


def _permutation_matrix(n: int, perm) -> np.ndarray:
    """Matrix with U e_j = e_{perm(j)}."""
    U = np.zeros((n, n), dtype=complex)
    for j in range(n):
        U[perm(j), j] = 1.0
    return U


def regular_representation(params: ModelParams) -> UnitaryRep:
    """Permutation matrices of the torsor action on F; dim = N^2 |C|."""
    points = params.frame_points()
    index = {f: i for i, f in enumerate(points)}

    def fn(g: GroupElement) -> np.ndarray:
        return _permutation_matrix(len(points),
                                   lambda j: index[act(g, points[j], params)])

    return UnitaryRep(params, len(points), fn, label="regular")


def spacetime_representation(params: ModelParams) -> UnitaryRep:
    """Permutation matrices of the (transitive) action on M; dim = N^2."""
    points = params.lattice_points()
    index = {x: i for i, x in enumerate(points)}

    def fn(g: GroupElement) -> np.ndarray:
        return _permutation_matrix(len(points),
                                   lambda j: index[act_point(g, points[j], params)])

    return UnitaryRep(params, len(points), fn, label="spacetime")


def lorentz_representation(params: ModelParams) -> UnitaryRep:
    """Permutation matrices of lam -> boost * lam on C; translations act
    trivially (the representation factors through the boost quotient)."""
    boosts = params.boosts()
    index = {b: i for i, b in enumerate(boosts)}

    def fn(g: GroupElement) -> np.ndarray:
        return _permutation_matrix(
            len(boosts),
            lambda j: index[(g.boost * boosts[j]) % params.N])

    return UnitaryRep(params, len(boosts), fn, label="lorentz")


def trivial_representation(params: ModelParams, dim: int = 1) -> UnitaryRep:
    eye = np.eye(dim, dtype=complex)
    return UnitaryRep(params, dim, lambda g: eye, label="trivial")


def character_phase(p: LatticePoint, a: LatticePoint, N: int) -> complex:
    """chi_p(a) = exp(2 pi i (p_u a_u + p_v a_v) / N)."""
    return np.exp(2j * np.pi * ((p.u * a.u + p.v * a.v) % N) / N)


def momentum_boost(b: int, p: LatticePoint, params: ModelParams) -> LatticePoint:
    """Action of a boost on momentum labels.

    With translations acting as U(a) e_p = chi_p(a) e_p, the homomorphism
    property forces boosts to send p to b^-1 |> p = (b^-1 p_u, b p_v)."""
    binv = params.boost_inverse(b)
    return LatticePoint((binv * p.u) % params.N, (b * p.v) % params.N)


def character_representation(params: ModelParams,
                             momenta: list[LatticePoint]) -> UnitaryRep:
    """Representation on a boost-closed set of translation characters.

    Basis vectors carry momenta p: translations act diagonally by chi_p,
    boosts permute the labels via momentum_boost.  Raises if the label set
    is not closed under the boost action.
    """
    momenta = [LatticePoint(*p) for p in momenta]
    index = {p: i for i, p in enumerate(momenta)}
    for p in momenta:
        q = momentum_boost(params.s, p, params)
        if q not in index:
            raise ValueError(f"momentum set not boost-closed: {p} -> {q}")

    def fn(g: GroupElement) -> np.ndarray:
        U = np.zeros((len(momenta), len(momenta)), dtype=complex)
        for p, i in index.items():
            q = momentum_boost(g.boost, p, params)
            U[index[q], i] = character_phase(q, g.a, params.N)
        return U

    return UnitaryRep(params, len(momenta), fn, label="character")


def direct_sum_rep(reps: list[UnitaryRep]) -> UnitaryRep:
    params = reps[0].params
    for r in reps[1:]:
        lattice.require_same_params(params, r.params)
    dims = [r.dim for r in reps]
    total = sum(dims)

    def fn(g: GroupElement) -> np.ndarray:
        U = np.zeros((total, total), dtype=complex)
        off = 0
        for r, d in zip(reps, dims):
            U[off:off + d, off:off + d] = r(g)
            off += d
        return U

    return UnitaryRep(params, total, fn, label="direct-sum")


def tensor_product_rep(rep1: UnitaryRep, rep2: UnitaryRep) -> UnitaryRep:
    lattice.require_same_params(rep1.params, rep2.params)

    def fn(g: GroupElement) -> np.ndarray:
        return np.kron(rep1(g), rep2(g))

    return UnitaryRep(rep1.params, rep1.dim * rep2.dim, fn, label="tensor")


def restrict_representation(rep: UnitaryRep, basis: np.ndarray,
                            label: str = "restricted") -> UnitaryRep:
    """Restrict to an invariant subspace given by orthonormal columns.

    The caller is responsible for invariance; the result is unitary exactly
    when the subspace is preserved by every U(g).
    """
    W = np.asarray(basis, dtype=complex)

    def fn(g: GroupElement) -> np.ndarray:
        return dagger(W) @ rep(g) @ W

    return UnitaryRep(rep.params, W.shape[1], fn, label=label)


# ---------------------------------------------------------------------------
# translation characters of a representation

def translation_character_projector(rep: UnitaryRep, p: LatticePoint) -> np.ndarray:
    """Projector onto the chi_p eigenspace of the translation subgroup:
    P_p = (1/N^2) sum_a conj(chi_p(a)) U(a)."""
    params = rep.params
    P = np.zeros((rep.dim, rep.dim), dtype=complex)
    for a in params.lattice_points():
        P += np.conj(character_phase(p, a, params.N)) * rep.translation(a)
    return P / params.N**2


def translation_character_support(rep: UnitaryRep,
                                  tol: float = TOL_EQ) -> list[LatticePoint]:
    """Momenta whose character projector is nonzero: the finite analog of
    the joint spectrum of the translation generators."""
    out = []
    for p in rep.params.lattice_points():
        if op_norm(translation_character_projector(rep, p)) > tol:
            out.append(p)
    return out


def translation_fixed_point_projector(rep: UnitaryRep) -> np.ndarray:
    """Group average over translations; projects onto invariant vectors."""
    return translation_character_projector(rep, LatticePoint(0, 0))


# ---------------------------------------------------------------------------
# randomized test material

def make_rng(seed: int) -> np.random.Generator:
    """Counter-based deterministic generator (Philox), stable across runs."""
    return np.random.Generator(np.random.Philox(seed))


def random_operator(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    A = random_operator(rng, d)
    return (A + dagger(A)) / 2


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    G = random_operator(rng, d)
    rho = G @ dagger(G)
    return rho / np.trace(rho)


def random_psd(rng: np.random.Generator, d: int) -> np.ndarray:
    G = random_operator(rng, d)
    return G @ dagger(G)
