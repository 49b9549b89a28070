"""Covariant POVMs on the frame space and their Born measures.

A frame observable assigns an effect on H_R to every frame point (x, lam)
so that the total is the identity and conjugation by U_R(g) permutes the
effects along the group action.  Orbit-averaging a seed effect with a
symmetric K^(-1/2) .. K^(-1/2) normalization produces such POVMs for any
invertible orbit sum; sharp and uniform frames are special cases.

Also here: marginals and disintegration of Born measures, push-forwards,
channel composition (with CP/unitality validation), product OVMs, and the
vacuum-orthogonality checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from relqft import lattice, operators as ops
from relqft.lattice import (
    FramePoint,
    GroupElement,
    LatticePoint,
    ModelParams,
)
from relqft.operators import (
    UnitaryRep,
    dagger,
    eq_defect,
    op_norm,
    tensor,
)
from relqft.tolerances import (
    SVD_CUTOFF,
    TOL_EQ,
    TOL_HERM,
    TOL_PSD,
    TOL_SUPP,
    TOL_TRACE,
)


class DegenerateSeedError(ValueError):
    """Raised when a seed effect's orbit sum is not invertible."""


class ChannelValidationError(ValueError):
    """Raised when a map fails the complete-positivity or unitality check."""


# ---------------------------------------------------------------------------
# frame observables

class FrameObservable:
    """A normalized covariant POVM over the frame space.

    effects: dict FramePoint -> ndarray on H_R.  The constructor does not
    re-verify the invariants (builders do); ``normalization_defect`` and
    ``covariance_defect`` recompute them on demand.
    """

    def __init__(self, params: ModelParams, rep: UnitaryRep, effects: dict,
                 label: str = "frame", globally_oriented: bool = False):
        self.params = params
        self.rep = rep
        self.effects = {FramePoint(LatticePoint(*f[0]), f[1]): np.asarray(E, dtype=complex)
                        for f, E in effects.items()}
        self.label = label
        self.globally_oriented = globally_oriented

    @property
    def dim(self) -> int:
        return self.rep.dim

    def frame_points(self) -> tuple[FramePoint, ...]:
        return self.params.frame_points()

    def normalization_defect(self) -> float:
        total = sum(self.effects.values())
        return eq_defect(total, np.eye(self.dim))

    def covariance_defect(self, elements=None) -> float:
        """max over sampled g, f of |U(g) E(f) U(g)^dag - E(g.f)|."""
        if elements is None:
            elements = self.params.generators()
        worst = 0.0
        for g in elements:
            Ug = self.rep(g)
            for f, E in self.effects.items():
                lhs = Ug @ E @ dagger(Ug)
                worst = max(worst, eq_defect(lhs, self.effects[lattice.act(g, f, self.params)]))
        return worst

    def spacetime_marginal_effect(self, x: LatticePoint) -> np.ndarray:
        x = LatticePoint(*x)
        return sum(self.effects[FramePoint(x, lam)] for lam in self.params.boosts())

    def lorentz_marginal_effect(self, lam: int) -> np.ndarray:
        return sum(self.effects[FramePoint(x, lam)] for x in self.params.lattice_points())


@dataclass
class OrientedFrame:
    frame: FrameObservable
    omega: np.ndarray  # state on H_R

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=complex)
        if self.omega.shape != (self.frame.dim, self.frame.dim):
            raise ops.SizeError(
                f"state shape {self.omega.shape} does not match frame dim {self.frame.dim}")


def frames_equal(f1: FrameObservable, f2: FrameObservable, tol: float = TOL_EQ) -> bool:
    if f1 is f2:
        return True
    if f1.params != f2.params or f1.dim != f2.dim:
        return False
    return all(eq_defect(E, f2.effects[f]) <= tol for f, E in f1.effects.items())


# ---------------------------------------------------------------------------
# builders

def _inverse_sqrt(K: np.ndarray, cutoff: float = SVD_CUTOFF) -> np.ndarray:
    eigs, V = np.linalg.eigh(K)
    if eigs[0] <= cutoff * eigs[-1]:
        raise DegenerateSeedError(
            f"orbit sum is numerically singular (eigs in [{eigs[0]:.3e}, {eigs[-1]:.3e}])")
    return V @ np.diag(eigs**-0.5) @ dagger(V)


def build_frame(rep: UnitaryRep, seed_effect: np.ndarray,
                label: str = "orbit") -> FrameObservable:
    """Covariant POVM from the group orbit of a seed effect.

    effects(f) = K^(-1/2) U(g_f) seed U(g_f)^dag K^(-1/2) with K the full
    orbit sum.  K is a group average, so it commutes with the
    representation and the K^(-1/2) dressing preserves covariance while
    enforcing normalization exactly.
    """
    params = rep.params
    seed = np.asarray(seed_effect, dtype=complex)
    orbit = {}
    for f in params.frame_points():
        Ug = rep(lattice.frame_to_group(f))
        orbit[f] = Ug @ seed @ dagger(Ug)
    K = sum(orbit.values())
    Kinv = _inverse_sqrt(K)
    effects = {f: Kinv @ A @ Kinv for f, A in orbit.items()}
    return FrameObservable(params, rep, effects, label=label)


def uniform_frame(rep: UnitaryRep) -> FrameObservable:
    """effects(f) = identity / |F|; covariant for any representation."""
    params = rep.params
    nF = len(params.frame_points())
    E = np.eye(rep.dim, dtype=complex) / nF
    return FrameObservable(params, rep, {f: E for f in params.frame_points()},
                           label="uniform")


def sharp_regular_frame(params: ModelParams) -> FrameObservable:
    """Rank-one PVM of the regular representation: effects(f) = |e_f><e_f|."""
    rep = ops.regular_representation(params)
    points = params.frame_points()
    effects = {}
    for i, f in enumerate(points):
        E = np.zeros((rep.dim, rep.dim), dtype=complex)
        E[i, i] = 1.0
        effects[f] = E
    return FrameObservable(params, rep, effects, label="sharp-regular")


def fiber_uniform_spacetime_frame(params: ModelParams) -> FrameObservable:
    """Sharp in spacetime, uniform over the Lorentz fiber, on l2(M).

    effects(x, lam) = |x><x| / |C| is covariant for the spacetime
    permutation representation because the effect only depends on x.  This
    keeps the Hilbert space at dim N^2 for scaling scans.
    """
    rep = ops.spacetime_representation(params)
    points = params.lattice_points()
    nC = len(params.boosts())
    effects = {}
    for i, x in enumerate(points):
        E = np.zeros((rep.dim, rep.dim), dtype=complex)
        E[i, i] = 1.0 / nC
        for lam in params.boosts():
            effects[FramePoint(x, lam)] = E
    return FrameObservable(params, rep, effects, label="fiber-uniform-sharp")


def covariant_spacetime_povm(params: ModelParams, seed: np.ndarray,
                             rep: UnitaryRep | None = None) -> tuple[dict, UnitaryRep]:
    """Covariant POVM over M on l2(M): F(x) from the boost-coset orbit.

    F(x) = K^(-1/2) S(x) K^(-1/2) with S(x) the sum of U(g) seed U(g)^dag
    over the |C| group elements sending the origin to x.
    """
    rep = rep or ops.spacetime_representation(params)
    S = {}
    for x in params.lattice_points():
        total = np.zeros((rep.dim, rep.dim), dtype=complex)
        for b in params.boosts():
            Ug = rep(GroupElement(x, b))
            total += Ug @ np.asarray(seed, dtype=complex) @ dagger(Ug)
        S[x] = total
    K = sum(S.values())
    Kinv = _inverse_sqrt(K)
    return {x: Kinv @ A @ Kinv for x, A in S.items()}, rep


def covariant_lorentz_povm(params: ModelParams, seed: np.ndarray,
                           rep: UnitaryRep | None = None) -> tuple[dict, UnitaryRep]:
    """Covariant POVM over C on l2(C): G(lam) from the boost orbit."""
    rep = rep or ops.lorentz_representation(params)
    S = {}
    for lam in params.boosts():
        Ug = rep(GroupElement(LatticePoint(0, 0), lam))
        S[lam] = Ug @ np.asarray(seed, dtype=complex) @ dagger(Ug)
    K = sum(S.values())
    Kinv = _inverse_sqrt(K)
    return {lam: Kinv @ A @ Kinv for lam, A in S.items()}, rep


def product_frame(params: ModelParams, spacetime_effects: dict, lorentz_effects: dict,
                  spacetime_rep: UnitaryRep, lorentz_rep: UnitaryRep) -> FrameObservable:
    """E(x, lam) = F(x) (x) G(lam) on the tensor-product representation."""
    rep = ops.tensor_product_rep(spacetime_rep, lorentz_rep)
    effects = {}
    for x in params.lattice_points():
        for lam in params.boosts():
            effects[FramePoint(x, lam)] = tensor(spacetime_effects[x],
                                                 lorentz_effects[lam])
    return FrameObservable(params, rep, effects, label="product",
                           globally_oriented=True)


# ---------------------------------------------------------------------------
# Born measures

class BornMeasure:
    """Weights over frame points induced by a state (real pmf) or by a
    general trace-class operator (complex weights)."""

    def __init__(self, pmf: dict, params: ModelParams):
        self.pmf = {FramePoint(LatticePoint(*f[0]), f[1]): w for f, w in pmf.items()}
        self.params = params

    def total(self) -> complex:
        return sum(self.pmf.values())

    def is_probability(self, tol_psd: float = TOL_PSD,
                       tol_trace: float = TOL_TRACE) -> bool:
        vals = list(self.pmf.values())
        if any(abs(np.imag(w)) > tol_trace for w in vals):
            return False
        reals = [float(np.real(w)) for w in vals]
        return min(reals) >= -tol_psd and abs(sum(reals) - 1.0) <= tol_trace

    def support(self, tol_supp: float = TOL_SUPP) -> list[FramePoint]:
        return [f for f, w in self.pmf.items() if abs(w) > tol_supp]

    def spacetime_marginal(self) -> dict[LatticePoint, complex]:
        out: dict[LatticePoint, complex] = {}
        for f, w in self.pmf.items():
            out[f.x] = out.get(f.x, 0.0) + w
        return out

    def lorentz_marginal(self) -> dict[int, complex]:
        out: dict[int, complex] = {}
        for f, w in self.pmf.items():
            out[f.lam] = out.get(f.lam, 0.0) + w
        return out

    def spacetime_support(self, tol_supp: float = TOL_SUPP) -> frozenset[LatticePoint]:
        return frozenset(x for x, w in self.spacetime_marginal().items()
                         if abs(w) > tol_supp)


def born_measure(of: OrientedFrame) -> BornMeasure:
    """pmf(f) = Tr[omega E(f)] (real part; the imaginary part is checked)."""
    pmf = {}
    for f, E in of.frame.effects.items():
        w = np.trace(of.omega @ E)
        pmf[f] = float(np.real(w))
    return BornMeasure(pmf, of.frame.params)


def born_measure_trace_class(frame: FrameObservable, T: np.ndarray) -> BornMeasure:
    """Complex-weighted Born measure of an arbitrary operator."""
    return BornMeasure({f: complex(np.trace(np.asarray(T) @ E))
                        for f, E in frame.effects.items()}, frame.params)


@dataclass
class Marginals:
    spacetime_pmf: dict
    lorentz_pmf: dict
    spacetime_effects: dict  # F_R: LatticePoint -> effect
    lorentz_effects: dict    # G_R: lam -> effect


def marginals(of: OrientedFrame) -> Marginals:
    frame = of.frame
    bm = born_measure(of)
    F = {x: frame.spacetime_marginal_effect(x) for x in frame.params.lattice_points()}
    G = {lam: frame.lorentz_marginal_effect(lam) for lam in frame.params.boosts()}
    return Marginals(bm.spacetime_marginal(), bm.lorentz_marginal(), F, G)


@dataclass
class Disintegration:
    """Spacetime marginal plus fiberwise Lorentz conditionals.

    ``conditional`` only holds entries for marginal weight above tol_supp;
    reconstruction marginal(x) * conditional(x)(lam) recovers the joint pmf
    on the support.
    """

    marginal: dict
    conditional: dict
    tol_supp: float = TOL_SUPP


def disintegrate(mu: BornMeasure, tol_supp: float = TOL_SUPP) -> Disintegration:
    marginal = {x: float(np.real(w)) for x, w in mu.spacetime_marginal().items()}
    conditional = {}
    for x, m in marginal.items():
        if m > tol_supp:
            conditional[x] = {
                lam: float(np.real(mu.pmf[FramePoint(x, lam)])) / m
                for lam in mu.params.boosts()
            }
    return Disintegration(marginal, conditional, tol_supp)


def support(mu: BornMeasure, tol_supp: float = TOL_SUPP) -> list[FramePoint]:
    return mu.support(tol_supp)


def smearing_function(of: OrientedFrame) -> dict[LatticePoint, float]:
    """The spacetime marginal pmf, i.e. the density against counting
    measure that reconstructs the relational observable from the field."""
    return {x: float(np.real(w))
            for x, w in born_measure(of).spacetime_marginal().items()}


# ---------------------------------------------------------------------------
# OVM constructions

def pushforward(ovm: dict, map_fn) -> dict:
    """(phi_* E)(y) = sum over the fiber of y of E(f)."""
    out: dict = {}
    for f, E in ovm.items():
        y = map_fn(f)
        out[y] = out.get(y, 0) + E
    return out


def product_ovm(E1: dict, E2: dict) -> dict:
    """Product OVM (f1, f2) -> E1(f1) E2(f2); not positive in general."""
    return {(f1, f2): A @ B for f1, A in E1.items() for f2, B in E2.items()}


# ---------------------------------------------------------------------------
# channels

class Channel:
    """A linear map on d x d operators, stored as its d^2 x d^2 matrix
    acting on row-major flattened operators."""

    def __init__(self, matrix: np.ndarray, dim: int):
        self.M = np.asarray(matrix, dtype=complex)
        self.dim = dim
        if self.M.shape != (dim * dim, dim * dim):
            raise ops.SizeError(f"channel matrix shape {self.M.shape} != {(dim*dim,)*2}")

    @classmethod
    def from_function(cls, fn, dim: int) -> "Channel":
        M = np.zeros((dim * dim, dim * dim), dtype=complex)
        for i in range(dim):
            for j in range(dim):
                E = np.zeros((dim, dim), dtype=complex)
                E[i, j] = 1.0
                M[:, i * dim + j] = ops.vec(fn(E))
        return cls(M, dim)

    @classmethod
    def identity(cls, dim: int) -> "Channel":
        return cls(np.eye(dim * dim, dtype=complex), dim)

    @classmethod
    def from_conjugation(cls, U: np.ndarray) -> "Channel":
        d = U.shape[0]
        return cls(np.kron(U, U.conj()), d)

    @classmethod
    def from_kraus(cls, kraus: list) -> "Channel":
        d = kraus[0].shape[0]
        M = sum(np.kron(K, K.conj()) for K in kraus)
        return cls(M, d)

    def apply(self, A: np.ndarray) -> np.ndarray:
        return ops.unvec(self.M @ ops.vec(A), self.dim)

    def compose(self, other: "Channel") -> "Channel":
        return Channel(self.M @ other.M, self.dim)

    def choi(self) -> np.ndarray:
        d = self.dim
        return self.M.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)

    def unitality_defect(self) -> float:
        eye = np.eye(self.dim, dtype=complex)
        return eq_defect(self.apply(eye), eye)

    def cp_gap(self, tol_herm: float = TOL_HERM) -> float:
        """Most negative eigenvalue of the Choi matrix (>= -tol_psd for CP)."""
        C = self.choi()
        return ops.psd_gap((C + dagger(C)) / 2, tol_herm=np.inf)

    def predual_apply(self, rho: np.ndarray) -> np.ndarray:
        """The Schroedinger-picture map: Tr[psi_*(rho) A] = Tr[rho psi(A)]."""
        return dagger(ops.unvec(dagger(self.M) @ ops.vec(dagger(rho)), self.dim))

    def equivariance_defect(self, rep: UnitaryRep, elements=None) -> float:
        """max |psi(U A U^dag) - U psi(A) U^dag| over basis units."""
        if elements is None:
            elements = rep.params.generators()
        d = self.dim
        worst = 0.0
        for g in elements:
            U = rep(g)
            left = Channel.from_conjugation(U)
            worst = max(worst, eq_defect((self.compose(left)).M, (left.compose(self)).M))
        return worst


def average_channel_over_group(psi: Channel, rep: UnitaryRep) -> Channel:
    """Group-average psi into an equivariant channel:
    (1/|G|) sum_g U(g)^dag psi(U(g) . U(g)^dag) U(g)."""
    params = rep.params
    elements = params.group_elements()
    M = np.zeros_like(psi.M)
    for g in elements:
        U = rep(g)
        pre = Channel.from_conjugation(U)
        post = Channel.from_conjugation(dagger(U))
        M += (post.compose(psi).compose(pre)).M
    return Channel(M / len(elements), psi.dim)


def random_mixed_unitary_channel(rng: np.random.Generator, dim: int,
                                 n_terms: int = 3) -> Channel:
    """Random convex mixture of unitary conjugations (unital and CP)."""
    weights = rng.random(n_terms)
    weights /= weights.sum()
    M = np.zeros((dim * dim, dim * dim), dtype=complex)
    for w in weights:
        A = ops.random_operator(rng, dim)
        Q, _ = np.linalg.qr(A)
        M += w * np.kron(Q, Q.conj())
    return Channel(M, dim)


def channel_compose(psi: Channel, frame: FrameObservable,
                    tol_psd: float = TOL_PSD, tol_eq: float = TOL_EQ,
                    label: str | None = None) -> FrameObservable:
    """Post-process a frame observable by a unital CP map.

    Validates complete positivity (Choi) and unitality before composing;
    the result keeps the same representation.  Covariance is preserved
    exactly when psi is equivariant, which the caller can check separately.
    """
    if psi.cp_gap() < -tol_psd:
        raise ChannelValidationError(f"Choi matrix not PSD (gap {psi.cp_gap():.3e})")
    if psi.unitality_defect() > tol_eq:
        raise ChannelValidationError(
            f"channel is not unital (defect {psi.unitality_defect():.3e})")
    effects = {f: psi.apply(E) for f, E in frame.effects.items()}
    return FrameObservable(frame.params, frame.rep, effects,
                           label=label or f"{frame.label}+channel")


# ---------------------------------------------------------------------------
# vacuum orthogonality

def translation_invariance_defect(rep: UnitaryRep, Omega: np.ndarray) -> float:
    worst = 0.0
    for a in [LatticePoint(1, 0), LatticePoint(0, 1)]:
        U = rep.translation(a)
        worst = max(worst, eq_defect(U @ Omega @ dagger(U), Omega))
    return worst


class InvarianceError(ValueError):
    """Raised when a supposedly invariant state fails its invariance check."""


def vacuum_orthogonality_scan(frame_family, region, Ns,
                              tol_eq: float = TOL_EQ) -> list[tuple[int, float]]:
    """Born weight of a fixed region under translation-invariant states.

    ``frame_family(N)`` must return an (OrientedFrame) whose state is
    translation-invariant; the scan reports the spacetime-marginal weight
    of ``region`` for each N.  Transitivity of the translation action makes
    this exactly |region| / N^2 whatever the frame.
    """
    rows = []
    for N in Ns:
        of = frame_family(N)
        defect = translation_invariance_defect(of.frame.rep, of.omega)
        if defect > tol_eq:
            raise InvarianceError(
                f"state not translation-invariant at N={N} (defect {defect:.3e})")
        weight = 0.0
        for x in region:
            Fx = of.frame.spacetime_marginal_effect(LatticePoint(x[0] % N, x[1] % N))
            weight += float(np.real(np.trace(of.omega @ Fx)))
        rows.append((N, weight))
    return rows


@dataclass
class StrictOrthogonalityReport:
    ok: bool
    residual: float
    fixed_space_dim: int
    vacuous: bool  # no translation-invariant vectors at all


def strict_vacuum_orthogonality_check(frame: FrameObservable,
                                      tol_eq: float = TOL_EQ) -> StrictOrthogonalityReport:
    """Whether every spacetime-marginal effect annihilates the subspace of
    translation-fixed vectors.

    The residual is the largest operator norm of F_R(x) P_vac over single
    points; sums over larger regions are monotone in this, and the whole
    space would trivially give norm 1 for any normalized frame.
    """
    averaged = ops.translation_fixed_point_projector(frame.rep)
    eigenvalues, vectors = np.linalg.eigh(averaged)
    V = vectors[:, eigenvalues > 0.5]
    rank = V.shape[1]
    # rebuild the projector from its eigenbasis so that a trivial fixed
    # space yields the zero matrix exactly, not averaging dust
    P = V @ dagger(V)
    worst = 0.0
    for x in frame.params.lattice_points():
        worst = max(worst, op_norm(frame.spacetime_marginal_effect(x) @ P))
    return StrictOrthogonalityReport(worst <= tol_eq, worst, rank, rank == 0)
