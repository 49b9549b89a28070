"""Finite toy Poincare group and its lattice causal structure.

Spacetime is M = Z_N x Z_N in lightcone coordinates (u, v).  A boost by a
unit s mod N acts as (u, v) -> (s*u, s^-1 * v); the "Lorentz" group C is the
cyclic subgroup of (Z_N)^x generated by the model's s.  The full group is
the semidirect product G = M x| C with composition

    (a1, s1) * (a2, s2) = (a1 + s1 |> a2, s1 * s2),

and the frame space F = M x C is a torsor for G under

    g . (x, lam) = (g.boost |> x + g.a, g.boost * lam).

Two causal conventions coexist.  ``modular`` declares x, y spacelike when
the centered lift of du*dv mod N is negative; it is invariant under the
whole group but wraps around the torus.  ``lifted`` lifts coordinates to
centered integer representatives first; it is only translation-invariant
but gives honest lightcones inside a window, which is what causal hulls
and time-slice arguments need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple


class ModelMismatchError(ValueError):
    """Raised when objects built for different model parameters meet."""


class WindowViolationError(ValueError):
    """Raised when a lifted-mode region escapes the causal window."""


class LatticePoint(NamedTuple):
    u: int
    v: int


class GroupElement(NamedTuple):
    a: LatticePoint  # translation part
    boost: int       # element of C, as a unit mod N


class FramePoint(NamedTuple):
    x: LatticePoint
    lam: int  # C-torsor coordinate, identified with C via the base point


#: Base frame point X0; frame points are identified with group elements
#: through g |-> g . X0.
BASE_FRAME_POINT = FramePoint(LatticePoint(0, 0), 1)


def centered_lift(k: int, N: int) -> int:
    """Unique representative of k mod N in the open interval (-N/2, N/2)."""
    return (k + N // 2) % N - N // 2


@dataclass(frozen=True)
class ModelParams:
    """Size and causal convention of the toy model.

    N must be odd (unique centered lifts) and s a unit mod N; C is the
    cyclic group generated by s.  ``window`` bounds the causal diamond used
    by lifted-mode hull computations: points with centered coordinates in
    [-window, window]^2.
    """

    N: int
    s: int
    causal_mode: str = "modular"
    window: int | None = None

    def __post_init__(self):
        if self.N < 3 or self.N % 2 == 0:
            raise ValueError(f"N must be odd and >= 3, got {self.N}")
        if math.gcd(self.s % self.N, self.N) != 1:
            raise ValueError(f"s must be a unit mod N, got s={self.s}, N={self.N}")
        if self.causal_mode not in ("modular", "lifted"):
            raise ValueError(f"unknown causal_mode {self.causal_mode!r}")
        if self.window is not None:
            if self.causal_mode != "lifted":
                raise ValueError("window only makes sense in lifted mode")
            if not 1 <= self.window <= (self.N - 1) // 2:
                raise ValueError(f"window must lie in [1, (N-1)/2], got {self.window}")
        object.__setattr__(self, "s", self.s % self.N)

    def boosts(self) -> tuple[int, ...]:
        """Elements of C = <s>, starting from 1."""
        out = [1]
        cur = self.s
        while cur != 1:
            out.append(cur)
            cur = (cur * self.s) % self.N
        return tuple(out)

    def boost_inverse(self, b: int) -> int:
        return pow(b, -1, self.N)

    def lattice_points(self) -> tuple[LatticePoint, ...]:
        N = self.N
        return tuple(LatticePoint(u, v) for u in range(N) for v in range(N))

    def frame_points(self) -> tuple[FramePoint, ...]:
        return tuple(
            FramePoint(x, lam) for x in self.lattice_points() for lam in self.boosts()
        )

    def group_elements(self) -> tuple[GroupElement, ...]:
        return tuple(
            GroupElement(x, b) for x in self.lattice_points() for b in self.boosts()
        )

    def generators(self) -> tuple[GroupElement, ...]:
        """Translations by (1,0) and (0,1), and the boost by s."""
        return (
            GroupElement(LatticePoint(1, 0), 1),
            GroupElement(LatticePoint(0, 1), 1),
            GroupElement(LatticePoint(0, 0), self.s),
        )

    @property
    def identity(self) -> GroupElement:
        return GroupElement(LatticePoint(0, 0), 1)


def require_same_params(p1: ModelParams, p2: ModelParams) -> None:
    if p1 != p2:
        raise ModelMismatchError(f"model parameters differ: {p1} vs {p2}")


def boost_apply(b: int, x: LatticePoint, N: int) -> LatticePoint:
    """The boost action b |> (u, v) = (b*u, b^-1 * v) mod N."""
    binv = pow(b, -1, N)
    return LatticePoint((b * x.u) % N, (binv * x.v) % N)


def translate(x: LatticePoint, a: LatticePoint, N: int) -> LatticePoint:
    return LatticePoint((x.u + a.u) % N, (x.v + a.v) % N)


def compose(g1: GroupElement, g2: GroupElement, params: ModelParams) -> GroupElement:
    """Semidirect product (a1, s1)(a2, s2) = (a1 + s1 |> a2, s1 s2)."""
    N = params.N
    a = translate(boost_apply(g1.boost, g2.a, N), g1.a, N)
    return GroupElement(a, (g1.boost * g2.boost) % N)


def inverse(g: GroupElement, params: ModelParams) -> GroupElement:
    N = params.N
    binv = pow(g.boost, -1, N)
    neg_a = LatticePoint((-g.a.u) % N, (-g.a.v) % N)
    return GroupElement(boost_apply(binv, neg_a, N), binv)


def act_point(g: GroupElement, x: LatticePoint, params: ModelParams) -> LatticePoint:
    """The (non-free) action of G on spacetime, g . x = boost |> x + a."""
    return translate(boost_apply(g.boost, x, params.N), g.a, params.N)


def act(g: GroupElement, f: FramePoint, params: ModelParams) -> FramePoint:
    """The free transitive action of G on the frame space F."""
    return FramePoint(act_point(g, f.x, params), (g.boost * f.lam) % params.N)


def frame_to_group(f: FramePoint) -> GroupElement:
    """The unique g with g . X0 = f, for the base point X0 = ((0,0), 1)."""
    return GroupElement(f.x, f.lam)


def transporter(f1: FramePoint, f2: FramePoint, params: ModelParams) -> GroupElement:
    """The unique g with g . f1 = f2 (torsor transitivity)."""
    return compose(frame_to_group(f2), inverse(frame_to_group(f1), params), params)


def time_coordinate(x: LatticePoint, params: ModelParams) -> int:
    """t(x) = lift(u) + lift(v); only meaningful in lifted mode."""
    return centered_lift(x.u, params.N) + centered_lift(x.v, params.N)


def spacelike(x: LatticePoint, y: LatticePoint, params: ModelParams) -> bool:
    """Whether x and y are spacelike separated under the model's convention."""
    N = params.N
    du = (x.u - y.u) % N
    dv = (x.v - y.v) % N
    if params.causal_mode == "modular":
        return centered_lift((du * dv) % N, N) < 0
    return centered_lift(du, N) * centered_lift(dv, N) < 0


def region_spacelike(U: Iterable[LatticePoint], V: Iterable[LatticePoint],
                     params: ModelParams) -> bool:
    """Pairwise spacelike separation; vacuously true for empty regions."""
    U = tuple(U)
    V = tuple(V)
    return all(spacelike(x, y, params) for x in U for y in V)


def _lift_point(x: LatticePoint, params: ModelParams) -> tuple[int, int]:
    return centered_lift(x.u, params.N), centered_lift(x.v, params.N)


def _require_window(params: ModelParams) -> int:
    if params.causal_mode != "lifted" or params.window is None:
        raise WindowViolationError(
            "causal hulls need lifted mode with a window set")
    return params.window


def _in_window(x: LatticePoint, params: ModelParams) -> bool:
    w = params.window
    lu, lv = _lift_point(x, params)
    return abs(lu) <= w and abs(lv) <= w


def causal_leq(x: LatticePoint, y: LatticePoint, params: ModelParams) -> bool:
    """Causal order x <= y on centered representatives: both lightcone
    coordinate differences nonnegative.  Comparisons happen on the lifted
    integers, never re-reduced mod N, so window points cannot alias."""
    xu, xv = _lift_point(x, params)
    yu, yv = _lift_point(y, params)
    return yu - xu >= 0 and yv - xv >= 0


def causal_hull(U: Iterable[LatticePoint], params: ModelParams) -> frozenset[LatticePoint]:
    """J+(U) intersect J-(U) inside the window diamond (lifted mode only)."""
    w = _require_window(params)
    U = frozenset(U)
    for x in U:
        if not _in_window(x, params):
            raise WindowViolationError(
                f"{x} lies outside the window diamond (window={w})")
    if not U:
        return frozenset()
    N = params.N
    diamond = [
        LatticePoint(lu % N, lv % N)
        for lu in range(-w, w + 1)
        for lv in range(-w, w + 1)
    ]
    future = {y for y in diamond if any(causal_leq(p, y, params) for p in U)}
    past = {y for y in diamond if any(causal_leq(y, q, params) for q in U)}
    return frozenset(future & past)
