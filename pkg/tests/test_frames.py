import numpy as np
import pytest

from relqft import frames
from relqft import operators as ops
from relqft.lattice import FramePoint, LatticePoint, ModelParams

P3 = ModelParams(3, 2)
P5 = ModelParams(5, 2)


def smeared(rep, rng, strength=0.4):
    d = rep.dim
    seed = np.eye(d, dtype=complex) / d + strength * ops.random_psd(rng, d) / d
    return frames.build_frame(rep, seed)


def test_builtin_frames_are_normalized_covariant():
    for fr in (frames.uniform_frame(ops.lorentz_representation(P3)),
               frames.sharp_regular_frame(P3),
               frames.fiber_uniform_spacetime_frame(P3)):
        assert fr.normalization_defect() < 1e-12
        assert fr.covariance_defect() < 1e-12
        assert len(fr.frame_points()) == len(P3.frame_points())


def test_build_frame_normalizes_smeared_seed(rng):
    fr = smeared(ops.regular_representation(P3), rng)
    assert fr.normalization_defect() < 1e-10
    assert fr.covariance_defect() < 1e-10
    for E in fr.effects.values():
        assert ops.psd_gap(E) > -1e-10


def test_build_frame_rejects_degenerate_seed():
    rep = ops.lorentz_representation(P3)
    with pytest.raises(frames.DegenerateSeedError):
        frames.build_frame(rep, np.zeros((rep.dim, rep.dim), dtype=complex))


def test_sharp_regular_frame_is_rank_one_orthogonal():
    fr = frames.sharp_regular_frame(P3)
    for f, E in fr.effects.items():
        assert abs(np.trace(E) - 1.0) < 1e-12
        assert ops.eq_defect(E @ E, E) < 1e-12


def test_born_measure_probability(rng):
    fr = smeared(ops.regular_representation(P3), rng)
    omega = ops.random_state(rng, fr.dim)
    mu = frames.born_measure(frames.OrientedFrame(fr, omega))
    assert mu.is_probability()
    assert abs(mu.total() - 1.0) < 1e-12
    assert set(mu.pmf) == set(fr.frame_points())


def test_marginals_sum_to_one(rng):
    fr = smeared(ops.regular_representation(P3), rng)
    omega = ops.random_state(rng, fr.dim)
    mu = frames.born_measure(frames.OrientedFrame(fr, omega))
    st = mu.spacetime_marginal()
    lo = mu.lorentz_marginal()
    assert abs(sum(st.values()) - 1.0) < 1e-12
    assert abs(sum(lo.values()) - 1.0) < 1e-12
    assert set(st) == set(P3.lattice_points())
    assert set(lo) == set(P3.boosts())


def test_disintegration_reconstructs_pmf(rng):
    fr = smeared(ops.regular_representation(P3), rng)
    omega = ops.random_state(rng, fr.dim)
    mu = frames.born_measure(frames.OrientedFrame(fr, omega))
    dis = frames.disintegrate(mu)
    for x, conditional in dis.conditional.items():
        assert abs(sum(conditional.values()) - 1.0) < 1e-10
        for lam, c in conditional.items():
            rebuilt = dis.marginal[x] * c
            assert abs(rebuilt - mu.pmf[FramePoint(x, lam)].real) < 1e-12


def test_smearing_function_equals_spacetime_marginal(rng):
    fr = smeared(ops.regular_representation(P3), rng)
    omega = ops.random_state(rng, fr.dim)
    of = frames.OrientedFrame(fr, omega)
    marginal = frames.born_measure(of).spacetime_marginal()
    smear = frames.smearing_function(of)
    for x, w in smear.items():
        assert abs(w - marginal[x].real) < 1e-12


def test_product_frame_axioms():
    rep_st = ops.spacetime_representation(P3)
    rep_lor = ops.lorentz_representation(P3)
    sites = {x: np.zeros((9, 9), dtype=complex) for x in P3.lattice_points()}
    for i, x in enumerate(P3.lattice_points()):
        sites[x][i, i] = 1.0
    boosts = {lam: np.eye(2, dtype=complex) / 2 for lam in P3.boosts()}
    fr = frames.product_frame(P3, sites, boosts, rep_st, rep_lor)
    assert fr.dim == 18
    assert fr.normalization_defect() < 1e-12
    assert fr.covariance_defect() < 1e-12


def test_channel_kraus_and_predual(rng):
    d = 4
    psi = frames.random_mixed_unitary_channel(rng, d)
    assert psi.unitality_defect() < 1e-12
    assert psi.cp_gap() > -1e-10
    rho = ops.random_state(rng, d)
    A = ops.random_operator(rng, d)
    lhs = np.trace(rho @ psi.apply(A))
    rhs = np.trace(psi.predual_apply(rho) @ A)
    assert abs(lhs - rhs) < 1e-12


def test_channel_compose_requires_unital():
    fr = frames.uniform_frame(ops.lorentz_representation(P3))
    halve = frames.Channel.from_function(lambda A: 0.5 * A, fr.dim)
    with pytest.raises(frames.ChannelValidationError):
        frames.channel_compose(halve, fr)


def test_channel_compose_preserves_normalization(rng):
    fr = frames.uniform_frame(ops.lorentz_representation(P3))
    psi = frames.random_mixed_unitary_channel(rng, fr.dim)
    composed = frames.channel_compose(psi, fr)
    assert composed.normalization_defect() < 1e-10


def test_average_channel_is_equivariant(rng):
    rep = ops.lorentz_representation(P3)
    psi = frames.random_mixed_unitary_channel(rng, rep.dim)
    averaged = frames.average_channel_over_group(psi, rep)
    assert averaged.equivariance_defect(rep) < 1e-12


def test_orthogonality_scan_exact_weights():
    def family(N):
        fr = frames.uniform_frame(ops.lorentz_representation(ModelParams(N, 2)))
        return frames.OrientedFrame(fr, np.eye(fr.dim, dtype=complex) / fr.dim)

    rows = frames.vacuum_orthogonality_scan(family, [LatticePoint(0, 0)],
                                            (3, 5))
    assert abs(rows[0][1] - 1.0 / 9.0) < 1e-15
    assert abs(rows[1][1] - 1.0 / 25.0) < 1e-15


def test_orthogonality_scan_rejects_noninvariant_state():
    def family(N):
        fr = frames.sharp_regular_frame(ModelParams(N, 2))
        omega = np.zeros((fr.dim, fr.dim), dtype=complex)
        omega[0, 0] = 1.0
        return frames.OrientedFrame(fr, omega)

    with pytest.raises(frames.InvarianceError):
        frames.vacuum_orthogonality_scan(family, [LatticePoint(0, 0)], (3,))


def test_strict_orthogonality_sharp_frame_oracle():
    # each marginal effect of the sharp frame meets the two translation-fixed
    # vectors with operator norm exactly 1/N
    report = frames.strict_vacuum_orthogonality_check(
        frames.sharp_regular_frame(P3))
    assert report.fixed_space_dim == 2
    assert not report.vacuous
    assert not report.ok
    assert abs(report.residual - 1.0 / 3.0) < 1e-12


def test_strict_orthogonality_on_fixed_free_subspace():
    regular = ops.regular_representation(P3)
    fixed = ops.translation_fixed_point_projector(regular)
    vals, vecs = np.linalg.eigh(fixed)
    reduced = ops.restrict_representation(regular, vecs[:, vals < 0.5])
    report = frames.strict_vacuum_orthogonality_check(
        frames.uniform_frame(reduced))
    assert report.vacuous
    assert report.fixed_space_dim == 0
    assert report.residual == 0.0
    assert report.ok


def test_frames_equal():
    f1 = frames.uniform_frame(ops.lorentz_representation(P3))
    f2 = frames.uniform_frame(ops.lorentz_representation(P3))
    assert frames.frames_equal(f1, f2)
    assert not frames.frames_equal(f1, frames.fiber_uniform_spacetime_frame(P3))
