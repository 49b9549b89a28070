import numpy as np
import pytest

from relqft import fields, frames, lattice
from relqft import operators as ops
from relqft.lattice import FramePoint, GroupElement, LatticePoint, ModelParams

P3 = ModelParams(3, 2)


def smeared(rep, rng, strength=0.4):
    d = rep.dim
    seed = np.eye(d, dtype=complex) / d + strength * ops.random_psd(rng, d) / d
    return frames.build_frame(rep, seed)


def character_system(rng, params=P3):
    rep = ops.character_representation(
        params, [LatticePoint(1, 0), LatticePoint(2, 0)])
    return fields.SystemModel(params, rep, ops.random_operator(rng, rep.dim))


def test_system_model_validates_shape(rng):
    rep = ops.lorentz_representation(P3)
    with pytest.raises(ops.SizeError):
        fields.SystemModel(P3, rep, np.eye(3, dtype=complex))


def test_oriented_field_at_base_point(rng):
    system = character_system(rng)
    base = FramePoint(LatticePoint(0, 0), 1)
    assert ops.eq_defect(fields.oriented_field(system, base), system.phi) < 1e-15


def test_oriented_field_conjugates(rng):
    system = character_system(rng)
    f = FramePoint(LatticePoint(1, 2), 2)
    U = system.rep(lattice.frame_to_group(f))
    expected = U @ system.phi @ ops.dagger(U)
    assert ops.eq_defect(fields.oriented_field(system, f), expected) < 1e-12


def test_relational_observable_is_restricted_relativization(rng):
    system = character_system(rng)
    fr = smeared(ops.lorentz_representation(P3), rng)
    rf = fields.RelationalField(system, fr)
    omega = ops.random_state(rng, fr.dim)
    lifted = fields.relativize(rf)
    direct = fields.relational_local_observable(rf, omega)
    via_restrict = fields.restrict(lifted, omega, system.dim, fr.dim)
    assert ops.eq_defect(direct, via_restrict) < 1e-12


def test_restrict_duality(rng):
    dimS, dimR = 3, 4
    O = ops.random_operator(rng, dimS * dimR)
    rho = ops.random_state(rng, dimS)
    omega = ops.random_state(rng, dimR)
    lhs = np.trace(rho @ fields.restrict(O, omega, dimS, dimR))
    rhs = np.trace(ops.tensor(rho, omega) @ O)
    assert abs(lhs - rhs) < 1e-12


def test_restrict_product_rule(rng):
    A = ops.random_operator(rng, 3)
    B = ops.random_operator(rng, 4)
    omega = ops.random_state(rng, 4)
    out = fields.restrict(ops.tensor(A, B), omega, 3, 4)
    assert ops.eq_defect(out, np.trace(omega @ B) * A) < 1e-13


def test_uniform_frame_observable_is_group_average(rng):
    system = character_system(rng)
    fr = frames.uniform_frame(ops.lorentz_representation(P3))
    rf = fields.RelationalField(system, fr)
    omega = ops.random_state(rng, fr.dim)
    observable = fields.relational_local_observable(rf, omega)
    averaged = sum(system.rep(g) @ system.phi @ ops.dagger(system.rep(g))
                   for g in P3.group_elements()) / len(P3.group_elements())
    assert ops.eq_defect(observable, averaged) < 1e-12


def test_field_reconstruction_sums_to_observable(rng):
    system = character_system(rng)
    fr = smeared(ops.regular_representation(P3), rng)
    rf = fields.RelationalField(system, fr)
    omega = ops.random_state(rng, fr.dim)
    marginal = frames.smearing_function(frames.OrientedFrame(fr, omega))
    rebuilt = sum(w * fields.relational_local_field(rf, omega, x)
                  for x, w in marginal.items())
    observable = fields.relational_local_observable(rf, omega)
    assert ops.eq_defect(rebuilt, observable) < 1e-12


def test_extend_trace_class_is_linear(rng):
    system = character_system(rng)
    fr = smeared(ops.lorentz_representation(P3), rng)
    rf = fields.RelationalField(system, fr)
    T1 = ops.random_operator(rng, fr.dim)
    T2 = ops.random_operator(rng, fr.dim)
    lhs = fields.extend_trace_class(rf, 2.0 * T1 - 1.5j * T2)
    rhs = (2.0 * fields.extend_trace_class(rf, T1)
           - 1.5j * fields.extend_trace_class(rf, T2))
    assert ops.eq_defect(lhs, rhs) < 1e-12


def test_base_point_independence(rng):
    # moving the orientation base along g0 multiplies every transporter on
    # the right; the relational observable is unchanged provided the
    # generator is co-rotated by the same element
    system = character_system(rng)
    fr = smeared(ops.regular_representation(P3), rng)
    omega = ops.random_state(rng, fr.dim)
    g0 = GroupElement(LatticePoint(1, 2), 2)
    U0 = system.rep(g0)
    moved_phi = U0 @ system.phi @ ops.dagger(U0)

    def right_translate(f):
        k = lattice.compose(lattice.frame_to_group(f), g0, P3)
        return FramePoint(k.a, k.boost)

    moved_effects = {f: fr.effects[right_translate(f)] for f in fr.effects}
    moved_frame = frames.FrameObservable(P3, fr.rep, moved_effects)
    lhs = fields.relational_local_observable(
        fields.RelationalField(system, fr), omega)
    rhs = fields.relational_local_observable(
        fields.RelationalField(system.with_phi(moved_phi), moved_frame), omega)
    assert ops.eq_defect(lhs, rhs) < 1e-12


def test_relativization_channel_laws(rng):
    system = character_system(rng)
    fr = smeared(ops.lorentz_representation(P3), rng)
    channel = fields.relativization_channel(
        fields.RelationalField(system, fr), ops.random_state(rng, fr.dim))
    d = system.dim
    eye = np.eye(d, dtype=complex)
    assert ops.eq_defect(channel(eye), eye) < 1e-12
    phi = ops.random_operator(rng, d)
    assert ops.eq_defect(channel(ops.dagger(phi)),
                         ops.dagger(channel(phi))) < 1e-12
    assert ops.op_norm(channel(phi)) <= ops.op_norm(phi) + 1e-12
    assert ops.psd_gap(channel(ops.random_psd(rng, d))) > -1e-10
    # the Kadison-Schwarz order that holds for every unital positive map
    gap = ops.psd_gap(channel(ops.dagger(phi) @ phi)
                      - ops.dagger(channel(phi)) @ channel(phi))
    assert gap > -1e-10


def test_mixed_order_two_positivity_fails_on_sharp_frames():
    # with a sharp frame and a delta preparation the channel is a unitary
    # conjugation, where the order-reversed two-positivity difference has
    # an eigenvalue of exactly -1 for a nilpotent generator
    fr = frames.sharp_regular_frame(P3)
    rep = ops.spacetime_representation(P3)
    system = fields.SystemModel(P3, rep, np.zeros((9, 9), dtype=complex))
    delta = np.zeros((fr.dim, fr.dim), dtype=complex)
    delta[0, 0] = 1.0
    channel = fields.relativization_channel(
        fields.RelationalField(system, fr), delta)
    phi = np.zeros((9, 9), dtype=complex)
    phi[0, 1] = 1.0
    mixed_gap = ops.psd_gap(channel(ops.dagger(phi) @ phi)
                            - channel(phi) @ ops.dagger(channel(phi)))
    valid_gap = ops.psd_gap(channel(ops.dagger(phi) @ phi)
                            - ops.dagger(channel(phi)) @ channel(phi))
    assert abs(mixed_gap + 1.0) < 1e-12
    assert valid_gap > -1e-12


def test_predual_polarization_duality(rng):
    system = character_system(rng)
    fr = smeared(ops.lorentz_representation(P3), rng)
    rf = fields.RelationalField(system, fr)
    omega = ops.random_state(rng, fr.dim)
    rho = ops.random_state(rng, system.dim)
    polarized = fields.predual_polarization(rf, omega, rho)
    for _ in range(5):
        phi = ops.random_operator(rng, system.dim)
        test_rf = fields.RelationalField(system.with_phi(phi), fr)
        lhs = np.trace(rho @ fields.relational_local_observable(test_rf, omega))
        rhs = np.trace(polarized @ phi)
        assert abs(lhs - rhs) < 1e-12


def test_predual_polarization_fixes_invariant_states(rng):
    system = character_system(rng)
    fr = smeared(ops.regular_representation(P3), rng)
    rf = fields.RelationalField(system, fr)
    omega = ops.random_state(rng, fr.dim)
    invariant = np.eye(system.dim, dtype=complex) / system.dim
    out = fields.predual_polarization(rf, omega, invariant)
    assert ops.eq_defect(out, invariant) < 1e-14


def test_globally_oriented_certificate(rng):
    fr = frames.fiber_uniform_spacetime_frame(P3)
    omega = ops.random_state(rng, fr.dim)
    assert fields.certify_globally_oriented(frames.OrientedFrame(fr, omega))
    # a generic smeared frame couples position and boost conditionals
    coupled = smeared(ops.regular_representation(P3), rng, strength=0.8)
    weights = frames.disintegrate(frames.born_measure(
        frames.OrientedFrame(coupled, ops.random_state(rng, coupled.dim))))
    assert len(weights.conditional) == 9
