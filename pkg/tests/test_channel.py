import numpy as np
import pytest

from qmeasure import linalg
from qmeasure.channel import (
    KrausChannel,
    apply,
    erase_via_measure_rotate,
    erasure_channel,
    measurement_channel_equivalence,
    trace_measurement_equivalence,
    transposition,
)
from qmeasure.errors import ShapeError
from qmeasure.measurement import MeasurementSet, pauli_z, projective_from_observable
from qmeasure.sampling import random_density, random_hermitian, random_unitary
from qmeasure.state import Ket, density_from_ket, fidelity_with_pure, ghz_ket, partial_trace


def _random_kraus(d, k, rng):
    # columns of a random isometry C^d -> C^(kd) give k Kraus elements
    u = random_unitary(k * d, rng)[:, :d]
    return KrausChannel(tuple(u[i * d:(i + 1) * d] for i in range(k)))


def test_identity_channel(rng):
    rho = random_density((3,), rng)
    np.testing.assert_allclose(apply(KrausChannel.identity(3), rho).matrix, rho.matrix, atol=1e-15)


def test_random_channel_preserves_trace_and_positivity(rng):
    for _ in range(20):
        ch = _random_kraus(3, 4, rng)
        out = apply(ch, random_density((3,), rng))
        assert abs(linalg.trace(out.matrix) - 1.0) <= 1e-12
        assert out.eigenvalues[-1] >= -1e-12


def test_channel_rejects_incomplete_elements():
    with pytest.raises(ValueError):
        KrausChannel((np.diag([1.0, 0.0]),))
    with pytest.raises(ShapeError):
        KrausChannel((np.eye(2), np.eye(3)), trace_preserving=False)


def test_non_trace_preserving_is_renormalized():
    ch = KrausChannel((np.diag([1.0, 0.0]),), trace_preserving=False)
    plus = density_from_ket(Ket.from_amplitudes([1, 1], normalize=True))
    np.testing.assert_allclose(apply(ch, plus).matrix, np.diag([1, 0]), atol=1e-15)
    with pytest.raises(ValueError):
        apply(ch, density_from_ket(Ket.basis(1)))


def test_erasure_channel_resets(rng):
    for d in (2, 3, 4):
        ch = erasure_channel(d)
        for _ in range(10):
            out = apply(ch, random_density((d,), rng))
            assert fidelity_with_pure(out, linalg.ket(0, d)) == pytest.approx(1.0, abs=1e-12)


def test_erasure_is_idempotent(rng):
    ch = erasure_channel(3)
    once = apply(ch, random_density((3,), rng))
    np.testing.assert_allclose(apply(ch, once).matrix, once.matrix, atol=1e-15)


def test_erasure_channel_on_qubit_register_keeps_dims(rng):
    rho = random_density((2, 2), rng)
    assert apply(erasure_channel(4), rho).dims == (2, 2)


def test_transposition():
    np.testing.assert_array_equal(transposition(2, 3).real, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    np.testing.assert_array_equal(transposition(0, 2), np.eye(2))


def test_measure_rotate_resets_in_random_basis(rng):
    for _ in range(30):
        d = int(rng.integers(2, 5))
        obs = projective_from_observable(random_hermitian(d, rng))
        rho = random_density((d,), rng)
        seed = int(rng.integers(2**31))
        out, tr = erase_via_measure_rotate(rho, obs, seed)
        assert fidelity_with_pure(out, linalg.ket(0, d)) == pytest.approx(1.0, abs=1e-12)
        off = out.matrix - np.diag(np.diagonal(out.matrix))
        assert np.max(np.abs(off)) <= 1e-14
        assert linalg.is_unitary(tr.unitary)
        assert tr.permutation[tr.outcome] == 0


def test_measure_rotate_is_seeded(rng):
    rho = random_density((3,), rng)
    obs = projective_from_observable(np.diag([1.0, 2.0, 3.0]))
    a = erase_via_measure_rotate(rho, obs, 99)[1]
    b = erase_via_measure_rotate(rho, obs, 99)[1]
    assert (a.outcome, a.label, a.probability) == (b.outcome, b.label, b.probability)


def test_measure_rotate_never_picks_impossible_outcome():
    obs = projective_from_observable(pauli_z())
    rho = density_from_ket(Ket.basis(1))
    for seed in range(50):
        assert erase_via_measure_rotate(rho, obs, seed)[1].label == "-1"


def test_measure_rotate_frequencies():
    obs = projective_from_observable(pauli_z())
    rho = density_from_ket(Ket.from_amplitudes([np.sqrt(0.3), np.sqrt(0.7)]))
    hits = sum(erase_via_measure_rotate(rho, obs, s)[1].label == "1" for s in range(4000))
    assert abs(hits / 4000 - 0.3) <= 0.03


def test_measure_rotate_input_checks():
    rho = density_from_ket(Ket.basis(0))
    with pytest.raises(TypeError):
        erase_via_measure_rotate(rho, MeasurementSet.computational(2), 0)
    with pytest.raises(ValueError):
        erase_via_measure_rotate(rho, projective_from_observable(np.eye(2)), 0)


def test_trace_equivalence_ghz():
    rho = density_from_ket(ghz_ket())
    res = trace_measurement_equivalence(rho, 0, MeasurementSet.computational(2))
    assert res.max_abs_diff <= 1e-15
    np.testing.assert_allclose(res.via_trace.matrix, partial_trace(rho, [1, 2]).matrix)


def test_trace_equivalence_two_qutrits(rng):
    worst = 0.0
    for _ in range(200):
        rho = random_density((3, 3), rng)
        basis = MeasurementSet.from_basis(random_unitary(3, rng))
        target = int(rng.integers(2))
        worst = max(worst, trace_measurement_equivalence(rho, target, basis).max_abs_diff)
    assert worst <= 1e-10


def test_trace_equivalence_input_checks(rng):
    rho = random_density((2, 3), rng)
    with pytest.raises(ShapeError):
        trace_measurement_equivalence(rho, 0, MeasurementSet.computational(3))
    with pytest.raises(ValueError):
        trace_measurement_equivalence(rho, 2, MeasurementSet.computational(2))


def test_measurement_channel_route_matches_direct(rng):
    ms = MeasurementSet.from_basis(random_unitary(4, rng))
    assert measurement_channel_equivalence(ms, random_density((4,), rng)) <= 1e-14
