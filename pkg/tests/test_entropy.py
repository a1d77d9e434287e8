import math

import numpy as np
import pytest

from qmeasure import linalg
from qmeasure.channel import apply, erasure_channel
from qmeasure.constants import K_B
from qmeasure.entropy import (
    l1_coherence,
    landauer_cost,
    projective_entropy_gain,
    shannon_entropy,
    von_neumann_entropy,
    wave_behavior,
)
from qmeasure.errors import PositivityError
from qmeasure.measurement import (
    MeasurementSet,
    nonselective_update,
    outcome_distribution,
    povm_to_measurement,
    three_element_povm,
)
from qmeasure.sampling import random_density, random_ket, random_unitary
from qmeasure.state import DensityOperator, Ket, density_from_ket, maximally_mixed, partial_trace, w_ket


def test_entropy_reference_values():
    assert von_neumann_entropy(density_from_ket(Ket.basis(0))).bits == 0.0
    assert von_neumann_entropy(maximally_mixed((2,))).bits == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(maximally_mixed((2, 2))).bits == pytest.approx(2.0, abs=1e-12)
    s = von_neumann_entropy(maximally_mixed((3,)))
    assert s.nats == pytest.approx(math.log(3), abs=1e-12)


def test_entropy_matches_spectrum_oracle(rng):
    for _ in range(20):
        rho = random_density((4,), rng)
        lam = np.linalg.eigvalsh(rho.matrix)
        lam = lam[lam > 0]
        assert von_neumann_entropy(rho).nats == pytest.approx(-np.sum(lam * np.log(lam)), abs=1e-10)


def test_entropy_bounds(rng):
    for d in (2, 3, 5):
        for _ in range(10):
            s = von_neumann_entropy(random_density((d,), rng)).bits
            assert -1e-12 <= s <= math.log2(d) + 1e-12


def test_entropy_unitary_invariance(rng):
    rho = random_density((3,), rng)
    u = random_unitary(3, rng)
    rot = DensityOperator((3,), linalg.hermitize(u @ rho.matrix @ u.conj().T))
    assert von_neumann_entropy(rot).bits == pytest.approx(von_neumann_entropy(rho).bits, abs=1e-10)


def test_w_reduction_entropy():
    a = partial_trace(density_from_ket(w_ket()), [0])
    expect = -(1 / 3) * math.log2(1 / 3) - (2 / 3) * math.log2(2 / 3)
    assert von_neumann_entropy(a).bits == pytest.approx(expect, abs=1e-12)


def test_entropy_rejects_negative_spectrum():
    bad = DensityOperator.__new__(DensityOperator)
    object.__setattr__(bad, "_eigenvalues", np.array([1.1, -0.1]))
    with pytest.raises(PositivityError):
        von_neumann_entropy(bad)


def test_shannon_entropy():
    assert shannon_entropy([0.5, 0.5]).bits == pytest.approx(1.0)
    assert shannon_entropy([1.0, 0.0]).bits == 0.0
    with pytest.raises(ValueError):
        shannon_entropy([0.6, 0.6])
    with pytest.raises(ValueError):
        shannon_entropy([1.5, -0.5])


def test_projective_gain_nonnegative(rng):
    for _ in range(50):
        d = int(rng.integers(2, 5))
        rho = random_density((d,), rng)
        g = projective_entropy_gain(rho, MeasurementSet.from_basis(random_unitary(d, rng)))
        assert g.gain >= -1e-9
        assert not g.unchanged


def test_projective_gain_zero_for_diagonal(rng):
    u = random_unitary(3, rng)
    p = rng.dirichlet(np.ones(3))
    rho = DensityOperator((3,), linalg.hermitize(u @ np.diag(p) @ u.conj().T))
    g = projective_entropy_gain(rho, MeasurementSet.from_basis(u))
    assert abs(g.gain) <= 1e-9
    assert g.unchanged


def test_gain_requires_projective():
    ms = povm_to_measurement(three_element_povm())
    with pytest.raises(ValueError):
        projective_entropy_gain(maximally_mixed((2,)), ms)


def test_selective_povm_can_lower_entropy():
    ms = povm_to_measurement(three_element_povm())
    dist = outcome_distribution(ms, maximally_mixed((2,)))
    post = dist["E1"].post_state
    assert von_neumann_entropy(post).bits <= 1e-10


def test_erasure_resets_entropy(rng):
    rho = random_density((4,), rng)
    assert von_neumann_entropy(rho).bits > 0.1
    assert von_neumann_entropy(apply(erasure_channel(4), rho)).bits == pytest.approx(0.0, abs=1e-10)


def test_coherence_destroyed_by_measurement():
    plus = density_from_ket(Ket.from_amplitudes([1, 1], normalize=True))
    assert l1_coherence(plus) == pytest.approx(1.0)
    post = nonselective_update(MeasurementSet.computational(2), plus)
    assert l1_coherence(post) == 0.0


def test_coherence_in_other_basis():
    plus = density_from_ket(Ket.from_amplitudes([1, 1], normalize=True))
    had = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert l1_coherence(plus, had) == pytest.approx(0.0, abs=1e-15)


def test_povm_keeps_partial_coherence():
    plus = density_from_ket(Ket.from_amplitudes([1, 1], normalize=True))
    post = nonselective_update(povm_to_measurement(three_element_povm()), plus)
    coh = l1_coherence(post)
    assert 1e-3 < coh < 1.0


def test_wave_behavior():
    assert not wave_behavior(Ket.basis(1)).has_wave_behavior
    rep = wave_behavior(Ket.from_amplitudes([1, 1, 1], normalize=True))
    assert rep.support_count == 3
    assert rep.l1_coherence == pytest.approx(2.0)
    had = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert not wave_behavior(Ket.from_amplitudes([1, 1], normalize=True), had).has_wave_behavior


def test_wave_behavior_random(rng):
    k = random_ket((3,), rng)
    assert wave_behavior(k).has_wave_behavior


def test_landauer():
    c = landauer_cost(1, 300.0)
    assert c.min_heat == pytest.approx(K_B * 300.0 * math.log(2), rel=1e-15)
    assert landauer_cost(1024, 300.0).min_heat == pytest.approx(1024 * c.min_heat, rel=1e-15)
    assert landauer_cost(0, 1.0).min_heat == 0.0
    with pytest.raises(ValueError):
        landauer_cost(1, 0.0)
    with pytest.raises(ValueError):
        landauer_cost(-1, 300.0)
