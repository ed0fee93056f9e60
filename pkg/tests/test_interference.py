import math

import numpy as np
import pytest
from scipy.constants import c as SPEED_OF_LIGHT

import walkgate as wg
from oracles import product_distribution, random_unitary


@pytest.fixture(scope="module")
def haar_u():
    return random_unitary(np.random.default_rng(42))


def test_unordered_pairs_cover_everything():
    pairs = wg.unordered_pairs(6)
    assert len(pairs) == 21
    assert pairs == sorted(pairs)
    assert all(k <= l for k, l in pairs)


def test_amplitude_symmetric_under_swaps(haar_u):
    a1 = wg.two_photon_amplitude(haar_u, 1, 3, 0, 4)
    assert wg.two_photon_amplitude(haar_u, 3, 1, 0, 4) == pytest.approx(a1)
    assert wg.two_photon_amplitude(haar_u, 1, 3, 4, 0) == pytest.approx(a1)


def test_amplitude_rejects_same_input_mode(haar_u):
    with pytest.raises(wg.InputError):
        wg.two_photon_amplitude(haar_u, 2, 2, 0, 1)


def test_bunched_amplitude_has_sqrt2(haar_u):
    amp = wg.two_photon_amplitude(haar_u, 1, 3, 2, 2)
    assert amp == pytest.approx(math.sqrt(2.0) * haar_u[2, 1] * haar_u[2, 3])


def test_distinguishable_limit_is_classical_product(haar_u):
    inp = wg.TwoPhotonInput(1, 3, overlap=0.0)
    expected = product_distribution(haar_u, 1, 3)
    for (k, l), p in expected.items():
        assert wg.coincidence_prob(haar_u, inp, k, l) == pytest.approx(p, abs=1e-12)


def test_distribution_sums_to_one(haar_u):
    for x in (0.0, 0.37, 1.0):
        dist = wg.two_photon_distribution(haar_u, wg.TwoPhotonInput(0, 5, overlap=x))
        assert sum(dist.probs.values()) == pytest.approx(1.0, abs=1e-12)


def test_coincidence_is_affine_in_overlap(haar_u):
    x = 0.3177
    for k, l in ((0, 0), (1, 4), (2, 5)):
        p0 = wg.coincidence_prob(haar_u, wg.TwoPhotonInput(1, 3, overlap=0.0), k, l)
        p1 = wg.coincidence_prob(haar_u, wg.TwoPhotonInput(1, 3, overlap=1.0), k, l)
        px = wg.coincidence_prob(haar_u, wg.TwoPhotonInput(1, 3, overlap=x), k, l)
        assert px == pytest.approx((1 - x) * p0 + x * p1, abs=1e-15)


def test_bunching_doubles_for_indistinguishable_photons(haar_u):
    # same-mode outcomes get the full factor-of-two bosonic enhancement
    classical = product_distribution(haar_u, 1, 3)
    inp = wg.TwoPhotonInput(1, 3, overlap=1.0)
    for k in range(6):
        quantum = wg.coincidence_prob(haar_u, inp, k, k)
        assert quantum == pytest.approx(2.0 * classical[(k, k)], abs=1e-12)


def test_balanced_coupler_hom_dip():
    # photons meeting on a 50:50 coupler never coincide when identical
    # and coincide half the time when fully distinguishable
    h = wg.build_hamiltonian([0.0, 0.0], [np.pi / 4])
    u = wg.unitary(h, t=1.0)
    assert abs(np.asarray(u)[0, 1]) ** 2 == pytest.approx(0.5, abs=1e-12)
    assert wg.coincidence_prob(u, wg.TwoPhotonInput(0, 1, overlap=1.0), 0, 1) < 1e-12
    assert wg.coincidence_prob(u, wg.TwoPhotonInput(0, 1, overlap=0.0), 0, 1) == pytest.approx(
        0.5, abs=1e-12
    )
    assert abs(wg.two_photon_amplitude(u, 0, 1, 0, 1)) < 1e-12


def test_identity_keeps_mass_on_input_pair():
    ident = wg.WalkUnitary(np.eye(6, dtype=complex))
    dist = wg.two_photon_distribution(ident, wg.TwoPhotonInput(1, 4))
    assert dist.prob(1, 4) == pytest.approx(1.0, abs=1e-12)
    assert dist.prob(0, 1) == 0.0


def test_distribution_covariant_under_relabeling(haar_u):
    perm = np.array([3, 0, 5, 1, 4, 2])
    p = np.eye(6)[perm]
    inverse = np.argsort(perm)
    base = wg.two_photon_distribution(haar_u, wg.TwoPhotonInput(1, 3, overlap=0.6))
    moved = wg.two_photon_distribution(
        p @ haar_u @ p.T, wg.TwoPhotonInput(int(inverse[1]), int(inverse[3]), overlap=0.6)
    )
    for k, l in wg.unordered_pairs(6):
        assert moved.prob(int(inverse[k]), int(inverse[l])) == pytest.approx(
            base.prob(k, l), abs=1e-12
        )


def test_second_input_pair_also_dips(u):
    # feeding waveguides 3 and 5 moves the interference to that pair
    far = wg.coincidence_prob(u, wg.TwoPhotonInput(2, 4, overlap=0.0), 2, 4)
    near = wg.coincidence_prob(u, wg.TwoPhotonInput(2, 4, overlap=0.946), 2, 4)
    assert near < 0.06 * far


def test_two_photon_input_validation():
    with pytest.raises(wg.DomainError):
        wg.TwoPhotonInput(0, 1, overlap=1.2)
    with pytest.raises(wg.DomainError):
        wg.TwoPhotonInput(0, 1, overlap=-0.1)
    with pytest.raises(wg.InputError):
        wg.TwoPhotonInput(-1, 1)


def test_outcome_distribution_order_insensitive_lookup(haar_u):
    dist = wg.two_photon_distribution(haar_u, wg.TwoPhotonInput(2, 3))
    assert dist.prob(4, 1) == dist.prob(1, 4)


def test_source_coherence_time_matches_definition():
    src = wg.SourceModel()
    lam = src.center_wavelength_nm * 1e-9
    dlam = src.bandwidth_fwhm_nm * 1e-9
    expected = (2.0 * math.log(2.0) / math.pi) * lam**2 / (SPEED_OF_LIGHT * dlam)
    assert src.coherence_time_s == pytest.approx(expected, rel=1e-12)
    assert 2.9e-13 < src.coherence_time_s < 3.0e-13


def test_mutual_coherence_profile():
    src = wg.SourceModel()
    tau_c = src.coherence_time_s
    assert wg.mutual_coherence(0.0, src) == pytest.approx(src.max_visibility)
    assert wg.mutual_coherence(tau_c, src) == pytest.approx(src.max_visibility / math.e)
    assert wg.mutual_coherence(-tau_c, src) == wg.mutual_coherence(tau_c, src)
    assert wg.mutual_coherence(10 * tau_c, src) < 1e-40


def test_hom_scan_symmetric_in_delay(u):
    taus = np.linspace(-1.5e-12, 1.5e-12, 7)
    scan = wg.hom_scan(u, 2, 3, taus, wg.SourceModel())
    assert len(scan) == 7
    for left, right in zip(scan, reversed(scan)):
        for pair in wg.unordered_pairs(6):
            assert left.prob(*pair) == pytest.approx(right.prob(*pair), abs=1e-15)


def test_hom_scan_dip_at_zero_delay(u):
    taus = [-2e-12, 0.0, 2e-12]
    scan = wg.hom_scan(u, 2, 3, taus, wg.SourceModel())
    # the dip bottoms out near (1 - max_visibility) of the side level
    assert scan[1].prob(2, 3) < 0.06 * scan[0].prob(2, 3)


def test_hom_scan_rejects_empty_grid(u):
    with pytest.raises(wg.InputError):
        wg.hom_scan(u, 2, 3, [], wg.SourceModel())
