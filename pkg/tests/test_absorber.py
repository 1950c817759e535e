"""Current-current double sums, emission spectra, light-tight projection."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxqft.absorber import (
    CurrentDistribution,
    current_from_csv,
    dplus_direction_equivalence,
    emitted_spectrum,
    free_field_identity,
    interaction_sum,
    light_tight_check,
    project_light_tight,
    random_current,
    spectrum_consistency_residual,
)
from boxqft.lattice import LatticeSpec, ValidationError, build_lattice
from boxqft.propagators import KernelKind, kernel_values


@pytest.fixture(scope="module")
def lat():
    return build_lattice(LatticeSpec(n_space=16, n_time=16))


@pytest.fixture(scope="module")
def currents(lat):
    rng = np.random.default_rng(7)
    return [random_current(lat, rng) for _ in range(3)]


# --- current container ------------------------------------------------------

def test_current_validation():
    with pytest.raises(ValidationError, match="2-d"):
        CurrentDistribution(np.zeros(5))
    with pytest.raises(ValidationError, match="real"):
        CurrentDistribution(np.full((2, 2), 1.0 + 1.0j))


def test_current_is_read_only():
    current = CurrentDistribution(np.ones((3, 4)))
    with pytest.raises(ValueError):
        current.samples[0, 0] = 2.0


def test_current_support_and_scaling():
    samples = np.zeros((5, 6))
    samples[1, 2] = 1.0
    samples[3, 4] = -2.0
    current = CurrentDistribution(samples)
    assert current.shape == (5, 6)
    assert current.support == (1, 3, 2, 4)
    assert CurrentDistribution(np.zeros((2, 2))).support is None
    doubled = current.scaled(2.0)
    np.testing.assert_array_equal(doubled.samples, 2.0 * samples)


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(3)
    samples = rng.standard_normal((6, 8))
    current = CurrentDistribution(samples)
    path = tmp_path / "current.csv"
    current.to_csv(path)
    loaded = current_from_csv(path, 6, 8)
    np.testing.assert_array_equal(loaded.samples, samples)


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n0,0,1.0\n")
    with pytest.raises(ValidationError, match="header"):
        current_from_csv(path, 4, 4)


def test_csv_rejects_out_of_range_index(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t_index,x_index,value\n9,0,1.0\n")
    with pytest.raises(ValidationError, match="outside grid"):
        current_from_csv(path, 4, 4)


def test_random_current_shape(lat):
    rng = np.random.default_rng(0)
    current = random_current(lat, rng)
    assert current.shape == (16, 16)


def test_wrong_shape_rejected_by_interaction(lat):
    small = CurrentDistribution(np.ones((4, 4)))
    with pytest.raises(ValidationError, match="grid"):
        interaction_sum(small, small, KernelKind.WIGHTMAN_PLUS, lat)


# --- double sums ------------------------------------------------------------

def test_interaction_sum_is_bilinear(lat, currents):
    a, b, c = currents
    kind = KernelKind.WIGHTMAN_PLUS
    s_ab = interaction_sum(a, b, kind, lat)
    assert interaction_sum(a.scaled(2.0), b, kind, lat) == pytest.approx(2.0 * s_ab)
    summed = CurrentDistribution(a.samples + c.samples)
    assert interaction_sum(summed, b, kind, lat) == pytest.approx(
        s_ab + interaction_sum(c, b, kind, lat)
    )


def test_point_source_pair_reduces_to_kernel(lat):
    """Two unit point sources turn the double sum into one kernel value
    times the squared measure."""
    a_samples = np.zeros((16, 16))
    b_samples = np.zeros((16, 16))
    a_samples[9, 3] = 1.0
    b_samples[2, 11] = 1.0
    a = CurrentDistribution(a_samples)
    b = CurrentDistribution(b_samples)
    value = interaction_sum(a, b, KernelKind.WIGHTMAN_PLUS, lat)
    dt, dx = lat.spec.dt, lat.dx
    kernel = complex(
        kernel_values(
            lat.momenta, lat.frequencies, lat.spec.box_length,
            KernelKind.WIGHTMAN_PLUS, (9 - 2) * dt, (3 - 11) * dx,
        )
    )
    assert value == pytest.approx(kernel * (dt * dx) ** 2, abs=1e-18)


def test_reverse_argument_equals_swapped_currents(lat, currents):
    a, b, _ = currents
    for kind in (KernelKind.WIGHTMAN_PLUS, KernelKind.TIME_SYMMETRIC,
                 KernelKind.FEYNMAN):
        reversed_sum = interaction_sum(a, b, kind, lat, reverse_argument=True)
        swapped = interaction_sum(b, a, kind, lat)
        assert reversed_sum == pytest.approx(swapped, abs=1e-15)


def test_time_symmetric_kernel_swap_symmetric(lat, currents):
    a, b, _ = currents
    fwd = interaction_sum(a, b, KernelKind.TIME_SYMMETRIC, lat)
    rev = interaction_sum(b, a, KernelKind.TIME_SYMMETRIC, lat)
    assert abs(fwd - rev) <= 1e-15 * max(1.0, abs(fwd))


def test_commutator_kernel_swap_antisymmetric(lat, currents):
    a, b, _ = currents
    fwd = interaction_sum(a, b, KernelKind.COMMUTATOR, lat)
    rev = interaction_sum(b, a, KernelKind.COMMUTATOR, lat)
    assert abs(fwd + rev) <= 1e-14 * max(1.0, abs(fwd))


def test_free_field_identity_holds_on_all_pairs(lat, currents):
    assert free_field_identity(currents, lat) <= 1e-11


def test_free_field_identity_fails_on_subset(lat, currents):
    assert free_field_identity(currents, lat, pairs=[(0, 1)]) > 1e-6


def test_direction_equivalence_on_all_pairs(lat, currents):
    assert dplus_direction_equivalence(currents, lat) <= 1e-11


def test_direction_equivalence_fails_on_subset(lat, currents):
    assert dplus_direction_equivalence(currents, lat, pairs=[(0, 1)]) > 1e-6


# --- emission spectra -------------------------------------------------------

def test_spectrum_nonnegative_and_consistent(lat, currents):
    spectrum = emitted_spectrum(currents, lat)
    assert spectrum.energies.min() >= 0.0
    assert spectrum.energies.shape == (15,)
    assert spectrum_consistency_residual(currents, lat) <= 1e-12


def test_spectrum_scales_quadratically(lat, currents):
    base = emitted_spectrum([currents[0]], lat)
    double = emitted_spectrum([currents[0].scaled(2.0)], lat)
    np.testing.assert_allclose(double.energies, 4.0 * base.energies, rtol=1e-12)


def test_onshell_cosine_radiates_into_its_own_mode(lat):
    """A current oscillating on one lattice mode deposits energy only in
    that +/- momentum pair."""
    n = 11  # mode index on the 15-mode grid; k > 0
    k = lat.momenta[n]
    w = lat.frequencies[n]
    tt = lat.times()[:, None]
    xx = lat.positions()[None, :]
    current = CurrentDistribution(np.cos(w * tt - k * xx))
    spectrum = emitted_spectrum([current], lat)
    pair = {n, int(np.argmin(np.abs(lat.momenta + k)))}
    on_pair = sum(spectrum.energies[i] for i in pair)
    off_pair = spectrum.total - on_pair
    assert on_pair > 1e-3
    assert off_pair <= 1e-12 * on_pair


def test_spectrum_csv_round_trip_bytes(lat, currents, tmp_path):
    spectrum = emitted_spectrum(currents, lat)
    p1, p2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    spectrum.to_csv(p1)
    emitted_spectrum(currents, lat).to_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()
    header = p1.read_text().splitlines()[0]
    assert header == "k,omega,energy"


# --- light-tight projection -------------------------------------------------

def test_projection_removes_all_emission(lat, currents):
    projected = project_light_tight(currents[0], lat)
    assert light_tight_check([projected], lat) <= 1e-10
    # the projection actually changed the current
    assert np.max(np.abs(projected.samples - currents[0].samples)) > 1e-3


def test_projection_is_idempotent(lat, currents):
    once = project_light_tight(currents[0], lat)
    twice = project_light_tight(once, lat)
    assert np.max(np.abs(twice.samples - once.samples)) <= 1e-12


def test_projected_current_still_satisfies_identities(lat, currents):
    projected = [project_light_tight(c, lat) for c in currents[:2]]
    assert free_field_identity(projected, lat) <= 1e-11


def test_empty_current_list_is_trivially_sealed(lat):
    assert light_tight_check([], lat) == 0.0
    assert spectrum_consistency_residual([], lat) == 0.0


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_spectrum_nonnegativity_property(lat, seed):
    rng = np.random.default_rng(seed)
    current = random_current(lat, rng)
    assert emitted_spectrum([current], lat).energies.min() >= 0.0
