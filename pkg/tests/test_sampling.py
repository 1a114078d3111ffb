import math

import numpy as np
import pytest

from gsp.errors import (
    ConditionViolated,
    DimensionMismatch,
    NoValidTrials,
    SetMismatch,
    SingularSystem,
)
from gsp.graph import random_weighted_graph
from gsp.localization import perfect_localization_vectors, slepian_vectors
from gsp.operators import band_limiter, vertex_limiter
from gsp.sampling import (
    SampledSignal,
    analyze_nonbandlimited,
    bdc_norm,
    heat_kernel_signal,
    nmse_sweep,
    reconstruct_direct,
    reconstruct_slepian,
    sample,
    sampling_condition,
    synthetic_geo_experiment,
)

from conftest import basis_of, random_connected_graph, random_subset


def lstsq_oracle(b, F, S, f):
    """Fit f on the sampled rows with the band-limited atoms and resynthesize."""
    UF = b.U[:, F]
    a, *_ = np.linalg.lstsq(UF[S], f[S], rcond=None)
    return UF @ a


def valid_instance(rng, n):
    while True:
        b = basis_of(random_connected_graph(n, rng))
        F = random_subset(rng, n, int(rng.integers(1, n)))
        S = random_subset(rng, n, int(rng.integers(len(F), n + 1)))
        if bdc_norm(b, S, F) < 1 - 1e-6:
            return b, S, F


def failing_instance(rng, n):
    """(basis, S, F, f) with f band-limited, unit norm and zero on S."""
    b = basis_of(random_connected_graph(n, rng))
    F = random_subset(rng, n, int(rng.integers(2, n)))
    S = random_subset(rng, n, int(rng.integers(0, len(F))))  # |S^c| >= n - |F| + 1
    Sc = sorted(set(range(n)) - set(S))
    f = perfect_localization_vectors(b, Sc, F)[0]
    return b, S, F, f


class TestSample:
    def test_full(self):
        assert sample([3.0, 1.0, 4.0], range(3)).values == {0: 3.0, 1: 1.0, 2: 4.0}

    def test_empty(self):
        assert sample([3.0, 1.0, 4.0], []).values == {}

    def test_subset(self):
        fs = sample([3.0, 1.0, 4.0], [0, 2])
        assert fs.values == {0: 3.0, 2: 4.0}
        np.testing.assert_array_equal(fs.embed(), [3.0, 0.0, 4.0])


class TestSamplingCondition:
    def test_full_sampling(self, rng):
        b = basis_of(random_connected_graph(6, rng))
        assert sampling_condition(b, range(6), [0, 1, 2]) == (True, 0.0)

    def test_too_few_samples_always_fail(self, rng):
        # exhaustive over S, F with |S| < |F| on small random graphs
        for n in (4, 5, 6):
            b = basis_of(random_connected_graph(n, rng))
            for fsize in range(1, n + 1):
                F = list(range(fsize))
                for ssize in range(fsize):
                    for S in __import__("itertools").combinations(range(n), ssize):
                        ok, norm = sampling_condition(b, S, F)
                        assert not ok and norm >= 1 - 1e-8

    def test_five_vertex_example(self, rng):
        b = basis_of(random_connected_graph(5, rng))
        ok, norm = sampling_condition(b, [0, 3], [0, 1, 2, 3])
        assert not ok and norm == pytest.approx(1.0, abs=1e-10)

    def test_norm_matches_definition(self, rng):
        b, S, F = valid_instance(rng, 9)
        B = band_limiter(b, F).matrix
        Dc = np.eye(9) - vertex_limiter(S, 9).matrix
        assert sampling_condition(b, S, F)[1] == pytest.approx(np.linalg.norm(B @ Dc, 2), abs=1e-12)


class TestReconstruct:
    def test_bandlimited_matches_lstsq(self, rng):
        for _ in range(50):
            n = int(rng.integers(4, 15))
            b, S, F = valid_instance(rng, n)
            f = b.U[:, F] @ rng.standard_normal(len(F))
            fs = sample(f, S)
            oracle = lstsq_oracle(b, F, S, f)
            r1 = reconstruct_slepian(fs, slepian_vectors(b, S, F))
            r2 = reconstruct_direct(fs, band_limiter(b, F), S)
            scale = np.linalg.norm(f)
            # exactly |F| Slepian eigenvalues are non-negligible under the condition
            assert np.sum(slepian_vectors(b, S, F).concentrations > 1e-8) == len(F)
            for r in (r1, r2):
                assert np.linalg.norm(r - f) <= 1e-8 * scale
                assert np.linalg.norm(r - oracle) <= 1e-8 * scale

    def test_first_slepian_vector(self, rng):
        b, S, F = valid_instance(rng, 10)
        slep = slepian_vectors(b, S, F)
        psi1 = slep.vectors[:, 0]
        np.testing.assert_allclose(reconstruct_slepian(sample(psi1, S), slep), psi1, atol=1e-10)

    def test_full_sampling_direct(self, rng):
        b = basis_of(random_connected_graph(7, rng))
        f = rng.standard_normal(7)
        out = reconstruct_direct(sample(f, range(7)), band_limiter(b, [0, 1]), range(7))
        np.testing.assert_allclose(out, f, atol=1e-14)

    def test_failing_configuration_refused(self, rng):
        for _ in range(20):
            b, S, F, f = failing_instance(rng, int(rng.integers(4, 12)))
            assert np.linalg.norm(f[S]) <= 1e-6
            fs = sample(f, S)
            with pytest.raises(ConditionViolated):
                reconstruct_slepian(fs, slepian_vectors(b, S, F))
            with pytest.raises(SingularSystem):
                reconstruct_direct(fs, band_limiter(b, F), S)

    def test_set_mismatch(self, rng):
        b, S, F = valid_instance(rng, 8)
        other = [i for i in range(8) if i not in S][:1] + S[1:]
        fs = sample(np.ones(8), other)
        with pytest.raises(SetMismatch):
            reconstruct_slepian(fs, slepian_vectors(b, S, F))
        with pytest.raises(SetMismatch):
            reconstruct_direct(fs, band_limiter(b, F), S)

    def test_dimension_mismatch(self, rng):
        b, S, F = valid_instance(rng, 8)
        with pytest.raises(DimensionMismatch):
            reconstruct_slepian(SampledSignal({0: 1.0}, 5), slepian_vectors(b, S, F))


class TestNonBandlimited:
    def test_bandlimited_input(self, rng):
        b, S, F = valid_instance(rng, 10)
        f = b.U[:, F] @ rng.standard_normal(len(F))
        rep = analyze_nonbandlimited(f, b, S, F)
        assert rep.out_of_band_error <= 1e-20 + 1e-24
        assert rep.aliasing_error <= 1e-18
        np.testing.assert_allclose(rep.reconstructed, f, atol=1e-10)

    def test_out_of_band_atom(self, rng):
        b, S, F = valid_instance(rng, 10)
        k = next(i for i in range(10) if i not in F)
        rep = analyze_nonbandlimited(b.U[:, k], b, S, F)
        assert rep.out_of_band_error == pytest.approx(1.0, abs=1e-12)

    def test_decomposition_random(self, rng):
        for _ in range(40):
            b, S, F = valid_instance(rng, 12)
            f = rng.standard_normal(12)
            rep = analyze_nonbandlimited(f, b, S, F)
            direct = np.sum((f - rep.reconstructed) ** 2)
            assert rep.total_sq_error == pytest.approx(direct, rel=1e-12)
            assert abs(rep.out_of_band_error + rep.aliasing_error - direct) <= 1e-8 * (f @ f)
            assert 0 <= rep.bd_c_norm <= 1 + 1e-9 and rep.condition_ok

    def test_reconstruction_is_slepian_formula(self, rng):
        # f_tilde = B f + sum (1/s^2)<D B^c f, psi> psi equals the plain Slepian expansion of D f
        b, S, F = valid_instance(rng, 11)
        f = rng.standard_normal(11)
        rep = analyze_nonbandlimited(f, b, S, F)
        plain = reconstruct_slepian(sample(f, S), slepian_vectors(b, S, F))
        np.testing.assert_allclose(rep.reconstructed, plain, atol=1e-9)

    def test_condition_violated(self, rng):
        b, S, F, f = failing_instance(rng, 8)
        with pytest.raises(ConditionViolated):
            analyze_nonbandlimited(rng.standard_normal(8), b, S, F)


class TestSweep:
    def test_full_band_full_sampling(self, rng):
        b = basis_of(random_connected_graph(10, rng))
        f = rng.standard_normal(10)
        (row,) = nmse_sweep(b, f, [10], [10], trials=3, seed=1)
        assert row.valid_trials == 3 and row.nmse_mean == pytest.approx(0.0, abs=1e-24)

    def test_matches_library_reconstruction(self, rng):
        # one trial re-done with the public API
        g, b, f = synthetic_geo_experiment(40, seed=3, radius_km=350)
        from gsp.sampling import _trial_rng

        size, bw = 15, 4
        (row,) = nmse_sweep(b, f, [size], [bw], trials=1, seed=9)
        S = sorted(_trial_rng(9, size, bw, 0).choice(40, size=size, replace=False))
        rep = analyze_nonbandlimited(f, b, S, range(bw))
        assert row.nmse_mean == pytest.approx(rep.total_sq_error / (f @ f), rel=1e-9)

    def test_deterministic(self):
        g, b, f = synthetic_geo_experiment(40, seed=5, radius_km=350)
        a = nmse_sweep(g, f, [10, 20], range(1, 15), trials=20, seed=42)
        c = nmse_sweep(g, f, [10, 20], range(1, 15), trials=20, seed=42, threads=3)
        assert [repr(r) for r in a] == [repr(r) for r in c]

    def test_invalid_cells(self):
        g, b, f = synthetic_geo_experiment(30, seed=1, radius_km=400)
        (row,) = nmse_sweep(b, f, [5], [10], trials=4, seed=0)
        assert row.valid_trials == 0 and math.isnan(row.nmse_mean)
        with pytest.raises(NoValidTrials):
            nmse_sweep(b, f, [5], [10], trials=4, seed=0, strict=True)

    def test_heat_kernel_signal_spectrum(self, rng):
        b = basis_of(random_connected_graph(12, rng))
        f = heat_kernel_signal(b, 7)
        g = np.random.default_rng(7).standard_normal(12)
        tau = 5 / b.lambdas[-1]
        np.testing.assert_allclose(b.U.T @ f, np.exp(-tau * b.lambdas) * g, atol=1e-12)


def test_direct_route_detects_roundoff_sized_system(rng):
    # S empty, F = V: I - D^c B is zero up to roundoff and must be declared singular
    b = basis_of(random_connected_graph(5, rng))
    with pytest.raises(SingularSystem):
        reconstruct_direct(sample(np.ones(5), []), band_limiter(b, range(5)), [])
