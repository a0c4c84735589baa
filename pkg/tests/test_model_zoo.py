import math

import numpy as np
import pytest
from pydantic import ValidationError

from tenfold.exceptions import GridTooSmallError, MissingParamError, NotEvenError, UnknownModelError
from tenfold.models.band_models import ModelParams, MomentumPoint, grid_axis, involution_indices
from tenfold.services.model_zoo import (
    ZOO,
    available_models,
    block_model,
    conjugate_model,
    default_candidates,
    direct_sum,
    make_model,
    min_gap,
    reflect_model,
    sample_grid,
)

KITAEV = {"mu": 0.5, "t": 1.0, "delta": 1.0}

ZOO_PARAMS = {
    "kitaev_chain": KITAEV,
    "chiral_p_wave": {"mu": 2, "t": 1, "delta": 1},
    "d_id_wave": {"mu": 2, "t": 1, "dx2y2": 1, "dxy": 1},
    "diii_superposition": {"mu": 2, "t": 1, "delta": 1},
    "bhz_qsh": {"m": 1},
    "dirac_3d_chiral": {"m": 2},
}


class TestGrid:
    @pytest.mark.parametrize("n", [4, 8, 32])
    def test_axis_is_symmetric(self, n):
        axis = grid_axis(n)
        assert axis[0] == -math.pi
        assert axis[n // 2] == 0.0
        for j in range(1, n):
            assert axis[n - j] == -axis[j]

    def test_involution(self):
        n = 8
        axis = grid_axis(n)
        partner = involution_indices(n)
        np.testing.assert_array_equal(axis[partner[1:]], -axis[1:])
        assert partner[0] == 0 and partner[n // 2] == n // 2

    def test_momentum_point_is_reduced(self):
        assert MomentumPoint(coords=(math.pi,)).coords == (-math.pi,)
        assert MomentumPoint(coords=(0.5, 2 * math.pi + 0.25)).coords == pytest.approx((0.5, 0.25))


class TestModels:
    def test_registry(self):
        assert available_models() == sorted(ZOO)
        assert {"kitaev_chain", "chiral_p_wave", "d_id_wave", "diii_superposition"} <= set(ZOO)
        assert ZOO["bhz_qsh"].harness and ZOO["dirac_3d_chiral"].harness

    def test_kitaev_at_zero(self, tau):
        H = make_model("kitaev_chain", KITAEV).evaluate(0.0)
        np.testing.assert_allclose(H, -1.5 * tau["z"], atol=1e-14)

    def test_kitaev_at_pi(self, tau):
        H = make_model("kitaev_chain", KITAEV).evaluate(math.pi)
        np.testing.assert_allclose(H, 0.5 * tau["z"], atol=1e-12)

    def test_p_wave_substitution(self, tau):
        model = make_model("chiral_p_wave", {"mu": 2.0, "t": 1.0, "pd": 1.0})
        H = model.evaluate((math.pi / 2, 0.0))
        np.testing.assert_allclose(H, tau["x"] - 4.0 * tau["z"], atol=1e-12)

    def test_every_model_is_covered(self):
        assert set(ZOO_PARAMS) == set(ZOO)

    @pytest.mark.parametrize("name", sorted(ZOO_PARAMS))
    def test_hermitian_at_random_momenta(self, rng, name):
        model = make_model(name, ZOO_PARAMS[name])
        ks = rng.uniform(-math.pi, math.pi, size=(100, model.dim))
        H = model.evaluate_many(ks)
        residual = np.sqrt(np.sum(np.abs(H - np.conj(np.swapaxes(H, -1, -2))) ** 2, axis=(-2, -1)))
        assert np.max(residual) < 1e-12

    @pytest.mark.parametrize("name", sorted(ZOO_PARAMS))
    def test_periodic_in_every_direction(self, rng, name):
        model = make_model(name, ZOO_PARAMS[name])
        ks = rng.uniform(-math.pi, math.pi, size=(20, model.dim))
        H = model.evaluate_many(ks)
        for axis in range(model.dim):
            shifted = ks.copy()
            shifted[:, axis] += 2 * math.pi
            residual = np.sqrt(np.sum(np.abs(model.evaluate_many(shifted) - H) ** 2, axis=(-2, -1)))
            assert np.max(residual) < 1e-12, axis

    def test_registered_witnesses(self):
        trs, phs = default_candidates("diii_superposition")
        assert (trs.kind, trs.name, trs.sign) == ("TRS", "pauli:0*y", -1)
        assert (phs.kind, phs.name, phs.sign) == ("PHS", "pauli:x*0", 1)
        assert default_candidates("kitaev_chain") == []
        with pytest.raises(UnknownModelError):
            default_candidates("haldane")

    def test_unknown_model(self):
        with pytest.raises(UnknownModelError):
            make_model("haldane", {})

    def test_missing_param(self):
        with pytest.raises(MissingParamError):
            make_model("kitaev_chain", {"mu": 0.5, "t": 1.0})

    def test_defaults_fill_in(self):
        model = make_model("bhz_qsh", {"m": 1.0})
        assert model.params["coupling"] == 0.1
        assert model.params["asym"] == 0.05

    def test_param_aliases(self):
        assert ModelParams(pd=0.3).delta == 0.3
        assert ModelParams(Delta=0.4).delta == 0.4

    def test_non_finite_param(self):
        with pytest.raises(ValidationError):
            ModelParams(mu=float("nan"))


class TestSampling:
    def test_kitaev_grid(self):
        sampled = sample_grid(make_model("kitaev_chain", KITAEV), 8)
        assert sampled.values.shape == (8, 2, 2)
        assert sampled.eigenvalues.shape == (8, 2)
        assert sampled.min_gap > 0

    def test_gap_closing_at_boundary(self):
        sampled = sample_grid(make_model("kitaev_chain", {"mu": 1.0, "t": 1.0, "delta": 1.0}), 8)
        assert min_gap(sampled) < 1e-12

    def test_kitaev_gap_closes_only_at_unit_mu(self):
        for j in range(81):
            mu = round(-2.0 + 0.05 * j, 12)
            gap = min_gap(sample_grid(make_model("kitaev_chain", {"mu": mu, "t": 1.0, "delta": 1.0}), 32))
            if abs(abs(mu) - 1.0) < 1e-9:
                assert gap < 1e-9, mu
            else:
                assert gap > 1e-3, mu

    def test_min_gap_closed_form(self):
        sampled = sample_grid(make_model("kitaev_chain", {"mu": 0.0, "t": 1.0, "delta": 1.0}), 16)
        assert min_gap(sampled) == pytest.approx(1.0, abs=1e-12)

    def test_flat_model(self, constant_model, tau):
        assert min_gap(sample_grid(constant_model(tau["z"]), 8)) == pytest.approx(1.0)

    def test_odd_grid(self):
        with pytest.raises(NotEvenError):
            sample_grid(make_model("kitaev_chain", KITAEV), 5)

    def test_tiny_grid(self):
        with pytest.raises(GridTooSmallError):
            sample_grid(make_model("kitaev_chain", KITAEV), 2)

    def test_negated_values(self):
        sampled = sample_grid(make_model("chiral_p_wave", {"mu": 1, "t": 1, "delta": 1}), 8)
        flipped = sampled.negated_values()
        np.testing.assert_array_equal(flipped[1, 3], sampled.values[7, 5])
        np.testing.assert_array_equal(flipped[0, 4], sampled.values[0, 4])

    def test_trim_indices(self):
        sampled = sample_grid(make_model("kitaev_chain", KITAEV), 8)
        assert sorted(sampled.trim_indices()) == [(0,), (4,)]


class TestCombinators:
    def test_direct_sum(self):
        a = make_model("kitaev_chain", KITAEV)
        b = make_model("kitaev_chain", {"mu": 2.0, "t": 1.0, "delta": 1.0})
        total = direct_sum(a, b)
        assert total.bands == 4
        H = total.evaluate(0.3)
        np.testing.assert_allclose(H[:2, :2], a.evaluate(0.3))
        np.testing.assert_allclose(H[2:, 2:], b.evaluate(0.3))
        assert np.all(H[:2, 2:] == 0)

    def test_conjugate(self):
        model = make_model("chiral_p_wave", {"mu": 1, "t": 1, "delta": 1})
        np.testing.assert_allclose(conjugate_model(model).evaluate((0.2, 0.7)), np.conj(model.evaluate((0.2, 0.7))))

    def test_reflect(self):
        model = make_model("chiral_p_wave", {"mu": 1, "t": 1, "delta": 1})
        np.testing.assert_allclose(reflect_model(model, 1).evaluate((0.2, 0.7)), model.evaluate((0.2, -0.7)))
        with pytest.raises(ValueError):
            reflect_model(model, 2)

    def test_block(self):
        model = make_model("bhz_qsh", {"m": 1.0, "coupling": 0.0})
        block = block_model(model, [0, 1])
        assert block.bands == 2
        np.testing.assert_allclose(block.evaluate((0.4, -1.1)), model.evaluate((0.4, -1.1))[:2, :2])
