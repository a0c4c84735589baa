import math

import numpy as np
import pytest

from tenfold.agents import (
    ChernNumberAgent,
    InvariantOrchestrator,
    Winding1DAgent,
    chern_from_frames,
    chern_number,
    class_d_1d_z2,
    dispatch,
    mod2_reduce,
    wannier_centers,
    winding_1d,
    winding_3d,
    z2_wannier_2d,
)
from tenfold.exceptions import (
    ComplexClassError,
    GaplessModelError,
    NonConvergentError,
    NoRealityConstraintError,
    NotChiralError,
    NotClassDError,
    NotSmoothError,
    NotTimeReversalError,
    UsageError,
)
from tenfold.models.band_models import BlochModel
from tenfold.models.invariant_models import ChiralBlock, InvariantValue, RealityConstraint
from tenfold.models.symmetry_models import AntiUnitaryOp, AZClass, SymmetryWitnesses, UnitaryOp
from tenfold.services.flattening import chiral_block, flatten
from tenfold.services.model_zoo import (
    block_model,
    conjugate_model,
    direct_sum,
    make_model,
    reflect_model,
    sample_grid,
    unitary_rotation,
)
from tenfold.services.numkit import pauli_string
from tenfold.services.symmetry_service import classify

TAU_X = UnitaryOp(S=pauli_string("x"), name="pauli:x")
TAU_Z = UnitaryOp(S=pauli_string("z"), name="pauli:z")
DIRAC_CHIRAL = UnitaryOp(S=pauli_string("z*0"), name="pauli:z*0")
KITAEV_PHS = AntiUnitaryOp(U=pauli_string("x"), kind="PHS", name="pauli:x")
BHZ_TRS = AntiUnitaryOp(U=pauli_string("y*0"), kind="TRS", name="pauli:y*0")

KITAEV_SWEEP = [
    mu for mu in np.round(np.arange(-2.0, 2.0 + 1e-9, 0.05), 10) if not math.isclose(abs(mu), 1.0)
]


def kitaev(mu, grid=32):
    return sample_grid(make_model("kitaev_chain", {"mu": mu, "t": 1.0, "delta": 1.0}), grid)


def p_wave(mu, grid=24):
    return sample_grid(make_model("chiral_p_wave", {"mu": mu, "t": 1.0, "delta": 1.0}), grid)


def d_id(mu=2.0, grid=24):
    return sample_grid(make_model("d_id_wave", {"mu": mu, "t": 1.0, "dx2y2": 1.0, "dxy": 1.0}), grid)


def chern(sampled):
    return chern_number(flatten(sampled)).value


def loop_model(winding, sign=1.0):
    """Q(k) = cos(wk) tau_x + sign * sin(wk) tau_y"""

    def hamiltonian(ks):
        k = winding * ks[..., 0]
        return (
            np.cos(k)[..., None, None] * pauli_string("x")
            + sign * np.sin(k)[..., None, None] * pauli_string("y")
        )

    return BlochModel(name="loop", dim=1, bands=2, hamiltonian=hamiltonian)


def kitaev_winding(sampled):
    return winding_1d(chiral_block(flatten(sampled), TAU_X))


class TestFlattening:
    def test_constant(self, constant_model, tau):
        flat = flatten(sample_grid(constant_model(3.0 * tau["z"]), 8))
        assert flat.n_occ == 1
        assert np.allclose(flat.Q, tau["z"])
        np.testing.assert_allclose(flat.projector()[0], np.diag([0.0, 1.0]), atol=1e-14)

    def test_kitaev_squares_to_one(self):
        flat = flatten(kitaev(0.5, 16))
        assert flat.n_occ == 1
        square = flat.Q @ flat.Q
        assert np.max(np.abs(square - np.eye(2))) < 1e-10

    def test_gapless(self):
        with pytest.raises(GaplessModelError):
            flatten(kitaev(1.0, 16))

    def test_fermi_level_inside_band(self, constant_model, tau):
        with pytest.raises(GaplessModelError):
            flatten(sample_grid(constant_model(tau["z"]), 8), fermi=1.0)

    def test_gap_guard_scales_with_bandwidth(self, constant_model):
        wide = constant_model(np.diag([-2.0e3, 5.0e-4]))
        with pytest.raises(GaplessModelError):
            flatten(sample_grid(wide, 8))
        narrow = constant_model(np.diag([-1.0, 5.0e-4]))
        assert flatten(sample_grid(narrow, 8)).n_occ == 1

    def test_scaled_model_near_transition(self):
        model = make_model("kitaev_chain", {"mu": 1.0 + 1e-9, "t": 1.0, "delta": 1.0})
        scaled = BlochModel(
            name="kitaev_scaled", dim=1, bands=2, hamiltonian=lambda ks: 1.0e6 * model.hamiltonian(ks)
        )
        with pytest.raises(GaplessModelError):
            flatten(sample_grid(scaled, 16))

    def test_idempotent(self):
        flat = flatten(p_wave(2.0, 12))
        again = flatten(flat.as_sampled())
        assert np.max(np.abs(again.Q - flat.Q)) < 1e-12


class TestChiralBlock:
    def test_constant_block(self, constant_model, tau):
        block = chiral_block(flatten(sample_grid(constant_model(tau["x"]), 8)), TAU_Z)
        np.testing.assert_allclose(block.blocks[..., 0, 0], 1.0, atol=1e-14)

    def test_standard_loop(self):
        sampled = sample_grid(loop_model(1), 16)
        block = chiral_block(flatten(sampled), TAU_Z)
        k = sampled.axis()
        np.testing.assert_allclose(block.blocks[:, 0, 0], np.exp(-1j * k), atol=1e-12)

    def test_kitaev_block_is_unitary(self):
        block = chiral_block(flatten(kitaev(0.5)), TAU_X)
        assert block.size == 1
        np.testing.assert_allclose(np.abs(block.blocks[:, 0, 0]), 1.0, atol=1e-8)

    def test_rejects_non_chiral(self, constant_model, tau):
        with pytest.raises(NotChiralError):
            chiral_block(flatten(sample_grid(constant_model(tau["z"]), 8)), TAU_Z)


class TestChernNumber:
    def test_flat_bundle(self, constant_model, tau):
        assert chern(sample_grid(constant_model(tau["z"], dim=2), 8)) == 0

    @pytest.mark.parametrize("mu", [1.0, 2.0, 3.0])
    def test_p_wave_inner_window(self, mu):
        value = chern_number(flatten(p_wave(mu, 24)))
        assert abs(value.value) == 1
        assert value.residual < 0.05
        assert chern(p_wave(mu, 48)) == value.value

    @pytest.mark.parametrize("mu", [-5.0, 5.0])
    def test_p_wave_trivial(self, mu):
        assert chern(p_wave(mu, 24)) == 0
        assert chern(p_wave(mu, 48)) == 0

    def test_p_wave_lower_window_has_opposite_sign(self):
        assert chern(p_wave(-1.0)) == -chern(p_wave(1.0))

    def test_d_plus_id(self):
        value = chern(d_id(2.0, 24))
        assert abs(value) == 2
        assert chern(d_id(2.0, 48)) == value

    def test_gauge_invariance(self, random_unitary):
        model = direct_sum(
            make_model("chiral_p_wave", {"mu": 2.0, "t": 1.0, "delta": 1.0}),
            make_model("d_id_wave", {"mu": 2.0, "t": 1.0, "dx2y2": 1.0, "dxy": 1.0}),
        )
        flat = flatten(sample_grid(model, 24))
        assert flat.n_occ == 2
        reference = chern_from_frames(flat.frames)
        for _ in range(20):
            mixing = random_unitary(2, batch=(24, 24))
            raw = chern_from_frames(flat.frames @ mixing)
            assert round(raw) == round(reference)
            assert raw == pytest.approx(reference, abs=1e-9)

    def test_additivity(self):
        first = make_model("chiral_p_wave", {"mu": 2.0, "t": 1.0, "delta": 1.0})
        second = make_model("d_id_wave", {"mu": 2.0, "t": 1.0, "dx2y2": 1.0, "dxy": 1.0})
        total = chern(sample_grid(direct_sum(first, second), 24))
        assert total == chern(sample_grid(first, 24)) + chern(sample_grid(second, 24))

    def test_conjugation_negates(self):
        model = make_model("chiral_p_wave", {"mu": 2.0, "t": 1.0, "delta": 1.0})
        assert chern(sample_grid(conjugate_model(model), 24)) == -chern(sample_grid(model, 24))

    def test_reflection_negates(self):
        model = make_model("d_id_wave", {"mu": 2.0, "t": 1.0, "dx2y2": 1.0, "dxy": 1.0})
        assert chern(sample_grid(reflect_model(model, 0), 24)) == -chern(sample_grid(model, 24))

    def test_basis_rotation(self, random_unitary):
        model = make_model("chiral_p_wave", {"mu": 2.0, "t": 1.0, "delta": 1.0})
        rotated = unitary_rotation(model, random_unitary(2))
        assert chern(sample_grid(rotated, 24)) == chern(sample_grid(model, 24))

    def test_agent_tag(self):
        assert ChernNumberAgent().get_index_tag() == "ch1(p)"


class TestWinding1D:
    def test_constant(self):
        block = ChiralBlock(blocks=np.full((16, 1, 1), 1j), dim=1)
        assert winding_1d(block).value == 0

    def test_plain_loop(self):
        block = chiral_block(flatten(sample_grid(loop_model(1, sign=-1.0), 16)), TAU_Z)
        assert winding_1d(block).value == 1

    def test_reversed_loop(self):
        block = chiral_block(flatten(sample_grid(loop_model(1), 16)), TAU_Z)
        assert winding_1d(block).value == -1

    def test_kitaev(self):
        assert abs(kitaev_winding(kitaev(0.5)).value) == 1
        assert kitaev_winding(kitaev(1.5)).value == 0

    def test_grid_stability(self):
        assert kitaev_winding(kitaev(0.5, 32)).value == kitaev_winding(kitaev(0.5, 64)).value

    def test_additivity(self):
        block = chiral_block(flatten(kitaev(0.5)), TAU_X)
        assert winding_1d(block.direct_sum(block)).value == 2 * winding_1d(block).value

    def test_conjugation_negates(self):
        model = make_model("kitaev_chain", {"mu": 0.5, "t": 1.0, "delta": 1.0})
        original = kitaev_winding(sample_grid(model, 32)).value
        assert kitaev_winding(sample_grid(conjugate_model(model), 32)).value == -original

    def test_coarse_grid_is_rejected(self):
        block = ChiralBlock(blocks=np.exp(3j * np.arange(8) * 2 * np.pi / 8)[:, None, None], dim=1)
        with pytest.raises(NonConvergentError):
            winding_1d(block)

    def test_rounding_threshold(self):
        with pytest.raises(NonConvergentError):
            Winding1DAgent().round_integer(0.4, 8)
        value = Winding1DAgent().round_integer(1.01, 8)
        assert value.value == 1 and value.residual == pytest.approx(0.01)


class TestWinding3D:
    def test_constant(self):
        block = ChiralBlock(blocks=np.broadcast_to(np.eye(2, dtype=complex), (8, 8, 8, 2, 2)).copy(), dim=3)
        assert winding_3d(block).value == 0

    def test_topological_window(self, dirac_topological):
        value = winding_3d(chiral_block(flatten(dirac_topological), DIRAC_CHIRAL))
        assert abs(value.value) == 1
        assert value.residual < 0.05

    def test_trivial(self, dirac_trivial):
        assert winding_3d(chiral_block(flatten(dirac_trivial), DIRAC_CHIRAL)).value == 0

    def test_grid_stability(self, dirac_topological):
        coarse = winding_3d(chiral_block(flatten(dirac_topological), DIRAC_CHIRAL)).value
        finer = sample_grid(dirac_topological.model, 48)
        assert winding_3d(chiral_block(flatten(finer), DIRAC_CHIRAL)).value == coarse

    def test_additivity(self, dirac_topological):
        block = chiral_block(flatten(dirac_topological), DIRAC_CHIRAL)
        assert winding_3d(block.direct_sum(block)).value == 2 * winding_3d(block).value

    def test_reflection_negates(self, dirac_topological):
        original = winding_3d(chiral_block(flatten(dirac_topological), DIRAC_CHIRAL)).value
        reflected = sample_grid(reflect_model(dirac_topological.model, 2), 32)
        assert winding_3d(chiral_block(flatten(reflected), DIRAC_CHIRAL)).value == -original

    def test_conjugation_preserves(self, dirac_topological):
        original = winding_3d(chiral_block(flatten(dirac_topological), DIRAC_CHIRAL)).value
        conjugated = sample_grid(conjugate_model(dirac_topological.model), 32)
        assert winding_3d(chiral_block(flatten(conjugated), DIRAC_CHIRAL)).value == original

    def test_rough_block_is_rejected(self, random_unitary):
        block = ChiralBlock(blocks=random_unitary(2, batch=(4, 4, 4)), dim=3)
        with pytest.raises(NotSmoothError):
            winding_3d(block)


class TestMod2:
    CONSTRAINT = RealityConstraint(kind="PHS", sign=1, witness="pauli:x K")

    def integer(self, value):
        return InvariantValue(kind="Integer", value=value, raw=float(value), grid=32, residual=0.0)

    def test_odd(self):
        reduced = mod2_reduce(self.integer(3), self.CONSTRAINT)
        assert reduced.kind == "Mod2" and reduced.value == 1

    def test_zero(self):
        assert mod2_reduce(self.integer(0), self.CONSTRAINT).value == 0

    def test_negative(self):
        assert mod2_reduce(self.integer(-1), self.CONSTRAINT).value == 1

    def test_needs_constraint(self):
        with pytest.raises(NoRealityConstraintError):
            mod2_reduce(self.integer(1), None)

    def test_from_witness(self):
        assert RealityConstraint.from_witness(None) is None
        assert RealityConstraint.from_witness(KITAEV_PHS).sign == 1


class TestClassDZ2:
    def test_nontrivial(self):
        assert class_d_1d_z2(kitaev(0.5), KITAEV_PHS).value == 1

    def test_trivial(self):
        assert class_d_1d_z2(kitaev(2.0), KITAEV_PHS).value == 0

    def test_gapless(self):
        with pytest.raises(GaplessModelError):
            class_d_1d_z2(kitaev(1.0), KITAEV_PHS)

    def test_needs_positive_phs(self):
        bad = AntiUnitaryOp(U=pauli_string("y"), kind="PHS", name="pauli:y")
        with pytest.raises(NotClassDError):
            class_d_1d_z2(kitaev(0.5), bad)

    def test_matches_sign_oracle_over_sweep(self):
        for mu in KITAEV_SWEEP:
            expected = 1 if (-mu - 1.0) * (-mu + 1.0) < 0 else 0
            assert class_d_1d_z2(kitaev(mu), KITAEV_PHS).value == expected, mu

    def test_agrees_with_reduced_winding(self):
        for mu in KITAEV_SWEEP:
            sampled = kitaev(mu)
            result = classify(sampled)
            block = chiral_block(flatten(sampled), result.witnesses.chiral)
            reduced = mod2_reduce(winding_1d(block), RealityConstraint.from_witness(result.witnesses.phs))
            assert reduced.value == class_d_1d_z2(sampled, result.witnesses.phs).value, mu


def bhz(m, coupling=None, grid=32):
    params = {"m": m} if coupling is None else {"m": m, "coupling": coupling}
    return sample_grid(make_model("bhz_qsh", params), grid)


def spin_chern_parity(m, grid=32):
    decoupled = make_model("bhz_qsh", {"m": m, "coupling": 0.0})
    return chern(sample_grid(block_model(decoupled, [0, 1]), grid)) % 2


class TestWannierZ2:
    @pytest.mark.parametrize("m", [-1.0, -0.5, 0.5, 1.0, 1.5, 2.5, 3.0, 4.5, 5.0, 6.0])
    def test_matches_spin_chern_parity(self, m):
        value = z2_wannier_2d(flatten(bhz(m)), BHZ_TRS)
        assert value.kind == "Mod2"
        assert value.value == spin_chern_parity(m)

    def test_inverted_window(self):
        assert z2_wannier_2d(flatten(bhz(1.0)), BHZ_TRS).value == 1

    def test_decoupled_trivial(self):
        assert z2_wannier_2d(flatten(bhz(-1.0, coupling=0.0)), BHZ_TRS).value == 0

    def test_coupling_preserves_value(self):
        uncoupled = z2_wannier_2d(flatten(bhz(1.0, coupling=0.0)), BHZ_TRS).value
        for coupling in (0.05, 0.1, 0.2):
            assert z2_wannier_2d(flatten(bhz(1.0, coupling=coupling)), BHZ_TRS).value == uncoupled

    def test_centers_shape(self):
        centers = wannier_centers(flatten(bhz(1.0, grid=16)))
        assert centers.shape == (9, 2)

    def test_needs_kramers_operator(self):
        with pytest.raises(NotTimeReversalError):
            z2_wannier_2d(flatten(bhz(1.0)), AntiUnitaryOp(U=np.eye(4), kind="TRS", name="pauli:0*0"))

    def test_parity_change_on_doubled_grid(self, monkeypatch):
        monkeypatch.setattr(
            "tenfold.agents.z2_agent.count_crossings", lambda centers, reference: 1 if len(centers) > 9 else 0
        )
        flat = flatten(bhz(1.0, grid=16))
        with pytest.raises(NonConvergentError):
            z2_wannier_2d(flat, BHZ_TRS)
        assert z2_wannier_2d(flat, BHZ_TRS, check_refinement=False).value == 0

    def test_orchestrator_refinement_flag(self, monkeypatch):
        monkeypatch.setattr(
            "tenfold.agents.z2_agent.count_crossings", lambda centers, reference: 1 if len(centers) > 9 else 0
        )
        with pytest.raises(NonConvergentError):
            InvariantOrchestrator().evaluate(bhz(1.0, grid=16))
        _, _, value = InvariantOrchestrator(check_refinement=False).evaluate(bhz(1.0, grid=16))
        assert value.value == 0


class TestDispatch:
    def test_empty_cell_is_trivial(self):
        value = dispatch(AZClass.AI, kitaev(0.5))
        assert value.kind == "Trivial" and value.value == 0
        assert dispatch(AZClass.CI, kitaev(0.5)).kind == "Trivial"

    def test_class_d_two_dims(self):
        sampled = p_wave(2.0)
        value = dispatch(AZClass.D, sampled, classify(sampled).witnesses)
        assert value.kind == "Integer" and abs(value.value) == 1

    def test_complex_class(self):
        with pytest.raises(ComplexClassError):
            dispatch(AZClass.A, kitaev(0.5))

    def test_kitaev_readings(self):
        orchestrator = InvariantOrchestrator()
        _, chosen, bdi = orchestrator.evaluate(kitaev(0.5))
        assert chosen == AZClass.BDI
        assert bdi.kind == "Integer" and abs(bdi.value) == 1
        _, _, d = orchestrator.evaluate(kitaev(0.5), az_class=AZClass.D)
        assert d.kind == "Mod2" and d.value == 1

    def test_single_symmetry_reading(self):
        _, chosen, value = InvariantOrchestrator().evaluate(kitaev(0.5), az_class=AZClass.AI)
        assert chosen == AZClass.AI
        assert value.kind == "Trivial"
        with pytest.raises(ComplexClassError):
            InvariantOrchestrator().evaluate(kitaev(0.5), az_class=AZClass.AIII)

    def test_inconsistent_request(self):
        with pytest.raises(UsageError):
            InvariantOrchestrator().evaluate(kitaev(0.5), az_class=AZClass.C)

    def test_diii_one_dimension_reduces_winding(self):
        sampled = kitaev(0.5)
        witnesses = classify(sampled).witnesses
        value = dispatch(AZClass.DIII, sampled, witnesses)
        assert value.kind == "Mod2" and value.value == 1

    def test_aii_two_dimensions(self):
        sampled = bhz(1.0)
        _, chosen, value = InvariantOrchestrator().evaluate(sampled)
        assert chosen == AZClass.AII
        assert value.kind == "Mod2" and value.value == 1

    def test_diii_three_dimensions(self, dirac_topological):
        _, chosen, value = InvariantOrchestrator().evaluate(dirac_topological)
        assert chosen == AZClass.DIII
        assert value.kind == "Integer" and abs(value.value) == 1

    def test_aii_three_dimensions_needs_chiral(self, dirac_topological):
        trs = AntiUnitaryOp(U=pauli_string("x*y"), kind="TRS", name="pauli:x*y")
        with pytest.raises(NotChiralError):
            dispatch(AZClass.AII, dirac_topological, SymmetryWitnesses(trs=trs))
