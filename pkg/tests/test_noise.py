import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairdeutsch.algorithms import (
    ENTANGLED_PAIR,
    PRODUCT_PAIR,
    decode,
    run_entangled_pair,
)
from pairdeutsch.noise import (
    FidelityReport,
    NoiseModel,
    ShotResult,
    TABLE2_TWO_QUBIT,
    bhattacharyya,
    depolarize,
    run_noisy,
    sample_shots,
    statistical_fidelity,
)
from pairdeutsch.oracles import (
    B1,
    PromisePair,
    all_promise_pairs,
    is_balanced,
    same_at_zero,
)
from pairdeutsch.qstate import DensityMatrix, basis_state
from reference_impls import random_density_matrix


def test_table2_defaults():
    model = NoiseModel.table2()
    assert model.single_qubit_gate_error == (1.72e-3, 1.46e-3, 1.80e-3)
    assert model.readout_error == (4.20e-2, 7.00e-2, 1.40e-2)
    assert model.two_qubit_gate_error == {
        (0, 1): 3.17e-2,
        (1, 2): 2.87e-2,
        (0, 2): 2.67e-2,
    }


def test_noise_model_validation():
    with pytest.raises(ValueError, match="outside"):
        NoiseModel((0.5, -0.1, 0.0), dict(TABLE2_TWO_QUBIT), (0.0, 0.0, 0.0))
    with pytest.raises(ValueError, match="outside"):
        NoiseModel.table2().scaled(100.0)
    with pytest.raises(ValueError, match="nonnegative"):
        NoiseModel.table2().scaled(-1.0)


def test_pair_rate_lookup():
    model = NoiseModel.table2()
    assert model.pair_gate_rate(0, 1) == 3.17e-2
    assert model.pair_gate_rate(1, 0) == 3.17e-2  # reversed pair falls back
    with pytest.raises(KeyError):
        NoiseModel((0.0,), {}, (0.0,)).pair_gate_rate(0, 1)


def test_config_round_trip_is_bit_exact(tmp_path):
    model = NoiseModel.table2()
    path = tmp_path / "noise.cfg"
    model.save(path)
    loaded = NoiseModel.load(path)
    assert loaded == model  # float equality, not approximate
    assert loaded.to_config_text() == model.to_config_text()


def test_config_parse_errors():
    with pytest.raises(ValueError, match="unknown key"):
        NoiseModel.from_config_text("coupling_error_q0 = 0.1\n")
    with pytest.raises(ValueError, match="not a number"):
        NoiseModel.from_config_text("single_qubit_gate_error_q0 = abc\n")
    with pytest.raises(ValueError, match="contiguously"):
        NoiseModel.from_config_text(
            "single_qubit_gate_error_q0 = 0.1\n"
            "single_qubit_gate_error_q2 = 0.1\n"
            "readout_error_q0 = 0.0\n"
        )
    with pytest.raises(ValueError, match="key = value"):
        NoiseModel.from_config_text("just some text\n")


def test_config_ignores_comments_and_blanks():
    text = NoiseModel.table2().to_config_text()
    decorated = "# calibration snapshot\n\n" + text
    assert NoiseModel.from_config_text(decorated) == NoiseModel.table2()


def test_depolarize_identity_at_zero():
    rho = DensityMatrix.from_state(basis_state(2, 1))
    out = depolarize(rho, [0], 0.0)
    assert np.allclose(out.entries, rho.entries)


def test_depolarize_full_strength_single_qubit():
    rho = DensityMatrix.from_state(basis_state(1, 0))
    out = depolarize(rho, [0], 1.0)
    assert np.allclose(out.entries, np.eye(2) / 2)


def test_depolarize_half_strength():
    rho = DensityMatrix.from_state(basis_state(1, 0))
    out = depolarize(rho, [0], 0.5)
    assert np.allclose(out.entries, np.diag([0.75, 0.25]))


def test_depolarize_leaves_other_qubits_alone():
    rho = DensityMatrix.from_state(basis_state(2, 0))  # |00>
    out = depolarize(rho, [0], 1.0)
    expected = np.kron(np.eye(2) / 2, np.diag([1.0, 0.0]))
    assert np.allclose(out.entries, expected)


def test_depolarize_rejects_bad_probability():
    rho = DensityMatrix.from_state(basis_state(1, 0))
    with pytest.raises(ValueError, match="outside"):
        depolarize(rho, [0], 1.5)
    with pytest.raises(ValueError, match="outside"):
        depolarize(rho, [0], -0.1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_depolarize_preserves_trace_and_positivity(seed):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(2, random_density_matrix(2, rng))
    p = float(rng.uniform(0, 1))
    targets = [0] if rng.integers(2) else [0, 1]
    out = depolarize(rho, targets, p)
    assert np.trace(out.entries).real == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.eigvalsh(out.entries).min() >= -1e-9


def test_run_noisy_zero_model_matches_ideal():
    pair = PromisePair(B1, B1)
    noisy = run_noisy(ENTANGLED_PAIR, pair, NoiseModel.zero())
    ideal = run_entangled_pair(pair).final_distribution
    assert noisy == pytest.approx(ideal, abs=1e-10)


def test_run_noisy_total_readout_scrambling_is_uniform():
    model = NoiseModel((0.0, 0.0, 0.0), {p: 0.0 for p in TABLE2_TWO_QUBIT},
                       (0.5, 0.5, 0.5))
    noisy = run_noisy(ENTANGLED_PAIR, PromisePair(B1, B1), model)
    assert noisy == pytest.approx({format(i, "03b"): 0.125 for i in range(8)},
                                  abs=1e-10)


def test_run_noisy_table2_band():
    noisy = run_noisy(ENTANGLED_PAIR, PromisePair(B1, B1), NoiseModel.table2())
    top2 = sorted(noisy, key=noisy.get, reverse=True)[:2]
    assert set(top2) == {"100", "111"}
    for outcome in top2:
        assert 0.35 < noisy[outcome] < 0.5


def test_run_noisy_argmax_decoding_stays_correct():
    model = NoiseModel.table2()
    for pair in all_promise_pairs():
        truth = (is_balanced(pair.f), same_at_zero(pair))
        for algorithm in (ENTANGLED_PAIR, PRODUCT_PAIR):
            dist = run_noisy(algorithm, pair, model)
            top = max(dist, key=dist.get)
            answer = decode(top)
            assert (answer.balanced, answer.different) == truth, (
                algorithm,
                pair.label(),
            )


def test_fidelity_degrades_monotonically_with_noise_scale():
    pair = PromisePair(B1, B1)
    ideal = run_entangled_pair(pair).final_distribution
    model = NoiseModel.table2()
    fidelities = [
        bhattacharyya(run_noisy(ENTANGLED_PAIR, pair, model.scaled(s)), ideal)
        for s in (0.0, 0.5, 1.0, 2.0)
    ]
    assert fidelities[0] == pytest.approx(1.0, abs=1e-10)
    for earlier, later in zip(fidelities, fidelities[1:]):
        assert later <= earlier + 1e-12


def test_sample_shots_point_mass():
    result = sample_shots({"111": 1.0}, 100, seed=1)
    assert result.counts == {"111": 100}
    assert result.shots == 100


def test_sample_shots_binomial_bound():
    # 6-sigma band around 4096: sigma = sqrt(8192 * 0.25) = 45.25
    result = sample_shots({"100": 0.5, "111": 0.5}, 8192, seed=42)
    sigma = np.sqrt(8192 * 0.25)
    for key in ("100", "111"):
        assert abs(result.counts[key] - 4096) <= 6 * sigma


def test_sample_shots_is_reproducible():
    dist = {"100": 0.5, "111": 0.5}
    a = sample_shots(dist, 8192, seed=7)
    b = sample_shots(dist, 8192, seed=7)
    assert a == b
    assert json.dumps(a.counts, sort_keys=True) == json.dumps(
        b.counts, sort_keys=True
    )
    c = sample_shots(dist, 8192, seed=8)
    assert c != a  # different seed, different draw (overwhelmingly)


def test_sample_shots_validation():
    with pytest.raises(ValueError, match="sums to"):
        sample_shots({"0": 0.7, "1": 0.7}, 10, seed=0)
    with pytest.raises(ValueError, match="positive"):
        sample_shots({"0": 1.0}, 0, seed=0)


def test_shot_result_validation():
    with pytest.raises(ValueError, match="sum"):
        ShotResult(10, {"0": 5})
    with pytest.raises(ValueError, match="positive"):
        ShotResult(0, {})
    with pytest.raises(ValueError, match="nonnegative"):
        ShotResult(1, {"0": -1, "1": 2})


def test_bhattacharyya_identical():
    p = {"100": 0.5, "111": 0.5}
    assert bhattacharyya(p, p) == pytest.approx(1.0, abs=1e-12)


def test_bhattacharyya_disjoint():
    assert bhattacharyya({"000": 1.0}, {"111": 1.0}) == 0.0


def test_bhattacharyya_half_overlap():
    got = bhattacharyya({"000": 0.5, "111": 0.5}, {"000": 1.0})
    assert got == pytest.approx(np.sqrt(0.5), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bhattacharyya_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    keys = [format(i, "03b") for i in range(8)]
    p = rng.dirichlet(np.ones(8))
    q = rng.dirichlet(np.ones(8))
    dp = dict(zip(keys, p))
    dq = dict(zip(keys, q))
    f = bhattacharyya(dp, dq)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(bhattacharyya(dq, dp), abs=1e-12)
    # equality of distributions is the only way to reach 1
    if f > 1.0 - 1e-12:
        assert np.allclose(p, q, atol=1e-5)
    assert bhattacharyya(dp, dp) == pytest.approx(1.0, abs=1e-12)


def test_statistical_fidelity_exact_match():
    result = ShotResult(100, {"100": 50, "111": 50})
    report = statistical_fidelity(result, {"100": 0.5, "111": 0.5})
    assert report.fidelity == pytest.approx(1.0, abs=1e-12)
    assert report.p_exp == {"100": 0.5, "111": 0.5}


def test_statistical_fidelity_disjoint():
    result = ShotResult(100, {"000": 100})
    report = statistical_fidelity(result, {"111": 1.0})
    assert report.fidelity == 0.0


def test_statistical_fidelity_bootstrap_band_and_determinism():
    ideal = run_entangled_pair(PromisePair(B1, B1)).final_distribution
    result = sample_shots(ideal, 8192, seed=11)
    a = statistical_fidelity(result, ideal, seed=3)
    b = statistical_fidelity(result, ideal, seed=3)
    assert a == b
    assert 0.0 < a.stderr < 0.02


def test_fidelity_report_rejects_inconsistent_value():
    with pytest.raises(ValueError, match="does not match"):
        FidelityReport(
            fidelity=0.5,
            stderr=0.0,
            p_exp={"0": 1.0},
            p_th={"0": 1.0},
        )
    with pytest.raises(ValueError, match="outside"):
        FidelityReport(fidelity=1.5, stderr=0.0, p_exp={}, p_th={})
