"""End-to-end smoke tests for the compiled module.

These exercise the binding surface and the determinism contract; the numeric
depth lives in the native test suite.
"""

import math

import numpy as np
import pytest

import risbo

TINY_OVERRIDES = {
    "dims": {"users": 2, "rx_antennas": 2, "ris_elements": 2, "resolution_bits": 1},
    "training": {"n_pilots": 80, "q_iters": 1, "epochs": 5},
    "bo": {"n_iterations": 2, "snr_db": 6.0},
    "eval": {"snr_db": [6.0], "n_test_bits": 2000, "n_validation_bits": 2000},
}


def test_version_string():
    assert risbo.__version__ == "0.1.0"


def test_streams_are_pure_functions_of_seed_and_id():
    a = risbo.RngStream(7, risbo.StreamId().child("x"))
    b = risbo.RngStream(7, risbo.StreamId().child("x"))
    assert [a.normal() for _ in range(5)] == [b.normal() for _ in range(5)]

    c = risbo.RngStream(7, risbo.StreamId().child("y"))
    assert a.normal() != c.normal()
    assert risbo.StreamId().child("x") == risbo.StreamId().child("x")
    assert risbo.StreamId().child("x").value != risbo.StreamId().child("y").value


def test_channel_draw_is_reproducible():
    def draw():
        rng = risbo.RngStream(3, risbo.StreamId().child("channel"))
        return risbo.draw_channel(rng, 3, 2, 4, 10.0, 1.0, 1.0)

    first, second = draw(), draw()
    assert first.h1.shape == (4, 2)
    assert first.h2.shape == (3, 4)
    assert first.g.shape == (3, 2)
    assert np.array_equal(first.h1, second.h1)
    assert np.array_equal(first.h2, second.h2)
    assert np.array_equal(first.g, second.g)


def test_effective_matrix_matches_numpy():
    rng = risbo.RngStream(5, risbo.StreamId().child("channel"))
    ch = risbo.draw_channel(rng, 3, 2, 4, 2.0, 0.7, 1.3)
    phi = risbo.PhaseConfig([0, 1, 2, 3], 2)
    expected = ch.h2 @ np.diag(np.asarray(phi.phases()).ravel()) @ ch.h1 + ch.g
    assert np.allclose(risbo.effective_matrix(ch, phi), expected, atol=1e-12)


def test_phase_grid_quantization():
    config = risbo.quantize_phases(np.array([0.0, math.pi]), 1)
    assert list(config.grid_indices) == [0, 1]
    assert config.resolution_bits == 1
    assert len(config) == 2
    assert np.allclose(np.abs(np.asarray(config.phases())), 1.0)
    again = risbo.quantize_phases(np.asarray(config.angles()).ravel(), 1)
    assert again == config


def test_noiseless_transmit_is_linear():
    rng = risbo.RngStream(11, risbo.StreamId().child("channel"))
    ch = risbo.draw_channel(rng, 2, 2, 2, 1.0, 1.0, 1.0)
    phi = risbo.PhaseConfig([0, 0], 1)
    block = risbo.random_symbols(
        risbo.RngStream(11, risbo.StreamId().child("symbols")),
        risbo.constellation("qpsk"),
        2,
        50,
    )
    received = risbo.transmit(
        ch, phi, block.symbols, risbo.NoiseModel(0.0), risbo.RngStream(11)
    )
    assert np.allclose(
        received, risbo.effective_matrix(ch, phi) @ block.symbols, atol=1e-12
    )


def test_receiver_learns_a_decoupled_channel():
    rng = risbo.RngStream(2, risbo.StreamId().child("channel"))
    ch = risbo.draw_channel(rng, 2, 2, 1, 0.0, 1.0, 1.0)
    ch.h1 = np.zeros((1, 2), dtype=complex)
    ch.h2 = np.zeros((2, 1), dtype=complex)
    ch.g = np.eye(2, dtype=complex)
    phi = risbo.PhaseConfig([0], 1)

    qpsk = risbo.constellation("qpsk")
    pilots = risbo.random_symbols(
        risbo.RngStream(2, risbo.StreamId().child("pilots")), qpsk, 2, 300
    )
    noise = risbo.NoiseModel(1e-6)
    received = risbo.transmit(
        ch, phi, pilots.symbols, noise, risbo.RngStream(2, risbo.StreamId().child("noise"))
    )
    system = risbo.to_real_system(
        risbo.effective_matrix(ch, phi), pilots, received, noise.sigma2, qpsk
    )
    receiver = risbo.train_receiver(
        system.received,
        system.bits,
        n_classes=2,
        q_iters=1,
        train_config=risbo.TrainConfig(epochs=10),
        seed=2,
        stream_id=risbo.StreamId().child("train"),
    )
    assert receiver.n_users == 4
    decided = risbo.detect(receiver, system.received)
    assert risbo.count_bit_errors(system.bits, decided.hard).ber == 0.0

    errors = risbo.evaluate_errors(
        receiver, ch, phi, noise, qpsk, 500, risbo.RngStream(2, risbo.StreamId().child("test"))
    )
    assert errors.bits.total == 2000
    assert errors.bits.ber == 0.0


def test_surrogate_posterior_and_acquisition():
    data = risbo.GpDataset()
    grid = [risbo.PhaseConfig(list(idx), 1) for idx in ([0, 0], [0, 1], [1, 0])]
    for i, config in enumerate(grid):
        data.add(config, float(i))
    assert len(data) == 3 and data.contains(grid[0])

    model = risbo.fit_gp(data, lengthscale=1.0)
    for config, value in zip(grid, (0.0, 1.0, 2.0)):
        posterior = model.posterior(config)
        assert posterior.mean == pytest.approx(value, abs=1e-3)
        assert posterior.variance >= 0.0

    assert risbo.expected_improvement(0.0, 1.0, 0.0) == pytest.approx(
        1.0 / math.sqrt(2.0 * math.pi), abs=1e-12
    )

    proposal = risbo.propose_next(
        model, 0.0, risbo.AcquisitionSearch(), risbo.RngStream(1, risbo.StreamId())
    )
    assert proposal == risbo.PhaseConfig([1, 1], 1)  # the only unobserved point


def test_exhaustion_is_reported():
    data = risbo.GpDataset()
    for idx in ([0], [1]):
        data.add(risbo.PhaseConfig(list(idx), 1), float(idx[0]))
    model = risbo.fit_gp(data, lengthscale=1.0)
    with pytest.raises(risbo.ExhaustionError):
        risbo.propose_next(
            model, 0.0, risbo.AcquisitionSearch(), risbo.RngStream(1, risbo.StreamId())
        )


def test_map_oracle_recovers_noiseless_symbols():
    rng = risbo.RngStream(9, risbo.StreamId().child("channel"))
    ch = risbo.draw_channel(rng, 2, 2, 2, 5.0, 1.0, 1.0)
    phi = risbo.PhaseConfig([0, 1], 1)
    qpsk = risbo.constellation("qpsk")
    block = risbo.random_symbols(risbo.RngStream(9, risbo.StreamId().child("s")), qpsk, 2, 40)
    received = risbo.effective_matrix(ch, phi) @ block.symbols
    decided = risbo.map_oracle_detect_block(ch, phi, 0.1, qpsk, received)
    truth = np.array(
        [[2 * block.bits[2 * k, t] + block.bits[2 * k + 1, t] for t in range(40)] for k in range(2)]
    )
    assert np.array_equal(decided, truth)


def test_config_preset_and_overrides():
    desk = risbo.Config.preset("desk")
    doc = desk.to_dict()
    assert doc["dims"]["ris_elements"] > 0
    assert risbo.Config.from_dict(doc).to_dict() == doc

    tiny = risbo.Config.from_dict(TINY_OVERRIDES).to_dict()
    assert tiny["dims"]["users"] == 2
    assert tiny["bo"]["n_iterations"] == 2
    assert tiny["modulation"] == doc["modulation"]  # untouched fields keep preset values

    with pytest.raises(ValueError):
        risbo.Config.from_dict({"dims": {"userz": 2}})
    with pytest.raises(ValueError):
        risbo.Config.preset("galactic")


def test_joint_run_is_deterministic_and_paired():
    config = risbo.Config.from_dict(TINY_OVERRIDES)
    first = risbo.run_joint(config, seed=1)
    second = risbo.run_joint(config, seed=1)
    assert first == second

    assert [entry["iteration"] for entry in first["trace"]] == [1, 2]
    bers = [entry["ber"] for entry in first["trace"]]
    assert first["best_ber"] == min(bers)
    assert first["trace"][first["best_iteration"] - 1]["ber"] == first["best_ber"]

    baseline = risbo.run_random_baseline(config, seed=1)
    assert baseline["trace"][0]["phi_indices"] == first["trace"][0]["phi_indices"]
    assert baseline["trace"][0]["ber"] == first["trace"][0]["ber"]

    paired = risbo.experiment_bo_vs_random(config, seed=1)
    assert paired["bo"] == first
    assert paired["random"] == baseline


def test_snr_sweep_rows():
    config = risbo.Config.from_dict(TINY_OVERRIDES)
    rows = risbo.snr_sweep(config, seed=1, include_optimized=False, include_map=True)
    detectors = [row["detector"] for row in rows]
    assert detectors == ["deepsic_fixed_ris", "map_oracle"]
    assert all(row["snr_db"] == 6.0 for row in rows)
    assert all(row["n_bits"] >= 2000 for row in rows)
    assert all(0.0 <= row["ber"] <= 1.0 for row in rows)
