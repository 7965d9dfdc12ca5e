import math
import os
import tempfile

import abrlab


def test_version():
    assert abrlab.__version__


def test_packet_is_normalized():
    grid = abrlab.SpatialGrid(0.0, 10.0, 201)
    psi = abrlab.gaussian_packet(grid, 5.0, 1.0, 2.0)
    assert math.isclose(abrlab.squared_norm(psi), 1.0, abs_tol=1e-12)
    assert len(psi.values) == grid.n_points


def test_current_sign_follows_k0():
    grid = abrlab.SpatialGrid(0.0, 10.0, 201)
    psi = abrlab.gaussian_packet(grid, 5.0, 1.0, 2.0)
    j = abrlab.probability_current(psi)
    assert j[len(j) // 2] > 0.0


def test_convolve_preserves_mass():
    grid = abrlab.SpatialGrid(0.0, 10.0, 201)
    f = [1.0] * grid.n_points
    g = abrlab.gaussian_convolve(grid, f, 0.3)

    def mass(values):
        w = [0.5] + [1.0] * (grid.n_points - 2) + [0.5]
        return sum(wi * vi for wi, vi in zip(w, values)) * grid.dx

    assert math.isclose(mass(g), mass(f), rel_tol=1e-10)
    mid = grid.n_points // 2
    assert abs(g[mid] - 1.0) < 1e-10


def test_abr_distribution_closes():
    grid = abrlab.SpatialGrid(0.0, 12.0, 241)
    psi = abrlab.gaussian_packet(grid, 4.0, 1.2, 2.0)
    dist = abrlab.abr_distribution(psi, kappa_right=2.0, dt=2.5e-3, t_max=8.0, n_bins=80)
    total = dist.detected_mass() + dist.p_never + dist.truncation_remainder
    assert math.isclose(total, 1.0, abs_tol=1e-6)
    assert dist.detected_mass() > 0.5
    assert abrlab.mean_detection_time(dist) > 0.0


def test_grw_run_is_seeded():
    grid = abrlab.SpatialGrid(-8.0, 8.0, 161)
    psi = abrlab.gaussian_packet(grid, 0.0, 1.0, 0.0)
    a = abrlab.run_grw(psi, lambda0=2.0, sigma=0.5, dt=0.01, t_max=2.0, seed=5)
    b = abrlab.run_grw(psi, lambda0=2.0, sigma=0.5, dt=0.01, t_max=2.0, seed=5)
    assert a == b
    assert all(t0 < t1 for (t0, _, _), (t1, _, _) in zip(a, a[1:]))


def test_first_detection_ensemble_positions_inside_layer():
    grid = abrlab.SpatialGrid(0.0, 10.0, 201)
    lam = [2.0 if x >= 8.0 else 0.0 for x in grid.nodes()]
    psi = abrlab.gaussian_packet(grid, 4.0, 1.0, 1.5)
    outcomes = abrlab.first_detection_ensemble(
        psi, lam, sigma=0.25, dt=2.5e-3, t_max=6.0, n_runs=32, base_seed=3
    )
    assert len(outcomes) == 32
    detected = [z for z in outcomes if z is not None]
    assert detected
    for t, x, side in detected:
        assert 0.0 < t <= 6.0
        assert x > 7.5
        assert side == "bulk"


def test_run_config_writes_artifacts():
    with tempfile.TemporaryDirectory() as tmp:
        text = (
            "model = abr\n"
            "x_max = 10\nn_points = 201\npacket_center = 4\npacket_k0 = 2\n"
            "t_max = 4\nkappa_right = 2\nn_bins = 40\n"
            f"output_dir = {tmp}\n"
        )
        files = abrlab.run_config(text)
        for key in ("manifest", "summary", "distribution"):
            assert os.path.exists(files[key])
        with open(files["distribution"]) as fh:
            header = fh.readline()
        assert "config_hash" in header
