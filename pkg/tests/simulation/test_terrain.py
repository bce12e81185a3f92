import numpy as np
import pytest

from legwheel.config_tree import ConfigurationError
from legwheel.simulation.terrain import (
    Flat,
    Noise,
    Pipe,
    Rocks,
    Step,
    Terrain,
    gradient_noise,
    permutation_table,
    terrain_height,
)


def test_flat_terrain_is_zero():
    terrain = Terrain()
    heights = terrain_height(terrain, np.linspace(-1, 1, 7), 0.3)
    assert heights.shape == (7,)
    assert np.all(heights == 0)
    assert terrain.kinds == ["flat"]


def test_step_edges():
    step = Step(height=0.15, x=0.6)
    assert step(0.6 - 1e-9, 0.0) == 0.0
    assert step(0.6 + 1e-9, 0.0) == pytest.approx(0.15)
    assert np.all(step(np.array([1.0, 2.0]), np.array([-0.3, 0.3])) == 0.15)


def test_pipe_profile():
    pipe = Pipe(diameter=0.1, x=1.0)
    assert pipe(1.0, 0.0) == pytest.approx(0.1)
    assert pipe(1.0 + 0.049, 0.0) > 0.05
    assert pipe(1.0 - 0.051, 0.0) == 0.0
    assert pipe(1.2, 0.0) == 0.0
    x = np.linspace(0.9, 1.1, 40)
    heights = pipe(x, 0.0)
    assert np.allclose(heights, heights[::-1])
    assert np.max(heights) <= 0.1 + 1e-12


def test_gradient_noise_vanishes_on_the_lattice():
    table = permutation_table(3)
    x, y = np.meshgrid(np.arange(-3, 4), np.arange(-2, 3))
    assert np.allclose(gradient_noise(x, y, table), 0.0)


def test_permutation_table():
    table = permutation_table(5)
    assert len(table) == 512
    assert sorted(table[:256]) == list(range(256))
    assert np.array_equal(table[:256], table[256:])
    assert not np.array_equal(permutation_table(6), table)


def test_noise_is_bounded_and_seeded():
    noise = Noise(seed=11, amplitude=0.01, wavelength=0.25, octaves=2)
    x, y = np.meshgrid(np.linspace(0, 3, 61), np.linspace(-0.5, 0.5, 21))
    heights = noise(x, y)
    assert np.max(np.abs(heights)) <= 0.01
    assert np.std(heights) > 0
    assert np.array_equal(heights, Noise(11, 0.01, 0.25, octaves=2)(x, y))
    assert not np.array_equal(heights, Noise(12, 0.01, 0.25, octaves=2)(x, y))


def test_anisotropy_stretches_across_travel():
    x, y = np.meshgrid(np.linspace(0, 2, 21), np.linspace(-0.3, 0.3, 13))
    uniform = Noise(seed=2, amplitude=0.01, wavelength=0.2)
    furrow = Noise(seed=2, amplitude=0.01, wavelength=0.2, anisotropy=8.0)
    assert np.allclose(furrow(x, 8.0 * y), uniform(x, y))


def test_rocks_are_seeded_caps():
    rocks = Rocks(seed=7, count=25, max_height=0.04, radius=0.08)
    x, y = np.meshgrid(np.linspace(0, 3.5, 141), np.linspace(-0.6, 0.6, 49))
    heights = rocks(x, y)
    assert np.all(heights >= 0)
    assert np.max(heights) <= 0.04
    assert np.max(rocks(rocks.centres[:, 0], rocks.centres[:, 1])) == pytest.approx(
        np.max(rocks.heights)
    )
    assert np.all(rocks(np.array([-1.0, 5.0]), 0.0) == 0)
    assert np.array_equal(heights, Rocks(7, 25, 0.04, 0.08)(x, y))


def test_no_rocks():
    assert np.all(Rocks(seed=1, count=0, max_height=0.04, radius=0.08)(1.0, 0.0) == 0)


def test_features_sum():
    terrain = Terrain([Step(0.1, 0.5), Pipe(0.1, 1.0)])
    assert terrain(1.0, 0.0) == pytest.approx(0.2)
    assert terrain.kinds == ["step", "pipe"]
    assert repr(terrain) == "Terrain(step, pipe)"


def test_from_features_round_trip():
    terrain = Terrain.from_features(
        [
            {"kind": "flat"},
            {"kind": "step", "height": 0.15, "x": 0.6},
            {
                "kind": "noise",
                "seed": 1,
                "amplitude": 0.01,
                "wavelength": 0.3,
                "anisotropy": 4,
            },
            {"kind": "rocks", "seed": 2, "count": 5, "max_height": 0.03, "radius": 0.1},
        ]
    )
    assert terrain.kinds == ["step", "noise", "rocks"]
    rebuilt = Terrain.from_features(terrain.to_list())
    x, y = np.meshgrid(np.linspace(0, 3, 31), np.linspace(-0.5, 0.5, 11))
    assert np.array_equal(rebuilt(x, y), terrain(x, y))


@pytest.mark.parametrize(
    "features",
    [
        [{"kind": "lava"}],
        [{"height": 0.1, "x": 0.0}],
        [{"kind": "step", "height": 0.1}],
        [{"kind": "pipe", "diameter": 0.1, "x": 0.0, "colour": "green"}],
        [{"kind": "pipe", "diameter": 0.0, "x": 0.0}],
        [{"kind": "noise", "seed": 1, "amplitude": 0.01, "wavelength": 0.0}],
        [{"kind": "noise", "seed": 1, "amplitude": 0.01, "wavelength": 0.2, "octaves": 0}],
        [{"kind": "rocks", "seed": 1, "count": -1, "max_height": 0.1, "radius": 0.1}],
    ],
)
def test_bad_features(features):
    with pytest.raises(ConfigurationError):
        Terrain.from_features(features)


def test_flat_feature_is_dropped():
    assert Terrain.from_features([{"kind": "flat"}]).features == []
    assert np.all(Flat()(np.zeros(3), 1.0) == 0)
