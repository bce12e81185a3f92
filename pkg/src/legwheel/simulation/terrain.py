"""
=======
Terrain
=======

Heightfield terrain ``z = g(x, y)`` built as a sum of features. Travel is
along +x. Features are callables taking world coordinate arrays and returning
heights of the same shape.

Gradient noise follows the improved noise construction: a seeded permutation
of 256 lattice hashes, twelve gradient directions and the quintic fade
``6t^5 - 15t^4 + 10t^3``.

"""
from dataclasses import asdict, dataclass, field
from typing import Any, ClassVar, Dict, List, Sequence, Tuple

import numpy as np

from legwheel.config_tree import ConfigurationError


def _fade(t):
    return t * t * t * (t * (t * 6 - 15) + 10)


def _lerp(t, a, b):
    return a + t * (b - a)


def _grad(hash_, x, y):
    # the twelve edge directions of a cube, sliced at z = 0
    h = hash_ & 15
    u = np.where(h < 8, x, y)
    v = np.where(h < 4, y, np.where((h == 12) | (h == 14), x, 0.0))
    return np.where(h & 1, -u, u) + np.where(h & 2, -v, v)


def permutation_table(seed: int) -> np.ndarray:
    """The doubled 512-entry hash table for ``seed``."""
    permutation = np.random.default_rng(seed).permutation(256)
    return np.concatenate([permutation, permutation])


def gradient_noise(x, y, table: np.ndarray) -> np.ndarray:
    """Improved gradient noise on the unit lattice, vectorised over ``x`` and ``y``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x_floor, y_floor = np.floor(x), np.floor(y)
    xi = x_floor.astype(np.int64) & 255
    yi = y_floor.astype(np.int64) & 255
    xf, yf = x - x_floor, y - y_floor
    u, v = _fade(xf), _fade(yf)

    a = table[xi] + yi
    b = table[xi + 1] + yi
    return _lerp(
        v,
        _lerp(u, _grad(table[table[a]], xf, yf), _grad(table[table[b]], xf - 1, yf)),
        _lerp(
            u,
            _grad(table[table[a + 1]], xf, yf - 1),
            _grad(table[table[b + 1]], xf - 1, yf - 1),
        ),
    )


@dataclass(frozen=True)
class Flat:
    kind: ClassVar[str] = "flat"

    def __call__(self, x, y):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)


@dataclass(frozen=True)
class Step:
    """A block of ``height`` covering everything from ``x`` on."""

    kind: ClassVar[str] = "step"
    height: float
    x: float

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return np.where(x >= self.x, self.height, 0.0)


@dataclass(frozen=True)
class Pipe:
    """A pipe of ``diameter`` lying across the path with its axis at ``x``.

    The underside of the pipe is hidden from a heightfield, so the profile
    jumps from the ground to the pipe's mid height at either side.

    """

    kind: ClassVar[str] = "pipe"
    diameter: float
    x: float

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        radius = self.diameter / 2
        dx = x - self.x
        inside = np.abs(dx) < radius
        cap = radius + np.sqrt(np.maximum(radius ** 2 - dx ** 2, 0.0))
        return np.where(inside, cap, 0.0)


@dataclass(frozen=True)
class Noise:
    """Gradient noise bounded by ``amplitude``.

    Attributes
    ----------
    wavelength
        Lattice spacing along x, in meters.
    anisotropy
        Lattice spacing along y relative to x. Values above one stretch the
        features sideways into furrows across the direction of travel.
    octaves
        Number of noise layers, each at twice the frequency of the last.
    persistence
        Amplitude ratio between consecutive octaves.

    """

    kind: ClassVar[str] = "noise"
    seed: int
    amplitude: float
    wavelength: float
    anisotropy: float = 1.0
    octaves: int = 1
    persistence: float = 0.5
    table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "table", permutation_table(self.seed))

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float) / self.wavelength
        y = np.asarray(y, dtype=float) / (self.wavelength * self.anisotropy)
        total = np.zeros(np.broadcast(x, y).shape)
        weight, norm = 1.0, 0.0
        for octave in range(self.octaves):
            scale = 2.0 ** octave
            total = total + weight * gradient_noise(x * scale, y * scale, self.table)
            norm += weight
            weight *= self.persistence
        return self.amplitude * np.clip(total / norm, -1.0, 1.0)


@dataclass(frozen=True)
class Rocks:
    """A scatter of spherical caps standing in for a rock field.

    Rock positions, heights and base radii are drawn from ``seed``; where
    rocks overlap the taller cap wins.

    """

    kind: ClassVar[str] = "rocks"
    seed: int
    count: int
    max_height: float
    radius: float
    x_range: Tuple[float, float] = (0.5, 3.0)
    y_range: Tuple[float, float] = (-0.5, 0.5)
    centres: np.ndarray = field(init=False, repr=False, compare=False)
    heights: np.ndarray = field(init=False, repr=False, compare=False)
    radii: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x_range", tuple(float(v) for v in self.x_range))
        object.__setattr__(self, "y_range", tuple(float(v) for v in self.y_range))
        rng = np.random.default_rng(self.seed)
        centres = np.stack(
            [rng.uniform(*self.x_range, self.count), rng.uniform(*self.y_range, self.count)],
            axis=1,
        )
        object.__setattr__(self, "centres", centres)
        heights = self.max_height * rng.uniform(0.5, 1.0, self.count)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "radii", self.radius * rng.uniform(0.6, 1.0, self.count))

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        if not self.count:
            return np.zeros(x.shape)
        dx = x[..., None] - self.centres[:, 0]
        dy = y[..., None] - self.centres[:, 1]
        distance_sq = dx ** 2 + dy ** 2
        sphere = (self.radii ** 2 + self.heights ** 2) / (2 * self.heights)
        cap = self.heights - sphere + np.sqrt(np.maximum(sphere ** 2 - distance_sq, 0.0))
        cap = np.where(distance_sq < self.radii ** 2, cap, 0.0)
        return np.max(np.maximum(cap, 0.0), axis=-1)


FEATURES = {feature.kind: feature for feature in (Flat, Step, Pipe, Noise, Rocks)}
_REQUIRED = {
    "flat": (),
    "step": ("height", "x"),
    "pipe": ("diameter", "x"),
    "noise": ("seed", "amplitude", "wavelength"),
    "rocks": ("seed", "count", "max_height", "radius"),
}


def _check_feature(feature):
    if isinstance(feature, Step) and not np.isfinite(feature.height):
        raise ConfigurationError("Step height must be finite.", "terrain.step")
    if isinstance(feature, Pipe) and not feature.diameter > 0:
        raise ConfigurationError("Pipe diameter must be positive.", "terrain.pipe")
    if isinstance(feature, Noise):
        if not (feature.amplitude >= 0 and feature.wavelength > 0 and feature.anisotropy > 0):
            raise ConfigurationError(
                "Noise needs a non-negative amplitude and a positive wavelength "
                "and anisotropy.",
                "terrain.noise",
            )
        if feature.octaves < 1:
            raise ConfigurationError("Noise needs at least one octave.", "terrain.noise")
    if isinstance(feature, Rocks):
        if feature.count < 0 or not (feature.max_height > 0 and feature.radius > 0):
            raise ConfigurationError(
                "Rocks need a non-negative count and positive height and radius.",
                "terrain.rocks",
            )


class Terrain:
    """A heightfield made of summed features."""

    configuration_defaults: ClassVar[Dict] = {"terrain": {"features": []}}

    def __init__(self, features: Sequence = ()):
        self.features = list(features)
        for feature in self.features:
            _check_feature(feature)

    @property
    def kinds(self) -> List[str]:
        return [feature.kind for feature in self.features] or ["flat"]

    def height(self, x, y) -> np.ndarray:
        total = np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)
        for feature in self.features:
            total = total + feature(x, y)
        return total

    __call__ = height

    def to_list(self) -> List[Dict[str, Any]]:
        """Feature descriptions in the form read by :meth:`from_features`."""
        described = []
        for feature in self.features:
            entry = {"kind": feature.kind}
            entry.update(
                {
                    key: list(value) if isinstance(value, tuple) else value
                    for key, value in asdict(feature).items()
                    if not isinstance(value, np.ndarray)
                }
            )
            described.append(entry)
        return described

    @classmethod
    def from_features(cls, features: Sequence[Dict[str, Any]]) -> "Terrain":
        """Builds a terrain from feature mappings such as ``{"kind": "step", ...}``.

        Raises
        ------
        ConfigurationError
            If a feature kind is unknown or a required key is missing.

        """
        built = []
        for index, entry in enumerate(features or []):
            entry = dict(entry)
            kind = entry.pop("kind", None)
            if kind not in FEATURES:
                raise ConfigurationError(
                    f"Unknown terrain feature {kind!r}; expected one of {sorted(FEATURES)}.",
                    f"terrain.features[{index}].kind",
                )
            missing = [key for key in _REQUIRED[kind] if key not in entry]
            if missing:
                raise ConfigurationError(
                    f"Terrain feature {kind} is missing {', '.join(missing)}.",
                    f"terrain.features[{index}]",
                )
            try:
                feature = FEATURES[kind](**entry)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(
                    f"Bad terrain feature {kind}: {e}", f"terrain.features[{index}]"
                )
            if not isinstance(feature, Flat):
                built.append(feature)
        return cls(built)

    @classmethod
    def from_config(cls, terrain_config) -> "Terrain":
        return cls.from_features(terrain_config.features)

    def __repr__(self):
        return f"Terrain({', '.join(self.kinds)})"


def terrain_height(terrain: Terrain, x, y) -> np.ndarray:
    """Terrain height at world coordinates ``x, y``."""
    return terrain.height(x, y)
