"""White and colored (violet) noise at a prescribed relative level."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import orthogonality_residual

__all__ = [
    "RngStream",
    "NoiseSpec",
    "noise_weights",
    "white_noise",
    "colored_noise",
]

BASES = ("svd", "randorth", "dct")
_BASIS_ALIASES = {
    "left_singular": "svd",
    "random_orthogonal": "randorth",
}


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream keyed by ``(seed, stream)``.

    ``stream`` may be an int or a tuple of ints; it becomes the spawn key of a
    :class:`numpy.random.SeedSequence`, so distinct keys give independent
    streams under the same master seed.
    """

    seed: int
    stream: int | tuple[int, ...] = 0

    def generator(self) -> np.random.Generator:
        key = self.stream if isinstance(self.stream, tuple) else (self.stream,)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=tuple(int(k) for k in key))
        return np.random.default_rng(ss)


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "white"
    level: float = 0.01
    alpha: float = 0.0
    basis: str = "svd"

    def __post_init__(self):
        if self.kind not in ("white", "colored"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not self.level > 0:
            raise ValueError("noise level must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        basis = _BASIS_ALIASES.get(self.basis, self.basis)
        if basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "basis", basis)


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def _scale_to_level(e: np.ndarray, b_true: np.ndarray, level: float) -> np.ndarray:
    nb = np.linalg.norm(b_true)
    if nb == 0:
        raise ValueError("b_true is zero; the noise level is undefined")
    if not level > 0:
        raise ValueError("noise level must be positive")
    return e * (level * nb / np.linalg.norm(e))


def noise_weights(m: int, alpha: float) -> np.ndarray:
    """``m`` weights log-spaced from ``10**-alpha`` up to 1."""
    if m == 1:
        return np.ones(1)
    return np.logspace(-alpha, 0.0, m)


def white_noise(b_true, level: float, rng) -> np.ndarray:
    """Gaussian noise scaled so that ``||e|| / ||b_true|| == level``."""
    b_true = np.asarray(b_true, dtype=float)
    g = _rng(rng).standard_normal(b_true.shape[0])
    return _scale_to_level(g, b_true, level)


def colored_noise(basis, alpha: float, level: float, b_true, rng) -> np.ndarray:
    """Noise whose energy in the columns of ``basis`` grows with column index.

    ``e = basis @ (w * (basis.T @ g))`` with ``w`` from :func:`noise_weights`,
    followed by scaling to the requested level.
    """
    b_true = np.asarray(b_true, dtype=float)
    basis = np.asarray(basis, dtype=float)
    m = b_true.shape[0]
    if basis.shape != (m, m):
        raise ValueError(f"basis must be {m} x {m}, got {basis.shape}")
    if orthogonality_residual(basis) > 1e-8 * m:
        raise ValueError("basis is not orthogonal")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    g = _rng(rng).standard_normal(m)
    e = basis @ (noise_weights(m, alpha) * (basis.T @ g))
    return _scale_to_level(e, b_true, level)
