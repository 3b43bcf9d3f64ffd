import numpy as np
import pytest

import oracles
from palmroi import kernels


def random_mask(rng, shape=None, density=None):
    if shape is None:
        shape = (int(rng.integers(1, 48)), int(rng.integers(1, 48)))
    if density is None:
        density = float(rng.uniform(0.05, 0.6))
    return rng.random(shape) < density


def test_active_backend_matches_flood_fill():
    rng = np.random.default_rng(11)
    for _ in range(200):
        mask = random_mask(rng)
        assert kernels.count_components(mask) == oracles.flood_fill_count(mask)


@pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba not installed")
def test_backends_agree_on_components():
    rng = np.random.default_rng(12)
    for _ in range(200):
        mask = random_mask(rng)
        assert kernels.count_components_numba(
            np.ascontiguousarray(mask)
        ) == kernels.count_components_numpy(mask)


def test_sobel_backends_match_reference():
    rng = np.random.default_rng(13)
    for _ in range(20):
        img = rng.integers(0, 256, (rng.integers(3, 30), rng.integers(3, 30))).astype(np.int32)
        ref = oracles.sobel_l1_reference(img)
        assert (kernels.sobel_l1_numpy(img) == ref).all()
        if kernels.NUMBA_AVAILABLE:
            assert (kernels.sobel_l1_numba(img) == ref).all()


def test_count_accepts_strided_views():
    rng = np.random.default_rng(14)
    big = rng.random((40, 40)) < 0.3
    view = big[5:25, 7:31]
    assert kernels.count_components(view) == oracles.flood_fill_count(view)


def test_empty_and_full_masks():
    assert kernels.count_components(np.zeros((10, 10), dtype=bool)) == 0
    assert kernels.count_components(np.ones((10, 10), dtype=bool)) == 1
    assert kernels.count_components(np.ones((1, 1), dtype=bool)) == 1
