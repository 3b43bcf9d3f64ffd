import numpy as np
import pytest

from palmroi import synth

DEFAULT_SEED = 42
CORPUS_IDENTITIES = 10
CORPUS_SAMPLES = 12


@pytest.fixture(scope="session")
def default_corpus(tmp_path_factory):
    """The default 10x12 synthetic corpus (seed 42), generated once per session."""
    out = tmp_path_factory.mktemp("corpus")
    manifest, entries = synth.generate_corpus(
        CORPUS_IDENTITIES, CORPUS_SAMPLES, DEFAULT_SEED, out
    )
    return manifest, entries


@pytest.fixture()
def flat_image():
    """Constant 384x284 image (the paper-corpus frame size)."""
    return np.full((284, 384), 128, dtype=np.uint8)


def make_spike_image(shape=(64, 64), spikes=(), base=128, delta=100):
    """Base-gray image with isolated intensity spikes at (y, x) positions."""
    img = np.full(shape, base, dtype=np.uint8)
    for y, x in spikes:
        img[y, x] = base + delta
    return img
