import numpy as np
import pytest


def binary_test_image(n: int = 128) -> np.ndarray:
    """Black-and-white test picture: a bar and a ring-shaped disc."""
    yy, xx = np.mgrid[:n, :n]
    s = n / 128
    img = np.zeros((n, n), dtype=np.uint8)
    r2 = (yy - 72 * s) ** 2 + (xx - 64 * s) ** 2
    img[r2 < (28 * s) ** 2] = 255
    img[int(8 * s):int(24 * s), int(16 * s):int(112 * s)] = 255
    img[r2 < (10 * s) ** 2] = 0
    return img


def salt_and_pepper(img: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    out = img.copy()
    hit = rng.random(img.shape) < rate
    out[hit] = np.where(rng.random(hit.sum()) < 0.5, 0, 255)
    return out


def checkerboard(n: int = 64, block: int = 16) -> np.ndarray:
    yy, xx = np.mgrid[:n, :n]
    return (((yy // block + xx // block) % 2) * 255).astype(np.uint8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def test_image():
    return binary_test_image()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
