import numpy as np
import pytest

from lsbpls import _kernels_py
from lsbpls.image_model import ImageMatrix

try:
    from lsbpls import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels_c is not None:
    BACKENDS.append(pytest.param(_kernels_c, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Route lsbpls.kernels through one concrete implementation."""
    from lsbpls import kernels

    impl = request.param
    for name in ("set_parity", "embed_bits", "extract_bits", "partial_shuffle"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return impl


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_image(rng, height, width):
    return ImageMatrix(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


def random_hex(rng, n):
    return "".join(rng.choice(list("0123456789abcdef"), size=n))


@pytest.fixture
def make_image(rng):
    return lambda h, w: random_image(rng, h, w)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
