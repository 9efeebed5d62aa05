import sys
from pathlib import Path

import pytest

from asq import _kernels

sys.path.insert(0, str(Path(__file__).parent))  # make `import helpers` work


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) every numba kernel once, up front,
    so timing-sensitive tests never measure JIT compilation."""
    _kernels.warm_up()
