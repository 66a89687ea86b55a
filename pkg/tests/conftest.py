import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from parampkit.dimer import DimerSpec  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")


@pytest.fixture(scope="session")
def design_dimer():
    """Symmetric lossless design: 8.31 GHz, J=100 MHz, kappa=60 MHz, K=-2 kHz."""
    return DimerSpec.from_values(8.31, 8.31, 100.0, 60.0, kerr=-2.0)


@pytest.fixture(scope="session")
def cooldown_dimer():
    return DimerSpec.from_values(8.29, 8.33, 99.0, 57.7, kerr=-2.0,
                                 gamma_plus=5.0, gamma_minus=6.7)
