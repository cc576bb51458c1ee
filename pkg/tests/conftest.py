from pathlib import Path

import pytest

from rrzero.groups import FGAbelianGroup, SemidirectProductGroup

DATA = Path(__file__).resolve().parents[1] / "src" / "rrzero" / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def dinf() -> SemidirectProductGroup:
    return SemidirectProductGroup.from_generator_action(1, (2,), [[[-1]]])


@pytest.fixture
def z2_minus_identity() -> SemidirectProductGroup:
    return SemidirectProductGroup.from_generator_action(2, (2,), [[[-1, 0], [0, -1]]])


@pytest.fixture
def z2_z4() -> FGAbelianGroup:
    return FGAbelianGroup(2, (4,))
