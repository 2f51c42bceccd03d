import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from klforge import KLTable


@pytest.fixture(scope="session")
def table() -> KLTable:
    """One shared in-memory memo table; rows computed once per session."""
    return KLTable()
