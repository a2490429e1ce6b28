import sys
from pathlib import Path

# allow running the suite from a source checkout without installing
SRC = Path(__file__).resolve().parent.parent / "src"
if SRC.exists() and str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running pairing checks")
    config.addinivalue_line("markers", "acceptance: spec acceptance criteria")
