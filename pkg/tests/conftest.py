import sys
from pathlib import Path

# Allow running the suite from a fresh checkout without installation; the
# compiled extension then simply isn't present and the numpy kernels serve.
SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")
