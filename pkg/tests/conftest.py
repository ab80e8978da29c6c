import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# property tests stay fast but must not trip timing deadlines while the
# jit cache warms up
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")
