import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def colored_complexes(draw, max_colors=3, max_per_color=3, max_faces=5):
    """(n_per_color, list of maximal-face candidates as vertex lists)."""
    c = draw(st.integers(1, max_colors))
    n = draw(st.lists(st.integers(1, max_per_color), min_size=c, max_size=c))
    total = sum(n)
    faces = draw(st.lists(st.lists(st.integers(0, total - 1), unique=True, max_size=total), max_size=max_faces))
    return tuple(n), faces


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
