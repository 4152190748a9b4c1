import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import doc_from_words, fig_doc  # noqa: E402


@pytest.fixture
def fig2():
    """4-event traffic story, all mentions included."""
    return fig_doc()


@pytest.fixture
def selection_doc():
    """6-mention document still awaiting event selection."""
    words = ["alpha", "bravo", "carol", "delta", "echoo", "frank"]
    return doc_from_words(words, statuses=["candidate"] * 6)
