import random

import pytest

from ocrkit.docmodel import HtmlTree


LABELS = ["table", "tr", "td", "b", "p", "div"]
TEXTS = ["x", "y", "ab", "نص", ""]


def random_tree(rng: random.Random, max_nodes: int) -> HtmlTree:
    """Random small labeled tree; some nodes are text leaves."""
    budget = rng.randint(1, max_nodes)

    def build(remaining: list[int]) -> HtmlTree:
        remaining[0] -= 1
        if remaining[0] > 0 and rng.random() < 0.7:
            n_children = rng.randint(1, min(3, remaining[0]))
            children = []
            for _ in range(n_children):
                if remaining[0] <= 0:
                    break
                children.append(build(remaining))
            return HtmlTree(rng.choice(LABELS), children=tuple(children))
        if rng.random() < 0.4:
            return HtmlTree("#text", text=rng.choice(TEXTS))
        return HtmlTree(rng.choice(LABELS))

    return build([budget])


@pytest.fixture
def rng():
    return random.Random(20240817)
