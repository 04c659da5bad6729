"""Ordered tree edit distance (Zhang-Shasha) and TEDS similarity.

Benchmark documents produce small trees (hundreds of nodes), so the classic
postorder keyroot dynamic program is sufficient; no APTED-style optimization
is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .docmodel import HtmlTree


def _normalized_levenshtein(a: str, b: str) -> float:
    if a == b:
        return 0.0
    if not a or not b:
        return 1.0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1] / len(a)


@dataclass(frozen=True)
class CostModel:
    """Unit insert/delete; relabel follows the TEDS convention.

    Same-label text nodes cost the normalized string edit distance of their
    texts (or 0/1 with ``strict_text``); td/th nodes with differing
    rowspan/colspan count as a full structural disagreement.
    """

    insert: float = 1.0
    delete: float = 1.0
    strict_text: bool = False

    def relabel(self, a: HtmlTree, b: HtmlTree) -> float:
        if a.label != b.label:
            return 1.0
        if a.is_text:
            if a.text == b.text:
                return 0.0
            if self.strict_text:
                return 1.0
            return _normalized_levenshtein(a.text, b.text)
        if a.label in ("td", "th"):
            if (a.rowspan or 1) != (b.rowspan or 1) or \
                    (a.colspan or 1) != (b.colspan or 1):
                return 1.0
        return 0.0


def _postorder(tree: HtmlTree) -> tuple[list[HtmlTree], list[int]]:
    """Postorder node list plus leftmost-leaf-descendant index per node."""
    nodes: list[HtmlTree] = []
    lmld: list[int] = []

    def walk(node: HtmlTree) -> int:
        first_leaf = None
        for child in node.children:
            idx = walk(child)
            if first_leaf is None:
                first_leaf = idx
        my_index = len(nodes)
        nodes.append(node)
        lmld.append(first_leaf if first_leaf is not None else my_index)
        return lmld[my_index]

    walk(tree)
    return nodes, lmld


def _keyroots(lmld: list[int]) -> list[int]:
    seen = set()
    roots = []
    for i in range(len(lmld) - 1, -1, -1):
        if lmld[i] not in seen:
            seen.add(lmld[i])
            roots.append(i)
    roots.reverse()
    return roots


def tree_edit_distance(t1: HtmlTree, t2: HtmlTree,
                       cost: CostModel = CostModel()) -> float:
    """Minimal edit-script cost mapping t1 to t2 (Zhang-Shasha)."""
    nodes1, l1 = _postorder(t1)
    nodes2, l2 = _postorder(t2)
    n, m = len(nodes1), len(nodes2)
    treedist = [[0.0] * m for _ in range(n)]

    for i in _keyroots(l1):
        for j in _keyroots(l2):
            # Forest distance over subforests l(i)..i and l(j)..j.
            li, lj = l1[i], l2[j]
            rows = i - li + 2
            cols = j - lj + 2
            fd = [[0.0] * cols for _ in range(rows)]
            for di in range(1, rows):
                fd[di][0] = fd[di - 1][0] + cost.delete
            for dj in range(1, cols):
                fd[0][dj] = fd[0][dj - 1] + cost.insert
            for di in range(1, rows):
                for dj in range(1, cols):
                    i1 = li + di - 1
                    j1 = lj + dj - 1
                    if l1[i1] == li and l2[j1] == lj:
                        fd[di][dj] = min(
                            fd[di - 1][dj] + cost.delete,
                            fd[di][dj - 1] + cost.insert,
                            fd[di - 1][dj - 1] + cost.relabel(nodes1[i1], nodes2[j1]),
                        )
                        treedist[i1][j1] = fd[di][dj]
                    else:
                        fd[di][dj] = min(
                            fd[di - 1][dj] + cost.delete,
                            fd[di][dj - 1] + cost.insert,
                            fd[l1[i1] - li][l2[j1] - lj] + treedist[i1][j1],
                        )
    return treedist[n - 1][m - 1]


def teds_similarity(t1: HtmlTree, t2: HtmlTree,
                    cost: CostModel = CostModel()) -> float:
    """1 - TED / max(tree sizes), clamped to [0, 1]."""
    distance = tree_edit_distance(t1, t2, cost)
    denom = max(t1.size(), t2.size())
    return min(1.0, max(0.0, 1.0 - distance / denom))
