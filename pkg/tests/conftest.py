"""Shared fixtures: the worked example tree, random trees, exhaustive oracles."""

import itertools

import numpy as np
import pytest

from surprisalkit.conllu import DependencyTree, Token

# "The mother forgot to turn off the water": det/nsubj/root/mark/xcomp/prt/det/obj
WORKED_TUPLES = [
    ("The", 1, 2, "det"),
    ("mother", 2, 3, "nsubj"),
    ("forgot", 3, 0, "root"),
    ("to", 4, 5, "mark"),
    ("turn", 5, 3, "xcomp"),
    ("off", 6, 5, "compound:prt"),
    ("the", 7, 8, "det"),
    ("water", 8, 5, "obj"),
]

WORKED_CONLLU = """\
# sent_id = example-1
# text = The mother forgot to turn off the water
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tmother\tmother\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tforgot\tforget\tVERB\t_\t_\t0\troot\t_\t_
4\tto\tto\tPART\t_\t_\t5\tmark\t_\t_
5\tturn\tturn\tVERB\t_\t_\t3\txcomp\t_\t_
6\toff\toff\tADP\t_\t_\t5\tcompound:prt\t_\t_
7\tthe\tthe\tDET\t_\t_\t8\tdet\t_\t_
8\twater\twater\tNOUN\t_\t_\t5\tobj\t_\t_
"""


def tree_from_tuples(tuples) -> DependencyTree:
    nodes = [Token(surface=s, index=i, head=h, deprel=r) for s, i, h, r in tuples]
    root = next(t.index for t in nodes if t.head == 0)
    return DependencyTree(nodes=nodes, root=root)


def make_tree(heads: list[int]) -> DependencyTree:
    tuples = [(f"w{i}", i, h, "root" if h == 0 else "dep")
              for i, h in enumerate(heads, start=1)]
    return tree_from_tuples(tuples)


def random_tree(rng: np.random.Generator, n: int) -> DependencyTree:
    """Uniform-attachment tree with randomly shuffled linear positions."""
    heads = [0] + [int(rng.integers(1, i + 1)) for i in range(1, n)]
    position = rng.permutation(n) + 1
    remap = [0] * n
    for old, head in enumerate(heads, start=1):
        remap[position[old - 1] - 1] = 0 if head == 0 else int(position[head - 1])
    return make_tree(remap)


_PERM_CACHE: dict[int, np.ndarray] = {}


def permutation_positions(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(
            list(itertools.permutations(range(n))), dtype=np.int8)
    return _PERM_CACHE[n]


def exhaustive_mla(tree: DependencyTree) -> int:
    """Minimum arrangement cost by checking every position assignment."""
    n = len(tree)
    perms = permutation_positions(n)
    cost = np.zeros(perms.shape[0], dtype=np.int32)
    for t in tree.nodes:
        if t.head != 0:
            cost += np.abs(perms[:, t.index - 1].astype(np.int32)
                           - perms[:, t.head - 1])
    return int(cost.min())


@pytest.fixture
def worked_tree() -> DependencyTree:
    return tree_from_tuples(WORKED_TUPLES)
