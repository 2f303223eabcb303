"""Walk one parsed sentence through pruning and every tree descriptor.

The sentence "The mother forgot to turn off the water" arrives as CoNLL-U
rows; we prune punctuation, then read off hierarchy depth, dependency
length against its random and optimal baselines, subtree-size entropy, and
the leaf-balance index.
"""

from surprisalkit import (
    b2_index, mean_hierarchical_distance, min_linear_arrangement, omega,
    parse_conllu, prune_punctuation, random_baseline, subtree_unevenness,
    total_dependency_length)

CONLLU = """\
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tmother\tmother\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tforgot\tforget\tVERB\t_\t_\t0\troot\t_\t_
4\tto\tto\tPART\t_\t_\t5\tmark\t_\t_
5\tturn\tturn\tVERB\t_\t_\t3\txcomp\t_\t_
6\toff\toff\tADP\t_\t_\t5\tcompound:prt\t_\t_
7\tthe\tthe\tDET\t_\t_\t8\tdet\t_\t_
8\twater\twater\tNOUN\t_\t_\t5\tobj\t_\t_
9\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_
"""

doc = parse_conllu(CONLLU.encode(), language="en", doc_id="demo")[0]
sentence = doc.sentences[0]
print("tokens:", " ".join(t.surface for t in sentence.tokens))

tree = prune_punctuation(sentence)
print(f"after pruning: {len(tree)} nodes, root = {tree.nodes[tree.root - 1].surface!r}")

n = len(tree)
d_obs = total_dependency_length(tree)
d_min = min_linear_arrangement(tree)
d_rand = random_baseline(n)
print(f"\nmean hierarchical distance: {mean_hierarchical_distance(tree):.5f}")
print(f"dependency length observed={d_obs}, optimal={d_min}, random={d_rand:.1f}")
print(f"optimality: {omega(tree):.4f}  (1 = optimal order, 0 = random baseline)")
print(f"subtree-size unevenness: {subtree_unevenness(tree):.4f} bits")
print(f"balance index: {b2_index(tree):.4f} bits")

# a chain and a star bracket the balance scale
from surprisalkit.conllu import Token, DependencyTree

chain = DependencyTree(
    nodes=[Token(f"w{i}", i, i - 1, "dep" if i > 1 else "root") for i in range(1, 6)],
    root=1)
star = DependencyTree(
    nodes=[Token(f"w{i}", i, 0 if i == 1 else 1, "root" if i == 1 else "dep")
           for i in range(1, 6)],
    root=1)
print(f"\nchain of 5: balance={b2_index(chain):.3f}, unevenness={subtree_unevenness(chain):.3f}")
print(f"star of 5:  balance={b2_index(star):.3f}, unevenness={subtree_unevenness(star):.3f}")
