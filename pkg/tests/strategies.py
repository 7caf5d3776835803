import hypothesis.strategies as st

from setcalc.corpus import LABELS, small_trees
from setcalc.kernel import enumerate_v, mk_set
from setcalc.trees import Tree, ROOT

V3 = enumerate_v(3)
V4 = enumerate_v(4)


def hf_sets(max_leaves: int = 12):
    """Random HF sets, grown from the empty set by finite unions of singletons."""
    return st.recursive(
        st.sampled_from(V3),
        lambda inner: st.lists(inner, max_size=4).map(mk_set),
        max_leaves=max_leaves,
    )


v4_sets = st.sampled_from(V4)
corpus_trees = st.sampled_from(small_trees())


@st.composite
def trees(draw, max_nodes: int = 10, labels=LABELS):
    nodes = {ROOT}
    target = draw(st.integers(1, max_nodes))
    while len(nodes) < target:
        parent = draw(st.sampled_from(sorted(nodes, key=lambda n: (len(n), [x.key for x in n]))))
        nodes.add(parent + (draw(st.sampled_from(labels)),))
    return Tree(frozenset(nodes), frozenset(labels))
