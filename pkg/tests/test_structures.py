"""Structures: construction, operations, text format, trees, cores, pp."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from qcsp.structures import (
    ClassicalHom, FormatError, GadgetSpec, PPFormula, Signature, Structure,
    build, classical_hom, clique, compose_homs, core, cycle, diameter,
    direct_power, distance, gaifman, hom_enumerate, hom_search, induced,
    is_connected, is_core, is_tree, parse_structure, path_graph, polymorphisms,
    pp_to_gadget, product, render_structure, undirected_reduct, with_relation,
)


# ---------------------------------------------------------------------------
# independent oracle: brute-force homomorphism enumeration
# ---------------------------------------------------------------------------

def naive_homs(X, A):
    """All homomorphism image tuples by exhaustive enumeration."""
    out = []
    for image in itertools.product(range(A.size), repeat=X.size):
        ok = True
        for sym, tuples in X.relations:
            good = set(A.rel(sym))
            for t in tuples:
                if tuple(image[i] for i in t) not in good:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(image)
    return out


def oriented_path(length):
    return build(f"OP{length}", range(length + 1), {"E": 2},
                 {"E": [(i, i + 1) for i in range(length)]}, by_index=True)


# ---------------------------------------------------------------------------
# construction and basic invariants
# ---------------------------------------------------------------------------

def test_build_sorts_and_dedupes_tuples():
    X = build("X", ["b", "a"], {"E": 2},
              {"E": [("b", "a"), ("b", "a"), ("a", "b")]})
    assert X.domain == ("b", "a")
    assert X.rel("E") == ((0, 1), (1, 0))


def test_build_rejects_unknown_labels_and_arity():
    with pytest.raises(FormatError):
        build("X", [0, 1], {"E": 2}, {"E": [(0, 2)]}, by_index=False)
    with pytest.raises(ValueError):
        build("X", [0, 1], {"E": 2}, {"E": [(0, 0, 1)]}, by_index=True)


def test_build_rejects_duplicate_domain():
    with pytest.raises((ValueError, FormatError)):
        build("X", [0, 0], {"E": 2}, {})


def test_signature_of_accepts_mapping_and_pairs():
    s1 = Signature.of({"E": 2, "R": 3})
    s2 = Signature.of([("R", 3), ("E", 2)])
    assert s1 == s2
    assert s1.arity("R") == 3
    assert "E" in s1 and "Q" not in s1


def test_clique_cycle_path_counts():
    assert clique(4).rel("E") == tuple(
        (i, j) for i in range(4) for j in range(4) if i != j)
    assert len(cycle(5).rel("E")) == 10
    assert len(path_graph(3).rel("E")) == 6
    with pytest.raises(ValueError):
        cycle(2)


# ---------------------------------------------------------------------------
# homomorphism search against the oracle
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("X,A", [
    (clique(3), clique(3)),
    (clique(3), clique(4)),
    (cycle(5), clique(3)),
    (cycle(4), clique(2)),
    (path_graph(3), cycle(5)),
    (oriented_path(2), clique(3)),
    (clique(4), clique(3)),
    (cycle(5), clique(2)),
])
def test_enumeration_matches_naive_oracle(X, A):
    want = naive_homs(X, A)
    got = [h.image for h in hom_enumerate(X, A)]
    assert got == sorted(want)
    first = hom_search(X, A)
    if want:
        assert first.image == min(want)
    else:
        assert first is None


def test_pins_respected():
    X, A = cycle(5), clique(3)
    pinned = [h for h in hom_enumerate(X, A, pins={0: 2})]
    assert pinned and all(h(0) == 2 for h in pinned)
    want = [im for im in naive_homs(X, A) if im[0] == 2]
    assert [h.image for h in pinned] == sorted(want)


def test_polymorphism_count_k2():
    # the 2-ary polymorphisms of K2 are the 4 edge-respecting maps
    polys = polymorphisms(clique(2), 2)
    assert len(polys) == len(naive_homs(direct_power(clique(2), 2), clique(2)))


def test_classical_hom_validation():
    h = classical_hom(clique(3), clique(3), {0: 1, 1: 2, 2: 0})
    assert h.is_valid() and h(0) == 1
    with pytest.raises(ValueError):
        classical_hom(clique(3), clique(3), {0: 0, 1: 0, 2: 1})


def test_compose_homs():
    f = classical_hom(cycle(5), cycle(5), {i: (i + 1) % 5 for i in range(5)})
    g = classical_hom(cycle(5), cycle(5), {i: (i + 2) % 5 for i in range(5)})
    assert compose_homs(g, f).image == tuple((i + 3) % 5 for i in range(5))


# ---------------------------------------------------------------------------
# products and powers
# ---------------------------------------------------------------------------

def test_direct_power_domain_is_lex():
    P = direct_power(clique(2), 2)
    assert P.domain == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_direct_power_edge_rule():
    P = direct_power(cycle(5), 2)
    good = set(cycle(5).rel("E"))
    for (a, b) in P.rel_labels("E"):
        assert (a[0], b[0]) in good and (a[1], b[1]) in good


def test_power_of_power_relabels_to_flat_power():
    A = clique(3)
    PP = direct_power(direct_power(A, 2), 2)
    P4 = direct_power(A, 4)
    flat = {lab: (lab[0][0], lab[0][1], lab[1][0], lab[1][1])
            for lab in PP.domain}
    assert sorted(flat.values()) == sorted(P4.domain)
    for sym in PP.signature.symbols():
        got = {tuple(flat[x] for x in t) for t in PP.rel_labels(sym)}
        assert got == set(P4.rel_labels(sym))


def test_product_sizes():
    P = product(clique(2), clique(3))
    assert P.size == 6
    assert len(P.rel("E")) == 2 * 6


# ---------------------------------------------------------------------------
# graph derivations
# ---------------------------------------------------------------------------

def test_gaifman_of_ternary_relation():
    X = build("T", range(3), {"R": 3}, {"R": [(0, 1, 2)]}, by_index=True)
    g = gaifman(X)
    assert set(g.rel("E")) == {(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)}


def test_gaifman_drops_loops():
    X = build("L", range(2), {"E": 2}, {"E": [(0, 0), (0, 1)]}, by_index=True)
    assert set(gaifman(X).rel("E")) == {(0, 1), (1, 0)}


def test_undirected_reduct():
    X = oriented_path(2)
    assert set(undirected_reduct(X).rel("E")) == {(0, 1), (1, 0), (1, 2), (2, 1)}


def test_distance_and_diameter():
    C7 = cycle(7)
    assert distance(C7, 0, 3) == 3
    assert diameter(C7) == 3
    two = build("2K2", range(4), {"E": 2},
                {"E": [(0, 1), (1, 0), (2, 3), (3, 2)]}, by_index=True)
    assert distance(two, 0, 2) == math.inf
    assert diameter(two) == math.inf
    assert not is_connected(two)
    assert is_connected(C7)


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------

def test_oriented_path_is_tree():
    assert is_tree(oriented_path(3))


def test_symmetric_encodings_are_never_trees():
    # each undirected edge contributes two tuples, closing a cycle
    # through the edge's incidence vertices
    assert not is_tree(path_graph(2))
    assert not is_tree(clique(3))


def test_branching_oriented_tree():
    Y = build("Y", range(4), {"E": 2}, {"E": [(0, 1), (0, 2), (2, 3)]},
              by_index=True)
    assert is_tree(Y)
    with_cycle = build("Yc", range(3), {"E": 2},
                       {"E": [(0, 1), (1, 2), (2, 0)]}, by_index=True)
    assert not is_tree(with_cycle)


def test_ternary_tuple_blocks_treeness_when_repeated():
    X = build("H", range(3), {"R": 3}, {"R": [(0, 1, 2)]}, by_index=True)
    assert is_tree(X)
    X2 = build("H2", range(3), {"R": 3}, {"R": [(0, 1, 2), (0, 2, 1)]},
               by_index=True)
    assert not is_tree(X2)


# ---------------------------------------------------------------------------
# cores
# ---------------------------------------------------------------------------

def test_core_of_even_cycle_is_an_edge():
    sub, retraction = core(cycle(6))
    assert sub.size == 2
    assert retraction.is_valid()


def test_cliques_and_odd_cycles_are_cores():
    assert is_core(clique(3))
    assert is_core(cycle(5))
    assert not is_core(cycle(6))


def test_core_size_cap():
    X = build("big", range(9), {"E": 2}, {"E": []})
    with pytest.raises(ValueError):
        core(X)


# ---------------------------------------------------------------------------
# misc operations
# ---------------------------------------------------------------------------

def test_induced_keeps_domain_order():
    X = cycle(5)
    sub = induced(X, [3, 0, 1])
    assert sub.domain == (0, 1, 3)
    assert set(sub.rel_labels("E")) == {(0, 1), (1, 0)}


def test_with_relation():
    X = clique(2)
    Y = with_relation(X, "F", [(0,)], arity=1, by_index=True)
    assert Y.signature.arity("F") == 1
    assert Y.rel("F") == ((0,),)
    with pytest.raises(ValueError):
        with_relation(X, "E", [], arity=2)


# ---------------------------------------------------------------------------
# pp formulas and gadgets
# ---------------------------------------------------------------------------

def test_pp_to_gadget_neq_over_k3():
    phi = PPFormula(free=("x", "y"), bound=("z",),
                    atoms=(("E", ("x", "z")), ("E", ("z", "y"))))
    spec = pp_to_gadget(phi, {"E": 2})
    assert spec.arity == 2
    assert spec.structure.size == 3
    assert is_tree(spec.structure)


def test_pp_formula_validation():
    with pytest.raises(ValueError):
        PPFormula(free=("x", "x"), bound=(), atoms=(("E", ("x", "x")),))
    with pytest.raises(ValueError):
        PPFormula(free=("x",), bound=("x",), atoms=(("E", ("x", "x")),))


def test_gadget_spec_distinct_distinguished():
    with pytest.raises(ValueError):
        GadgetSpec(clique(2), (0, 0))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def test_text_roundtrip_explicit():
    X = build("mix", [0, (1, 2), "a_b"], {"E": 2, "U": 1},
              {"E": [(0, (1, 2))], "U": [("a_b",)]})
    Y = parse_structure(render_structure(X))
    assert Y.domain == X.domain
    assert Y.signature == X.signature
    assert Y.relations == X.relations


def test_parse_rejects_garbage():
    with pytest.raises(FormatError):
        parse_structure("structure X\nrelation E 2\n0 1\n")  # no domain
    with pytest.raises(FormatError):
        parse_structure("structure X\ndomain 0 1\nrelation E 2\n0\n")


# hypothesis: random structures roundtrip through the text format

_labels = st.one_of(
    st.integers(min_value=-3, max_value=9),
    st.text(alphabet="abcxyz_", min_size=1, max_size=3),
    st.tuples(st.integers(min_value=0, max_value=3),
              st.integers(min_value=0, max_value=3)),
)


@st.composite
def _structures(draw):
    labs = draw(st.lists(_labels, min_size=1, max_size=5, unique=True))
    n = len(labs)
    arities = draw(st.dictionaries(
        st.sampled_from(["E", "R", "U"]),
        st.integers(min_value=1, max_value=3), min_size=1, max_size=3))
    rels = {}
    for sym, r in arities.items():
        idx_tuples = st.tuples(*[st.integers(min_value=0, max_value=n - 1)] * r)
        rels[sym] = draw(st.lists(idx_tuples, max_size=6))
    return build("rand", labs, arities, rels, by_index=True)


@given(_structures())
@settings(max_examples=60, deadline=None)
def test_text_roundtrip_random(X):
    Y = parse_structure(render_structure(X))
    assert Y.domain == X.domain
    assert Y.signature == X.signature
    assert Y.relations == X.relations


@given(_structures())
@settings(max_examples=30, deadline=None)
def test_gaifman_is_symmetric_and_loopless(X):
    g = gaifman(X)
    edges = set(g.rel("E"))
    assert all(i != j for i, j in edges)
    assert all((j, i) in edges for i, j in edges)
