import json

import numpy as np
import pytest

from bmolab import (
    AtomRef,
    FiltrationTree,
    SchemaError,
    SizeCapError,
    build_dyadic,
    build_random,
    omega_weight,
)
from bmolab.filtration import MAX_DYADIC_DEPTH, resolve_tree_field

import oracles


# == construction and validation =============================================


def test_dyadic_shape():
    tree = build_dyadic(3)
    assert tree.depth == 3
    assert tree.num_leaves == 8
    assert tree.num_atoms == 15
    assert [tree.atom_count(n) for n in range(4)] == [1, 2, 4, 8]


def test_dyadic_masses_exact():
    tree = build_dyadic(4)
    for n in range(5):
        assert np.all(tree.masses(n) == 2.0**-n)
        assert float(np.sum(tree.masses(n))) == 1.0


def test_root_mass_must_be_exactly_one():
    with pytest.raises(SchemaError) as err:
        FiltrationTree({"mass": 0.999999999999, "children": []})
    assert err.value.path == "root"


def test_children_must_partition_parent():
    doc = {
        "mass": 1.0,
        "children": [
            {"mass": 0.6, "children": []},
            {"mass": 0.3, "children": []},
        ],
    }
    with pytest.raises(SchemaError) as err:
        FiltrationTree(doc)
    assert err.value.path == "root"
    assert "sum to" in str(err.value)


def test_error_path_points_at_the_bad_node():
    doc = {
        "mass": 1.0,
        "children": [
            {"mass": 0.5, "children": [{"mass": 0.5, "children": []}]},
            {
                "mass": 0.5,
                "children": [
                    {"mass": 0.2, "children": []},
                    {"mass": 0.2, "children": []},
                ],
            },
        ],
    }
    with pytest.raises(SchemaError) as err:
        FiltrationTree(doc)
    assert err.value.path == "root/children/1"


def test_leaves_must_sit_at_final_depth():
    doc = {
        "mass": 1.0,
        "children": [
            {"mass": 0.5, "children": []},
            {
                "mass": 0.5,
                "children": [
                    {"mass": 0.25, "children": []},
                    {"mass": 0.25, "children": []},
                ],
            },
        ],
    }
    with pytest.raises(SchemaError) as err:
        FiltrationTree(doc)
    assert "leaf at level" in str(err.value)


def test_mass_range_validated():
    with pytest.raises(SchemaError):
        FiltrationTree({"mass": 0.0, "children": []})
    with pytest.raises(SchemaError):
        FiltrationTree({"mass": "1", "children": []})


def test_declared_depth_checked():
    doc = build_dyadic(2).to_dict()
    doc["depth"] = 3
    with pytest.raises(SchemaError):
        FiltrationTree.from_dict(doc)


def test_single_atom_space():
    tree = build_dyadic(0)
    assert tree.depth == 0
    assert tree.num_leaves == 1
    assert tree.mass_of(AtomRef(0, 0)) == 1.0


# == navigation ==============================================================


def test_leaf_slices_partition_leaves():
    tree = build_random(7, 3, 3)
    for n in range(tree.depth + 1):
        edges = []
        for ref in tree.atoms_at_level(n):
            s = tree.leaf_slice(ref)
            edges.append((s.start, s.stop))
        assert edges[0][0] == 0
        assert edges[-1][1] == tree.num_leaves
        for (a, b), (c, d) in zip(edges, edges[1:]):
            assert b == c
            assert a < b


def test_parent_child_roundtrip():
    tree = build_random(11, 3, 3)
    assert tree.parent_of(AtomRef(0, 0)) is None
    for n in range(1, tree.depth + 1):
        for ref in tree.atoms_at_level(n):
            parent = tree.parent_of(ref)
            assert ref in tree.children_of(parent)


def test_children_masses_sum_to_parent():
    tree = build_random(13, 4, 3)
    for n in range(tree.depth):
        for ref in tree.atoms_at_level(n):
            kids = tree.children_of(ref)
            assert kids
            total = sum(tree.mass_of(c) for c in kids)
            assert abs(total - tree.mass_of(ref)) <= 1e-12


def test_atom_containing_and_is_ancestor():
    tree = build_dyadic(3)
    leaf = AtomRef(3, 5)
    assert tree.atom_containing(leaf, 0) == AtomRef(0, 0)
    assert tree.atom_containing(leaf, 1) == AtomRef(1, 1)
    assert tree.atom_containing(leaf, 2) == AtomRef(2, 2)
    assert tree.atom_containing(leaf, 3) == leaf
    assert tree.is_ancestor(AtomRef(1, 1), leaf)
    assert not tree.is_ancestor(AtomRef(1, 0), leaf)
    assert tree.is_ancestor(leaf, leaf)


def test_leaf_ancestors_matches_slices():
    tree = build_random(17, 3, 3)
    for n in range(tree.depth + 1):
        anc = tree.leaf_ancestors(n)
        for ref in tree.atoms_at_level(n):
            s = tree.leaf_slice(ref)
            assert np.all(anc[s] == ref.index)


def test_iter_atoms_covers_everything_in_order():
    tree = build_dyadic(2)
    refs = list(tree.iter_atoms())
    assert refs == [
        AtomRef(0, 0),
        AtomRef(1, 0),
        AtomRef(1, 1),
        AtomRef(2, 0),
        AtomRef(2, 1),
        AtomRef(2, 2),
        AtomRef(2, 3),
    ]


def test_arrays_are_read_only():
    tree = build_dyadic(2)
    with pytest.raises(ValueError):
        tree.leaf_masses[0] = 2.0
    with pytest.raises(ValueError):
        tree.masses(1)[0] = 2.0


def test_level_bounds_checked():
    tree = build_dyadic(2)
    with pytest.raises(ValueError):
        tree.masses(3)
    with pytest.raises(ValueError):
        tree.mass_of(AtomRef(1, 5))


# == builders ================================================================


def test_dyadic_depth_cap():
    with pytest.raises(SizeCapError):
        build_dyadic(MAX_DYADIC_DEPTH + 1)
    build_dyadic(3, max_depth=3)
    with pytest.raises(SizeCapError):
        build_dyadic(4, max_depth=3)


def test_random_tree_is_a_pure_function_of_its_arguments():
    a = build_random(42, 3, 3)
    b = build_random(42, 3, 3)
    assert a == b
    assert a.to_json() == b.to_json()
    c = build_random(43, 3, 3)
    assert a != c


def test_random_tree_respects_branch_limit():
    tree = build_random(5, 4, 3)
    for n in range(tree.depth):
        for ref in tree.atoms_at_level(n):
            assert 1 <= len(tree.children_of(ref)) <= 3


def test_random_atom_cap():
    with pytest.raises(SizeCapError):
        build_random(0, 10, 3, max_atoms=50)


# == leaf masses agree with the reference walk ===============================


def test_leaf_masses_match_oracle():
    tree = build_random(23, 4, 3)
    doc = tree.to_dict()["root"]
    assert np.allclose(tree.leaf_masses, oracles.leaf_masses(doc), rtol=0, atol=0)
    layers = oracles.atom_layers(doc)
    for n in range(tree.depth + 1):
        got = [(tree.leaf_slice(r).start, tree.leaf_slice(r).stop, tree.mass_of(r))
               for r in tree.atoms_at_level(n)]
        assert got == [(s, e, m) for s, e, m in layers[n]]


# == serialization ===========================================================


def test_round_trip_is_bit_exact():
    tree = build_random(29, 4, 3)
    doc = json.loads(tree.to_json())
    assert doc["schema"] == "tree/v1"
    again = FiltrationTree.from_dict(doc)
    assert again == tree
    assert again.to_json() == tree.to_json()


def test_save_and_load(tmp_path):
    tree = build_random(31, 3, 2)
    path = tmp_path / "tree.json"
    tree.save(str(path))
    assert FiltrationTree.load(str(path)) == tree


def test_resolve_tree_field(tmp_path):
    tree = build_dyadic(2)
    path = tmp_path / "t.json"
    tree.save(str(path))
    assert resolve_tree_field(str(path), None) == tree
    assert resolve_tree_field(json.loads(tree.to_json()), None) == tree
    with pytest.raises(SchemaError):
        resolve_tree_field(42, None)


def test_json_rejects_wrong_schema():
    with pytest.raises(SchemaError):
        FiltrationTree.from_dict({"schema": "nope/v1", "root": {}})


# == the level weight function ===============================================


def test_omega_weight_values():
    tree = build_dyadic(2)
    w0 = omega_weight(tree, 0)
    w1 = omega_weight(tree, 1)
    w2 = omega_weight(tree, 2)
    assert np.all(w0.values == 1.0)
    assert np.all(w1.values == 0.5)
    assert np.all(w2.values == 0.25)


def test_omega_weight_on_uneven_tree():
    tree = build_random(37, 2, 3)
    w = omega_weight(tree, 1)
    anc = tree.leaf_ancestors(1)
    assert np.array_equal(w.values, tree.masses(1)[anc])
