"""Shape registration and constructor metadata."""

import pytest

from destpass import (
    LeafType,
    Recursive,
    ShapeConflict,
    ShapeRegistry,
    TypeShape,
    UnknownCtor,
    ctor,
    dests_spec_of,
    register_shape,
)
from destpass.bfs import TREE_NODE, TREE_SHAPE
from destpass.dlist import LIST_CONS, LIST_NIL, LIST_SHAPE


def test_reregistering_identical_shape_is_idempotent():
    register_shape(LIST_SHAPE)
    register_shape(TREE_SHAPE)


def test_conflicting_shape_rejected():
    other_cons = ctor("list", "cons", 1, (LeafType("value"),), lambda h: h)
    other_nil = ctor("list", "nil", 0, (), lambda: None)
    clash = TypeShape("list", (other_nil, other_cons), lambda v: (0, ()))
    with pytest.raises(ShapeConflict):
        register_shape(clash)


def test_unresolvable_recursive_field_rejected():
    reg = ShapeRegistry()
    dangling = TypeShape(
        "box",
        (ctor("box", "box", 0, (Recursive("nowhere"),), lambda x: x),),
        lambda v: (0, (v,)),
    )
    with pytest.raises(ShapeConflict):
        reg.register(dangling)


def test_mutually_recursive_batch_registration():
    reg = ShapeRegistry()
    even = TypeShape(
        "even",
        (
            ctor("even", "zero", 0, (), lambda: 0),
            ctor("even", "succ", 1, (Recursive("odd"),), lambda n: n + 1),
        ),
        lambda v: (0, ()) if v == 0 else (1, (v - 1,)),
    )
    odd = TypeShape(
        "odd",
        (ctor("odd", "succ", 0, (Recursive("even"),), lambda n: n + 1),),
        lambda v: (0, (v - 1,)),
    )
    reg.register(even, odd)
    assert reg.is_registered("even") and reg.is_registered("odd")
    # but neither alone would have resolved
    with pytest.raises(ShapeConflict):
        ShapeRegistry().register(even)


def test_self_recursion_resolves():
    reg = ShapeRegistry()
    reg.register(
        TypeShape(
            "nat",
            (
                ctor("nat", "z", 0, (), lambda: 0),
                ctor("nat", "s", 1, (Recursive("nat"),), lambda n: n + 1),
            ),
            lambda v: (0, ()) if v == 0 else (1, (v - 1,)),
        )
    )


def test_dests_spec_of_nil_is_empty():
    assert dests_spec_of(LIST_NIL) == ()


def test_dests_spec_of_cons():
    assert dests_spec_of(LIST_CONS) == (
        (0, LeafType("value")),
        (1, Recursive("list")),
    )


def test_dests_spec_of_node_has_three_entries():
    spec = dests_spec_of(TREE_NODE)
    assert len(spec) == 3
    assert [idx for idx, _ in spec] == [0, 1, 2]


def test_dests_spec_of_unregistered_ctor():
    stray = ctor("list", "cons", 1, (LeafType("value"), Recursive("list")), None)
    with pytest.raises(UnknownCtor):
        dests_spec_of(stray)


def test_shape_validation():
    with pytest.raises(ValueError):
        TypeShape("t", ())
    bad_tag = ctor("t", "a", 1, (), lambda: None)
    with pytest.raises(ValueError):
        TypeShape("t", (bad_tag,))
    with pytest.raises(ValueError):
        ctor("u", "a", 0, (), lambda: None).__class__(
            type_id="u", name="a", tag=0, arity=2, fields=(), make=None
        )
