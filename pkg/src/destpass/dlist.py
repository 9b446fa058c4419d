"""Destination-backed difference lists.

A difference list here is an incomplete linked list whose payload is the
destination of the final tail hole. Appending fills that hole with a hollow
cons cell and keeps the new tail hole; concatenating two difference lists
writes the second one's root into the first one's tail hole — one field
write, no allocation, no copying. ``to_list`` plugs nil into the last hole
and releases the finished list.

Two baselines used by the benchmark harness live here as well: plain
linked-list concatenation (quadratic when nested to the left) and the
classic function-backed difference list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator

from .builder import (
    Incomplete,
    Token,
    alloc,
    fill,
    fill_comp,
    fill_leaf,
    from_incomplete_,
    map_b,
)
from .shapes import LeafType, Recursive, TypeShape, ctor, register_shape


@dataclass(eq=False, repr=False)
class Nil:
    """Empty linked list."""

    __slots__ = ()

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Nil)

    __hash__ = None

    def __iter__(self) -> Iterator:
        return iter(())

    def __repr__(self) -> str:
        return "Nil()"


@dataclass(eq=False, repr=False)
class Cons:
    """Linked list node. Equality and iteration walk the spine iteratively,
    so long lists are safe."""

    __slots__ = ("head", "tail")

    head: Any
    tail: Any

    def __eq__(self, other: Any) -> bool:
        a, b = self, other
        while isinstance(a, Cons) and isinstance(b, Cons):
            if a.head != b.head:
                return False
            a, b = a.tail, b.tail
        return isinstance(a, Nil) and isinstance(b, Nil)

    __hash__ = None

    def __iter__(self) -> Iterator:
        node = self
        while isinstance(node, Cons):
            yield node.head
            node = node.tail

    def __repr__(self) -> str:
        items = ", ".join(repr(x) for x in self)
        return f"linked([{items}])"


NIL = Nil()


def from_pylist(xs: Iterable) -> Nil | Cons:
    out = NIL
    for x in reversed(list(xs)):
        out = Cons(x, out)
    return out


def to_pylist(lst: Nil | Cons) -> list:
    return list(lst)


def _classify_list(value):
    if isinstance(value, Nil):
        return 0, ()
    if isinstance(value, Cons):
        return 1, (value.head, value.tail)
    raise TypeError(f"not a linked list: {type(value).__name__}")


LIST_NIL = ctor("list", "nil", 0, (), lambda: NIL)
LIST_CONS = ctor(
    "list", "cons", 1, (LeafType("value"), Recursive("list")), Cons
)
LIST_SHAPE = TypeShape("list", (LIST_NIL, LIST_CONS), _classify_list)
register_shape(LIST_SHAPE)


# -- destination-backed difference lists ---------------------------------------

DList = Incomplete  # payload: the Dest of the final tail hole


def dlist_new(t: Token) -> DList:
    """Empty difference list: one hole, which is also the root."""
    return alloc(t)


def dlist_append(i: DList, x) -> DList:
    """Add ``x`` at the tail position; still exactly one hole."""

    def step(d):
        dh, dt = fill(d, LIST_CONS)
        fill_leaf(x, dh)
        return dt

    return map_b(i, step)


def dlist_concat(i1: DList, i2: DList) -> DList:
    """Concatenate: write i2's root into i1's tail hole. One field write,
    zero allocations; the result keeps i1's root and inherits i2's hole."""
    return map_b(i1, lambda dt1: fill_comp(i2, dt1))


def dlist_to_list(i: DList) -> Nil | Cons:
    """Plug nil into the tail hole and release the finished list."""
    return from_incomplete_(map_b(i, lambda dt: fill(dt, LIST_NIL)))


def dlist_from_list(t: Token, xs: Iterable) -> DList:
    """Build a difference list holding the elements of ``xs``."""
    out = dlist_new(t)
    for x in xs:
        out = dlist_append(out, x)
    return out


# -- baselines -------------------------------------------------------------------


def list_concat_naive(a: Nil | Cons, b: Nil | Cons) -> Nil | Cons:
    """Plain ``++``: rebuilds every cons cell of ``a``. Left-nested chains of
    this are the quadratic case difference lists exist to avoid."""
    items = []
    node = a
    while isinstance(node, Cons):
        items.append(node.head)
        node = node.tail
    out = b
    for x in reversed(items):
        out = Cons(x, out)
    return out


class FunDList:
    """Function-backed difference list: a list is represented by the function
    that prepends it. Concatenation is O(1) composition.

    Composition is kept as a tree and applied with an explicit stack rather
    than nested closures; the host's call-stack limit makes literal closure
    nesting unusable at benchmark sizes.
    """

    __slots__ = ("_node",)

    # _node: ("leaf", pylist) | ("comp", FunDList, FunDList)

    def __init__(self, node=("leaf", ())) -> None:
        self._node = node

    @classmethod
    def empty(cls) -> "FunDList":
        return cls()

    @classmethod
    def from_items(cls, xs: Iterable) -> "FunDList":
        return cls(("leaf", tuple(xs)))

    def concat(self, other: "FunDList") -> "FunDList":
        return FunDList(("comp", self, other))

    def __call__(self, ys: list) -> list:
        # self applied to ys == prefix ++ ys, leaves collected left to right
        out: list = []
        stack = [self._node]
        while stack:
            node = stack.pop()
            if node[0] == "leaf":
                out.extend(node[1])
            else:
                stack.append(node[2]._node)
                stack.append(node[1]._node)
        out.extend(ys)
        return out

    def to_list(self) -> list:
        return self([])
