"""Single-pass breadth-first tree relabeling.

The trick: keep a FIFO queue of pairs (input subtree, destination for the
corresponding output subtree). Each step dequeues a pair, fills the
destination with a hollow node, writes the mapped value through the value
destination, and enqueues the children with their fresh destinations. One
traversal of the input produces the fully relabeled output, top-down.

The empty tree is ``None``; nodes are :class:`Node`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable

from .builder import alloc, fill, fill_leaf, from_incomplete, map_b, with_region
from .region import DEFAULT_BLOCK_SIZE, region_stats
from .shapes import LeafType, Recursive, TypeShape, ctor, register_shape


@dataclass
class Node:
    value: Any
    left: "Node | None" = None
    right: "Node | None" = None


def _classify_tree(value):
    if value is None:
        return 0, ()
    if isinstance(value, Node):
        return 1, (value.value, value.left, value.right)
    raise TypeError(f"not a tree: {type(value).__name__}")


TREE_NIL = ctor("tree", "nil", 0, (), lambda: None)
TREE_NODE = ctor(
    "tree",
    "node",
    1,
    (LeafType("value"), Recursive("tree"), Recursive("tree")),
    Node,
)
TREE_SHAPE = TypeShape("tree", (TREE_NIL, TREE_NODE), _classify_tree)
register_shape(TREE_SHAPE)


def map_accum_bfs(
    f: Callable[[Any, Any], tuple[Any, Any]],
    s0,
    tree: Node | None,
    *,
    counters: dict | None = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
):
    """Map ``f`` over node values in breadth-first order, threading a state.

    ``f(state, value) -> (state, mapped)``. Returns ``(new_tree, final_state)``
    where the new tree has exactly the input's shape. When ``counters`` is
    given, ``counters["visits"]`` is set to the number of nodes dequeued and
    ``counters["stats"]`` to the region's allocation counters.
    """
    visits = 0

    def run(token):
        region = token.region

        def body(dtree):
            nonlocal visits
            st = s0
            queue = deque([(tree, dtree)])
            while queue:
                subtree, d = queue.popleft()
                if subtree is None:
                    fill(d, TREE_NIL)
                else:
                    visits += 1
                    dy, dl, dr = fill(d, TREE_NODE)
                    queue.append((subtree.left, dl))
                    queue.append((subtree.right, dr))
                    st, y = f(st, subtree.value)
                    fill_leaf(y, dy)
            return st

        result = from_incomplete(map_b(alloc(token), body))
        if counters is not None:
            counters["stats"] = region_stats(region)
        return result

    out_tree, final_state = with_region(run, block_size=block_size)
    if counters is not None:
        counters["visits"] = visits
    return out_tree, final_state


def relabel_dps(tree: Node | None) -> Node | None:
    """Replace node values with 1..n in breadth-first order, single pass."""
    out, _ = map_accum_bfs(lambda st, _x: (st + 1, st), 1, tree)
    return out


def relabel_two_pass(tree: Node | None) -> Node | None:
    """Baseline relabeling: one pass to count level order, one to rebuild."""
    order: list[Node] = []
    queue = deque([tree])
    while queue:
        t = queue.popleft()
        if t is None:
            continue
        order.append(t)
        queue.append(t.left)
        queue.append(t.right)
    labels = {id(t): k for k, t in enumerate(order, start=1)}

    if tree is None:
        return None
    root = Node(labels[id(tree)])
    rebuild = deque([(tree, root)])
    while rebuild:
        src, dst = rebuild.popleft()
        if src.left is not None:
            dst.left = Node(labels[id(src.left)])
            rebuild.append((src.left, dst.left))
        if src.right is not None:
            dst.right = Node(labels[id(src.right)])
            rebuild.append((src.right, dst.right))
    return root


def level_order_values(tree: Node | None) -> list:
    """Node values collected level by level, left to right."""
    out = []
    queue = deque([tree])
    while queue:
        t = queue.popleft()
        if t is None:
            continue
        out.append(t.value)
        queue.append(t.left)
        queue.append(t.right)
    return out


def same_shape(a: Node | None, b: Node | None) -> bool:
    """True when the two trees are identical after erasing values."""
    queue = deque([(a, b)])
    while queue:
        x, y = queue.popleft()
        if (x is None) != (y is None):
            return False
        if x is None:
            continue
        queue.append((x.left, y.left))
        queue.append((x.right, y.right))
    return True


def random_tree(n: int, rng) -> Node | None:
    """Random-shaped tree with exactly ``n`` nodes (values 0..n-1)."""
    if n <= 0:
        return None
    root = Node(0)
    # open slots: (parent, "left" | "right")
    slots = [(root, "left"), (root, "right")]
    for k in range(1, n):
        idx = rng.randrange(len(slots))
        slots[idx], slots[-1] = slots[-1], slots[idx]
        parent, side = slots.pop()
        child = Node(k)
        setattr(parent, side, child)
        slots.append((child, "left"))
        slots.append((child, "right"))
    return root
