"""Top-down data construction through write-once destinations.

The API follows one discipline: tokens, destinations, and incompletes are
*linear* — each accepts exactly one consuming operation. The host language
cannot enforce that statically, so every linear value carries a liveness
flag, every consuming operation checks and flips it, and ``with_region``
audits at scope exit that nothing live was dropped. Violations surface as
``UseAfterConsume`` or ``LinearityLeak``; they never corrupt the region.

Consuming operations:

==============  =====================================================
value           consumed by
==============  =====================================================
Token           alloc, into_incomplete, token_consume, token_dup2
Dest            fill, fill_leaf, fill_comp (as the target)
Incomplete      map_b, from_incomplete_, from_incomplete,
                fill_comp (as the child)
==============  =====================================================

Values returned out of ``with_region`` are ordinary host values with no
linear obligations; the scope-exit audit is what guarantees they contain no
live handles into the dead region.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from typing import Any, Callable

from . import region as _region
from .errors import (
    DestinationInLeaf,
    LinearityLeak,
    RegionMismatch,
    SelfPlug,
    UnfilledHoles,
    UnknownCtor,
    UseAfterConsume,
)
from .region import CellRef, Leaf, Ref, Region, region_new
from .shapes import CtorDescriptor, FieldKind, LeafType, Recursive, ShapeRegistry


class _Lineage:
    """Union-find node tracking one incomplete's outstanding obligations.

    ``holes`` and ``live`` are only meaningful on a root; ``fill_comp``
    merges the child's lineage into the parent's so that the whole ledger
    stays single-rooted.
    """

    __slots__ = ("parent", "holes", "live")

    def __init__(self) -> None:
        self.parent: _Lineage | None = None
        self.holes = 0
        self.live: set[Dest] = set()

    def find(self) -> "_Lineage":
        node = self
        while node.parent is not None:
            node = node.parent
        # path compression
        walk = self
        while walk.parent is not None:
            walk.parent, walk = node, walk.parent
        return node


class Token:
    """Linear capability to mint one incomplete in its region."""

    __slots__ = ("region", "alive")

    def __init__(self, region: Region) -> None:
        self.region = region
        self.alive = True
        region.live_tokens[id(self)] = self

    def __repr__(self) -> str:
        state = "live" if self.alive else "consumed"
        return f"<Token region={self.region.region_id} {state}>"


class Dest:
    """Handle to exactly one unfilled hole; consumable exactly once."""

    __slots__ = ("region", "cell", "index", "kind", "lineage", "alive")

    def __init__(
        self,
        region: Region,
        cell: CellRef,
        index: int,
        kind: FieldKind | None,
        lineage: _Lineage,
    ) -> None:
        self.region = region
        self.cell = cell
        self.index = index
        self.kind = kind
        self.lineage = lineage
        self.alive = True
        region.live_dests[id(self)] = self
        lineage.find().live.add(self)

    def __repr__(self) -> str:
        state = "live" if self.alive else "consumed"
        return f"<Dest cell={self.cell.handle}[{self.index}] {state}>"


class Incomplete:
    """A structure under construction plus the payload that must be consumed
    before it becomes readable."""

    __slots__ = ("region", "root", "payload", "lineage", "alive")

    def __init__(
        self, region: Region, root: CellRef, payload, lineage: _Lineage
    ) -> None:
        self.region = region
        self.root = root
        self.payload = payload
        self.lineage = lineage
        self.alive = True
        region.live_incompletes[id(self)] = self

    @property
    def holes_outstanding(self) -> int:
        return self.lineage.find().holes

    def __repr__(self) -> str:
        state = "live" if self.alive else "consumed"
        return (
            f"<Incomplete root={self.root.handle} "
            f"holes={self.holes_outstanding} {state}>"
        )


# -- linear-value scanning ----------------------------------------------------

_CONTAINERS = (tuple, list, set, frozenset, deque)
_SCALARS = (int, float, bool, str, bytes, type(None))


def _collect_linear(value) -> set:
    """All Token/Dest/Incomplete objects reachable through ordinary containers
    and dataclasses. Identity-based; iterative, so depth does not matter."""
    found: set = set()
    seen: set[int] = set()
    stack = [value]
    while stack:
        v = stack.pop()
        if isinstance(v, _SCALARS):
            continue
        if id(v) in seen:
            continue
        seen.add(id(v))
        if isinstance(v, (Token, Dest, Incomplete)):
            found.add(v)
        elif isinstance(v, dict):
            stack.extend(v.keys())
            stack.extend(v.values())
        elif isinstance(v, _CONTAINERS):
            stack.extend(v)
        elif dataclasses.is_dataclass(v) and not isinstance(v, type):
            for f in dataclasses.fields(v):
                stack.append(getattr(v, f.name))
    return found


# -- consumption bookkeeping ---------------------------------------------------


def _consume_token(t: Token, op: str) -> None:
    if not isinstance(t, Token):
        raise TypeError(f"{op} expects a Token, got {type(t).__name__}")
    if not t.alive:
        raise UseAfterConsume(f"{op} on an already-consumed token")
    t.alive = False
    del t.region.live_tokens[id(t)]


def _consume_dest(d: Dest, op: str) -> None:
    if not isinstance(d, Dest):
        raise TypeError(f"{op} expects a Dest, got {type(d).__name__}")
    if not d.alive:
        raise UseAfterConsume(f"{op} on an already-consumed destination")
    d.alive = False
    del d.region.live_dests[id(d)]
    root = d.lineage.find()
    root.live.discard(d)
    root.holes -= 1


def _consume_incomplete(i: Incomplete, op: str) -> None:
    if not isinstance(i, Incomplete):
        raise TypeError(f"{op} expects an Incomplete, got {type(i).__name__}")
    if not i.alive:
        raise UseAfterConsume(f"{op} on an already-consumed incomplete")
    i.alive = False
    del i.region.live_incompletes[id(i)]


# -- scope ---------------------------------------------------------------------


def with_region(
    body: Callable[[Token], Any],
    *,
    block_size: int = _region.DEFAULT_BLOCK_SIZE,
    registry: ShapeRegistry | None = None,
) -> Any:
    """Run ``body`` with a fresh region and a fresh token bound to it.

    Only ordinary (non-linear) values may leave the scope. At exit the audit
    checks that the body left no live token, destination, or incomplete and
    raises LinearityLeak otherwise. The region is closed either way.
    """
    region = region_new(block_size, registry=registry)
    token = Token(region)
    try:
        result = body(token)
    except BaseException:
        region._close()
        raise
    leaks = region._scope_leaks()
    region._close()
    if leaks:
        raise LinearityLeak(
            "scope exit with unconsumed linear values: " + ", ".join(leaks)
        )
    return result


def token_consume(t: Token) -> None:
    """Discard a token."""
    _consume_token(t, "token_consume")


def token_dup2(t: Token) -> tuple[Token, Token]:
    """Exchange one token for two fresh ones bound to the same region."""
    _consume_token(t, "token_dup2")
    return Token(t.region), Token(t.region)


# -- creating incompletes --------------------------------------------------------


def alloc(t: Token) -> Incomplete:
    """Exchange a token for an empty incomplete.

    Allocates a root-receiver cell in the region; the returned payload is the
    single destination pointing at its hole, so whatever fills the
    destination is exactly the value the incomplete will hold.
    """
    _consume_token(t, "alloc")
    region = t.region
    receiver = region._alloc_receiver()
    lineage = _Lineage()
    lineage.holes = 1
    dest = Dest(region, receiver, 0, None, lineage)
    return Incomplete(region, receiver, dest, lineage)


def into_incomplete(t: Token, value, type_id: str) -> Incomplete:
    """Copy a complete host value of registered type ``type_id`` into the
    region and wrap it as an incomplete with nothing left to consume.

    No root receiver is allocated; the root refers directly to the copy.
    """
    _consume_token(t, "into_incomplete")
    region = t.region
    root = region.copy_value(value, type_id)
    return Incomplete(region, root, None, _Lineage())


# -- transforming and releasing ---------------------------------------------------


def map_b(i: Incomplete, f: Callable[[Any], Any]) -> Incomplete:
    """Replace the payload of ``i`` with ``f(payload)``.

    ``f`` must consume its argument exactly once: every live destination of
    this incomplete's lineage must, after ``f`` returns, either have been
    consumed or be reachable from the new payload. Orphaned destinations
    raise LinearityLeak immediately.
    """
    _consume_incomplete(i, "map_b")
    new_payload = f(i.payload)
    root = i.lineage.find()
    if root.live:
        reachable = _collect_linear(new_payload)
        orphans = [d for d in root.live if d not in reachable]
        if orphans:
            raise LinearityLeak(
                f"map_b callback dropped {len(orphans)} live destination(s) "
                f"of its own lineage"
            )
    return Incomplete(i.region, i.root, new_payload, root)


def from_incomplete_(i: Incomplete):
    """Release a finished incomplete whose payload is unit (None).

    On failure the incomplete is left alive, so the caller can finish the
    remaining holes and try again.
    """
    if not isinstance(i, Incomplete):
        raise TypeError(f"from_incomplete_ expects an Incomplete, got {type(i).__name__}")
    if not i.alive:
        raise UseAfterConsume("from_incomplete_ on an already-consumed incomplete")
    root = i.lineage.find()
    if root.holes > 0:
        raise UnfilledHoles(
            f"incomplete still has {root.holes} unfilled destination(s)"
        )
    if i.payload is not None:
        raise TypeError(
            f"from_incomplete_ needs a unit payload, got {type(i.payload).__name__}"
        )
    value = _region.read_value(i.region, i.root)
    _consume_incomplete(i, "from_incomplete_")
    return value


def from_incomplete(i: Incomplete):
    """Release a finished incomplete together with its (unrestricted) payload.

    Returns ``(value, payload)``.
    """
    if not isinstance(i, Incomplete):
        raise TypeError(f"from_incomplete expects an Incomplete, got {type(i).__name__}")
    if not i.alive:
        raise UseAfterConsume("from_incomplete on an already-consumed incomplete")
    root = i.lineage.find()
    if root.holes > 0:
        raise UnfilledHoles(
            f"incomplete still has {root.holes} unfilled destination(s)"
        )
    smuggled = [x for x in _collect_linear(i.payload) if getattr(x, "alive", False)]
    if smuggled:
        raise LinearityLeak(
            "from_incomplete payload still carries live linear values"
        )
    value = _region.read_value(i.region, i.root)
    payload = i.payload
    _consume_incomplete(i, "from_incomplete")
    return value, payload


# -- filling destinations -----------------------------------------------------------


def _check_fillable(d: Dest, ctor: CtorDescriptor) -> None:
    d.region.registry.resolve(ctor)
    kind = d.kind
    if kind is None:
        return
    if isinstance(kind, LeafType):
        raise UnknownCtor(
            f"hole expects a leaf of {kind.type_id!r}; "
            f"constructor {ctor.name} cannot fill it"
        )
    if isinstance(kind, Recursive) and kind.type_id != ctor.type_id:
        raise UnknownCtor(
            f"hole expects type {kind.type_id!r}, "
            f"constructor {ctor.name} builds {ctor.type_id!r}"
        )


def fill(d: Dest, ctor: CtorDescriptor):
    """Plug a hollow constructor into the hole behind ``d``.

    Returns the destinations for the constructor's fields in declaration
    order: None for arity 0, a single Dest for arity 1, a tuple otherwise.
    """
    if not isinstance(d, Dest):
        raise TypeError(f"fill expects a Dest, got {type(d).__name__}")
    if not d.alive:
        raise UseAfterConsume("fill on an already-consumed destination")
    _check_fillable(d, ctor)
    region = d.region
    cell = _region.alloc_hollow(region, ctor)
    _region.write_field(region, d.cell, d.index, Ref(cell))
    lineage = d.lineage.find()
    _consume_dest(d, "fill")
    dests = tuple(
        Dest(region, cell, idx, kind, lineage)
        for idx, kind in enumerate(ctor.fields)
    )
    lineage.holes += ctor.arity
    if ctor.arity == 0:
        return None
    if ctor.arity == 1:
        return dests[0]
    return dests


def fill_leaf(value, d: Dest) -> None:
    """Fill the hole behind ``d`` with a leaf copy of ``value``.

    The value is copied into the region, so later mutation of the source
    cannot affect the structure. Leaf payloads must not contain live linear
    values; destination-backed structures cannot store destinations.
    """
    if not isinstance(d, Dest):
        raise TypeError(f"fill_leaf expects a Dest, got {type(d).__name__}")
    if not d.alive:
        raise UseAfterConsume("fill_leaf on an already-consumed destination")
    if not isinstance(value, _SCALARS) and _collect_linear(value):
        raise DestinationInLeaf(
            "leaf payload contains tokens, destinations, or incompletes"
        )
    _region.write_field(d.region, d.cell, d.index, Leaf(value))
    _consume_dest(d, "fill_leaf")


def fill_comp(child: Incomplete, d: Dest):
    """Plug ``child`` into the hole behind ``d`` and return child's payload.

    Only a field write: no cell is allocated, nothing moves. The child's
    remaining destinations re-home into d's lineage before this returns.
    """
    if not isinstance(child, Incomplete):
        raise TypeError(f"fill_comp expects an Incomplete child, got {type(child).__name__}")
    if not child.alive:
        raise UseAfterConsume("fill_comp on an already-consumed incomplete")
    if not isinstance(d, Dest):
        raise TypeError(f"fill_comp expects a Dest, got {type(d).__name__}")
    if not d.alive:
        raise UseAfterConsume("fill_comp on an already-consumed destination")
    if child.region is not d.region:
        raise RegionMismatch(
            "fill_comp child and destination belong to different regions"
        )
    parent_root = d.lineage.find()
    child_root = child.lineage.find()
    if parent_root is child_root:
        raise SelfPlug("incomplete plugged into a destination of its own lineage")
    _region.write_field(d.region, d.cell, d.index, Ref(child.root))
    # Merge the child's ledger into the parent's (small-to-large on the
    # live sets keeps this amortized cheap).
    if len(child_root.live) > len(parent_root.live):
        parent_root.live, child_root.live = child_root.live, parent_root.live
    parent_root.live |= child_root.live
    parent_root.holes += child_root.holes
    child_root.live = set()
    child_root.holes = 0
    child_root.parent = parent_root
    _consume_dest(d, "fill_comp")
    _consume_incomplete(child, "fill_comp")
    return child.payload
