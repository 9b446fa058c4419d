"""Constructor metadata for algebraic types.

Every value type that can be built inside a region is described by a
:class:`TypeShape`: an ordered list of constructor descriptors, one per
variant. A descriptor records the constructor's tag, arity and the kind of
each field (another registered type, or an opaque leaf). Descriptors are
registered once, before any region work starts, and read-only afterwards.

Because the host language carries no static type information at run time,
each shape also carries two callables used at the region boundary:
``make`` (per constructor) applies the constructor bottom-up when a region
value is decoded back into a host value, and ``classify`` (per type) is its
inverse, splitting a host value into (tag, field values) when a complete
value is copied into a region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .errors import ShapeConflict, UnknownCtor


@dataclass(frozen=True)
class Recursive:
    """Field holding a value of another registered algebraic type."""

    type_id: str


@dataclass(frozen=True)
class LeafType:
    """Field holding an opaque payload, copied into the region verbatim."""

    type_id: str


FieldKind = Recursive | LeafType


@dataclass(frozen=True)
class CtorDescriptor:
    """Static description of one constructor of an algebraic type."""

    type_id: str
    name: str
    tag: int
    arity: int
    fields: tuple[FieldKind, ...]
    make: Callable[..., Any] = field(compare=False, default=None, repr=False)

    def __post_init__(self):
        if self.arity != len(self.fields):
            raise ValueError(
                f"{self.type_id}.{self.name}: arity {self.arity} != "
                f"{len(self.fields)} declared fields"
            )


@dataclass(frozen=True)
class TypeShape:
    """All constructors of one algebraic type, tags 0..n-1 in order."""

    type_id: str
    ctors: tuple[CtorDescriptor, ...]
    classify: Callable[[Any], tuple[int, tuple]] = field(
        compare=False, default=None, repr=False
    )

    def __post_init__(self):
        if not self.ctors:
            raise ValueError(f"type {self.type_id!r} has no constructors")
        for i, c in enumerate(self.ctors):
            if c.tag != i:
                raise ValueError(
                    f"type {self.type_id!r}: ctor {c.name!r} has tag {c.tag}, "
                    f"expected {i}"
                )
            if c.type_id != self.type_id:
                raise ValueError(
                    f"ctor {c.name!r} declares type {c.type_id!r} inside "
                    f"shape {self.type_id!r}"
                )

    def _signature(self):
        return (
            self.type_id,
            tuple((c.name, c.tag, c.arity, c.fields) for c in self.ctors),
        )


def ctor(type_id, name, tag, fields, make):
    """Shorthand for building a CtorDescriptor with arity inferred."""
    return CtorDescriptor(
        type_id=type_id,
        name=name,
        tag=tag,
        arity=len(fields),
        fields=tuple(fields),
        make=make,
    )


class ShapeRegistry:
    """Registration-phase store of type shapes; read-only afterwards.

    Registration must finish before regions start allocating. After that the
    registry is never mutated and is safe to share between threads.
    """

    def __init__(self) -> None:
        self._shapes: dict[str, TypeShape] = {}

    def register(self, *shapes: TypeShape) -> None:
        """Register one or more shapes atomically.

        Mutually recursive types must be registered in the same call so that
        their Recursive fields can resolve against each other. Registering an
        identical shape again is a no-op; a different shape under an existing
        type id raises ShapeConflict.
        """
        batch: dict[str, TypeShape] = {}
        for shape in shapes:
            existing = self._shapes.get(shape.type_id)
            if existing is not None:
                if existing._signature() != shape._signature():
                    raise ShapeConflict(
                        f"type {shape.type_id!r} already registered with a "
                        f"different shape"
                    )
                continue
            if shape.type_id in batch:
                raise ShapeConflict(
                    f"type {shape.type_id!r} appears twice in one batch"
                )
            batch[shape.type_id] = shape
        known = self._shapes.keys() | batch.keys()
        for shape in batch.values():
            for c in shape.ctors:
                for fk in c.fields:
                    if isinstance(fk, Recursive) and fk.type_id not in known:
                        raise ShapeConflict(
                            f"{shape.type_id}.{c.name}: recursive field refers "
                            f"to unregistered type {fk.type_id!r}"
                        )
        self._shapes.update(batch)

    def shape(self, type_id: str) -> TypeShape:
        try:
            return self._shapes[type_id]
        except KeyError:
            raise UnknownCtor(f"type {type_id!r} is not registered") from None

    def is_registered(self, type_id: str) -> bool:
        return type_id in self._shapes

    def resolve(self, c: CtorDescriptor) -> CtorDescriptor:
        """Return the registered descriptor matching ``c`` or raise UnknownCtor."""
        shape = self._shapes.get(c.type_id)
        if shape is None or c.tag >= len(shape.ctors) or shape.ctors[c.tag] is not c:
            raise UnknownCtor(
                f"constructor {c.type_id}.{c.name} (tag {c.tag}) is not registered"
            )
        return c

    def dests_spec_of(self, c: CtorDescriptor) -> tuple[tuple[int, FieldKind], ...]:
        """Hole specifications for a constructor: (field index, kind) per field."""
        self.resolve(c)
        return tuple(enumerate(c.fields))


DEFAULT_REGISTRY = ShapeRegistry()


def register_shape(shape: TypeShape, *, registry: ShapeRegistry | None = None) -> None:
    (registry or DEFAULT_REGISTRY).register(shape)


def register_shapes(*shapes: TypeShape, registry: ShapeRegistry | None = None) -> None:
    (registry or DEFAULT_REGISTRY).register(*shapes)


def dests_spec_of(
    c: CtorDescriptor, *, registry: ShapeRegistry | None = None
) -> tuple[tuple[int, FieldKind], ...]:
    return (registry or DEFAULT_REGISTRY).dests_spec_of(c)
