"""Tipos del lenguaje ORAL: modelos de clases/objetos, condiciones, restricciones y reglas."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, TypeAlias

from rebac_miner.core.exceptions import ModelIntegrityError, PathTypeError
from rebac_miner.domain.enums import (
    BOOLEAN_TYPE,
    PRIMITIVE_TYPES,
    STRING_TYPE,
    ConditionOperator,
    ConstraintOperator,
    Multiplicity,
)

# Las referencias a objetos se representan por el id del objeto; el tipo estatico de la
# ruta distingue un id de una cadena. None representa la ausencia de valor.
Atom: TypeAlias = bool | str
Value: TypeAlias = Atom | frozenset[Atom] | None
Path: TypeAlias = tuple[str, ...]

ID_FIELD = "id"


@dataclass(frozen=True, slots=True)
class FieldDeclaration:
    name: str
    type: str
    multiplicity: Multiplicity = Multiplicity.one

    @property
    def is_reference(self) -> bool:
        return self.type not in PRIMITIVE_TYPES


ID_DECLARATION = FieldDeclaration(ID_FIELD, STRING_TYPE, Multiplicity.one)


@dataclass(frozen=True, slots=True)
class ClassDeclaration:
    name: str
    parent: str | None = None
    fields: tuple[FieldDeclaration, ...] = ()


@dataclass(frozen=True, slots=True)
class PathInfo:
    """Resultado de tipar una ruta desde su clase ancla."""

    type: str
    multiplicity: Multiplicity
    classes: tuple[str, ...]  # clase alcanzada despues de cada prefijo, incluida el ancla


class ClassModel:
    """Esquema de clases con herencia simple; inmutable tras la construccion."""

    def __init__(self, classes: list[ClassDeclaration] | tuple[ClassDeclaration, ...]) -> None:
        self._classes: dict[str, ClassDeclaration] = {}
        for declaration in classes:
            if declaration.name in self._classes:
                raise ModelIntegrityError(f"Clase declarada dos veces: {declaration.name}")
            self._classes[declaration.name] = declaration
        self._path_cache: dict[tuple[str, Path], PathInfo] = {}
        self._validate()

    def _validate(self) -> None:
        for declaration in self._classes.values():
            if declaration.name in PRIMITIVE_TYPES:
                raise ModelIntegrityError(f"Nombre de clase reservado: {declaration.name}")
            if declaration.parent is not None and declaration.parent not in self._classes:
                raise ModelIntegrityError(
                    f"La clase {declaration.name} hereda de {declaration.parent}, que no existe"
                )
            seen: set[str] = set()
            current: str | None = declaration.name
            while current is not None:
                if current in seen:
                    raise ModelIntegrityError(f"Herencia ciclica en {declaration.name}")
                seen.add(current)
                current = self._classes[current].parent
            names: set[str] = set()
            for fd in declaration.fields:
                if fd.name == ID_FIELD:
                    raise ModelIntegrityError(f"{declaration.name}: el campo id es implicito")
                if fd.name in names:
                    raise ModelIntegrityError(f"{declaration.name}.{fd.name} declarado dos veces")
                names.add(fd.name)
                if fd.type not in PRIMITIVE_TYPES and fd.type not in self._classes:
                    raise ModelIntegrityError(
                        f"{declaration.name}.{fd.name} tiene tipo desconocido {fd.type}"
                    )
                if fd.type == STRING_TYPE:
                    raise ModelIntegrityError(
                        f"{declaration.name}.{fd.name}: solo id puede ser de tipo String"
                    )
                if fd.type == BOOLEAN_TYPE and fd.multiplicity is not Multiplicity.one:
                    raise ModelIntegrityError(
                        f"{declaration.name}.{fd.name}: los campos Boolean tienen multiplicidad one"
                    )
        for name in self._classes:
            inherited = [fd.name for fd in self._inherited_fields(name)]
            if len(inherited) != len(set(inherited)):
                raise ModelIntegrityError(f"{name} redeclara un campo heredado")

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._classes))

    @property
    def declarations(self) -> tuple[ClassDeclaration, ...]:
        return tuple(self._classes[name] for name in self.class_names)

    def __contains__(self, name: object) -> bool:
        return name in self._classes

    def __len__(self) -> int:
        return len(self._classes)

    def declaration(self, name: str) -> ClassDeclaration:
        try:
            return self._classes[name]
        except KeyError as exc:
            raise ModelIntegrityError(f"Clase no declarada: {name}") from exc

    def _inherited_fields(self, name: str) -> list[FieldDeclaration]:
        chain = [name, *self.ancestors(name)]
        collected: list[FieldDeclaration] = []
        for cls in reversed(chain):
            collected.extend(self._classes[cls].fields)
        return collected

    def fields_of(self, name: str) -> tuple[FieldDeclaration, ...]:
        """Campos declarados y heredados, mas el id implicito."""
        self.declaration(name)
        return (ID_DECLARATION, *self._inherited_fields(name))

    def field(self, class_name: str, field_name: str) -> FieldDeclaration | None:
        for fd in self.fields_of(class_name):
            if fd.name == field_name:
                return fd
        return None

    def ancestors(self, name: str) -> tuple[str, ...]:
        """Superclases de `name`, de la mas cercana a la raiz."""
        result: list[str] = []
        parent = self.declaration(name).parent
        while parent is not None:
            result.append(parent)
            parent = self._classes[parent].parent
        return tuple(result)

    def children(self, name: str) -> tuple[str, ...]:
        return tuple(sorted(c.name for c in self._classes.values() if c.parent == name))

    def descendants(self, name: str) -> tuple[str, ...]:
        return tuple(sorted(c for c in self._classes if name in self.ancestors(c)))

    def is_subclass(self, name: str, ancestor: str) -> bool:
        """True si `name` es `ancestor` o desciende de ella."""
        return name == ancestor or ancestor in self.ancestors(name)

    def related(self, first: str, second: str) -> bool:
        return self.is_subclass(first, second) or self.is_subclass(second, first)

    def resolve_path(self, anchor: str, path: Path) -> PathInfo:
        """Tipa la ruta desde `anchor`; lanza PathTypeError si no es type-correct."""
        key = (anchor, path)
        cached = self._path_cache.get(key)
        if cached is not None:
            return cached
        if anchor not in self._classes:
            raise PathTypeError(f"Clase ancla desconocida: {anchor}", anchor=anchor, path=path)
        current = anchor
        multiplicities: list[Multiplicity] = []
        classes = [anchor]
        for position, name in enumerate(path):
            if current in PRIMITIVE_TYPES:
                raise PathTypeError(
                    f"La ruta {'.'.join(path)} continua despues del campo primitivo "
                    f"{path[position - 1]}",
                    anchor=anchor,
                    path=path,
                )
            fd = self.field(current, name)
            if fd is None:
                raise PathTypeError(
                    f"{current} no tiene el campo {name} (ruta {'.'.join(path)})",
                    anchor=anchor,
                    path=path,
                )
            multiplicities.append(fd.multiplicity)
            current = fd.type
            classes.append(current)
        if Multiplicity.many in multiplicities:
            multiplicity = Multiplicity.many
        elif all(m is Multiplicity.one for m in multiplicities):
            multiplicity = Multiplicity.one
        else:
            multiplicity = Multiplicity.optional
        info = PathInfo(current, multiplicity, tuple(classes))
        self._path_cache[key] = info
        return info


@dataclass(frozen=True, slots=True)
class ObjectRecord:
    class_name: str
    id: str
    field_values: dict[str, Value] = field(default_factory=dict, hash=False, compare=True)


class ObjectModel:
    """Conjunto de objetos con ids unicos, validado contra un ClassModel."""

    def __init__(self, class_model: ClassModel, objects: list[ObjectRecord]) -> None:
        self.class_model = class_model
        self._objects: dict[str, ObjectRecord] = {}
        for obj in objects:
            if obj.id in self._objects:
                raise ModelIntegrityError(f"Id de objeto repetido: {obj.id}")
            self._objects[obj.id] = obj
        self._instances: dict[str, frozenset[str]] = {}
        self._validate()

    def _validate(self) -> None:
        cm = self.class_model
        for obj in self._objects.values():
            if obj.class_name not in cm:
                raise ModelIntegrityError(f"{obj.id}: clase desconocida {obj.class_name}")
            declared = {fd.name: fd for fd in cm.fields_of(obj.class_name) if fd.name != ID_FIELD}
            extra = set(obj.field_values) - set(declared)
            if extra:
                raise ModelIntegrityError(f"{obj.id}: campos no declarados {sorted(extra)}")
            for name, fd in declared.items():
                if name not in obj.field_values:
                    raise ModelIntegrityError(f"{obj.id}: falta el campo {name}")
                self._check_value(obj, fd, obj.field_values[name])

    def _check_value(self, obj: ObjectRecord, fd: FieldDeclaration, value: Value) -> None:
        where = f"{obj.id}.{fd.name}"
        if fd.multiplicity is Multiplicity.many:
            if not isinstance(value, frozenset):
                raise ModelIntegrityError(f"{where}: se esperaba un conjunto")
            items: frozenset[Atom] = value
        else:
            if isinstance(value, frozenset):
                raise ModelIntegrityError(f"{where}: se esperaba un valor simple")
            if value is None:
                if fd.multiplicity is Multiplicity.one:
                    raise ModelIntegrityError(f"{where}: valor obligatorio ausente")
                return
            items = frozenset({value})
        for item in items:
            if fd.type == BOOLEAN_TYPE:
                if not isinstance(item, bool):
                    raise ModelIntegrityError(f"{where}: se esperaba Boolean")
                continue
            if not isinstance(item, str):
                raise ModelIntegrityError(f"{where}: se esperaba una referencia")
            target = self._objects.get(item)
            if target is None:
                raise ModelIntegrityError(f"{where}: referencia colgante a {item}")
            if not self.class_model.is_subclass(target.class_name, fd.type):
                raise ModelIntegrityError(
                    f"{where}: {item} es {target.class_name}, se esperaba {fd.type}"
                )

    def __len__(self) -> int:
        return len(self._objects)

    def __contains__(self, object_id: object) -> bool:
        return object_id in self._objects

    def __iter__(self):
        return iter(self._objects[key] for key in sorted(self._objects))

    def get(self, object_id: str) -> ObjectRecord:
        try:
            return self._objects[object_id]
        except KeyError as exc:
            raise ModelIntegrityError(f"Objeto inexistente: {object_id}") from exc

    def type_of(self, object_id: str) -> str:
        return self.get(object_id).class_name

    def instances_of(self, class_name: str) -> frozenset[str]:
        """Ids de objetos cuya clase es `class_name` o una subclase."""
        cached = self._instances.get(class_name)
        if cached is None:
            cm = self.class_model
            cached = frozenset(
                o.id for o in self._objects.values() if cm.is_subclass(o.class_name, class_name)
            )
            self._instances[class_name] = cached
        return cached

    @cached_property
    def field_count(self) -> int:
        """Numero total de valores de campo, id incluido."""
        return sum(len(o.field_values) + 1 for o in self._objects.values())


@dataclass(frozen=True, slots=True)
class AtomicCondition:
    path: Path
    op: ConditionOperator
    value: Atom | frozenset[Atom]

    @property
    def values(self) -> frozenset[Atom]:
        return self.value if isinstance(self.value, frozenset) else frozenset({self.value})


@dataclass(frozen=True, slots=True)
class AtomicConstraint:
    subject_path: Path
    op: ConstraintOperator
    resource_path: Path


@dataclass(frozen=True, slots=True)
class Rule:
    subject_type: str
    subject_condition: frozenset[AtomicCondition]
    resource_type: str
    resource_condition: frozenset[AtomicCondition]
    constraint: frozenset[AtomicConstraint]
    actions: frozenset[str]

    def replace(self, **changes: object) -> Rule:
        values = {
            "subject_type": self.subject_type,
            "subject_condition": self.subject_condition,
            "resource_type": self.resource_type,
            "resource_condition": self.resource_condition,
            "constraint": self.constraint,
            "actions": self.actions,
        }
        values.update(changes)
        return Rule(**values)  # type: ignore[arg-type]

    def __str__(self) -> str:
        from rebac_miner.domain.rendering import format_rule

        return format_rule(self)


def make_rule(
    subject_type: str,
    resource_type: str,
    actions: set[str] | frozenset[str] | list[str],
    *,
    subject_condition: set[AtomicCondition] | frozenset[AtomicCondition] = frozenset(),
    resource_condition: set[AtomicCondition] | frozenset[AtomicCondition] = frozenset(),
    constraint: set[AtomicConstraint] | frozenset[AtomicConstraint] = frozenset(),
) -> Rule:
    return Rule(
        subject_type,
        frozenset(subject_condition),
        resource_type,
        frozenset(resource_condition),
        frozenset(constraint),
        frozenset(actions),
    )


class SubjectPermission(NamedTuple):
    subject: str
    resource: str
    action: str


@dataclass(frozen=True, slots=True)
class WscWeights:
    w1: float = 1.0
    w2: float = 1.0
    w3: float = 1.0

    def __post_init__(self) -> None:
        if min(self.w1, self.w2, self.w3) < 0:
            msg = "Los pesos de WSC no pueden ser negativos"
            raise ValueError(msg)


@dataclass(frozen=True, slots=True)
class AclPolicy:
    """Politica ACL: modelos, acciones y relacion sujeto-permiso SP0."""

    class_model: ClassModel
    object_model: ObjectModel
    actions: frozenset[str]
    sp0: frozenset[SubjectPermission]

    def __post_init__(self) -> None:
        for tup in self.sp0:
            if tup.subject not in self.object_model or tup.resource not in self.object_model:
                raise ModelIntegrityError(f"Tupla con objetos inexistentes: {tuple(tup)}")
            if tup.action not in self.actions:
                raise ModelIntegrityError(f"Accion no declarada: {tup.action}")
