"""Conversion entre los DTOs de archivos JSON y los modelos de dominio."""
from __future__ import annotations

from collections.abc import Iterable

from rebac_miner.application.dtos.documents import (
    AclDocument,
    ClassDocument,
    ClassModelDocument,
    FieldDocument,
    JsonValue,
    ObjectDocument,
    ObjectModelDocument,
)
from rebac_miner.core.exceptions import ModelIntegrityError
from rebac_miner.domain.entities import (
    AclPolicy,
    Atom,
    ClassDeclaration,
    ClassModel,
    FieldDeclaration,
    ObjectModel,
    ObjectRecord,
    SubjectPermission,
    Value,
)
from rebac_miner.domain.enums import Multiplicity


def _sorted_atoms(values: Iterable[Atom]) -> list[Atom]:
    return sorted(values, key=lambda v: (isinstance(v, str), v))


def class_model_to_document(cm: ClassModel) -> ClassModelDocument:
    return ClassModelDocument(
        classes=[
            ClassDocument(
                name=d.name,
                parent=d.parent,
                fields=[
                    FieldDocument(name=f.name, type=f.type, multiplicity=f.multiplicity)
                    for f in d.fields
                ],
            )
            for d in cm.declarations
        ]
    )


def class_model_from_document(document: ClassModelDocument) -> ClassModel:
    return ClassModel(
        [
            ClassDeclaration(
                c.name,
                c.parent,
                tuple(FieldDeclaration(f.name, f.type, f.multiplicity) for f in c.fields),
            )
            for c in document.classes
        ]
    )


def _value_to_json(value: Value) -> JsonValue:
    if isinstance(value, frozenset):
        return _sorted_atoms(value)
    return value


def _value_from_json(value: JsonValue, multiplicity: Multiplicity, where: str) -> Value:
    if multiplicity is Multiplicity.many:
        if not isinstance(value, list):
            raise ModelIntegrityError(f"{where}: se esperaba una lista")
        return frozenset(value)
    if isinstance(value, list):
        raise ModelIntegrityError(f"{where}: se esperaba un valor simple")
    return value


def object_model_to_document(om: ObjectModel) -> ObjectModelDocument:
    return ObjectModelDocument(
        objects=[
            ObjectDocument(
                class_name=o.class_name,
                id=o.id,
                fields={name: _value_to_json(v) for name, v in sorted(o.field_values.items())},
            )
            for o in om
        ]
    )


def object_model_from_document(cm: ClassModel, document: ObjectModelDocument) -> ObjectModel:
    records: list[ObjectRecord] = []
    for o in document.objects:
        if o.class_name not in cm:
            raise ModelIntegrityError(f"{o.id}: clase desconocida {o.class_name}")
        values: dict[str, Value] = {}
        for name, raw in o.fields.items():
            fd = cm.field(o.class_name, name)
            # los campos no declarados los reporta la validacion del ObjectModel
            multiplicity = fd.multiplicity if fd is not None else Multiplicity.one
            values[name] = _value_from_json(raw, multiplicity, f"{o.id}.{name}")
        records.append(ObjectRecord(o.class_name, o.id, values))
    return ObjectModel(cm, records)


def acl_to_document(acl: AclPolicy) -> AclDocument:
    return AclDocument(
        actions=sorted(acl.actions),
        tuples=[tuple(t) for t in sorted(acl.sp0)],
    )


def acl_from_document(om: ObjectModel, document: AclDocument) -> AclPolicy:
    sp0 = frozenset(SubjectPermission(*t) for t in document.tuples)
    actions = frozenset(document.actions)
    unknown = {t.action for t in sp0} - actions
    if unknown:
        raise ModelIntegrityError(f"Acciones no declaradas en SP0: {sorted(unknown)}")
    return AclPolicy(om.class_model, om, actions, sp0)
