"""Fixtures compartidas: modelos de juguete construidos a mano."""
from __future__ import annotations

import pytest

from rebac_miner.domain.entities import (
    AclPolicy,
    ClassDeclaration,
    ClassModel,
    FieldDeclaration,
    ObjectModel,
    ObjectRecord,
    SubjectPermission,
)
from rebac_miner.domain.enums import BOOLEAN_TYPE, Multiplicity

ONE, OPTIONAL, MANY = Multiplicity.one, Multiplicity.optional, Multiplicity.many


def build_dept_model() -> ObjectModel:
    """Dos usuarios y dos documentos, cada par en su propio departamento."""
    cm = ClassModel(
        [
            ClassDeclaration("Dept"),
            ClassDeclaration("User", None, (FieldDeclaration("dept", "Dept", ONE),)),
            ClassDeclaration("Doc", None, (FieldDeclaration("dept", "Dept", ONE),)),
        ]
    )
    return ObjectModel(
        cm,
        [
            ObjectRecord("Dept", "d1"),
            ObjectRecord("Dept", "d2"),
            ObjectRecord("User", "u1", {"dept": "d1"}),
            ObjectRecord("User", "u2", {"dept": "d2"}),
            ObjectRecord("Doc", "doc1", {"dept": "d1"}),
            ObjectRecord("Doc", "doc2", {"dept": "d2"}),
        ],
    )


def build_dept_acl() -> AclPolicy:
    om = build_dept_model()
    sp0 = frozenset(
        {SubjectPermission("u1", "doc1", "read"), SubjectPermission("u2", "doc2", "read")}
    )
    return AclPolicy(om.class_model, om, frozenset({"read"}), sp0)


@pytest.fixture
def dept_model() -> ObjectModel:
    return build_dept_model()


@pytest.fixture
def dept_acl() -> AclPolicy:
    return build_dept_acl()


@pytest.fixture
def clinic_model() -> ObjectModel:
    """Medicos con equipos (many), mentor opcional y pacientes por equipo."""
    cm = ClassModel(
        [
            ClassDeclaration("Patient"),
            ClassDeclaration("Topic"),
            ClassDeclaration("Team", None, (FieldDeclaration("patients", "Patient", MANY),)),
            ClassDeclaration(
                "Doctor",
                None,
                (
                    FieldDeclaration("teams", "Team", MANY),
                    FieldDeclaration("mentor", "Doctor", OPTIONAL),
                    FieldDeclaration("specialties", "Topic", MANY),
                    FieldDeclaration("isTrainee", BOOLEAN_TYPE, ONE),
                ),
            ),
            ClassDeclaration(
                "Record",
                None,
                (
                    FieldDeclaration("patient", "Patient", ONE),
                    FieldDeclaration("team", "Team", ONE),
                ),
            ),
        ]
    )
    return ObjectModel(
        cm,
        [
            ObjectRecord("Patient", "p1"),
            ObjectRecord("Patient", "p2"),
            ObjectRecord("Topic", "a"),
            ObjectRecord("Topic", "b"),
            ObjectRecord("Team", "t1", {"patients": frozenset({"p1"})}),
            ObjectRecord("Team", "t2", {"patients": frozenset({"p1", "p2"})}),
            ObjectRecord(
                "Doctor",
                "doc",
                {
                    "teams": frozenset({"t1", "t2"}),
                    "mentor": None,
                    "specialties": frozenset({"a"}),
                    "isTrainee": False,
                },
            ),
            ObjectRecord(
                "Doctor",
                "junior",
                {
                    "teams": frozenset({"t1"}),
                    "mentor": "doc",
                    "specialties": frozenset(),
                    "isTrainee": True,
                },
            ),
            ObjectRecord("Record", "rec", {"patient": "p2", "team": "t2"}),
        ],
    )


def build_staff_acl(*, with_patients: bool) -> AclPolicy:
    """Jerarquia Person > Clinician > {Doctor, Nurse}; todo el personal entra a las salas."""
    declarations = [
        ClassDeclaration("Person"),
        ClassDeclaration("Clinician", "Person"),
        ClassDeclaration("Doctor", "Clinician"),
        ClassDeclaration("Nurse", "Clinician"),
        ClassDeclaration("Room"),
    ]
    objects = [
        ObjectRecord("Doctor", "doc1"),
        ObjectRecord("Doctor", "doc2"),
        ObjectRecord("Nurse", "nurse1"),
        ObjectRecord("Room", "room1"),
        ObjectRecord("Room", "room2"),
    ]
    if with_patients:
        declarations.append(ClassDeclaration("Patient", "Person"))
        objects.append(ObjectRecord("Patient", "pat1"))
    cm = ClassModel(declarations)
    om = ObjectModel(cm, objects)
    sp0 = frozenset(
        SubjectPermission(s, r, "enter")
        for s in ("doc1", "doc2", "nurse1")
        for r in ("room1", "room2")
    )
    return AclPolicy(cm, om, frozenset({"enter"}), sp0)


@pytest.fixture
def staff_acl() -> AclPolicy:
    return build_staff_acl(with_patients=False)


@pytest.fixture
def staff_acl_with_patients() -> AclPolicy:
    return build_staff_acl(with_patients=True)
