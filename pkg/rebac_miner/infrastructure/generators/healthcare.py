"""Historias clinicas de un hospital: equipos tratantes, salas, agentes y entradas por tema."""
from __future__ import annotations

from rebac_miner.domain.entities import ClassDeclaration, ClassModel, FieldDeclaration
from rebac_miner.domain.enums import Multiplicity, PolicyName
from rebac_miner.infrastructure.generators.base import ObjectModelBuilder, PolicyGenerator
from rebac_miner.infrastructure.generators.rng import (
    bernoulli,
    pick,
    sample,
    scaled_count,
    zipf_weights,
)

ONE, MANY = Multiplicity.one, Multiplicity.many

COUNTS = {
    "Hospital": 1.0,
    "Ward": 16.0,
    "Team": 20.0,
    "Doctor": 8.0,
    "Nurse": 8.0,
    "Patient": 16.0,
    "Agent": 4.0,
    "HRItem": 48.0,
}
TOPICS = 12
# autor de una entrada: paciente, enfermera o medico
AUTHOR_PROBABILITIES = (0.2, 0.4, 0.4)

RULES = """
rule(Nurse; true; HealthRecord; true; subject.ward = resource.patient.ward; {addItem, addVitals, print, viewHistory, viewSummary})
rule(Clinician; true; HealthRecord; true; subject.teams contains resource.patient.treatingTeam; {addItem, print, viewHistory, viewSummary})
rule(Patient; true; HealthRecord; true; subject = resource.patient; {addNote, print, requestCopy, viewHistory, viewSummary})
rule(Agent; true; HealthRecord; true; subject.agentFor contains resource.patient; {addNote, print, requestCopy, viewHistory, viewSummary})
rule(Person; true; HRItem; true; subject = resource.author; {read, update})
rule(Nurse; true; HRItem; true; subject.ward = resource.record.patient.ward; {annotate, read})
rule(Doctor; true; HRItem; true; subject.teams contains resource.record.patient.treatingTeam and subject.specialties supseteq resource.topics; {annotate, read, sign})
rule(Patient; true; HRItem; true; subject = resource.record.patient; {read})
rule(Agent; true; HRItem; true; subject.agentFor contains resource.record.patient; {print, read})
"""  # noqa: E501


class HealthcareGenerator(PolicyGenerator):
    name = PolicyName.healthcare
    default_n = 5
    rules_text = RULES

    def build_class_model(self) -> ClassModel:
        return ClassModel(
            [
                ClassDeclaration("Person"),
                ClassDeclaration("Hospital"),
                ClassDeclaration("Ward", None, (FieldDeclaration("hospital", "Hospital", ONE),)),
                ClassDeclaration("Team", None, (FieldDeclaration("hospital", "Hospital", ONE),)),
                ClassDeclaration("Topic"),
                ClassDeclaration(
                    "Clinician",
                    "Person",
                    (
                        FieldDeclaration("teams", "Team", MANY),
                        FieldDeclaration("specialties", "Topic", MANY),
                    ),
                ),
                ClassDeclaration("Doctor", "Clinician"),
                ClassDeclaration("Nurse", "Clinician", (FieldDeclaration("ward", "Ward", ONE),)),
                ClassDeclaration(
                    "Patient",
                    "Person",
                    (
                        FieldDeclaration("ward", "Ward", ONE),
                        FieldDeclaration("treatingTeam", "Team", ONE),
                        FieldDeclaration("record", "HealthRecord", ONE),
                    ),
                ),
                ClassDeclaration(
                    "Agent", "Person", (FieldDeclaration("agentFor", "Patient", MANY),)
                ),
                ClassDeclaration(
                    "HealthRecord",
                    None,
                    (
                        FieldDeclaration("patient", "Patient", ONE),
                        FieldDeclaration("items", "HRItem", MANY),
                    ),
                ),
                ClassDeclaration(
                    "HRItem",
                    None,
                    (
                        FieldDeclaration("record", "HealthRecord", ONE),
                        FieldDeclaration("author", "Person", ONE),
                        FieldDeclaration("topics", "Topic", MANY),
                    ),
                ),
            ]
        )

    def _count(self, builder: ObjectModelBuilder, class_name: str, n: int) -> int:
        return scaled_count(builder.rng(f"{class_name}.count"), COUNTS[class_name] * n)

    def populate(self, builder: ObjectModelBuilder, n: int) -> None:
        hospitals = [
            builder.add("Hospital", f"hosp{i}") for i in range(self._count(builder, "Hospital", n))
        ]
        rng = builder.rng("Ward")
        wards = [
            builder.add("Ward", f"ward{i}", hospital=pick(rng, hospitals))
            for i in range(self._count(builder, "Ward", n))
        ]
        rng = builder.rng("Team")
        teams = [
            builder.add("Team", f"team{i}", hospital=pick(rng, hospitals))
            for i in range(self._count(builder, "Team", n))
        ]
        topics = [builder.add("Topic", f"topic{i}") for i in range(TOPICS)]
        topic_weights = zipf_weights(len(topics))

        rng = builder.rng("Doctor")
        doctors: list[str] = []
        members: dict[str, list[str]] = {t: [] for t in teams}
        for i in range(self._count(builder, "Doctor", n)):
            doctor_teams = sample(rng, teams, 1 + int(bernoulli(rng, 0.5)))
            doctor = builder.add(
                "Doctor",
                f"doc{i}",
                teams=doctor_teams,
                specialties=sample(rng, topics, int(rng.integers(1, 4)), topic_weights),
            )
            doctors.append(doctor)
            for team in doctor_teams:
                members[team].append(doctor)

        rng = builder.rng("Nurse")
        nurses: list[str] = []
        ward_nurses: dict[str, list[str]] = {w: [] for w in wards}
        for i in range(self._count(builder, "Nurse", n)):
            ward = pick(rng, wards)
            nurse = builder.add(
                "Nurse",
                f"nurse{i}",
                teams=[pick(rng, teams)],
                specialties=sample(rng, topics, 1, topic_weights),
                ward=ward,
            )
            nurses.append(nurse)
            ward_nurses[ward].append(nurse)

        rng = builder.rng("Patient")
        patients: list[str] = []
        for i in range(self._count(builder, "Patient", n)):
            record = f"hr{i}"
            patient = builder.add(
                "Patient",
                f"pat{i}",
                ward=pick(rng, wards),
                treatingTeam=pick(rng, teams),
                record=record,
            )
            builder.add("HealthRecord", record, patient=patient, items=[])
            patients.append(patient)

        rng = builder.rng("Agent")
        for i in range(self._count(builder, "Agent", n)):
            builder.add(
                "Agent", f"agent{i}", agentFor=sample(rng, patients, 1 + int(bernoulli(rng, 0.3)))
            )

        rng = builder.rng("HRItem")
        for i in range(self._count(builder, "HRItem", n)):
            patient = pick(rng, patients)
            record = builder.ref(patient, "record")
            kind = int(rng.choice(len(AUTHOR_PROBABILITIES), p=AUTHOR_PROBABILITIES))
            if kind == 0:
                author = patient
            elif kind == 1:
                author = pick(rng, ward_nurses[builder.ref(patient, "ward")] or nurses)
            else:
                author = pick(rng, members[builder.ref(patient, "treatingTeam")] or doctors)
            item = builder.add(
                "HRItem",
                f"item{i}",
                record=record,
                author=author,
                topics=sample(rng, topics, 1 + int(bernoulli(rng, 0.4)), topic_weights),
            )
            builder.append(record, "items", item)
