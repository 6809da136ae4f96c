"""Registros medicos electronicos: medicos, pacientes, consultas y registros medicos."""
from __future__ import annotations

from rebac_miner.domain.entities import ClassDeclaration, ClassModel, FieldDeclaration
from rebac_miner.domain.enums import BOOLEAN_TYPE, Multiplicity, PolicyName
from rebac_miner.infrastructure.generators.base import ObjectModelBuilder, PolicyGenerator
from rebac_miner.infrastructure.generators.rng import (
    bernoulli,
    pick,
    sample,
    scaled_count,
    zipf_weights,
)

ONE, OPTIONAL, MANY = Multiplicity.one, Multiplicity.optional, Multiplicity.many

# instancias por unidad de n
COUNTS = {
    "Hospital": 0.4,
    "Physician": 2.0,
    "Patient": 4.0,
    "Consultation": 14.6,
    "MedicalRecord": 1.65,
}
TRAINEE_PROBABILITY = 0.3
EXTRA_REGISTRATION_PROBABILITY = 0.4
CONSENT_COUNT_PROBABILITIES = (0.5, 0.35, 0.15)
LOCAL_PHYSICIAN_PROBABILITY = 0.8

RULES = """
# Ecuacion de ejemplo: medico no residente, consulta propia en un hospital del paciente
rule(Physician; subject.isTrainee = false; Consultation; true; subject = resource.physician and subject.affiliation in resource.patient.registrations; {createMedicalRecord})
rule(Physician; true; MedicalRecord; true; subject = resource.consultation.physician; {addEntry, archive, print, read, share, sign, update})
rule(Physician; true; MedicalRecord; true; subject = resource.consultation.physician.supervisor; {addComment, countersign, print, read, share})
rule(Patient; true; MedicalRecord; true; subject = resource.patient; {export, print, read, requestCorrection, share})
rule(Physician; true; MedicalRecord; true; subject in resource.patient.consents and subject.affiliation in resource.patient.registrations; {addComment, print, read, share})
rule(Patient; true; Physician; true; subject.consents contains resource; {bookAppointment, rate, revokeConsent, sendMessage, viewProfile})
"""  # noqa: E501


class EmrGenerator(PolicyGenerator):
    name = PolicyName.emr
    default_n = 15
    rules_text = RULES

    def build_class_model(self) -> ClassModel:
        return ClassModel(
            [
                ClassDeclaration("Person"),
                ClassDeclaration("Hospital"),
                ClassDeclaration(
                    "Physician",
                    "Person",
                    (
                        FieldDeclaration("isTrainee", BOOLEAN_TYPE, ONE),
                        FieldDeclaration("affiliation", "Hospital", ONE),
                        FieldDeclaration("supervisor", "Physician", OPTIONAL),
                        FieldDeclaration("consultations", "Consultation", MANY),
                    ),
                ),
                ClassDeclaration(
                    "Patient",
                    "Person",
                    (
                        FieldDeclaration("registrations", "Hospital", MANY),
                        FieldDeclaration("consents", "Physician", MANY),
                        FieldDeclaration("consultations", "Consultation", MANY),
                    ),
                ),
                ClassDeclaration(
                    "Consultation",
                    None,
                    (
                        FieldDeclaration("physician", "Physician", ONE),
                        FieldDeclaration("patient", "Patient", ONE),
                    ),
                ),
                ClassDeclaration(
                    "MedicalRecord",
                    None,
                    (
                        FieldDeclaration("consultation", "Consultation", ONE),
                        FieldDeclaration("patient", "Patient", ONE),
                    ),
                ),
            ]
        )

    def populate(self, builder: ObjectModelBuilder, n: int) -> None:
        hospitals = [
            builder.add("Hospital", f"hosp{i}")
            for i in range(scaled_count(builder.rng("Hospital.count"), COUNTS["Hospital"] * n))
        ]
        popularity = zipf_weights(len(hospitals))

        rng = builder.rng("Physician")
        physicians: list[str] = []
        staff: dict[str, list[str]] = {h: [] for h in hospitals}
        for i in range(scaled_count(builder.rng("Physician.count"), COUNTS["Physician"] * n)):
            affiliation = pick(rng, hospitals, popularity)
            physician = builder.add(
                "Physician",
                f"phy{i}",
                isTrainee=bernoulli(rng, TRAINEE_PROBABILITY),
                affiliation=affiliation,
                supervisor=None,
                consultations=[],
            )
            physicians.append(physician)
            staff[affiliation].append(physician)

        rng = builder.rng("Physician.supervisor")
        seniors = [p for p in physicians if not builder.get(p, "isTrainee")]
        for physician in physicians:
            if not builder.get(physician, "isTrainee") or not seniors:
                continue
            local = [
                p for p in staff[builder.ref(physician, "affiliation")] if p in seniors
            ]
            builder.set(physician, "supervisor", pick(rng, local or seniors))

        rng = builder.rng("Patient")
        patients: list[str] = []
        for i in range(scaled_count(builder.rng("Patient.count"), COUNTS["Patient"] * n)):
            k = 1 + int(bernoulli(rng, EXTRA_REGISTRATION_PROBABILITY))
            registrations = sample(rng, hospitals, k, popularity)
            nearby = [p for h in registrations for p in staff[h]]
            consents = sample(
                rng,
                nearby or physicians,
                int(rng.choice(len(CONSENT_COUNT_PROBABILITIES), p=CONSENT_COUNT_PROBABILITIES)),
            )
            patients.append(
                builder.add(
                    "Patient",
                    f"pat{i}",
                    registrations=registrations,
                    consents=consents,
                    consultations=[],
                )
            )

        rng = builder.rng("Consultation")
        consultations: list[str] = []
        for i in range(
            scaled_count(builder.rng("Consultation.count"), COUNTS["Consultation"] * n)
        ):
            patient = pick(rng, patients)
            nearby = [p for h in builder.refs(patient, "registrations") for p in staff[h]]
            if nearby and bernoulli(rng, LOCAL_PHYSICIAN_PROBABILITY):
                physician = pick(rng, nearby)
            else:
                physician = pick(rng, physicians)
            consultation = builder.add(
                "Consultation", f"consult{i}", physician=physician, patient=patient
            )
            builder.append(physician, "consultations", consultation)
            builder.append(patient, "consultations", consultation)
            consultations.append(consultation)

        rng = builder.rng("MedicalRecord")
        count = scaled_count(builder.rng("MedicalRecord.count"), COUNTS["MedicalRecord"] * n)
        for i, consultation in enumerate(sample(rng, consultations, count)):
            builder.add(
                "MedicalRecord",
                f"rec{i}",
                consultation=consultation,
                patient=builder.get(consultation, "patient"),
            )
