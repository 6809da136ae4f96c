"""Registro de generadores por nombre de politica."""
from __future__ import annotations

from rebac_miner.core.exceptions import UnknownPolicyError
from rebac_miner.domain.enums import PolicyName
from rebac_miner.infrastructure.generators.base import PolicyGenerator
from rebac_miner.infrastructure.generators.emr import EmrGenerator
from rebac_miner.infrastructure.generators.healthcare import HealthcareGenerator
from rebac_miner.infrastructure.generators.project_management import (
    ProjectManagementGenerator,
)
from rebac_miner.infrastructure.generators.university import UniversityGenerator

_GENERATORS: dict[PolicyName, type[PolicyGenerator]] = {
    PolicyName.emr: EmrGenerator,
    PolicyName.healthcare: HealthcareGenerator,
    PolicyName.project_management: ProjectManagementGenerator,
    PolicyName.university: UniversityGenerator,
}


def get_generator(name: PolicyName | str) -> PolicyGenerator:
    try:
        policy = PolicyName(name)
    except ValueError as exc:
        known = ", ".join(p.value for p in PolicyName)
        raise UnknownPolicyError(f"Politica desconocida: {name} (disponibles: {known})") from exc
    return _GENERATORS[policy]()
