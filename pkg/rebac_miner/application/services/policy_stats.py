"""Tamanos de politicas: una fila por bundle o el promedio de varios."""
from __future__ import annotations

from collections.abc import Iterable, Sequence

from rebac_miner.application.dtos.reports import PolicyStats
from rebac_miner.core.exceptions import ValidationError
from rebac_miner.domain.entities import AclPolicy, Rule


def policy_stats(acl: AclPolicy, rules: Iterable[Rule]) -> PolicyStats:
    rule_list = list(rules)
    count = len(rule_list)
    conditions = sum(len(r.subject_condition) + len(r.resource_condition) for r in rule_list)
    constraints = sum(len(r.constraint) for r in rule_list)
    objects = len(acl.object_model)
    return PolicyStats(
        rules=count,
        conditions_per_rule=conditions / count if count else 0.0,
        constraints_per_rule=constraints / count if count else 0.0,
        classes=len(acl.class_model),
        objects=objects,
        fields_per_object=acl.object_model.field_count / objects if objects else 0.0,
        sp0=len(acl.sp0),
    )


def average_stats(rows: Sequence[PolicyStats]) -> PolicyStats:
    if not rows:
        msg = "Se necesita al menos un bundle para calcular estadisticas"
        raise ValidationError(msg)
    n = len(rows)
    totals = {
        name: sum(getattr(row, name) for row in rows) / n
        for name in PolicyStats.model_fields
        if name != "bundles"
    }
    return PolicyStats(**totals, bundles=sum(row.bundles for row in rows))
