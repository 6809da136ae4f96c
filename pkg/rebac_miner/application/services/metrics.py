"""Similitud sintactica y semantica por reglas entre una politica minada y una de referencia."""
from __future__ import annotations

from collections.abc import Callable, Collection, Iterable, Sequence
from fractions import Fraction

from rebac_miner.application.dtos.reports import RuleMatch, SimilarityReport
from rebac_miner.domain.complexity import wsc_policy
from rebac_miner.domain.entities import AtomicCondition, ObjectModel, Rule, WscWeights
from rebac_miner.domain.rendering import format_rule
from rebac_miner.domain.semantics import PolicyEvaluator

RuleSimilarity = Callable[[Rule, Rule], Fraction]


def jaccard(first: Collection[object], second: Collection[object]) -> Fraction:
    """|a ∩ b| / |a ∪ b|, con J(∅, ∅) = 1."""
    a, b = set(first), set(second)
    union = a | b
    if not union:
        return Fraction(1)
    return Fraction(len(a & b), len(union))


def _canonical(condition: Iterable[AtomicCondition]) -> frozenset[tuple]:
    # el azucar "=" y un "in" de un solo valor son la misma condicion
    return frozenset((c.path, c.op, c.values) for c in condition)


def rule_components(first: Rule, second: Rule) -> list[Fraction]:
    """Las seis similitudes de componentes, en el orden de la forma textual de la regla."""
    return [
        jaccard({first.subject_type}, {second.subject_type}),
        jaccard(_canonical(first.subject_condition), _canonical(second.subject_condition)),
        jaccard({first.resource_type}, {second.resource_type}),
        jaccard(_canonical(first.resource_condition), _canonical(second.resource_condition)),
        jaccard(first.constraint, second.constraint),
        jaccard(first.actions, second.actions),
    ]


def syn_sim_rules(first: Rule, second: Rule) -> Fraction:
    return sum(rule_components(first, second), Fraction(0)) / 6


def _canonical_order(rules: Iterable[Rule]) -> list[Rule]:
    return sorted(set(rules), key=format_rule)


def best_match(
    rule: Rule, reference: Sequence[Rule], similarity: RuleSimilarity
) -> tuple[Rule | None, Fraction]:
    """Regla de referencia mas parecida; a igual similitud gana la primera en orden canonico."""
    best: Rule | None = None
    best_score = Fraction(-1)
    for candidate in reference:
        score = similarity(rule, candidate)
        if score > best_score:
            best, best_score = candidate, score
    return best, max(best_score, Fraction(0))


def policy_similarity(
    mined: Iterable[Rule], reference: Iterable[Rule], similarity: RuleSimilarity
) -> Fraction:
    """Promedio sobre las reglas minadas de su mejor coincidencia en la referencia.

    No es simetrica: el primer argumento es la politica minada.
    """
    mined_rules = _canonical_order(mined)
    reference_rules = _canonical_order(reference)
    if not mined_rules:
        return Fraction(1) if not reference_rules else Fraction(0)
    if not reference_rules:
        return Fraction(0)
    total = sum(
        (best_match(rule, reference_rules, similarity)[1] for rule in mined_rules), Fraction(0)
    )
    return total / len(mined_rules)


def syn_sim_policies(mined: Iterable[Rule], reference: Iterable[Rule]) -> Fraction:
    return policy_similarity(mined, reference, syn_sim_rules)


def semantic_rule_similarity(evaluator: PolicyEvaluator) -> RuleSimilarity:
    def similarity(first: Rule, second: Rule) -> Fraction:
        return jaccard(evaluator.rule_meaning(first), evaluator.rule_meaning(second))

    return similarity


def rsem_sim_policies(
    object_model: ObjectModel | PolicyEvaluator, mined: Iterable[Rule], reference: Iterable[Rule]
) -> Fraction:
    """Similitud semantica por reglas: Jaccard de significados en lugar de componentes."""
    evaluator = (
        object_model
        if isinstance(object_model, PolicyEvaluator)
        else PolicyEvaluator(object_model)
    )
    return policy_similarity(mined, reference, semantic_rule_similarity(evaluator))


def similarity_report(
    object_model: ObjectModel,
    mined: Iterable[Rule],
    reference: Iterable[Rule],
    weights: WscWeights | None = None,
) -> SimilarityReport:
    mined_rules = _canonical_order(mined)
    reference_rules = _canonical_order(reference)
    evaluator = PolicyEvaluator(object_model)
    per_rule: list[RuleMatch] = []
    for rule in mined_rules:
        match, score = best_match(rule, reference_rules, syn_sim_rules)
        per_rule.append(
            RuleMatch(
                mined=format_rule(rule),
                best_match=format_rule(match) if match is not None else None,
                components=(
                    [float(c) for c in rule_components(rule, match)] if match is not None else []
                ),
                similarity=float(score),
            )
        )
    weights = weights or WscWeights()
    return SimilarityReport(
        syn_sim=float(syn_sim_policies(mined_rules, reference_rules)),
        rsem_sim=float(rsem_sim_policies(evaluator, mined_rules, reference_rules)),
        per_rule=per_rule,
        wsc_mined=wsc_policy(mined_rules, weights),
        wsc_reference=wsc_policy(reference_rules, weights),
    )
