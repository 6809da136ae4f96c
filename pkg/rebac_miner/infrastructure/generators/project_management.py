"""Gestion de proyectos: departamentos, proyectos, tareas, presupuestos y cronogramas."""
from __future__ import annotations

import numpy as np

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

ONE, MANY = Multiplicity.one, Multiplicity.many

COUNTS = {
    "Department": 2.0,
    "Project": 2.0,
    "Task": 4.0,
    "Expertise": 8.0,
    "Organization": 4.0,
    "Employee": 5.0,
    "Manager": 1.0,
    "ProjectLeader": 1.0,
    "Accountant": 1.0,
    "Planner": 1.0,
    "Contractor": 2.0,
    "Auditor": 0.6,
}
EMPLOYEE_CLASSES = ("Employee", "Manager", "ProjectLeader", "Accountant", "Planner")
PROPRIETARY_PROBABILITY = 0.5
OWN_DEPARTMENT_PROBABILITY = 0.8
SECOND_PROJECT_PROBABILITY = 0.2

RULES = """
rule(Manager; true; Budget; true; subject.department = resource.project.department; {approve, read, reject})
rule(Manager; true; Schedule; true; subject.department = resource.project.department; {approve, comment, read})
rule(ProjectLeader; true; Budget; true; subject.leads contains resource.project; {read, submit, write})
rule(ProjectLeader; true; Schedule; true; subject.leads contains resource.project; {publish, read, write})
rule(ProjectLeader; true; Task; true; subject.leads contains resource.project; {assign, close, read})
rule(User; true; Task; true; subject = resource.assignee; {logHours, read, updateStatus})
rule(Employee; true; Task; true; subject.projects contains resource.project and subject.expertise supseteq resource.expertise; {read})
rule(Contractor; true; Task; resource.proprietary = false; subject.projects contains resource.project and subject.expertise supseteq resource.expertise; {comment, read, subscribe})
rule(Employee; true; Schedule; true; subject.projects contains resource.project; {read})
rule(Auditor; true; Budget; true; subject.audits contains resource.project; {audit, flag, read, requestRevision})
rule(Accountant; true; Budget; true; subject.department = resource.project.department; {read, reconcile, releaseFunds, write})
rule(Planner; true; Schedule; true; subject.department = resource.project.department; {publish, read, write})
rule(Planner; true; Task; true; subject.department = resource.project.department and subject.expertise supseteq resource.expertise; {estimate, read, reassign, schedule})
"""  # noqa: E501


class ProjectManagementGenerator(PolicyGenerator):
    name = PolicyName.project_management
    default_n = 5
    rules_text = RULES

    def build_class_model(self) -> ClassModel:
        worker_fields = (
            FieldDeclaration("projects", "Project", MANY),
            FieldDeclaration("expertise", "Expertise", MANY),
        )
        return ClassModel(
            [
                ClassDeclaration("Department"),
                ClassDeclaration("Expertise"),
                ClassDeclaration("Organization"),
                ClassDeclaration(
                    "Project", None, (FieldDeclaration("department", "Department", ONE),)
                ),
                ClassDeclaration(
                    "Task",
                    None,
                    (
                        FieldDeclaration("project", "Project", ONE),
                        FieldDeclaration("assignee", "User", ONE),
                        FieldDeclaration("expertise", "Expertise", MANY),
                        FieldDeclaration("proprietary", BOOLEAN_TYPE, ONE),
                    ),
                ),
                ClassDeclaration("Budget", None, (FieldDeclaration("project", "Project", ONE),)),
                ClassDeclaration(
                    "Schedule", None, (FieldDeclaration("project", "Project", ONE),)
                ),
                ClassDeclaration("User"),
                ClassDeclaration(
                    "Employee",
                    "User",
                    (FieldDeclaration("department", "Department", ONE), *worker_fields),
                ),
                ClassDeclaration(
                    "Contractor",
                    "User",
                    (*worker_fields, FieldDeclaration("employer", "Organization", ONE)),
                ),
                ClassDeclaration("Manager", "Employee"),
                ClassDeclaration(
                    "ProjectLeader", "Employee", (FieldDeclaration("leads", "Project", MANY),)
                ),
                ClassDeclaration("Accountant", "Employee"),
                ClassDeclaration("Planner", "Employee"),
                ClassDeclaration("Auditor", "User", (FieldDeclaration("audits", "Project", MANY),)),
            ]
        )

    def _count(self, builder: ObjectModelBuilder, class_name: str, n: int) -> int:
        return scaled_count(builder.rng(f"{class_name}.count"), COUNTS[class_name] * n)

    def populate(self, builder: ObjectModelBuilder, n: int) -> None:
        departments = [
            builder.add("Department", f"dept{i}")
            for i in range(self._count(builder, "Department", n))
        ]
        expertise = [
            builder.add("Expertise", f"exp{i}") for i in range(self._count(builder, "Expertise", n))
        ]
        expertise_weights = zipf_weights(len(expertise))
        organizations = [
            builder.add("Organization", f"org{i}")
            for i in range(self._count(builder, "Organization", n))
        ]

        rng = builder.rng("Project")
        projects: list[str] = []
        by_department: dict[str, list[str]] = {d: [] for d in departments}
        for i in range(self._count(builder, "Project", n)):
            department = pick(rng, departments)
            project = builder.add("Project", f"proj{i}", department=department)
            builder.add("Budget", f"budget{i}", project=project)
            builder.add("Schedule", f"sched{i}", project=project)
            projects.append(project)
            by_department[department].append(project)

        def projects_for(rng: np.random.Generator, department: str | None) -> list[str]:
            k = 1 + int(bernoulli(rng, SECOND_PROJECT_PROBABILITY))
            local = by_department.get(department, []) if department else []
            if local and bernoulli(rng, OWN_DEPARTMENT_PROBABILITY):
                return sample(rng, local, k)
            return sample(rng, projects, k)

        members: dict[str, list[str]] = {p: [] for p in projects}
        for class_name in EMPLOYEE_CLASSES:
            rng = builder.rng(class_name)
            for i in range(self._count(builder, class_name, n)):
                department = pick(rng, departments)
                fields: dict[str, object] = {
                    "department": department,
                    "projects": projects_for(rng, department),
                    "expertise": sample(rng, expertise, int(rng.integers(2, 5)), expertise_weights),
                }
                if class_name == "ProjectLeader":
                    fields["leads"] = projects_for(rng, department)
                user = builder.add(class_name, f"{class_name.lower()}{i}", **fields)
                for project in fields["projects"]:  # type: ignore[attr-defined]
                    members[project].append(user)

        rng = builder.rng("Contractor")
        for i in range(self._count(builder, "Contractor", n)):
            user = builder.add(
                "Contractor",
                f"contractor{i}",
                projects=projects_for(rng, None),
                expertise=sample(rng, expertise, int(rng.integers(2, 5)), expertise_weights),
                employer=pick(rng, organizations),
            )
            for project in builder.refs(user, "projects"):
                members[project].append(user)

        rng = builder.rng("Auditor")
        for i in range(self._count(builder, "Auditor", n)):
            audits = sample(rng, projects, int(rng.integers(2, 5)))
            builder.add("Auditor", f"auditor{i}", audits=audits)

        rng = builder.rng("Task")
        everyone = [user for group in members.values() for user in group]
        for i in range(self._count(builder, "Task", n)):
            project = pick(rng, projects)
            builder.add(
                "Task",
                f"task{i}",
                project=project,
                assignee=pick(rng, members[project] or everyone),
                expertise=sample(rng, expertise, 1 + int(bernoulli(rng, 0.5)), expertise_weights),
                proprietary=bernoulli(rng, PROPRIETARY_PROBABILITY),
            )
