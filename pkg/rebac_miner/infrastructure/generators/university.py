"""Universidad: cursos, notas, listas de clase, expedientes y solicitudes de admision."""
from __future__ import annotations

from rebac_miner.domain.entities import ClassDeclaration, ClassModel, FieldDeclaration
from rebac_miner.domain.enums import BOOLEAN_TYPE, Multiplicity, PolicyName
from rebac_miner.infrastructure.generators.base import ObjectModelBuilder, PolicyGenerator
from rebac_miner.infrastructure.generators.rng import bernoulli, pick, sample, scaled_count

ONE, MANY = Multiplicity.one, Multiplicity.many

COUNTS = {
    "Department": 1.0,
    "Course": 9.0,
    "Student": 24.0,
    "Faculty": 4.0,
    "Staff": 0.4,
    "Applicant": 32.0,
}
# departamentos administrativos con personal fijo
REGISTRAR, ADMISSIONS = "registrar", "admissions"
REGISTRAR_STAFF, ADMISSIONS_STAFF = 1, 1
TEACHING_ASSISTANT_PROBABILITY = 0.15
MEAN_COURSES_TAKEN = 3.0

RULES = """
rule(Student; true; Gradebook; true; subject.crsTaken contains resource.course; {readMyScores})
rule(Student; true; Gradebook; true; subject.crsTaught contains resource.course; {addScore, changeScore, commentScore, exportScores, readScore})
rule(Faculty; true; Gradebook; true; subject.crsTaught contains resource.course; {addScore, assignGrade, changeScore, exportScores, lockGrades, publishGrades, readScore})
rule(Staff; subject.department.id = registrar; Roster; true; true; {print, read, write})
rule(Faculty; true; Roster; true; subject.crsTaught contains resource.course; {email, export, print, read})
rule(Student; true; Transcript; true; subject = resource.student; {print, read})
rule(Faculty; subject.isChair = true; Transcript; true; subject.department = resource.student.department; {print, read})
rule(Staff; subject.department.id = registrar; Transcript; true; true; {read})
rule(User; true; Application; true; subject = resource.applicant; {checkStatus, withdraw})
rule(Staff; subject.department.id = admissions; Application; true; true; {comment, read, setStatus})
"""  # noqa: E501


class UniversityGenerator(PolicyGenerator):
    name = PolicyName.university
    default_n = 5
    rules_text = RULES

    def build_class_model(self) -> ClassModel:
        return ClassModel(
            [
                ClassDeclaration("User"),
                ClassDeclaration("Department"),
                ClassDeclaration(
                    "Course", None, (FieldDeclaration("department", "Department", ONE),)
                ),
                ClassDeclaration(
                    "Student",
                    "User",
                    (
                        FieldDeclaration("crsTaken", "Course", MANY),
                        FieldDeclaration("crsTaught", "Course", MANY),
                        FieldDeclaration("department", "Department", ONE),
                    ),
                ),
                ClassDeclaration(
                    "Faculty",
                    "User",
                    (
                        FieldDeclaration("crsTaught", "Course", MANY),
                        FieldDeclaration("department", "Department", ONE),
                        FieldDeclaration("isChair", BOOLEAN_TYPE, ONE),
                    ),
                ),
                ClassDeclaration(
                    "Staff", "User", (FieldDeclaration("department", "Department", ONE),)
                ),
                ClassDeclaration("Gradebook", None, (FieldDeclaration("course", "Course", ONE),)),
                ClassDeclaration("Roster", None, (FieldDeclaration("course", "Course", ONE),)),
                ClassDeclaration(
                    "Transcript", None, (FieldDeclaration("student", "Student", ONE),)
                ),
                ClassDeclaration(
                    "Application", None, (FieldDeclaration("applicant", "User", ONE),)
                ),
            ]
        )

    def _count(self, builder: ObjectModelBuilder, name: str, n: int, minimum: int = 1) -> int:
        return scaled_count(builder.rng(f"{name}.count"), COUNTS[name] * n, minimum=minimum)

    def populate(self, builder: ObjectModelBuilder, n: int) -> None:
        academic = [
            builder.add("Department", f"dept{i}")
            for i in range(self._count(builder, "Department", n))
        ]
        builder.add("Department", REGISTRAR)
        builder.add("Department", ADMISSIONS)

        rng = builder.rng("Course")
        courses: list[str] = []
        for i in range(self._count(builder, "Course", n)):
            course = builder.add("Course", f"course{i}", department=pick(rng, academic))
            builder.add("Gradebook", f"gradebook{i}", course=course)
            builder.add("Roster", f"roster{i}", course=course)
            courses.append(course)

        rng = builder.rng("Faculty")
        faculty: list[str] = []
        by_department: dict[str, list[str]] = {d: [] for d in academic}
        for i in range(self._count(builder, "Faculty", n)):
            department = pick(rng, academic)
            member = builder.add(
                "Faculty",
                f"fac{i}",
                crsTaught=[],
                department=department,
                isChair=not by_department[department],
            )
            faculty.append(member)
            by_department[department].append(member)

        rng = builder.rng("Faculty.crsTaught")
        for course in courses:
            local = by_department[builder.ref(course, "department")]
            builder.append(pick(rng, local or faculty), "crsTaught", course)

        rng = builder.rng("Student")
        for i in range(self._count(builder, "Student", n)):
            k = max(1, int(round(rng.normal(MEAN_COURSES_TAKEN, 1.0))))
            taken = sample(rng, courses, k)
            taught: list[str] = []
            if bernoulli(rng, TEACHING_ASSISTANT_PROBABILITY):
                taught = sample(rng, [c for c in courses if c not in taken], 1)
            student = builder.add(
                "Student",
                f"stu{i}",
                crsTaken=taken,
                crsTaught=taught,
                department=pick(rng, academic),
            )
            builder.add("Transcript", f"transcript{i}", student=student)

        rng = builder.rng("Staff")
        staff = [REGISTRAR] * REGISTRAR_STAFF + [ADMISSIONS] * ADMISSIONS_STAFF
        staff += [pick(rng, academic) for _ in range(self._count(builder, "Staff", n, 0))]
        for i, department in enumerate(staff):
            builder.add("Staff", f"staff{i}", department=department)

        for i in range(self._count(builder, "Applicant", n)):
            applicant = builder.add("User", f"applicant{i}")
            builder.add("Application", f"application{i}", applicant=applicant)
