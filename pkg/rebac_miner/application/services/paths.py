"""Grafo de clases y enumeracion de rutas para condiciones y restricciones."""
from __future__ import annotations

from functools import lru_cache

import networkx as nx

from rebac_miner.domain.entities import ID_FIELD, AtomicConstraint, ClassModel, Path
from rebac_miner.domain.enums import BOOLEAN_TYPE
from rebac_miner.domain.semantics import op_from_mul


class ClassGraph:
    """graph(CM): arista c1 -> c2 (clave = campo) si c1 tiene un campo de tipo c2."""

    def __init__(self, class_model: ClassModel) -> None:
        self.class_model = class_model
        self.graph: nx.MultiDiGraph = nx.MultiDiGraph()
        self.graph.add_nodes_from(class_model.class_names)
        for cls in class_model.class_names:
            for fd in class_model.fields_of(cls):
                if fd.is_reference:
                    self.graph.add_edge(cls, fd.type, key=fd.name)
        self.reach = lru_cache(maxsize=None)(self._reach)
        self.paths = lru_cache(maxsize=None)(self._paths)

    def _reach(self, cls: str) -> frozenset[str]:
        """Clases alcanzables desde `cls` (ella incluida) y sus superclases."""
        reachable = {cls} | nx.descendants(self.graph, cls)
        for name in list(reachable):
            reachable.update(self.class_model.ancestors(name))
        return frozenset(reachable)

    def _ends_at(self, node: str, target: str) -> bool:
        return self.class_model.is_subclass(node, target)

    def shortest_length(self, source: str, target: str) -> int | None:
        lengths = nx.single_source_shortest_path_length(self.graph, source)
        matches = [d for node, d in lengths.items() if self._ends_at(node, target)]
        return min(matches) if matches else None

    def _paths(self, source: str, target: str, extra: int, cap: int) -> tuple[Path, ...]:
        """Rutas sin aristas repetidas de `source` a `target` (o subclase).

        Su longitud es a lo sumo la del camino mas corto mas `extra`, y nunca mayor que `cap`.
        """
        shortest = self.shortest_length(source, target)
        if shortest is None:
            return ()
        limit = min(shortest + extra, cap)
        found: set[Path] = set()

        def walk(node: str, path: Path, used: frozenset[tuple[str, str, str]]) -> None:
            if self._ends_at(node, target):
                found.add(path)
            if len(path) >= limit:
                return
            for _, nxt, key in self.graph.out_edges(node, keys=True):
                edge = (node, nxt, key)
                if edge not in used:
                    walk(nxt, (*path, key), used | {edge})

        if shortest <= limit:
            walk(source, (), frozenset())
        return tuple(sorted(found, key=lambda p: (len(p), p)))

    def constraint_candidates(
        self, subject_type: str, resource_type: str, *, sped: int, rped: int, mtpl: int
    ) -> tuple[AtomicConstraint, ...]:
        """Restricciones atomicas type-correct entre rutas de tipo referencia."""
        cm = self.class_model
        result: set[AtomicConstraint] = set()
        common = self.reach(subject_type) & self.reach(resource_type)
        for target in sorted(common):
            for first in self.paths(subject_type, target, sped, mtpl):
                for second in self.paths(resource_type, target, rped, mtpl - len(first)):
                    if len(first) + len(second) > mtpl:
                        continue
                    info1 = cm.resolve_path(subject_type, first)
                    info2 = cm.resolve_path(resource_type, second)
                    if not cm.related(info1.type, info2.type):
                        continue
                    op = op_from_mul(info1.multiplicity, info2.multiplicity)
                    result.add(AtomicConstraint(first, op, second))
        return tuple(
            sorted(result, key=lambda c: (len(c.subject_path) + len(c.resource_path), repr(c)))
        )


def condition_paths(cm: ClassModel, cls: str, max_length: int) -> tuple[Path, ...]:
    """Rutas no referencia de longitud 1..max_length desde `cls`, sin el id propio.

    Un campo referencia solo puede cerrar la ruta a traves de su `id`.
    """
    found: list[Path] = []

    def walk(current: str, prefix: Path) -> None:
        for fd in cm.fields_of(current):
            if fd.name == ID_FIELD:
                continue
            path = (*prefix, fd.name)
            if fd.type == BOOLEAN_TYPE:
                if len(path) <= max_length:
                    found.append(path)
                continue
            if not fd.is_reference:
                continue
            if len(path) + 1 <= max_length:
                found.append((*path, ID_FIELD))
            if len(path) < max_length:
                walk(fd.type, path)

    if max_length >= 1:
        walk(cls, ())
    return tuple(sorted(set(found), key=lambda p: (len(p), p)))


def condition_path_for(cm: ClassModel, anchor: str, constraint_path: Path) -> Path:
    """Ruta de condicion que expresa el mismo valor que una ruta de restriccion."""
    info = cm.resolve_path(anchor, constraint_path)
    if info.type == BOOLEAN_TYPE:
        return constraint_path
    return (*constraint_path, ID_FIELD)
