"""Excepciones de dominio controladas."""
from __future__ import annotations

from dataclasses import dataclass


class MinerError(RuntimeError):
    """Raiz de errores de dominio/control."""


class ModelIntegrityError(MinerError):
    """Modelo de clases u objetos inconsistente (referencias colgantes, ids repetidos...)."""


class PathTypeError(MinerError):
    """Ruta que no es type-correct respecto a su clase ancla."""

    def __init__(self, message: str, *, anchor: str, path: tuple[str, ...]) -> None:
        super().__init__(message)
        self.anchor = anchor
        self.path = path


@dataclass(frozen=True)
class WellFormednessIssue:
    """Requisito de buena formacion violado por una regla.

    `requirement` es el numero del requisito ("1", "2a", ... "9") o
    "unknown-class" / "unknown-field" para nombres no declarados.
    """

    requirement: str
    code: str
    message: str


class WellFormednessError(MinerError):
    def __init__(self, issue: WellFormednessIssue) -> None:
        super().__init__(issue.message)
        self.issue = issue


class ValidationError(MinerError):
    """Entradas invalidas (archivos, formatos, parametros) que se reportan al usuario."""


class RuleSyntaxError(ValidationError):
    """Error de sintaxis en texto ORAL con posicion."""

    def __init__(self, message: str, *, line: int, column: int) -> None:
        super().__init__(f"linea {line}, columna {column}: {message}")
        self.line = line
        self.column = column


class UnknownPolicyError(ValidationError):
    """Nombre de politica de ejemplo no soportado."""


class EncodingError(MinerError):
    """Regla no expresable como arbol de derivacion de la gramatica."""
