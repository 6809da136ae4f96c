"""Minado de politicas ReBAC (lenguaje ORAL) a partir de ACLs y un modelo de objetos."""

__version__ = "0.1.0"
