"""Codificacion JSON (orjson) de los documentos de un bundle."""
from __future__ import annotations

from typing import TypeVar

import orjson
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from rebac_miner.core.exceptions import ValidationError

DocumentT = TypeVar("DocumentT", bound=BaseModel)

_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE


def dumps(document: BaseModel) -> bytes:
    return orjson.dumps(document.model_dump(mode="json", by_alias=True), option=_OPTIONS)


def loads(raw: bytes | str, model: type[DocumentT], source: str = "") -> DocumentT:
    where = source or model.__name__
    try:
        data = orjson.loads(raw)
    except orjson.JSONDecodeError as exc:
        raise ValidationError(f"{where}: JSON invalido ({exc})") from exc
    try:
        return model.model_validate(data)
    except PydanticValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ValidationError(f"{where}: {location}: {first['msg']}") from exc
