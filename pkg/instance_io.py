# instance_io.py

import json
import logging
import re
from pathlib import Path
from typing import Any, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from errors import InstanceFormatError
from models import InstanceFile, Trace, VerificationReport

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

_QUOTED = re.compile(r"'([^']+)'")


def _line_of(text: str, token: str) -> Optional[int]:
    """1-based line of the first occurrence of "token" as a JSON string or key."""
    needle = json.dumps(token)
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _locate(text: str, error: dict) -> Optional[int]:
    for part in reversed(error.get("loc", ())):
        if isinstance(part, str):
            line = _line_of(text, part)
            if line is not None:
                return line
    match = _QUOTED.search(error.get("msg", ""))
    if match:
        return _line_of(text, match.group(1))
    return None


def _parse(text: str, model: Type[ModelT], what: str) -> ModelT:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        logger.warning(f"Malformed {what}: {e}")
        raise InstanceFormatError(f"{what} is not valid JSON: {e.msg} (column {e.colno})", line=e.lineno)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
        logger.warning(f"Invalid {what} at {path}: {first['msg']}")
        raise InstanceFormatError(f"invalid {what} at {path}: {first['msg']}", line=_locate(text, first))


def _dump(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read {what} '{path}': {e}")
        raise InstanceFormatError(f"cannot read {what} '{path}': {e.strerror}")


def parse_instance(text: str) -> InstanceFile:
    return _parse(text, InstanceFile, "instance")


def serialize_instance(instance: InstanceFile) -> str:
    return _dump(instance.model_dump(mode="json"))


def load_instance(path: str) -> InstanceFile:
    instance = parse_instance(_read(path, "instance"))
    logger.info(f"Loaded instance '{path}' with {len(instance.divisor_names)} supports and {len(instance.divisors)} divisors.")
    return instance


def parse_trace(text: str) -> Trace:
    return _parse(text, Trace, "trace")


def serialize_trace(trace: Trace) -> str:
    """Trace as JSON with stable key order; Bottom is written as "-inf"."""
    return _dump(trace.model_dump(mode="json"))


def load_trace(path: str) -> Trace:
    return parse_trace(_read(path, "trace"))


def serialize_report(report: VerificationReport) -> str:
    return _dump(report.model_dump(mode="json"))


def write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot write '{path}': {e}")
        raise InstanceFormatError(f"cannot write '{path}': {e.strerror}")
    logger.info(f"Wrote {path}")
