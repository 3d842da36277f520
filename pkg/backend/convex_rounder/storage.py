"""
filename: storage.py
description: Module for everything file/persistence/sessions related. Artifacts are written
    to a temporary sibling and renamed into place, and a command session removes what it
    wrote when the command fails.
"""

import json
import logging
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, IO

from pydantic import ValidationError

from convex_rounder.exceptions import ConvexRounderError, SpecError
from convex_rounder.models.body import Body
from convex_rounder.models.energy import QuadGauge
from convex_rounder.schemas import CommandResult, dump_body, dump_energy, parse_body

logger = logging.getLogger(__name__)


def write_atomic(path: str | Path, writer: Callable[[IO], None], binary: bool = False) -> Path:
    """
    Write a file through a temporary sibling that is renamed over <path> once complete.

    :param path: (str | Path) destination.
    :param writer: (Callable) receives the open temporary file and writes the content.
    :param binary: (bool) open the temporary file in binary mode.
    :return: (Path) the destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(handle, "wb" if binary else "w") as stream:
            writer(stream)
        os.replace(temporary, path)
    except BaseException:
        Path(temporary).unlink(missing_ok=True)
        raise
    return path


def write_text(path: str | Path, text: str) -> Path:
    return write_atomic(path, lambda stream: stream.write(text))


def write_json(path: str | Path, document) -> Path:
    return write_text(path, json.dumps(document, indent=2) + "\n")


def read_json(path: str | Path):
    """Load a JSON document, mapping unreadable or malformed files to SpecError"""
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise SpecError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise SpecError(f"{path} is not valid JSON: {e}")


def load_body(path: str | Path) -> Body:
    return parse_body(read_json(path))


def save_body(path: str | Path, body: Body) -> Path:
    return write_json(path, dump_body(body))


def save_energy(path: str | Path, energy: QuadGauge) -> Path:
    return write_json(path, dump_energy(energy))


class CommandSession:
    """Collects the payload and artifacts of one command invocation"""

    def __init__(self, command: str):
        self.result = CommandResult(command=command)

    @property
    def payload(self) -> dict:
        return self.result.payload

    @property
    def exit_code(self) -> int:
        return self.result.exit_code

    @exit_code.setter
    def exit_code(self, value: int) -> None:
        self.result.exit_code = value

    def artifact(self, path: Path) -> Path:
        self.result.artifacts.append(str(path))
        return path

    def rollback(self) -> None:
        for artifact in self.result.artifacts:
            Path(artifact).unlink(missing_ok=True)
        self.result.artifacts = []


@contextmanager
def command_session(command: str):
    """
    Custom command session in a context manager that conveniently maps errors to exit codes
    and always prints one JSON document on stdout.
    """
    session = CommandSession(command)
    try:
        yield session
    except ConvexRounderError as e:
        session.rollback()
        session.exit_code = e.exit_code
        session.result.payload = {"message": e.detail, "error": type(e).__name__}
        for key in ("witness", "trace"):
            attached = getattr(e, key, None)
            if attached is not None:
                session.payload[key] = attached.model_dump()
        logger.error("%s failed: %s", command, e.detail)
    except ValidationError as e:
        session.rollback()
        session.exit_code = 2
        session.result.payload = {"message": str(e), "error": "SpecError"}
        logger.error("%s failed: malformed document", command)
    except Exception as e:
        session.rollback()
        session.exit_code = 1
        session.result.payload = {"message": str(e), "error": type(e).__name__}
        logger.exception("%s failed unexpectedly", command)
    finally:
        sys.stdout.write(json.dumps(session.result.model_dump(mode="json")) + "\n")
        sys.stdout.flush()
