import hashlib
import logging
import os
import tempfile
from typing import Iterable, Union

_TRUE = frozenset(("y", "yes", "t", "true", "on", "1"))
_FALSE = frozenset(("n", "no", "f", "false", "off", "0"))


class MakeFileHandler(logging.FileHandler):
    """
    File handler for `--log-file`; missing parent directories are created.
    """

    def __init__(
        self,
        filename: Union[str, os.PathLike],
        mode: str = "a",
        encoding: str = "utf-8",
        delay: bool = False,
    ):
        os.makedirs(os.path.dirname(os.path.abspath(filename)), exist_ok=True)
        super().__init__(filename, mode, encoding, delay)


def strtobool(value: str) -> bool:
    """
    Boolean environment values: yes/no, true/false, on/off, 1/0 and their
    one-letter forms, in any case.
    """
    value = value.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ValueError(f"{value!r} is not a boolean")


def content_digest(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def atomic_write(path: Union[str, os.PathLike], payload: bytes) -> None:
    """
    Write `payload` to `path` so readers see either the old or the new file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def format_word(word: Iterable[int]) -> str:
    """
    Render a reduced word the way the CLI accepts it: "0,1,0"; "" for identity.
    """
    return ",".join(str(i) for i in word)
