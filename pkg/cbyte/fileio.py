"""Atomic file and directory writes: build under a temporary name, then rename."""

import contextlib
import os
import shutil
import tempfile
from pathlib import Path
from typing import Iterator, List, Mapping, Tuple, Union

PathLike = Union[str, Path]


def _stage_text(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp_name)
        raise
    return tmp_name


def atomic_write_texts(files: Mapping[PathLike, str]) -> List[Path]:
    """
    Write several text files so that either all of them appear or none do.

    Every file is staged under a sibling temp name before the first rename.
    If a rename fails, files already moved into place are removed again.
    """
    staged: List[Tuple[Path, str]] = []
    placed: List[Path] = []
    try:
        for path, text in files.items():
            path = Path(path)
            staged.append((path, _stage_text(path, text)))
        for path, tmp_name in staged:
            os.replace(tmp_name, path)
            placed.append(path)
    except BaseException:
        for _, tmp_name in staged:
            with contextlib.suppress(OSError):
                os.unlink(tmp_name)
        for path in placed:
            with contextlib.suppress(OSError):
                path.unlink()
        raise
    return [path for path, _ in staged]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write text to `path` via a sibling temp file and os.replace."""
    return atomic_write_texts({path: text})[0]


@contextlib.contextmanager
def atomic_directory(path: PathLike) -> Iterator[Path]:
    """
    Yield a temporary directory that becomes `path` when the block succeeds.

    `path` must not exist or must be an empty directory; on failure the
    temporary directory is removed and `path` is left untouched.
    """
    path = Path(path)
    if path.exists():
        if not path.is_dir() or any(path.iterdir()):
            raise FileExistsError(f"output directory {path} exists and is not empty")
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_dir = Path(tempfile.mkdtemp(prefix=f".{path.name}.", dir=path.parent))
    try:
        yield tmp_dir
        if path.exists():
            path.rmdir()
        os.replace(tmp_dir, path)
    except BaseException:
        shutil.rmtree(tmp_dir, ignore_errors=True)
        raise
