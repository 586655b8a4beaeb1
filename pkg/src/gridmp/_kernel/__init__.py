"""Kernel selection: compiled extension when available, pure Python otherwise.

The environment variable ``GRIDMP_BACKEND`` (``accel`` or ``pure``) forces a
choice at import time; ``use_backend`` switches at runtime, which the
benchmark and the backend-parity tests rely on.
"""

from __future__ import annotations

import os

from . import pure as _pure

try:
    from . import _accel
except ImportError:
    _accel = None

_BY_NAME = {"pure": _pure}
if _accel is not None:
    _BY_NAME["accel"] = _accel


def _initial():
    forced = os.environ.get("GRIDMP_BACKEND")
    if forced:
        if forced not in ("pure", "accel"):
            raise ValueError(f"GRIDMP_BACKEND must be 'pure' or 'accel', got {forced!r}")
        if forced == "accel" and _accel is None:
            raise ImportError("GRIDMP_BACKEND=accel but the compiled kernel is not importable")
        return _BY_NAME[forced]
    return _accel if _accel is not None else _pure


_active = _initial()


def backend_name() -> str:
    return _active.BACKEND


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BY_NAME))


def use_backend(name: str):
    """Select a kernel by name ('pure' or 'accel'); returns the previous name."""
    global _active
    if name not in _BY_NAME:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    previous = backend_name()
    _active = _BY_NAME[name]
    return previous


def max_matching_edges(arrays, banned_edges=(), banned_verts=()):
    return _active.max_matching_edges(arrays, banned_edges, banned_verts)


def find_preclusion_sets(arrays, candidates, k, target, base_match=None,
                         banned_verts=(), exhaustive=False, find_all=True):
    return _active.find_preclusion_sets(arrays, candidates, k, target,
                                        base_match, banned_verts, exhaustive,
                                        find_all)
