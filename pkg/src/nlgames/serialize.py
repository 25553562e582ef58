"""JSON formats for games, matrices, correlations, strategies and trace data.

Complex numbers are ``[re, im]`` pairs; matrices are row-major.  Every loader
raises ``InputError`` naming the offending field.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .constructors import HomSpec, TraceSpec
from .correlations import Correlation
from .errors import InputError, NlgError
from .game_model import Game, validate_game
from .strategies import CommutingStrategy, DeterministicStrategy, TensorStrategy


def plain(obj):
    """Recursively convert numpy scalars/arrays and tuples to JSON types; nan/inf become None."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(plain(obj), sort_keys=True, indent=1, allow_nan=False) + "\n"


def _field(d, key, where):
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected an object, got {type(d).__name__}")
    if key not in d:
        raise InputError(f"{where}: missing field '{key}'")
    return d[key]


def _int(d, key, where):
    v = _field(d, key, where)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}: field '{key}' must be an integer, got {v!r}")
    return v


# matrices

def matrix_to_json(m):
    m = np.asarray(m, dtype=np.complex128)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)]}


def vector_to_json(v):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"dim": int(v.size), "data": [[float(z.real), float(z.imag)] for z in v]}


def _complex_list(data, n, where):
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError):
        raise InputError(f"{where}: field 'data' must be a list of [re, im] pairs") from None
    if arr.shape != (n, 2):
        raise InputError(f"{where}: field 'data' has shape {arr.shape}, expected {(n, 2)}")
    return arr[:, 0] + 1j * arr[:, 1]


def matrix_from_json(d, where="matrix"):
    r, c = _int(d, "rows", where), _int(d, "cols", where)
    return _complex_list(_field(d, "data", where), r * c, where).reshape(r, c)


def vector_from_json(d, where="vector"):
    n = _int(d, "dim", where)
    return _complex_list(_field(d, "data", where), n, where)


def _family_to_json(fam):
    return [[matrix_to_json(m) for m in pvm] for pvm in fam]


def _family_from_json(data, where):
    if not isinstance(data, list) or not data:
        raise InputError(f"{where}: expected a non-empty list of PVMs")
    out = []
    for q, pvm in enumerate(data):
        if not isinstance(pvm, list) or not pvm:
            raise InputError(f"{where}[{q}]: expected a non-empty list of matrices")
        out.append([matrix_from_json(m, f"{where}[{q}][{a}]") for a, m in enumerate(pvm)])
    shapes = {m.shape for pvm in out for m in pvm}
    if len(shapes) != 1 or len({len(pvm) for pvm in out}) != 1:
        raise InputError(f"{where}: PVMs must share answer count and matrix shape")
    return np.array(out)


# games

def game_to_json(g: Game):
    return {"x": g.x_count, "y": g.y_count, "a": g.a_count, "b": g.b_count,
            "win": [list(t) for t in g.wins()]}


def game_from_json(d, where="game"):
    counts = [_int(d, k, where) for k in ("x", "y", "a", "b")]
    for k, c in zip("xyab", counts):
        if c < 1:
            raise InputError(f"{where}: field '{k}' must be >= 1, got {c}")
    wins = _field(d, "win", where)
    if not isinstance(wins, list):
        raise InputError(f"{where}: field 'win' must be a list")
    lam = np.zeros(counts, dtype=np.int8)
    for i, t in enumerate(wins):
        if (not isinstance(t, list) or len(t) != 4
                or not all(isinstance(v, int) and 0 <= v < c for v, c in zip(t, counts))):
            raise InputError(f"{where}: field 'win[{i}]' = {t!r} is not a valid (x, y, a, b) tuple")
        lam[tuple(t)] = 1
    g = Game(*counts, lam)
    validate_game(g)
    return g


# correlations

def correlation_to_json(c: Correlation):
    x, y, a, b = c.shape
    return {"x": x, "y": y, "a": a, "b": b, "p": [float(v) for v in c.p.reshape(-1)],
            "tol": c.tol}


def correlation_from_json(d, where="correlation"):
    counts = [_int(d, k, where) for k in ("x", "y", "a", "b")]
    p = _field(d, "p", where)
    try:
        arr = np.array(p, dtype=np.float64)
    except (TypeError, ValueError):
        raise InputError(f"{where}: field 'p' must be a list of numbers") from None
    if arr.shape != (int(np.prod(counts)),):
        raise InputError(f"{where}: field 'p' has {arr.size} entries, expected {int(np.prod(counts))}")
    tol = float(d.get("tol", 1e-8))
    try:
        return Correlation(arr.reshape(counts), tol)
    except NlgError as e:
        raise InputError(f"{where}: field 'p': {e}") from None


# strategies

def strategy_to_json(s):
    if isinstance(s, TensorStrategy):
        return {"dim_a": s.dim_a, "dim_b": s.dim_b, "psi": vector_to_json(s.psi),
                "alice": _family_to_json(s.alice), "bob": _family_to_json(s.bob)}
    if isinstance(s, CommutingStrategy):
        return {"dim": s.dim, "psi": vector_to_json(s.psi),
                "alice": _family_to_json(s.alice), "bob": _family_to_json(s.bob)}
    raise TypeError(f"not a strategy: {type(s).__name__}")


def strategy_from_json(d, where="strategy"):
    """Tensor strategy if ``dim_a``/``dim_b`` are present, commuting strategy if ``dim`` is."""
    psi = vector_from_json(_field(d, "psi", where), f"{where}.psi")
    alice = _family_from_json(_field(d, "alice", where), f"{where}.alice")
    bob = _family_from_json(_field(d, "bob", where), f"{where}.bob")
    if "dim_a" in d or "dim_b" in d:
        da, db = _int(d, "dim_a", where), _int(d, "dim_b", where)
        if alice.shape[2:] != (da, da):
            raise InputError(f"{where}: field 'alice' matrices are {alice.shape[2:]}, dim_a = {da}")
        if bob.shape[2:] != (db, db):
            raise InputError(f"{where}: field 'bob' matrices are {bob.shape[2:]}, dim_b = {db}")
        if psi.size != da * db:
            raise InputError(f"{where}: field 'psi' has dim {psi.size}, expected {da * db}")
        return TensorStrategy(da, db, psi, alice, bob)
    n = _int(d, "dim", where)
    for k, fam in (("alice", alice), ("bob", bob)):
        if fam.shape[2:] != (n, n):
            raise InputError(f"{where}: field '{k}' matrices are {fam.shape[2:]}, dim = {n}")
    if psi.size != n:
        raise InputError(f"{where}: field 'psi' has dim {psi.size}, expected {n}")
    return CommutingStrategy(n, psi, alice, bob)


def deterministic_to_json(s: DeterministicStrategy):
    return {"f": list(s.f), "g": list(s.g)}


def deterministic_from_json(d, where="deterministic"):
    f, g = _field(d, "f", where), _field(d, "g", where)
    for k, v in (("f", f), ("g", g)):
        if not isinstance(v, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in v):
            raise InputError(f"{where}: field '{k}' must be a list of integers")
    return DeterministicStrategy(tuple(f), tuple(g))


# trace data

def tracespec_to_json(t: TraceSpec):
    return {"dim": t.dim, "density": matrix_to_json(t.density)}


def tracespec_from_json(d, where="trace"):
    n = _int(d, "dim", where)
    rho = matrix_from_json(_field(d, "density", where), f"{where}.density")
    if rho.shape != (n, n):
        raise InputError(f"{where}: field 'density' is {rho.shape}, dim = {n}")
    return TraceSpec(n, rho)


def homspec_to_json(h: HomSpec):
    return {"dim": h.dim, "alice": _family_to_json(h.alice), "bob": _family_to_json(h.bob)}


def homspec_from_json(d, where="hom"):
    n = _int(d, "dim", where)
    alice = _family_from_json(_field(d, "alice", where), f"{where}.alice")
    bob = _family_from_json(_field(d, "bob", where), f"{where}.bob")
    for k, fam in (("alice", alice), ("bob", bob)):
        if fam.shape[2:] != (n, n):
            raise InputError(f"{where}: field '{k}' matrices are {fam.shape[2:]}, dim = {n}")
    return HomSpec(n, alice, bob)


# files

def load_json(path):
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except FileNotFoundError:
        raise InputError(f"{p}: file not found") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{p}: invalid JSON ({e.msg} at line {e.lineno})") from None


def load(path, loader):
    """Read ``path`` and parse it with ``loader``; errors name the file."""
    d = load_json(path)
    try:
        return loader(d, where=str(path))
    except InputError:
        raise
    except NlgError as e:
        raise InputError(f"{path}: {e}") from None


def save(path, obj):
    Path(path).write_text(dumps(obj))
