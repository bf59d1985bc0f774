"""
JSON codecs for the command line. Rational functions are {"num": [...], "den": [...]} with
coefficients in ascending powers of z; a plain number is a constant. Matrices are nested lists
of those. Output is written with sorted keys so identical inputs give identical bytes.
"""
import json
import math
from dataclasses import fields, is_dataclass
from numbers import Number
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import numpy as np

from .exceptions import ParseError, DimensionError
from .param import StateSpacePlant
from .ratcore import RationalFunction
from .realization import Realization, SignalSpace
from .robust import Perturbation
from .tfmat import TransferMatrix

__all__ = ['load_json', 'rational_from_json', 'matrix_from_json', 'realization_from_json', 'realization_to_json',
           'plant_arrays', 'plant_from_json', 'perturbation_from_json', 'to_jsonable', 'dumps']


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg} at line {e.lineno} column {e.colno}",
                         path=str(path), line=e.lineno) from e
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", path=str(path)) from e


def _require(d: Mapping, key: str, what: str):
    if not isinstance(d, Mapping):
        raise ParseError(f"{what} must be a JSON object, got {type(d).__name__}")
    if key not in d:
        raise ParseError(f"{what} lacks the field `{key}`", field=key)
    return d[key]


def _coefficients(x, what: str) -> np.ndarray:
    if isinstance(x, Number):
        x = [x]
    try:
        c = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{what} must be a list of numbers") from e
    if c.ndim != 1:
        raise ParseError(f"{what} must be a flat list of numbers")
    return c


def rational_from_json(x) -> RationalFunction:
    if isinstance(x, bool):
        raise ParseError("a rational function cannot be a boolean")
    if isinstance(x, Number):
        return RationalFunction.constant(float(x))
    num = _coefficients(_require(x, 'num', 'rational function'), 'num')
    den = _coefficients(x.get('den', [1.]), 'den')
    if not np.any(den):
        raise ParseError("rational function with zero denominator")
    return RationalFunction(num, den)


def matrix_from_json(x, what: str = 'matrix') -> TransferMatrix:
    """Nested list of entries; a single entry is a 1x1 matrix"""
    if isinstance(x, Mapping) and 'entries' in x and 'num' not in x:
        x = x['entries']
    if not isinstance(x, list):
        return TransferMatrix([[rational_from_json(x)]])
    if not x or not all(isinstance(row, list) for row in x):
        raise ParseError(f"{what} must be a non-empty list of rows")
    if len({len(row) for row in x}) != 1:
        raise ParseError(f"{what} has rows of different lengths")
    return TransferMatrix([[rational_from_json(e) for e in row] for row in x])


def _array(x, what: str) -> np.ndarray:
    try:
        a = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{what} must be a numeric matrix") from e
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise ParseError(f"{what} must be given as a list of rows")
    return a


def plant_arrays(d: Mapping) -> Dict[str, np.ndarray]:
    """The A, B (and C, D when present) matrices of a plant file"""
    out = {k: _array(_require(d, k, 'plant'), k) for k in 'AB'}
    for k in 'CD':
        if d.get(k) is not None:
            out[k] = _array(d[k], k)
    return out


def plant_from_json(d: Mapping) -> StateSpacePlant:
    arrays = plant_arrays(d)
    if 'C' not in arrays:
        raise ParseError("plant lacks the field `C`", field='C')
    try:
        return StateSpacePlant(arrays['A'], arrays['B'], arrays['C'], arrays.get('D'))
    except DimensionError as e:
        raise ParseError(e.message, **e.details) from e


def _space(d: Mapping) -> SignalSpace:
    signals = _require(d, 'signals', 'realization')
    try:
        return SignalSpace([(s['name'], int(s['dim'])) for s in signals])
    except (KeyError, TypeError) as e:
        raise ParseError("signals must be a list of {\"name\", \"dim\"} objects") from e
    except ValueError as e:
        raise ParseError(str(e)) from e


def _blocks(space: SignalSpace, items, what: str) -> Dict:
    blocks = {}
    for item in items:
        block = _require(item, 'block', what)
        if not isinstance(block, list) or len(block) != 2:
            raise ParseError(f"{what} block must be [row signal, column signal], got {block!r}")
        a, b = (space.check(name) for name in block)
        blocks[(a, b)] = matrix_from_json(_require(item, 'entries', what), f"block {a}, {b}")
    return blocks


def realization_from_json(d: Mapping) -> Realization:
    """{"signals": [{"name", "dim"}], "entries": R} or {"signals": ..., "blocks": [{"block": [a, b], "entries"}]}"""
    space = _space(d)
    if 'blocks' in d:
        return Realization.from_blocks(space, _blocks(space, d['blocks'], 'realization'))
    R = matrix_from_json(_require(d, 'entries', 'realization'), 'R')
    return Realization(space, R)


def realization_to_json(r: Realization) -> Dict:
    return {'signals': r.space.to_list(), 'entries': r.R.to_list()}


def perturbation_from_json(d: Mapping, space: SignalSpace) -> Perturbation:
    blocks = _blocks(space, _require(d, 'blocks', 'perturbation'), 'perturbation')
    return Perturbation.from_blocks(space, blocks)


def _key(k) -> str:
    if isinstance(k, tuple):
        return ','.join(str(i) for i in k)
    return str(k)


def to_jsonable(obj) -> Any:
    """Plain JSON types for reports: complex numbers become [re, im], infinities become strings"""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, RationalFunction):
        return obj.to_dict()
    if isinstance(obj, TransferMatrix):
        return obj.to_list()
    if isinstance(obj, Realization):
        return realization_to_json(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()] if obj.ndim else to_jsonable(obj.item())
    if isinstance(obj, Mapping):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [to_jsonable(x) for x in obj]
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if f.repr}
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)
