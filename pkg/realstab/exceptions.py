from typing import Any, Dict


class RealstabError(Exception):
    code = 'error'
    exit_code = 1

    def __init__(self, message: str = '', **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self) -> Dict[str, Any]:
        payload = {'error': self.code, 'exit_code': self.exit_code, 'message': self.message}
        payload.update({k: v for k, v in self.details.items() if _is_jsonable(v)})
        return payload


def _is_jsonable(value) -> bool:
    return isinstance(value, (str, int, float, bool, list, tuple, dict)) or value is None


class ParseError(RealstabError):
    code = 'parse'
    exit_code = 2


class DimensionError(RealstabError, ValueError):
    code = 'parse'
    exit_code = 2


class UnknownSignalError(RealstabError, KeyError):
    code = 'parse'
    exit_code = 2

    def __str__(self):
        return self.message


class IllPosedError(RealstabError):
    code = 'ill-posed'
    exit_code = 3


class InfeasibleError(RealstabError):
    code = 'infeasible'
    exit_code = 4


class RiccatiError(InfeasibleError):
    pass


class SingularError(RealstabError, ZeroDivisionError):
    code = 'singular'
    exit_code = 5


class RootFindingError(RealstabError, ArithmeticError):
    code = 'root-finding'

    def __init__(self, message: str = '', best=None, **details):
        super().__init__(message, **details)
        self.best = best


class NotStableError(RealstabError):
    code = 'not-stable'


class ImproperError(RealstabError):
    code = 'improper'


class HypothesisError(RealstabError):
    code = 'hypothesis'
