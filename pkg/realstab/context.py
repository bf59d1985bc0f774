# Context stack structure follows the one used by PyMC3
import threading
from dataclasses import dataclass, replace, asdict
from typing import Optional, List, Type, TypeVar

T = TypeVar("T")


class ContextError(Exception):
    pass


class ContextMeta(type):
    """Functionality for objects that put themselves in a context using
    the `with` statement. Each class gets its own thread-local stack.
    """

    def __new__(cls, name, bases, dct, **kwargs):
        "Add __enter__ and __exit__ methods to the class."

        def __enter__(self):
            type(self).get_contexts().append(self)
            return self

        def __exit__(self, typ, value, traceback):
            type(self).get_contexts().pop()

        dct[__enter__.__name__] = __enter__
        dct[__exit__.__name__] = __exit__
        return super().__new__(cls, name, bases, dct)

    def get_contexts(cls) -> List:
        """Return the stack of active instances of ``cls`` for this thread."""
        # contexts is a thread-local object so there is no race here
        if '_contexts' not in cls.__dict__:
            cls._contexts = threading.local()
        contexts = cls._contexts
        if not hasattr(contexts, 'stack'):
            contexts.stack = []
        return contexts.stack

    def get_context(cls: Type[T], error_if_none=True) -> Optional[T]:
        """Return the most recently pushed context object of type ``cls``
        on the stack, or ``None``. If ``error_if_none`` is True (default),
        raise a ``ContextError`` instead of returning ``None``."""
        try:
            return cls.get_contexts()[-1]
        except IndexError:
            if error_if_none:
                raise ContextError(f"No {cls.__name__} on context stack")
            return None


@dataclass(frozen=True)
class Tolerances(metaclass=ContextMeta):
    """
    Numerical tolerances used throughout the toolkit.
    Use as a context manager to override them for a block of code:

        with Tolerances(pole_tol=1e-6):
            report = check_internal(realization)
    """
    drop_tol: float = 1e-12
    cancel_tol: float = 1e-7
    pole_tol: float = 1e-9
    root_tol: float = 1e-10
    max_iter: int = 500
    singular_tol: float = 1e-10
    residual_tol: float = 1e-8
    hinf_tol: float = 1e-9

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not v > 0:
                raise ValueError(f"Tolerance `{k}` must be positive, got {v}")

    def updated(self, **changes) -> 'Tolerances':
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_TOLERANCES = Tolerances()


def current_tolerances() -> Tolerances:
    return Tolerances.get_context(error_if_none=False) or DEFAULT_TOLERANCES
