"""Environments, typing contexts, and the step budget."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from sstt import tope as T
from sstt.kernel.errors import KernelError
from sstt.kernel.syntax import Term

DEFAULT_STEP_LIMIT = 5_000_000


class Budget:
    """Mutable step counter shared by all contexts of one checking run.

    Normalization in this theory terminates on well-typed input, but the
    budget turns any surprise (or a pathological query) into a clean
    resource error instead of a hang.
    """

    __slots__ = ("remaining",)

    def __init__(self, limit: int = DEFAULT_STEP_LIMIT):
        self.remaining = limit

    def spend(self, n: int = 1) -> None:
        self.remaining -= n
        if self.remaining < 0:
            raise KernelError("resource", "step budget exhausted during checking")


@dataclass(frozen=True)
class Declaration:
    """A checked module-level constant: axiom when value is None."""

    name: str
    ty: Term
    value: Term | None = None


class Environment:
    """Ordered map of checked declarations; insertion order is check order."""

    def __init__(self) -> None:
        self._decls: dict[str, Declaration] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._decls

    def __iter__(self):
        return iter(self._decls.values())

    def __len__(self) -> int:
        return len(self._decls)

    def lookup(self, name: str) -> Declaration | None:
        return self._decls.get(name)

    def add(self, decl: Declaration) -> None:
        if decl.name in self._decls:
            raise KernelError("scope", f"name {decl.name!r} is already declared")
        self._decls[decl.name] = decl


@dataclass(frozen=True)
class TypingContext:
    """Cube variables, an active tope restriction, and a term telescope."""

    env: Environment = field(default_factory=Environment)
    cube: T.CubeContext = field(default_factory=T.CubeContext)
    restriction: T.Tope = T.TOP
    telescope: tuple[tuple[str, Term], ...] = ()
    budget: Budget = field(default_factory=Budget, compare=False)

    def bind(self, name: str, ty: Term) -> "TypingContext":
        return replace(self, telescope=self.telescope + ((name, ty),))

    def bind_cube(self, names: tuple[str, ...]) -> "TypingContext":
        return replace(self, cube=self.cube.extend(names))

    def restrict(self, phi: T.Tope) -> "TypingContext":
        return replace(self, restriction=T.and_(self.restriction, phi))

    def with_restriction(self, phi: T.Tope) -> "TypingContext":
        return replace(self, restriction=phi)

    def lookup_var(self, name: str) -> Term | None:
        for n, ty in reversed(self.telescope):
            if n == name:
                return ty
        return None

    def entails(self, goal: T.Tope) -> bool:
        return T.entails(self.cube, self.restriction, goal)

    def inconsistent(self) -> bool:
        return self.entails(T.BOT)

    def term_names(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.telescope) | frozenset(
            d.name for d in self.env
        )

    def fresh(self, hint: str) -> str:
        return _fresh_against(hint, self.term_names())

    def fresh_cube(self, hints: tuple[str, ...]) -> tuple[str, ...]:
        taken = set(self.cube.names)
        out = []
        for h in hints:
            n = _fresh_against(h, taken)
            taken.add(n)
            out.append(n)
        return tuple(out)


def _fresh_against(hint: str, avoid) -> str:
    from sstt.kernel.syntax import fresh_name

    return fresh_name(hint, frozenset(avoid))
