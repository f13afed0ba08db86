r"""Tope logic over the strict directed interval.

Quantifier-free formulas over interval terms (variables, 0, 1) with <= and ==,
closed under /\ and \/ with units TOP and BOT.  Semantics: assignments of the
variables into a bounded total order; 0 is bottom, 1 is top.  Two entailment
routes are provided and must agree: `entails` (DNF + saturation + linearity
case splitting) and `oracle_entails` (brute-force evaluation over a finite
chain, which suffices because a countermodel over n variables only ever uses
the order type of n points between the two endpoints).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product as iter_product
from typing import Iterator


class TopeError(Exception):
    pass


class ScopeError(TopeError):
    pass


class ResourceError(TopeError):
    pass


class OracleDivergence(TopeError):
    pass


# ---------------------------------------------------------------------------
# syntax


@dataclass(frozen=True)
class IVar:
    name: str


@dataclass(frozen=True)
class IConst:
    value: int  # 0 or 1


Interval = IVar | IConst

I0 = IConst(0)
I1 = IConst(1)


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Le:
    lhs: Interval
    rhs: Interval


@dataclass(frozen=True)
class Eq:
    lhs: Interval
    rhs: Interval


@dataclass(frozen=True)
class And:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True)
class Or:
    left: "Tope"
    right: "Tope"


Tope = Top | Bot | Le | Eq | And | Or

TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class CubeContext:
    """Ordered list of distinct interval variable names."""

    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ScopeError(f"duplicate cube variables in {self.names}")

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def extend(self, names: tuple[str, ...]) -> "CubeContext":
        for n in names:
            if n in self.names:
                raise ScopeError(f"cube variable {n!r} already bound")
        return CubeContext(self.names + tuple(names))


def and_(a: Tope, b: Tope) -> Tope:
    """Conjunction with unit/absorbing simplification (TOP drops, BOT wins)."""
    if isinstance(a, Top):
        return b
    if isinstance(b, Top):
        return a
    if isinstance(a, Bot) or isinstance(b, Bot):
        return BOT
    return And(a, b)


def or_(a: Tope, b: Tope) -> Tope:
    if isinstance(a, Bot):
        return b
    if isinstance(b, Bot):
        return a
    if isinstance(a, Top) or isinstance(b, Top):
        return TOP
    return Or(a, b)


def and_all(ts: list[Tope]) -> Tope:
    return reduce(and_, ts, TOP)


def or_all(ts: list[Tope]) -> Tope:
    return reduce(or_, ts, BOT)


def tope_vars(t: Tope) -> set[str]:
    match t:
        case Top() | Bot():
            return set()
        case Le(l, r) | Eq(l, r):
            out = set()
            if isinstance(l, IVar):
                out.add(l.name)
            if isinstance(r, IVar):
                out.add(r.name)
            return out
        case And(a, b) | Or(a, b):
            return tope_vars(a) | tope_vars(b)
    raise TypeError(f"not a tope: {t!r}")


def subst_interval(p: Interval, mapping: dict[str, Interval]) -> Interval:
    if isinstance(p, IVar) and p.name in mapping:
        return mapping[p.name]
    return p


def subst_tope(t: Tope, mapping: dict[str, Interval]) -> Tope:
    match t:
        case Top() | Bot():
            return t
        case Le(l, r):
            return Le(subst_interval(l, mapping), subst_interval(r, mapping))
        case Eq(l, r):
            return Eq(subst_interval(l, mapping), subst_interval(r, mapping))
        case And(a, b):
            return And(subst_tope(a, mapping), subst_tope(b, mapping))
        case Or(a, b):
            return Or(subst_tope(a, mapping), subst_tope(b, mapping))
    raise TypeError(f"not a tope: {t!r}")


def rename_tope(t: Tope, mapping: dict[str, str]) -> Tope:
    return subst_tope(t, {k: IVar(v) for k, v in mapping.items()})


def _check_scope(ctx: CubeContext, t: Tope) -> None:
    extra = tope_vars(t) - set(ctx.names)
    if extra:
        raise ScopeError(f"unknown interval variable(s) {sorted(extra)} in {format_tope(t)}")


# ---------------------------------------------------------------------------
# printing (canonical ASCII; parenthesization preserves tree structure)


def format_interval(p: Interval) -> str:
    match p:
        case IVar(name):
            return name
        case IConst(v):
            return str(v)
    raise TypeError(f"not an interval term: {p!r}")


def format_tope(t: Tope) -> str:
    # precedence: atoms > /\ > \/ ; same-precedence right children are
    # parenthesized so left-folded parses reproduce the input tree exactly
    def go(t: Tope, parent: int, right: bool) -> str:
        match t:
            case Top():
                return "TOP"
            case Bot():
                return "BOT"
            case Le(l, r):
                return f"{format_interval(l)} <= {format_interval(r)}"
            case Eq(l, r):
                return f"{format_interval(l)} == {format_interval(r)}"
            case And(a, b):
                s = f"{go(a, 2, False)} /\\ {go(b, 2, True)}"
                return f"({s})" if parent > 2 or (parent == 2 and right) else s
            case Or(a, b):
                s = f"{go(a, 1, False)} \\/ {go(b, 1, True)}"
                return f"({s})" if parent > 1 or (parent == 1 and right) else s
        raise TypeError(f"not a tope: {t!r}")

    return go(t, 0, False)


# ---------------------------------------------------------------------------
# oracle: brute force over the chain {0, ..., n+1}


def _eval_interval(p: Interval, env: dict[str, int], top: int) -> int:
    match p:
        case IVar(name):
            return env[name]
        case IConst(v):
            return top if v == 1 else 0
    raise TypeError(f"not an interval term: {p!r}")


def _eval_tope(t: Tope, env: dict[str, int], top: int) -> bool:
    match t:
        case Top():
            return True
        case Bot():
            return False
        case Le(l, r):
            return _eval_interval(l, env, top) <= _eval_interval(r, env, top)
        case Eq(l, r):
            return _eval_interval(l, env, top) == _eval_interval(r, env, top)
        case And(a, b):
            return _eval_tope(a, env, top) and _eval_tope(b, env, top)
        case Or(a, b):
            return _eval_tope(a, env, top) or _eval_tope(b, env, top)
    raise TypeError(f"not a tope: {t!r}")


def chain_models(ctx: CubeContext) -> Iterator[dict[str, int]]:
    """All assignments of the context's variables into the chain {0..n+1}."""
    n = len(ctx.names)
    for values in iter_product(range(n + 2), repeat=n):
        yield dict(zip(ctx.names, values))


def oracle_entails(ctx: CubeContext, hyp: Tope, goal: Tope) -> bool:
    """Decide hyp |- goal by evaluating over the chain {0..n+1}.

    Any countermodel in a bounded total order restricts to the values taken by
    the n variables plus the endpoints, so a chain of n+2 points is enough.
    """
    _check_scope(ctx, hyp)
    _check_scope(ctx, goal)
    top = len(ctx.names) + 1
    for env in chain_models(ctx):
        if _eval_tope(hyp, env, top) and not _eval_tope(goal, env, top):
            return False
    return True


def find_countermodel(ctx: CubeContext, hyp: Tope, goal: Tope) -> dict[str, int] | None:
    """A chain assignment satisfying hyp but not goal, if one exists."""
    _check_scope(ctx, hyp)
    _check_scope(ctx, goal)
    top = len(ctx.names) + 1
    for env in chain_models(ctx):
        if _eval_tope(hyp, env, top) and not _eval_tope(goal, env, top):
            return env
    return None


def format_chain_point(value: int, top: int) -> str:
    if value == 0:
        return "bot"
    if value == top:
        return "top"
    return str(value)


def format_countermodel(ctx: CubeContext, model: dict[str, int]) -> str:
    top = len(ctx.names) + 1
    return ", ".join(f"{n}={format_chain_point(model[n], top)}" for n in ctx.names)


# ---------------------------------------------------------------------------
# DNF


Atom = Le | Eq
Clause = tuple[Atom, ...]


def _ikey(p: Interval) -> tuple[int, str]:
    # variables first (alphabetic), then 0, then 1
    match p:
        case IVar(name):
            return (0, name)
        case IConst(v):
            return (1, str(v))
    raise TypeError(f"not an interval term: {p!r}")


def _canon_atom(a: Atom) -> Atom:
    # equations are symmetric: order operands canonically; <= is directional
    if isinstance(a, Eq) and _ikey(a.lhs) > _ikey(a.rhs):
        return Eq(a.rhs, a.lhs)
    return a


def _atom_key(a: Atom) -> tuple:
    return (0 if isinstance(a, Eq) else 1, _ikey(a.lhs), _ikey(a.rhs))


def _sort_clause(atoms: set[Atom]) -> Clause:
    return tuple(sorted(atoms, key=_atom_key))


@lru_cache(maxsize=None)
def dnf_clauses(t: Tope) -> tuple[Clause, ...]:
    """Canonical clause form: () means BOT, ((),) means TOP."""
    match t:
        case Top():
            clauses: list[set[Atom]] = [set()]
        case Bot():
            clauses = []
        case Le() | Eq():
            clauses = [{_canon_atom(t)}]
        case And(a, b):
            clauses = [
                ca | cb
                for ca in (set(c) for c in dnf_clauses(a))
                for cb in (set(c) for c in dnf_clauses(b))
            ]
        case Or(a, b):
            clauses = [set(c) for c in dnf_clauses(a)] + [set(c) for c in dnf_clauses(b)]
        case _:
            raise TypeError(f"not a tope: {t!r}")
    sorted_clauses = {_sort_clause(c) for c in clauses}
    return tuple(sorted(sorted_clauses, key=lambda c: tuple(_atom_key(a) for a in c)))


def clauses_to_tope(clauses: tuple[Clause, ...]) -> Tope:
    if not clauses:
        return BOT
    if clauses == ((),):
        return TOP
    # a clause is never empty unless it is the unique TOP clause
    disjuncts = [reduce(And, c[1:], c[0]) if c else TOP for c in clauses]
    return reduce(Or, disjuncts[1:], disjuncts[0])


def dnf(ctx: CubeContext, t: Tope) -> Tope:
    """Canonical disjunctive normal form (syntactic: no consistency pruning)."""
    _check_scope(ctx, t)
    return clauses_to_tope(dnf_clauses(t))


# ---------------------------------------------------------------------------
# entailment: saturation + linearity branching per hypothesis clause

BRANCH_LIMIT = 2**16

# cross-check switch: when enabled every entails() verdict is compared with
# the chain oracle and a divergence raises OracleDivergence
_paranoid = False


def set_paranoid(flag: bool) -> bool:
    global _paranoid
    old = _paranoid
    _paranoid = flag
    return old


class _Closure:
    """Union-find over interval terms plus a <=-relation on class reps.

    Terms are indexed 0..n+1: 0 is the constant 0, n+1 the constant 1,
    and 1..n the context variables in order.
    """

    __slots__ = ("n", "parent", "le")

    def __init__(self, n: int):
        self.n = n
        self.parent = list(range(n + 2))
        self.le: set[tuple[int, int]] = set()
        for i in range(n + 2):
            self.le.add((0, i))  # 0 <= x
            self.le.add((i, n + 1))  # x <= 1
            self.le.add((i, i))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def copy(self) -> "_Closure":
        c = _Closure.__new__(_Closure)
        c.n = self.n
        c.parent = list(self.parent)
        c.le = set(self.le)
        return c

    def add_le(self, a: int, b: int) -> None:
        self.le.add((self.find(a), self.find(b)))

    def saturate(self) -> None:
        # transitivity and antisymmetry to a fixpoint; unions re-normalize le
        changed = True
        while changed:
            changed = False
            le = {(self.find(a), self.find(b)) for a, b in self.le}
            if le != self.le:
                self.le = le
                changed = True
            for a, b in list(self.le):
                if a != b and (b, a) in self.le:
                    self.union(a, b)
                    changed = True
            for a, b in list(self.le):
                for c, d in list(self.le):
                    if b == c and (a, d) not in self.le:
                        self.le.add((a, d))
                        changed = True

    def inconsistent(self) -> bool:
        return self.find(0) == self.find(self.n + 1)

    def holds(self, a: Atom, index: dict[Interval, int]) -> bool:
        i, j = self.find(index[a.lhs]), self.find(index[a.rhs])
        if isinstance(a, Eq):
            return i == j
        return (i, j) in self.le

    def incomparable_pair(self) -> tuple[int, int] | None:
        reps = sorted({self.find(i) for i in range(self.n + 2)})
        for x in reps:
            for y in reps:
                if x < y and (x, y) not in self.le and (y, x) not in self.le:
                    return (x, y)
        return None


def _term_index(ctx: CubeContext) -> dict[Interval, int]:
    index: dict[Interval, int] = {I0: 0, I1: len(ctx.names) + 1}
    for i, name in enumerate(ctx.names):
        index[IVar(name)] = i + 1
    return index


def _clause_entails(
    ctx: CubeContext, clause: Clause, goal_clauses: tuple[Clause, ...], budget: list[int]
) -> bool:
    index = _term_index(ctx)
    base = _Closure(len(ctx.names))
    for a in clause:
        if isinstance(a, Eq):
            base.union(index[a.lhs], index[a.rhs])
        else:
            base.add_le(index[a.lhs], index[a.rhs])

    def split(cl: _Closure) -> bool:
        budget[0] += 1
        if budget[0] > BRANCH_LIMIT:
            raise ResourceError(f"entailment branch limit {BRANCH_LIMIT} exceeded")
        cl.saturate()
        if cl.inconsistent():
            return True
        pair = cl.incomparable_pair()
        if pair is None:
            return any(all(cl.holds(a, index) for a in gc) for gc in goal_clauses)
        x, y = pair
        left = cl.copy()
        left.add_le(x, y)
        right = cl
        right.add_le(y, x)
        return split(left) and split(right)

    return split(base)


_entails_cache: dict[tuple, bool] = {}


def _cache_key(ctx: CubeContext, hyp: Tope, goal: Tope) -> tuple:
    ren = {name: IVar(f"#{i}") for i, name in enumerate(ctx.names)}
    return (len(ctx.names), subst_tope(hyp, ren), subst_tope(goal, ren))


def entails(ctx: CubeContext, hyp: Tope, goal: Tope) -> bool:
    """Decide hyp |- goal over the directed interval with linear order."""
    _check_scope(ctx, hyp)
    _check_scope(ctx, goal)
    key = _cache_key(ctx, hyp, goal)
    hit = _entails_cache.get(key)
    if hit is None:
        goal_clauses = dnf_clauses(goal)
        budget = [0]
        hit = all(
            _clause_entails(ctx, c, goal_clauses, budget) for c in dnf_clauses(hyp)
        )
        _entails_cache[key] = hit
    if _paranoid:
        reference = oracle_entails(ctx, hyp, goal)
        if reference != hit:
            raise OracleDivergence(
                f"solver={hit} oracle={reference} for "
                f"[{', '.join(ctx.names)}] {format_tope(hyp)} => {format_tope(goal)}"
            )
    return hit


def equiv(ctx: CubeContext, a: Tope, b: Tope) -> bool:
    return entails(ctx, a, b) and entails(ctx, b, a)


def satisfiable(ctx: CubeContext, t: Tope) -> bool:
    return not entails(ctx, t, BOT)
