"""Propositional formula trees.

Negation is not a separate node: ``Not(a)`` builds ``Imp(a, BOT)``.  Nodes are
immutable, carry a precomputed hash, and compare structurally.
"""

from __future__ import annotations

from typing import Iterable, Mapping

VAR, BOT, TOP, AND, OR, IMP = range(6)


class Formula:
    __slots__ = ("kind", "left", "right", "name", "_hash")

    def __init__(self, kind, left=None, right=None, name=None):
        self.kind = kind
        self.left = left
        self.right = right
        self.name = name
        self._hash = hash((kind, name, left, right))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula) or self._hash != other._hash:
            return False
        return (self.kind == other.kind and self.name == other.name
                and self.left == other.left and self.right == other.right)

    def __repr__(self):
        from .parser import to_text

        return f"Formula({to_text(self)!r})"

    def __str__(self):
        from .parser import to_text

        return to_text(self)

    @property
    def is_neg(self) -> bool:
        return self.kind == IMP and self.right.kind == BOT

    # operator sugar for building formulas in code and tests
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Imp(self, other)

    def __invert__(self):
        return Not(self)


def Var(name: str) -> Formula:
    return Formula(VAR, name=name)


def And(a: Formula, b: Formula) -> Formula:
    return Formula(AND, a, b)


def Or(a: Formula, b: Formula) -> Formula:
    return Formula(OR, a, b)


def Imp(a: Formula, b: Formula) -> Formula:
    return Formula(IMP, a, b)


BOTTOM = Formula(BOT)
TRUE = Formula(TOP)


def Not(a: Formula) -> Formula:
    return Formula(IMP, a, BOTTOM)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def conj(items: Iterable[Formula]) -> Formula:
    out = None
    for f in items:
        out = f if out is None else And(out, f)
    return TRUE if out is None else out


def size(f: Formula) -> int:
    """Number of connectives and atoms, counting ``~a`` as one node above ``a``."""
    if f.kind in (VAR, BOT, TOP):
        return 1
    if f.is_neg:
        return 1 + size(f.left)
    return 1 + size(f.left) + size(f.right)


def variables(f: Formula) -> frozenset:
    if f.kind == VAR:
        return frozenset((f.name,))
    if f.kind in (BOT, TOP):
        return frozenset()
    return variables(f.left) | variables(f.right)


def subformulas(f: Formula) -> set:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if g.kind in (AND, OR, IMP):
            stack.append(g.left)
            stack.append(g.right)
    return out


def substitute(f: Formula, sub: Mapping[str, Formula]) -> Formula:
    if f.kind == VAR:
        return sub.get(f.name, f)
    if f.kind in (BOT, TOP):
        return f
    left = substitute(f.left, sub)
    right = substitute(f.right, sub)
    if left is f.left and right is f.right:
        return f
    return Formula(f.kind, left, right)


def formulas_by_size(max_size: int, atoms: Iterable[Formula]) -> list[list[Formula]]:
    """All distinct formula trees over ``atoms`` (plus ⊥, ⊤), grouped by size.

    Entry ``k`` of the result lists the trees of size ``k``; entry 0 is empty.
    """
    base = list(dict.fromkeys(list(atoms) + [BOTTOM, TRUE]))
    levels: list[list[Formula]] = [[] for _ in range(max_size + 1)]
    if max_size >= 1:
        levels[1] = base
    for s in range(2, max_size + 1):
        out = [Not(a) for a in levels[s - 1]]
        for i in range(1, s - 1):
            j = s - 1 - i
            for a in levels[i]:
                for b in levels[j]:
                    out.append(And(a, b))
                    out.append(Or(a, b))
                    if b.kind != BOT:
                        out.append(Imp(a, b))
        levels[s] = out
    return levels


def formula_pool(max_size: int, names: Iterable[str] = ("x",)) -> list[Formula]:
    """Every formula tree of size at most ``max_size`` over the given variables."""
    levels = formulas_by_size(max_size, [Var(n) for n in names])
    return [f for level in levels for f in level]
