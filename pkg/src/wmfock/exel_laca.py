"""Relation matrices of Exel-Laca type and verification of their conditions.

A relation matrix assigns each ordered generator pair (i, j) a 0/1 entry.
Two built-in infinite kinds cover the weakly monotone family (entry(i, j) =
[i >= j], indexed over all integers or over the naturals); finite explicit
tables are supported as well.  The conditions checked are, with q(i) the
support projection of the i-th generator and p(i) its range projection:

  (1) q(i) q(j) = q(j) q(i)
  (2) p(i) p(j) = 0 for i != j
  (3) q(i) p(j) = entry(i, j) p(j)
  (4) prod_{x in X} q(x) prod_{y in Y} (I - q(y)) = sum over the support set
      of p(j), whenever that support set is finite

plus the one-step ladder q(j+1) = q(j) + p(j+1) of the integer kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import FinitenessError
from .expr import Case, Element
from .fock import TruncSpace, verify_identity
from .reports import Instance, Report


class ELKind(Enum):
    WM_Z = "WM_Z"
    WM_N = "WM_N"
    TABLE = "table"

    @staticmethod
    def coerce(v) -> "ELKind":
        if isinstance(v, ELKind):
            return v
        return ELKind(str(v))


@dataclass(frozen=True)
class ELMatrixSpec:
    """A 0/1 relation matrix, either an infinite built-in or a finite table."""

    kind: ELKind
    table: Optional[Tuple[Tuple[int, ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ELKind.coerce(self.kind))
        if self.kind is ELKind.TABLE:
            if self.table is None:
                raise ValueError("table kind needs an explicit matrix")
            tab = tuple(tuple(int(v) for v in row) for row in self.table)
            n = len(tab)
            for row in tab:
                if len(row) != n:
                    raise ValueError("relation table must be square")
                for v in row:
                    if v not in (0, 1):
                        raise ValueError("relation table entries must be 0 or 1")
                if not any(row):
                    raise ValueError("relation table rows must not be identically zero")
            object.__setattr__(self, "table", tab)
        elif self.table is not None:
            raise ValueError("only the table kind carries an explicit matrix")

    @property
    def case(self) -> Case:
        return Case.Z if self.kind is ELKind.WM_Z else Case.N

    @property
    def size(self) -> Optional[int]:
        return len(self.table) if self.table is not None else None

    def check_index(self, i: int) -> None:
        if self.kind is ELKind.WM_N and i < 0:
            raise ValueError(f"index {i} outside the natural index set")
        if self.kind is ELKind.TABLE and not (0 <= i < len(self.table)):
            raise ValueError(f"index {i} outside the table range 0..{len(self.table) - 1}")

    def entry(self, i: int, j: int) -> int:
        self.check_index(i)
        self.check_index(j)
        if self.kind is ELKind.TABLE:
            return self.table[i][j]
        return 1 if i >= j else 0


def a_coeff(spec: ELMatrixSpec, X: Iterable[int], Y: Iterable[int], j: int) -> int:
    """Product of entries over X and complements over Y at column j; 0 or 1."""
    for x in X:
        if spec.entry(x, j) == 0:
            return 0
    for y in Y:
        if spec.entry(y, j) == 1:
            return 0
    return 1


def support_set(spec: ELMatrixSpec, X: Iterable[int], Y: Iterable[int]) -> Tuple[int, ...]:
    """Sorted tuple of columns j with a_coeff = 1; FinitenessError if infinite."""
    xs, ys = set(X), set(Y)
    for i in xs | ys:
        spec.check_index(i)
    if spec.kind is ELKind.TABLE:
        return tuple(j for j in range(len(spec.table)) if a_coeff(spec, xs, ys, j))
    # built-in kinds: coefficient 1 exactly on (max Y, min X] within the index set
    if not xs:
        # no upper cap on j, and some (or all) large j have coefficient 1
        raise FinitenessError("support set is unbounded above without an X constraint")
    hi = min(xs)
    if ys:
        lo = max(ys) + 1
    elif spec.kind is ELKind.WM_N:
        lo = 0
    else:
        raise FinitenessError("support set over the integers is unbounded below without a Y constraint")
    return tuple(range(lo, hi + 1))


def _q(case: Case, i: int) -> Element:
    return Element.word(case, ((i, False), (i, True)))


def _p(case: Case, i: int) -> Element:
    return Element.word(case, ((i, True), (i, False)))


def condition_elements(spec: ELMatrixSpec, X: Sequence[int], Y: Sequence[int]) -> Tuple[Element, Element]:
    """Left and right side of condition (4) for the given constraint sets."""
    case = spec.case
    lhs = Element.one(case)
    for x in sorted(X, reverse=True):
        lhs = lhs * _q(case, x)
    for y in sorted(Y, reverse=True):
        lhs = lhs * (Element.one(case) - _q(case, y))
    rhs = Element.zero(case)
    for j in support_set(spec, X, Y):
        rhs = rhs + _p(case, j)
    return lhs, rhs


def relation_instance(spec: ELMatrixSpec, X: Sequence[int],
                      Y: Sequence[int]) -> Tuple[Element, Element]:
    """The sum-relation instance for (X, Y) as a (lhs, rhs) pair."""
    return condition_elements(spec, X, Y)


def _set_label(s: Sequence[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def _subsets(universe: Sequence[int], max_size: int, min_size: int = 0) -> List[Tuple[int, ...]]:
    from itertools import combinations

    out: List[Tuple[int, ...]] = []
    for k in range(min_size, max_size + 1):
        out.extend(combinations(universe, k))
    return out


def verify_el_suite(
    space: TruncSpace,
    spec: ELMatrixSpec,
    universe: Sequence[int],
    max_size: int = 2,
    pairs: Optional[Sequence[Tuple[Sequence[int], Sequence[int]]]] = None,
    remark: bool = True,
    tol: float = 1e-12,
) -> Report:
    """Exhaustive check of conditions (1)-(4) over a finite index universe.

    Column tuples are restricted to the universe's margin inside the window,
    which loses nothing because every letter index lives in the universe.
    With pairs given, only those (X, Y) combinations are run for condition
    (4); otherwise all subsets up to max_size, where combinations whose
    support set is infinite are asserted to raise FinitenessError instead.
    """
    case = spec.case
    universe = sorted(universe)
    for i in universe:
        spec.check_index(i)
        if not space.contains_index(i):
            raise ValueError(f"universe index {i} outside the window")
    s_margin = max(0, min(universe[0] - space.lo, space.hi - universe[-1]))
    cache: Dict = {}
    report = Report(
        suite="exel-laca",
        config={
            "kind": spec.kind.value,
            "window": [space.lo, space.hi],
            "particles": space.trunc,
            "universe": list(universe),
            "maxSize": max_size,
        },
    )

    def run(iid: str, lhs: Element, rhs: Element) -> None:
        chk = verify_identity(space, lhs, rhs, index_margin=s_margin, tol=tol, cache=cache)
        report.add(Instance(iid, chk.passed, chk.discrepancy_json,
                            {"columns": chk.columns_checked}))

    for i in universe:
        for j in universe:
            if i < j:
                run(f"q-commute[{i},{j}]", _q(case, i) * _q(case, j), _q(case, j) * _q(case, i))
                run(f"p-orthogonal[{i},{j}]", _p(case, i) * _p(case, j), Element.zero(case))
                run(f"p-orthogonal[{j},{i}]", _p(case, j) * _p(case, i), Element.zero(case))
            run(f"q-on-p[{i},{j}]", _q(case, i) * _p(case, j),
                _p(case, j).scale(spec.entry(i, j)))

    if pairs is None:
        pairs = [(X, Y) for X in _subsets(universe, max_size) for Y in _subsets(universe, max_size)]
    for X, Y in pairs:
        iid = f"sum-relation[X={_set_label(X)},Y={_set_label(Y)}]"
        try:
            lhs, rhs = condition_elements(spec, X, Y)
        except FinitenessError as exc:
            report.add(Instance(iid, True, None,
                                {"support": "infinite", "error": str(exc)}))
            continue
        run(iid, lhs, rhs)

    if remark and spec.kind in (ELKind.WM_Z, ELKind.WM_N):
        low = universe[0] if spec.kind is ELKind.WM_Z else max(universe[0], 0)
        for j in range(low, universe[-1]):
            run(f"ladder[q({j + 1})=q({j})+p({j + 1})]",
                _q(case, j + 1), _q(case, j) + _p(case, j + 1))

    return report
