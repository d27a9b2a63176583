"""
Bratteli diagrams kept as a generated prefix of incidence matrices plus an
optional declared periodic tail.

Level k (k >= 1) has incidence matrix M_k; entry (r, s) counts the edges
from vertex r of layer k-1 to vertex s of layer k. A single root vertex
feeds every vertex of layer 0 with one edge, so the dimension vector of
level k is (1, ..., 1) M_1 ... M_k and level 0 is the root itself.
"""

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from errors import DomainError, NotPrimitiveError, RangeError, UsageError
from exactnum import IntMatrix
from jacobiperron import JPExpansion, jp_block
from logger import get_logger
from pfdata import is_primitive

logger = get_logger("bratteli")


@dataclass(frozen=True)
class BratteliDiagram:
    root_arity: int
    levels: Tuple[IntMatrix, ...]
    labels: Tuple[str, ...] = ()
    periodic_tail: Optional[Tuple[int, int]] = None
    terminal: bool = False

    def __post_init__(self):
        if not self.levels:
            raise DomainError("a diagram needs at least one level")
        if self.levels[0].rows != self.root_arity:
            raise DomainError("first level does not start from the root layer")
        for k, m in enumerate(self.levels, start=1):
            if not m.is_nonnegative():
                raise DomainError(f"level {k} has negative multiplicities")
            if any(not any(m.row(i)) for i in range(m.rows)) or \
                    any(not any(m.column(j)) for j in range(m.cols)):
                raise DomainError(f"level {k} has an unconnected vertex")
        for k in range(1, len(self.levels)):
            if self.levels[k - 1].cols != self.levels[k].rows:
                raise DomainError(f"levels {k} and {k + 1} are not composable")
        if self.periodic_tail is not None:
            start, length = self.periodic_tail
            if length < 1 or start < 0 or start + length > len(self.levels):
                raise DomainError(f"periodic tail {self.periodic_tail} outside the generated levels")

    @property
    def depth(self) -> int:
        return len(self.levels)


def level(d: BratteliDiagram, k: int) -> IntMatrix:
    """Incidence matrix of level k >= 1, continued through the periodic tail"""
    if k < 1:
        raise RangeError(f"levels are numbered from 1, got {k}")
    if k <= d.depth:
        return d.levels[k - 1]
    if d.periodic_tail is None:
        raise RangeError(f"level {k} beyond the {d.depth} generated levels")
    start, length = d.periodic_tail
    return d.levels[start + (k - 1 - start) % length]


def stationary_diagram(a: IntMatrix, depth: int) -> BratteliDiagram:
    """Diagram repeating the primitive matrix a on every level"""
    if depth < 1:
        raise RangeError(f"depth must be at least 1, got {depth}")
    if not a.is_square or not is_primitive(a):
        raise NotPrimitiveError(f"{a} is not a primitive nonnegative matrix")
    return BratteliDiagram(a.rows, (a,) * depth, periodic_tail=(0, 1))


def diagram_from_jp(e: JPExpansion) -> BratteliDiagram:
    """
    One level per Jacobi-Perron digit, labelled by the digit. The periodic
    tail and termination flag are carried over from the expansion.
    """
    if not e.digits:
        raise DomainError("expansion has no digits")
    levels = tuple(jp_block(digit) for digit in e.digits)
    labels = tuple(" ".join(str(v) for v in digit.b) for digit in e.digits)
    return BratteliDiagram(e.dimension, levels, labels, e.periodic, e.terminating)


def prepend_level(d: BratteliDiagram, m: IntMatrix) -> BratteliDiagram:
    """The diagram with m inserted as the new first level"""
    tail = None
    if d.periodic_tail is not None:
        tail = (d.periodic_tail[0] + 1, d.periodic_tail[1])
    labels = ("",) + d.labels if d.labels else ()
    return BratteliDiagram(m.rows, (m,) + d.levels, labels, tail, d.terminal)


def telescope(d: BratteliDiagram, cut_points: Sequence[int]) -> BratteliDiagram:
    """Merge the levels between consecutive cuts c_{j-1} < k <= c_j into one"""
    cuts = list(cut_points)
    if not cuts:
        raise RangeError("at least one cut point is required")
    previous = 0
    for c in cuts:
        if c <= previous or c > d.depth:
            raise RangeError(f"cut points must increase within 1..{d.depth}, got {cuts}")
        previous = c
    if cuts == list(range(1, d.depth + 1)):
        return d
    levels = []
    previous = 0
    for c in cuts:
        product = d.levels[previous]
        for k in range(previous + 1, c):
            product = product @ d.levels[k]
        levels.append(product)
        previous = c
    terminal = d.terminal and cuts[-1] == d.depth
    return BratteliDiagram(d.root_arity, tuple(levels), terminal=terminal)


def dimension_vector(d: BratteliDiagram, k: int) -> Tuple[int, ...]:
    """Path counts from the root to the vertices of level k"""
    if k < 0:
        raise RangeError(f"level must be nonnegative, got {k}")
    if k == 0:
        return (1,)
    vector = [1] * d.root_arity
    for i in range(1, k + 1):
        m = level(d, i)
        vector = [sum(vector[r] * m[r, s] for r in range(m.rows)) for s in range(m.cols)]
    return tuple(vector)


# ----- common tails -----

@dataclass(frozen=True)
class TailWitness:
    prefix1: int
    prefix2: int


def _window(d1: BratteliDiagram, d2: BratteliDiagram, p1: int, p2: int) -> int:
    if d1.periodic_tail and d2.periodic_tail:
        pre = max(d1.periodic_tail[0] - p1, d2.periodic_tail[0] - p2, 0)
        return pre + math.lcm(d1.periodic_tail[1], d2.periodic_tail[1])
    return min(d1.depth - p1, d2.depth - p2)


def _permuted_match(first: List[IntMatrix], second: List[IntMatrix]) -> bool:
    """Vertex relabellings sigma_k with first_k[sigma_{k-1} r, sigma_k s] == second_k[r, s]"""
    def extend(k: int, sigma: Tuple[int, ...]) -> bool:
        if k == len(first):
            return True
        a, b = first[k], second[k]
        if a.rows != b.rows or a.cols != b.cols:
            return False
        for tau in itertools.permutations(range(a.cols)):
            if all(a[sigma[r], tau[s]] == b[r, s] for r in range(a.rows) for s in range(a.cols)):
                if extend(k + 1, tau):
                    return True
        return False

    if not first:
        return False
    return any(extend(0, sigma) for sigma in itertools.permutations(range(first[0].rows)))


def _tails_agree(d1, d2, p1, p2, up_to_permutation) -> bool:
    window = _window(d1, d2, p1, p2)
    if window < 1:
        return False
    first = [level(d1, p1 + i) for i in range(1, window + 1)]
    second = [level(d2, p2 + i) for i in range(1, window + 1)]
    if up_to_permutation:
        return _permuted_match(first, second)
    return first == second


def tail_equivalent_bounded(d1: BratteliDiagram, d2: BratteliDiagram, depth: int,
                            up_to_permutation: bool = False) -> Optional[TailWitness]:
    """
    Prefix drops (p1, p2), both at most ``depth``, after which the level
    sequences coincide; None when no witness exists within the bound.
    Candidates are tried by total drop, then by p1.
    """
    if depth < 0:
        raise UsageError(f"depth must be nonnegative, got {depth}")
    for total in range(2 * depth + 1):
        for p1 in range(max(0, total - depth), min(total, depth) + 1):
            p2 = total - p1
            if p1 > d1.depth or p2 > d2.depth:
                continue
            if _tails_agree(d1, d2, p1, p2, up_to_permutation):
                logger.debug("common tail after dropping %d and %d levels", p1, p2)
                return TailWitness(p1, p2)
    return None


# ----- DOT -----

def dot_export(d: BratteliDiagram) -> str:
    """Graphviz text; vertex v{k}_{i} is vertex i of layer k"""
    lines = ["digraph bratteli {", "  rankdir=LR;", "  root [shape=point];"]
    for i in range(d.root_arity):
        lines.append(f"  root -> v0_{i};")
    for k, m in enumerate(d.levels, start=1):
        label = d.labels[k - 1] if d.labels else ""
        lines.append(f"  // level {k}: {label}" if label else f"  // level {k}")
        for r in range(m.rows):
            for s in range(m.cols):
                if m[r, s]:
                    lines.append(f'  v{k - 1}_{r} -> v{k}_{s} [label="{m[r, s]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
