"""
Coordinate transformations L_abc, R_abc and the tetrahedron equation.

Each transformation rewrites only x_ab, x_ac and x_bc. Composing one per
triple of T_n in lexicographic order gives the bar of M' (for L) or of M''
(for R).
"""

import logging
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from .core import InvalidIndexError, JacobiCoords, Triple, triples, validate_triple
from .involutions import bar, jacobi_dprime, jacobi_prime

logger = logging.getLogger(__name__)


class TransformKind(str, Enum):
    L = "L"
    R = "R"


Step = Tuple[TransformKind, Triple]


def _three(coords: JacobiCoords, a: int, b: int, c: int):
    validate_triple((a, b, c), coords.n)
    return coords[(a, b)], coords[(a, c)], coords[(b, c)]


def l_transform(coords: JacobiCoords, a: int, b: int, c: int) -> JacobiCoords:
    x_ab, x_ac, x_bc = _three(coords, a, b, c)
    return coords.replace({(a, b): x_ac, (a, c): x_ab, (b, c): x_ac * x_bc / x_ab})


def r_transform(coords: JacobiCoords, a: int, b: int, c: int) -> JacobiCoords:
    x_ab, x_ac, x_bc = _three(coords, a, b, c)
    return coords.replace({(a, b): x_ab * x_ac / x_bc, (a, c): x_bc, (b, c): x_ac})


def l_inverse(coords: JacobiCoords, a: int, b: int, c: int) -> JacobiCoords:
    """Solve y = L_abc(x) for x."""
    y_ab, y_ac, y_bc = _three(coords, a, b, c)
    x_ab = y_ac
    x_ac = y_ab
    return coords.replace({(a, b): x_ab, (a, c): x_ac, (b, c): y_bc * x_ab / x_ac})


def r_inverse(coords: JacobiCoords, a: int, b: int, c: int) -> JacobiCoords:
    """Solve y = R_abc(x) for x."""
    y_ab, y_ac, y_bc = _three(coords, a, b, c)
    x_ac = y_bc
    x_bc = y_ac
    return coords.replace({(a, b): y_ab * x_bc / x_ac, (a, c): x_ac, (b, c): x_bc})


def apply_transform(coords: JacobiCoords, kind: TransformKind, t: Sequence[int]) -> JacobiCoords:
    a, b, c = t
    if TransformKind(kind) is TransformKind.L:
        return l_transform(coords, a, b, c)
    return r_transform(coords, a, b, c)


def apply_chain(coords: JacobiCoords, steps: Iterable[Step]) -> JacobiCoords:
    """Apply steps in iteration order: the first step acts on the input."""
    for kind, t in steps:
        coords = apply_transform(coords, kind, t)
    return coords


def lex_order(n: int, descending: bool = True) -> List[Triple]:
    """
    Order in which the triples of T_n act on the input.

    The composition is written with the triples ascending from the outside
    in, so the largest triple acts first. Any admissible order gives the same
    map; `descending=False` exists to check that.
    """
    if n < 3:
        raise InvalidIndexError(f"lexicographic composition needs n >= 3, got {n}")
    ordered = list(triples(n))
    return ordered[::-1] if descending else ordered


def lex_composition(coords: JacobiCoords, kind: TransformKind, descending: bool = True) -> JacobiCoords:
    kind = TransformKind(kind)
    return apply_chain(coords, ((kind, t) for t in lex_order(coords.n, descending)))


def lex_target(coords: JacobiCoords, kind: TransformKind) -> JacobiCoords:
    """Closed form the lexicographic composition must reproduce."""
    if TransformKind(kind) is TransformKind.L:
        return bar(jacobi_prime(coords))
    return bar(jacobi_dprime(coords))


def tetrahedron_chains(kind: TransformKind) -> Tuple[List[Step], List[Step]]:
    """Both sides of the n=4 equation, listed in application order."""
    kind = TransformKind(kind)
    outer_first = [(kind, t) for t in ((2, 3, 4), (1, 3, 4), (1, 2, 4), (1, 2, 3))]
    return outer_first, outer_first[::-1]


def verify_tetrahedron(coords: JacobiCoords, kind: Optional[TransformKind] = None) -> bool:
    """Both orderings agree with each other and with the closed form."""
    if coords.n != 4:
        raise InvalidIndexError(f"tetrahedron equation lives on n=4, got n={coords.n}")
    kinds = list(TransformKind) if kind is None else [TransformKind(kind)]
    for k in kinds:
        left, right = tetrahedron_chains(k)
        first = apply_chain(coords, left)
        second = apply_chain(coords, right)
        target = lex_target(coords, k)
        if not first == second == target:
            logger.warning(f"Tetrahedron equation fails for kind {k.value} at {coords}")
            return False
    return True
