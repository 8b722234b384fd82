"""Graph construction from a major claim, the remaining ADUs and relation predictions."""

from __future__ import annotations

from typing import Optional, Sequence

from .errors import ArgmineError
from .graph import ArgumentGraph, Inode, Snode, Stance, add_argument, add_relation
from .majorclaim import CLAIM, Adu
from .relations import RelationMatrix

DEFAULT_BOUND_FACTOR = 0.98
DEFAULT_MAX_ITERATIONS = 10


def _check_inputs(major_claim: Adu, adus: Sequence[Adu]) -> None:
    ids = [a.id for a in adus]
    if len(set(ids)) != len(ids):
        raise ArgmineError("duplicate ADU ids")
    if major_claim.id in ids:
        raise ArgmineError("major claim must not be among the ADUs")


def _inode(adu: Adu) -> Inode:
    return Inode(adu.id, adu.text, (adu.span.start, adu.span.end))


class _Builder:
    """Accumulates a graph; S-node ids never collide with any ADU id."""

    def __init__(self, major_claim: Adu, adus: Sequence[Adu], relations: RelationMatrix):
        self.relations = relations
        self.graph = ArgumentGraph(inodes=(_inode(major_claim),), major_claim=major_claim.id)
        self._reserved = {major_claim.id, *(a.id for a in adus)}
        numeric = [int(i) for i in self._reserved if i.isdigit()]
        self._next = max(numeric) + 1 if numeric else 0

    def _sid(self) -> str:
        while str(self._next) in self._reserved:
            self._next += 1
        sid = str(self._next)
        self._next += 1
        return sid

    def _snode(self, child: str, parent: str, forced: Optional[Stance] = None) -> Snode:
        pred = self.relations.get((child, parent))
        if forced is not None or pred is None:
            return Snode(self._sid(), forced or Stance.SUPPORT)
        return Snode(self._sid(), pred.stance, pred.probability)

    def attach(self, adu: Adu, parent: str, forced: Optional[Stance] = None) -> None:
        self.graph = add_argument(self.graph, _inode(adu), self._snode(adu.id, parent, forced), parent)

    def link(self, child: str, parent: str) -> None:
        self.graph = add_relation(self.graph, child, self._snode(child, parent), parent)


def build_flat_tree(major_claim: Adu, adus: Sequence[Adu], relations: RelationMatrix) -> ArgumentGraph:
    """Every ADU hangs directly off the major claim."""
    _check_inputs(major_claim, adus)
    b = _Builder(major_claim, adus, relations)
    for adu in adus:
        b.attach(adu, major_claim.id)
    return b.graph


def build_adu_position(major_claim: Adu, adus: Sequence[Adu], relations: RelationMatrix) -> ArgumentGraph:
    """Claims attach to the major claim, premises to the nearest claim by sentence index."""
    _check_inputs(major_claim, adus)
    b = _Builder(major_claim, adus, relations)
    claims = [a for a in adus if a.role == CLAIM]
    for claim in claims:
        b.attach(claim, major_claim.id)
    for adu in adus:
        if adu.role == CLAIM:
            continue
        if claims:
            # min keeps the first of equally distant claims, i.e. the earlier one
            parent = min(claims, key=lambda c: (abs(c.position - adu.position), c.position)).id
        else:
            parent = major_claim.id
        b.attach(adu, parent)
    return b.graph


def build_pairwise(
    major_claim: Adu,
    adus: Sequence[Adu],
    relations: RelationMatrix,
    bound_factor: float = DEFAULT_BOUND_FACTOR,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    bound_mode: str = "relative",
) -> ArgumentGraph:
    """Link ADUs whose relation probability comes close to their best partner.

    Each ADU gets a lower bound: ``bound_factor`` times its best relation
    probability (``relative``) or ``bound_factor`` itself (``absolute``).
    ADUs reaching the bound towards the major claim attach to it; the rest
    attach, over up to ``max_iterations`` passes in text order, to every
    already placed I-node they reach the bound for. Leftovers are linked to
    the major claim as Support.
    """
    _check_inputs(major_claim, adus)
    if not 0.0 < bound_factor <= 1.0:
        raise ArgmineError(f"bound factor {bound_factor} outside (0, 1]")
    if max_iterations < 1:
        raise ArgmineError("max_iterations must be at least 1")
    if bound_mode not in ("relative", "absolute"):
        raise ArgmineError(f"unknown bound mode {bound_mode!r}")

    mc = major_claim.id
    node_ids = [mc] + [a.id for a in adus]
    bound: dict[str, float] = {}
    for a in adus:
        if bound_mode == "absolute":
            bound[a.id] = bound_factor
        else:
            best = max(relations.probability(a.id, b) for b in node_ids if b != a.id)
            bound[a.id] = bound_factor * best

    b = _Builder(major_claim, adus, relations)
    placed: list[str] = [mc]
    pending: list[Adu] = []
    for a in adus:
        if relations.probability(a.id, mc) >= bound[a.id] and (a.id, mc) in relations:
            b.attach(a, mc)
            placed.append(a.id)
        else:
            pending.append(a)

    if len(placed) == 1 and pending:
        first = pending.pop(0)
        b.attach(first, mc)
        placed.append(first.id)

    for _ in range(max_iterations):
        if not pending:
            break
        still: list[Adu] = []
        for a in pending:
            parents = [p for p in placed if (a.id, p) in relations and relations.probability(a.id, p) >= bound[a.id]]
            if not parents:
                still.append(a)
                continue
            b.attach(a, parents[0])
            for p in parents[1:]:
                b.link(a.id, p)
            placed.append(a.id)
        if len(still) == len(pending):
            pending = still
            break
        pending = still

    for a in pending:
        b.attach(a, mc, forced=Stance.SUPPORT)
    return b.graph


CONSTRUCTORS = {
    "flat": build_flat_tree,
    "position": build_adu_position,
    "pairwise": build_pairwise,
}


def construct(
    name: str,
    major_claim: Adu,
    adus: Sequence[Adu],
    relations: RelationMatrix,
    bound_factor: float = DEFAULT_BOUND_FACTOR,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    bound_mode: str = "relative",
) -> ArgumentGraph:
    if name == "pairwise":
        return build_pairwise(major_claim, adus, relations, bound_factor, max_iterations, bound_mode)
    if name not in CONSTRUCTORS:
        raise ArgmineError(f"unknown constructor {name!r} (expected one of {', '.join(CONSTRUCTORS)})")
    return CONSTRUCTORS[name](major_claim, adus, relations)
