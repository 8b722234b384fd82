"""Agreement between a generated argument graph and a benchmark graph.

I-nodes are matched by normalized Levenshtein similarity; the major claim,
S-node and edge agreements are then read through that mapping.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Union

from rapidfuzz.distance import Levenshtein

from .errors import ArgmineError
from .graph import ArgumentGraph, Stance
from .relations import RelationMatrix


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions and substitutions."""
    return Levenshtein.distance(a, b)


def node_similarity(u: str, v: str) -> float:
    longest = max(len(u), len(v))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(u, v) / longest


@dataclass(frozen=True)
class NodeMapping:
    """benchmark I-node id -> (generated I-node id or None, similarity)."""

    pairs: dict[str, tuple[Optional[str], float]]

    def __getitem__(self, benchmark_id: str) -> Optional[str]:
        return self.pairs[benchmark_id][0]

    def similarity(self, benchmark_id: str) -> float:
        return self.pairs[benchmark_id][1]

    def get(self, benchmark_id: str) -> Optional[str]:
        entry = self.pairs.get(benchmark_id)
        return entry[0] if entry else None


def build_mapping(benchmark: ArgumentGraph, generated: ArgumentGraph) -> NodeMapping:
    """Greedy global matching by descending similarity.

    Pairs are taken highest similarity first; equal similarities go to the
    earlier benchmark node, then the earlier generated node. Each generated
    node is used at most once; benchmark nodes left over map to None.
    """
    if not generated.inodes:
        raise ArgmineError("generated graph has no I-nodes")
    bench = benchmark.inodes
    gen = generated.inodes
    candidates = []
    for i, u in enumerate(bench):
        for j, v in enumerate(gen):
            candidates.append((-node_similarity(u.text, v.text), i, j))
    candidates.sort()
    pairs: dict[str, tuple[Optional[str], float]] = {}
    used: set[int] = set()
    for neg_sim, i, j in candidates:
        if len(pairs) == len(bench) or len(used) == len(gen):
            break
        if bench[i].id in pairs or j in used:
            continue
        pairs[bench[i].id] = (gen[j].id, -neg_sim)
        used.add(j)
    for u in bench:
        pairs.setdefault(u.id, (None, 0.0))
    return NodeMapping({u.id: pairs[u.id] for u in bench})


def inode_agreement(mapping: NodeMapping, benchmark: ArgumentGraph, weighted: bool = True) -> float:
    """Similarity mean over benchmark I-nodes, weighted by their character length."""
    total = 0.0
    norm = 0.0
    for u in benchmark.inodes:
        w = len(u.text) if weighted else 1.0
        total += w * mapping.similarity(u.id)
        norm += w
    return total / norm if norm else 1.0


def major_claim_agreement(mapping: NodeMapping, benchmark: ArgumentGraph, generated: ArgumentGraph) -> int:
    if benchmark.major_claim is None:
        return 1
    mapped = mapping.get(benchmark.major_claim)
    return int(mapped is not None and mapped == generated.major_claim)


def _graph_stances(graph: ArgumentGraph) -> dict[tuple[str, str], set[Stance]]:
    out: dict[tuple[str, str], set[Stance]] = {}
    for x, s, z in graph.triples():
        out.setdefault((x, z), set()).add(graph.snode_map[s].stance)
    return out


def snode_agreement(
    mapping: NodeMapping,
    benchmark: ArgumentGraph,
    generated: Union[ArgumentGraph, RelationMatrix],
) -> float:
    """Share of benchmark (in, out) tuples whose mapped pair gets the same stance.

    ``generated`` is either the relation predictions for the generated
    I-nodes or the generated graph itself, whose S-nodes are then used.
    No tuples at all scores 1.0.
    """
    if isinstance(generated, RelationMatrix):
        def stance_of(a: str, b: str) -> set[Stance]:
            pred = generated.get((a, b))
            return {pred.stance} if pred is not None else set()
    else:
        table = _graph_stances(generated)

        def stance_of(a: str, b: str) -> set[Stance]:
            return table.get((a, b), set())

    total = correct = 0
    for x, s, z in benchmark.triples():
        total += 1
        mx, mz = mapping.get(x), mapping.get(z)
        if mx is None or mz is None:
            continue
        if benchmark.snode_map[s].stance in stance_of(mx, mz):
            correct += 1
    return correct / total if total else 1.0


def edge_agreement(mapping: NodeMapping, benchmark: ArgumentGraph, generated: ArgumentGraph) -> float:
    """Share of benchmark edges in an I-S-I triple whose mapped I-nodes are linked in the generated graph.

    Edge direction and S-node type are ignored.
    """
    if not benchmark.edges:
        return 1.0
    linked = {frozenset((x, z)) for x, _, z in generated.triples()}
    mapped: set[tuple[str, str]] = set()
    for x, s, z in benchmark.triples():
        mx, mz = mapping.get(x), mapping.get(z)
        if mx is not None and mz is not None and frozenset((mx, mz)) in linked:
            mapped.add((x, s))
            mapped.add((s, z))
    return len(mapped) / len(set(benchmark.edges))


@dataclass(frozen=True)
class AgreementReport:
    inode: float
    major_claim: int
    snode: float
    edge: float
    time_s: float

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate_pair(
    benchmark: ArgumentGraph,
    generated: ArgumentGraph,
    elapsed: float = 0.0,
    relations: Optional[RelationMatrix] = None,
    weighted: bool = True,
) -> AgreementReport:
    """All agreement scores for one document.

    S-node agreement uses ``relations`` (keyed by generated I-node ids) when
    given, otherwise the S-nodes of ``generated``.
    """
    mapping = build_mapping(benchmark, generated)
    return AgreementReport(
        inode=inode_agreement(mapping, benchmark, weighted),
        major_claim=major_claim_agreement(mapping, benchmark, generated),
        snode=snode_agreement(mapping, benchmark, relations if relations is not None else generated),
        edge=edge_agreement(mapping, benchmark, generated),
        time_s=elapsed,
    )
