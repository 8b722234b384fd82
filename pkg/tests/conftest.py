import random

import numpy as np
import pytest

from argmine.classify import RelationPrediction
from argmine.graph import ArgumentGraph, Inode, Snode, Stance, add_argument, add_relation, to_aif_json
from argmine.majorclaim import CLAIM, PREMISE, Adu
from argmine.relations import RelationMatrix
from argmine.segment import SentenceSpan

# lines printed by the acceptance suite, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion ")[1].split()[0].rstrip(":"))):
            terminalreporter.write_line(line)


WORDS = (
    "tax school energy health city car price study risk policy children "
    "free should must because therefore clearly data safety budget"
).split()


def random_text(rng: random.Random, tag: int) -> str:
    words = [rng.choice(WORDS) for _ in range(rng.randint(2, 9))]
    return f"{' '.join(words).capitalize()} {tag}."


def random_graph(rng: random.Random, n_inodes: int, extra_links: int = 0) -> ArgumentGraph:
    """Valid graph built by attaching each new premise to a random existing I-node."""
    graph = ArgumentGraph.single(random_text(rng, 0))
    for k in range(1, n_inodes):
        target = rng.choice(graph.inodes).id
        stance = rng.choice(list(Stance))
        prob = rng.choice([None, round(rng.uniform(0.5, 1.0), 6)])
        premise = Inode(graph.new_id(), random_text(rng, k))
        snode = Snode(str(int(premise.id) + 1), stance, prob)
        graph = add_argument(graph, premise, snode, target)
    for _ in range(extra_links if len(graph.inodes) > 1 else 0):
        a, b = rng.sample([n.id for n in graph.inodes], 2)
        if a == graph.major_claim:
            a, b = b, a
        try:
            graph = add_relation(graph, a, Snode(graph.new_id(), rng.choice(list(Stance))), b)
        except Exception:
            pass
    return graph


def make_adu(adu_id: str, index: int, role: str = PREMISE, embedding=(1.0, 0.0), text=None) -> Adu:
    text = text or f"Unit number {adu_id}."
    span = SentenceSpan(index, index * 100, index * 100 + len(text), text)
    return Adu(adu_id, span, role, np.asarray(embedding, dtype=float))


def random_adus(rng: random.Random, n: int, dim: int = 4) -> tuple[Adu, list[Adu]]:
    """Major claim plus n ADUs with random roles and embeddings."""
    mc = make_adu("0", 0, CLAIM, [rng.gauss(0, 1) for _ in range(dim)], "Major claim text.")
    adus = [
        make_adu(str(i), i, rng.choice([CLAIM, PREMISE]), [rng.gauss(0, 1) for _ in range(dim)], f"Unit {i} text.")
        for i in range(1, n + 1)
    ]
    return mc, adus


def random_relations(rng: random.Random, ids: list[str], ties: bool = False) -> RelationMatrix:
    def pred(a, b):
        p = rng.choice([0.5, 0.75, 1.0]) if ties else rng.uniform(0.5, 1.0)
        return RelationPrediction(rng.choice(list(Stance)), p, rng.random() < 0.2)

    return RelationMatrix.from_function(ids, pred)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def fig1_graph():
    """Attack relation from the health-insurance microtext example."""
    g = ArgumentGraph.single("health insurance companies should naturally cover alternative medical treatments.")
    return add_argument(
        g,
        Inode("1", "Not all practices and approaches may have been proven in clinical trials,"),
        Snode("2", Stance.ATTACK),
        "0",
    )


SENTENCES = [
    "Cities should ban private cars from their centres.",
    "Traffic noise harms the health of residents.",
    "Exhaust fumes pollute the air that children breathe.",
    "Shop owners fear that customers will stay away.",
    "Public transport can carry far more people per hour.",
    "Several European cities report cleaner air after similar bans.",
    "Delivery vans would still need access to the streets.",
    "Cycling becomes safer when fewer cars are on the road.",
]


def write_support_corpus(directory, n_cases: int = 4, seed: int = 0) -> None:
    """Benchmarks whose relations are all Support, text = the I-node texts in order."""
    rng = random.Random(seed)
    for c in range(n_cases):
        texts = rng.sample(SENTENCES, rng.randint(3, 6))
        g = ArgumentGraph.single(texts[0])
        for k, t in enumerate(texts[1:], 1):
            target = rng.choice([n.id for n in g.inodes])
            g = add_argument(g, Inode(str(2 * k - 1), t), Snode(str(2 * k), Stance.SUPPORT), target)
        (directory / f"case{c}.txt").write_text(" ".join(texts) + "\n", encoding="utf-8")
        (directory / f"case{c}.json").write_bytes(to_aif_json(g))
