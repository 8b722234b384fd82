"""End-to-end and preset-ADU mining runs, corpus loading and batch evaluation."""

from __future__ import annotations

import enum
import hashlib
import logging
import time
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .classify import Classifier, RelationPrediction, classify_adu, classify_claim_premise, classify_relation, load_model
from .construct import CONSTRUCTORS, construct
from .errors import ArgmineError, ConfigError, CorpusError, NoArgumentFound, ParseError
from .features import EmbeddingTable, extract_features, open_embeddings, sentence_embedding, tokenize
from .graph import ArgumentGraph, Stance, from_aif_json
from .lexicon import Language, Lexicon
from .majorclaim import CLAIM, MAJOR_CLAIM, METHODS, PREMISE, Adu, select_major_claim
from .metrics import AgreementReport, evaluate_pair
from .relations import RelationMatrix
from .segment import preset_segments, segment

log = logging.getLogger(__name__)

CONFIG_VERSION = 1
DEFAULT_VECTORS = "hash:50"


class Mode(str, enum.Enum):
    END_TO_END = "end-to-end"
    PRESET = "preset"


@dataclass(frozen=True)
class PipelineConfig:
    language: Language = Language.EN
    mc_method: str = "centroid"
    constructor: str = "position"
    neutral_threshold: float = 0.5
    bound_factor: float = 0.98
    bound_mode: str = "relative"
    max_iterations: int = 10
    probability_direction: str = "incoming"
    mode: Mode = Mode.END_TO_END
    vectors: str = DEFAULT_VECTORS
    adu_model: Optional[str] = None
    claim_model: Optional[str] = None
    relation_model: Optional[str] = None
    lexicons: Optional[str] = None
    workers: int = 1
    inode_weighting: str = "length"

    def __post_init__(self):
        # accept plain strings from config files and CLI flags
        object.__setattr__(self, "language", Language.parse(self.language))
        try:
            object.__setattr__(self, "mode", Mode(self.mode))
        except ValueError:
            raise ConfigError(f"unknown mode {self.mode!r}") from None
        if self.mc_method not in METHODS:
            raise ConfigError(f"unknown major-claim method {self.mc_method!r}")
        if self.constructor not in CONSTRUCTORS:
            raise ConfigError(f"unknown constructor {self.constructor!r}")
        if not 0.5 <= self.neutral_threshold <= 1.0:
            raise ConfigError(f"neutral threshold {self.neutral_threshold} outside [0.5, 1.0]")
        if not 0.0 < self.bound_factor <= 1.0:
            raise ConfigError(f"bound factor {self.bound_factor} outside (0, 1]")
        if self.bound_mode not in ("relative", "absolute"):
            raise ConfigError(f"unknown bound mode {self.bound_mode!r}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.probability_direction not in ("incoming", "both"):
            raise ConfigError(f"unknown probability direction {self.probability_direction!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.inode_weighting not in ("length", "uniform"):
            raise ConfigError(f"unknown I-node weighting {self.inode_weighting!r}")

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides) -> "PipelineConfig":
        """Read ``key = value`` lines; ``#`` starts a comment."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        values: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (p.strip() for p in line.split("=", 1))
            values[key] = value
        version = values.pop("version", str(CONFIG_VERSION))
        if version != str(CONFIG_VERSION):
            raise ConfigError(f"{path}: unsupported config version {version}")
        return cls.from_mapping({**values, **{k: v for k, v in overrides.items() if v is not None}})

    @classmethod
    def from_mapping(cls, values: dict) -> "PipelineConfig":
        kinds = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in values.items():
            if key not in kinds:
                raise ConfigError(f"unknown config key {key!r}")
            kind = kinds[key]
            try:
                if kind == "float":
                    value = float(value)
                elif kind == "int":
                    value = int(value)
            except ValueError:
                raise ConfigError(f"config key {key!r}: bad value {value!r}") from None
            kwargs[key] = value
        return cls(**kwargs)

    def with_overrides(self, **overrides) -> "PipelineConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_text(self) -> str:
        lines = [f"version = {CONFIG_VERSION}"]
        for key, value in asdict(self).items():
            if value is None:
                continue
            if isinstance(value, enum.Enum):
                value = value.value
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha1(self.to_text().encode("utf-8")).hexdigest()[:10]

    def check_paths(self) -> None:
        for key in ("adu_model", "claim_model", "relation_model", "lexicons"):
            value = getattr(self, key)
            if value is not None and not Path(value).exists():
                raise ConfigError(f"{key}: {value} does not exist")
        if not self.vectors.startswith("hash:") and not Path(self.vectors).exists():
            raise ConfigError(f"vectors: {self.vectors} does not exist")


def bundled_model_path(task: str, language: Language) -> Path:
    return Path(str(resources.files("argmine") / "data" / f"{task}_{language.value}.json"))


@dataclass(frozen=True)
class Resources:
    """Models, vectors and word lists; loaded once, read-only afterwards."""

    table: EmbeddingTable
    lexicon: Lexicon
    adu_model: Classifier
    claim_model: Classifier
    relation_model: Classifier

    @classmethod
    def load(cls, config: PipelineConfig) -> "Resources":
        config.check_paths()
        lang = config.language
        return cls(
            table=open_embeddings(config.vectors),
            lexicon=Lexicon.load(lang, config.lexicons),
            adu_model=load_model(config.adu_model or bundled_model_path("adu", lang)),
            claim_model=load_model(config.claim_model or bundled_model_path("claim_premise", lang)),
            relation_model=load_model(config.relation_model or bundled_model_path("relation", lang)),
        )


RelationFn = Callable[[Adu, Adu], RelationPrediction]


@dataclass
class PipelineResult:
    graph: Optional[ArgumentGraph]
    elapsed: float
    relations: Optional[RelationMatrix] = None
    stage_counts: Counter = field(default_factory=Counter)

    @property
    def found(self) -> bool:
        return self.graph is not None


Source = Union[str, Sequence[tuple[str, Optional[str]]]]


def _relation_matrix(adus: Sequence[Adu], relation_fn: RelationFn, counts: Counter) -> RelationMatrix:
    entries = {}
    for a in adus:
        for b in adus:
            if a is not b:
                entries[(a.id, b.id)] = relation_fn(a, b)
                counts["classify_relation"] += 1
    return RelationMatrix(entries)


def run_pipeline(
    source: Source,
    config: PipelineConfig,
    res: Optional[Resources] = None,
    relation_fn: Optional[RelationFn] = None,
) -> PipelineResult:
    """Mine one document.

    ``source`` is raw text in end-to-end mode, or (text, role) units with one
    ``MajorClaim`` in preset mode. Loading ``res`` is not part of the
    reported time. When no argumentative unit is found the result carries no
    graph instead of raising.
    """
    if res is None:
        res = Resources.load(config)
    if relation_fn is None:
        def relation_fn(a: Adu, b: Adu) -> RelationPrediction:
            return classify_relation(a.embedding, b.embedding, res.relation_model, config.neutral_threshold)

    counts: Counter = Counter()
    start = time.perf_counter()

    if config.mode is Mode.PRESET:
        if isinstance(source, str):
            raise ConfigError("preset mode needs a list of (text, role) units")
        spans = preset_segments(source)
        adus = [
            Adu(str(s.index), s, s.role or PREMISE, sentence_embedding(tokenize(s.text), res.table).vector)
            for s in spans
        ]
        majors = [a for a in adus if a.role == MAJOR_CLAIM]
        if len(majors) != 1:
            raise ArgmineError(f"preset units must contain exactly one {MAJOR_CLAIM}, found {len(majors)}")
        relations = _relation_matrix(adus, relation_fn, counts)
        major = majors[0]
    else:
        if not isinstance(source, str):
            raise ConfigError("end-to-end mode needs raw text")
        spans = segment(source, config.language, res.lexicon.abbreviations)
        counts["segment"] += 1
        adus = []
        for s in spans:
            fv = extract_features(s, len(spans), res.table, config.language, res.lexicon)
            counts["classify_adu"] += 1
            if classify_adu(fv, res.adu_model).label != "Argumentative":
                continue
            counts["classify_claim_premise"] += 1
            role = classify_claim_premise(fv, res.claim_model).label
            adus.append(Adu(str(s.index), s, role, fv.embedding, fv))
        if not adus:
            return PipelineResult(None, time.perf_counter() - start, None, counts)
        relations = _relation_matrix(adus, relation_fn, counts)
        counts["major_claim"] += 1
        major = select_major_claim(config.mc_method, adus, relations, config.probability_direction)

    rest = [a for a in adus if a is not major]
    counts["construct"] += 1
    graph = construct(
        config.constructor, major, rest, relations, config.bound_factor, config.max_iterations, config.bound_mode
    )
    return PipelineResult(graph, time.perf_counter() - start, relations, counts)


def mine(source: Source, config: PipelineConfig, res: Optional[Resources] = None) -> tuple[ArgumentGraph, float]:
    """Like run_pipeline but raises NoArgumentFound instead of returning an empty result."""
    result = run_pipeline(source, config, res)
    if result.graph is None:
        raise NoArgumentFound("no argument found")
    return result.graph, result.elapsed


# corpora -------------------------------------------------------------------


class Layout(str, enum.Enum):
    AIF_JSON = "aif-json"
    PLAIN_TEXT = "plain-text"


@dataclass
class CorpusCase:
    case_id: str
    text: Optional[str] = None
    preset_adus: Optional[list[tuple[str, str]]] = None
    benchmark: Optional[ArgumentGraph] = None

    @property
    def missing_benchmark(self) -> bool:
        return self.benchmark is None


def preset_adus_from_graph(graph: ArgumentGraph) -> list[tuple[str, str]]:
    """(text, role) units in document order; roles follow the graph structure.

    The major claim is MajorClaim, I-nodes receiving a relation are Claims,
    everything else is a Premise. Document order is the source-span order
    when every I-node has one, else file order.
    """
    targets = {z for _, _, z in graph.triples()}
    nodes = list(graph.inodes)
    if nodes and all(n.source_span is not None for n in nodes):
        nodes.sort(key=lambda n: n.source_span[0])
    units = []
    for n in nodes:
        if n.id == graph.major_claim:
            role = MAJOR_CLAIM
        elif n.id in targets:
            role = CLAIM
        else:
            role = PREMISE
        units.append((n.text, role))
    return units


def _read_graph(path: Path) -> ArgumentGraph:
    try:
        return from_aif_json(path.read_bytes(), require_major_claim=False)
    except ParseError as exc:
        raise CorpusError(f"{path}: {exc}") from exc


def load_corpus(directory: Union[str, Path], layout: Union[str, Layout] = Layout.AIF_JSON) -> list[CorpusCase]:
    directory = Path(directory)
    layout = Layout(layout)
    if not directory.is_dir():
        raise CorpusError(f"{directory} is not a readable directory")
    texts = {p.stem: p for p in directory.glob("*.txt")}
    cases = []
    if layout is Layout.PLAIN_TEXT:
        for case_id in sorted(texts):
            cases.append(CorpusCase(case_id, text=texts[case_id].read_text(encoding="utf-8")))
        return cases

    graphs = {p.stem: p for p in directory.glob("*.json")}
    orphans = sorted(set(graphs) - set(texts))
    if orphans:
        raise CorpusError(f"benchmark without text: {', '.join(orphans)}")
    for case_id in sorted(texts):
        benchmark = _read_graph(graphs[case_id]) if case_id in graphs else None
        if benchmark is None:
            log.warning("case %s has no benchmark graph", case_id)
        cases.append(
            CorpusCase(
                case_id,
                text=texts[case_id].read_text(encoding="utf-8"),
                preset_adus=preset_adus_from_graph(benchmark) if benchmark and benchmark.inodes else None,
                benchmark=benchmark,
            )
        )
    return cases


def corpus_statistics(cases: Sequence[CorpusCase]) -> dict[str, int]:
    stats = {"cases": 0, "inodes": 0, "snodes": 0, "edges": 0}
    for case in cases:
        if case.benchmark is None:
            continue
        stats["cases"] += 1
        stats["inodes"] += len(case.benchmark.inodes)
        stats["snodes"] += len(case.benchmark.snodes)
        stats["edges"] += len(case.benchmark.edges)
    return stats


def oracle_relations(benchmark: ArgumentGraph) -> RelationFn:
    """Relation predictions read off a benchmark graph by I-node text.

    Linked pairs get their benchmark stance with probability 1.0, all other
    pairs a neutral Support at 0.5.
    """
    texts = {n.id: n.text for n in benchmark.inodes}
    known = {}
    for x, s, z in benchmark.triples():
        known[(texts[x], texts[z])] = benchmark.snode_map[s].stance

    def predict(a: Adu, b: Adu) -> RelationPrediction:
        stance = known.get((a.text, b.text))
        if stance is None:
            return RelationPrediction(Stance.SUPPORT, 0.5, True)
        return RelationPrediction(stance, 1.0)

    return predict


# evaluation ----------------------------------------------------------------

REPORT_COLUMNS = (
    "case_id", "mode", "mc_method", "constructor", "threshold",
    "inode", "major_claim", "snode", "edge", "time_s", "config", "outcome",
)
METRIC_COLUMNS = ("inode", "major_claim", "snode", "edge", "time_s")


@dataclass
class EvaluationReport:
    rows: list[dict]

    def config_means(self) -> list[dict]:
        """One row of metric means per configuration."""
        groups: dict[str, list[dict]] = defaultdict(list)
        for row in self.rows:
            groups[row["config"]].append(row)
        out = []
        for key in sorted(groups, key=lambda k: _config_sort_key(groups[k][0])):
            rows = groups[key]
            first = rows[0]
            summary = {c: first[c] for c in ("config", "mode", "mc_method", "constructor", "threshold")}
            summary["cases"] = len(rows)
            for metric in METRIC_COLUMNS:
                summary[metric] = float(np.mean([r[metric] for r in rows]))
            out.append(summary)
        return out

    def _grouped(self, keys: tuple[str, ...], metric: str) -> dict[tuple, float]:
        groups: dict[tuple, list[float]] = defaultdict(list)
        for row in self.rows:
            groups[tuple(row[k] for k in keys)].append(row[metric])
        return {k: float(np.mean(v)) for k, v in sorted(groups.items(), key=lambda kv: str(kv[0]))}

    def by_major_claim_method(self) -> dict[tuple, float]:
        return self._grouped(("mc_method", "mode"), "major_claim")

    def by_threshold(self) -> dict[tuple, float]:
        return self._grouped(("threshold", "mode"), "snode")

    def by_constructor(self) -> dict[tuple, float]:
        return self._grouped(("constructor", "mode"), "edge")

    def tables(self) -> dict:
        def flat(d):
            return [{"key": list(k), "mean": v} for k, v in d.items()]

        return {
            "major_claim_by_method": flat(self.by_major_claim_method()),
            "snode_by_threshold": flat(self.by_threshold()),
            "edge_by_constructor": flat(self.by_constructor()),
            "inode_overall": float(np.mean([r["inode"] for r in self.rows])) if self.rows else 0.0,
        }


def _config_sort_key(row: dict):
    return (row["mode"], row["mc_method"], row["constructor"], row["threshold"], row["config"])


def _score_case(
    case: CorpusCase,
    config: PipelineConfig,
    res: Resources,
    relation_fn_factory: Optional[Callable[[CorpusCase], RelationFn]],
) -> dict:
    source: Source
    if config.mode is Mode.PRESET:
        if not case.preset_adus:
            raise CorpusError(f"case {case.case_id}: no preset ADUs available")
        source = case.preset_adus
    else:
        if case.text is None:
            raise CorpusError(f"case {case.case_id}: no source text")
        source = case.text
    relation_fn = relation_fn_factory(case) if relation_fn_factory else None
    result = run_pipeline(source, config, res, relation_fn)
    row = {
        "case_id": case.case_id,
        "mode": config.mode.value,
        "mc_method": config.mc_method,
        "constructor": config.constructor,
        "threshold": config.neutral_threshold,
        "config": config.fingerprint(),
    }
    if result.graph is None:
        report = AgreementReport(0.0, int(case.benchmark.major_claim is None), 0.0, 0.0, result.elapsed)
        row["outcome"] = "no-argument"
    else:
        report = evaluate_pair(
            case.benchmark, result.graph, result.elapsed, result.relations,
            weighted=config.inode_weighting == "length",
        )
        row["outcome"] = "ok"
    row.update(report.as_dict())
    return row


def run_evaluation(
    corpus: Union[str, Path, Sequence[CorpusCase]],
    configs: Sequence[PipelineConfig],
    workers: int = 1,
    relation_fn_factory: Optional[Callable[[CorpusCase], RelationFn]] = None,
) -> EvaluationReport:
    """Score every (case, config) combination against the case benchmarks."""
    cases = load_corpus(corpus) if isinstance(corpus, (str, Path)) else list(corpus)
    if not cases:
        raise CorpusError("empty corpus")
    if not configs:
        raise ConfigError("no configurations to evaluate")
    missing = [c.case_id for c in cases if c.benchmark is None]
    if missing:
        raise CorpusError(f"cases without benchmark: {', '.join(missing)}")

    cache: dict[tuple, Resources] = {}

    def resources_for(config: PipelineConfig) -> Resources:
        key = (config.language, config.vectors, config.adu_model, config.claim_model,
               config.relation_model, config.lexicons)
        if key not in cache:
            cache[key] = Resources.load(config)
        return cache[key]

    jobs = [(case, config, resources_for(config)) for config in configs for case in cases]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _score_case(*job, relation_fn_factory), jobs))
    else:
        rows = [_score_case(*job, relation_fn_factory) for job in jobs]
    rows.sort(key=lambda r: (_config_sort_key(r), r["case_id"]))
    return EvaluationReport(rows)
