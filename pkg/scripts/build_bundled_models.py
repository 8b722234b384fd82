"""Retrain the demo models shipped in src/argmine/data from the bundled TSV files.

Run after changing the feature extractor, the word lists or the training data:

    python scripts/build_bundled_models.py
"""

from pathlib import Path

from argmine.classify import TrainConfig, save_model
from argmine.features import open_embeddings
from argmine.lexicon import Language, Lexicon
from argmine.pipeline import DEFAULT_VECTORS
from argmine.training import train_from_file

DATA = Path(__file__).resolve().parent.parent / "src" / "argmine" / "data"


def main() -> None:
    table = open_embeddings(DEFAULT_VECTORS)
    config = TrainConfig(learning_rate=0.5, l2=1e-2, epochs=400, seed=0)
    for lang in Language:
        lexicon = Lexicon.load(lang)
        for task in ("adu", "claim_premise", "relation"):
            model = train_from_file(DATA / f"{task}_{lang.value}.tsv", task, table, lang, config, lexicon)
            out = DATA / f"{task}_{lang.value}.json"
            save_model(model, out)
            print(f"wrote {out.name}")


if __name__ == "__main__":
    main()
