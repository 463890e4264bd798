import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lingo import Document


def make_docs(texts, lang="en", prefix="d"):
    return [Document(id=f"{prefix}{i}", text=t, lang=lang) for i, t in enumerate(texts)]


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


def docs_to_jsonl(path, docs):
    return write_jsonl(
        path, [{"id": d.id, "text": d.text, "lang": d.lang} for d in docs]
    )


@pytest.fixture(scope="session")
def desk_corpus():
    from deskcorpus import make_desk_corpus

    return make_desk_corpus()
