import json
from pathlib import Path

import pytest

from assoc_trends.cooccur import TargetTerm
from assoc_trends.normalize import TokenStream

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"

AI = TargetTerm(("artificial", "intelligence"))
ML = TargetTerm(("machine", "learning"))


def stream(tokens, doc_id="d1", year=2011):
    return TokenStream(doc_id=doc_id, year=year, tokens=tuple(tokens))


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")


@pytest.fixture
def terms():
    return [AI, ML]
