import pytest

from civic311.ledger import FileSink, Ledger, RecordingSink
from civic311.nlq import load_default_dictionary
from civic311.ontology import load_fixture


@pytest.fixture(scope="session")
def replica():
    return load_fixture("replica")


@pytest.fixture(scope="session")
def full():
    return load_fixture("full")


@pytest.fixture(scope="session")
def dictionary():
    return load_default_dictionary()


@pytest.fixture
def recording_sink():
    return RecordingSink()


@pytest.fixture
def ledger(tmp_path, recording_sink):
    return Ledger(tmp_path / "requests.jsonl", recording_sink)


@pytest.fixture
def file_ledger(tmp_path):
    return Ledger(tmp_path / "requests.jsonl", FileSink(tmp_path / "outbox"))
