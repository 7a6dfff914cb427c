"""Фикстуры для интеграционных тестов."""

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker


@pytest.fixture(autouse=True)
def journal_db(tmp_path, monkeypatch):
    """Журнал прогонов на отдельной SQLite-базе для каждого теста."""
    engine = create_engine(f"sqlite:///{tmp_path / 'journal.db'}")
    monkeypatch.setattr("tubelab.db.dependencies.session_maker", sessionmaker(engine, expire_on_commit=False))
    yield engine
    engine.dispose()


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path
