from fractions import Fraction

import numpy as np
import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from tubelab.db.base import Base
from tubelab.db import models  # noqa: F401


@pytest.fixture
def rng():
    """Генератор PCG64 с фиксированным зерном."""
    return np.random.default_rng(12345)


@pytest.fixture
def delta():
    return Fraction(1, 64)


@pytest.fixture
def db_session(tmp_path):
    """Сессия на временной SQLite с созданной схемой."""
    engine = create_engine(f"sqlite:///{tmp_path / 'runs.db'}")
    Base.metadata.create_all(engine)
    session = sessionmaker(engine, expire_on_commit=False)()
    try:
        yield session
    finally:
        session.close()
        engine.dispose()
