from collections.abc import Generator
from contextlib import contextmanager

from sqlalchemy.orm import Session

from tubelab.db.session import session_maker


@contextmanager
def get_session() -> Generator[Session, None, None]:
    """Менеджер контекста, возвращающий сессию журнала прогонов."""

    session = session_maker()
    try:
        yield session
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
