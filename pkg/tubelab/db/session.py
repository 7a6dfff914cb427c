import logging

from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker

from tubelab.config import settings
from tubelab.db import models  # noqa: F401
from tubelab.db.base import Base

logger = logging.getLogger(__name__)

engine = create_engine(
    settings.database_url,
    echo=settings.debug,
    pool_pre_ping=True,
)

session_maker = sessionmaker(
    engine,
    expire_on_commit=False,
)


def ensure_schema(session: Session) -> None:
    """Для SQLite создаёт таблицы журнала, если их нет; PostgreSQL ведётся миграциями Alembic."""
    bind = session.get_bind()
    if bind.dialect.name == "sqlite":
        Base.metadata.create_all(bind)
        logger.debug("SQLite schema ensured at %s", bind.url)
