from sqlalchemy.orm import DeclarativeBase


class Base(DeclarativeBase):
    """Базовый класс моделей журнала прогонов.

    Base.metadata собирает все таблицы; Alembic берёт её для автогенерации миграций.
    """

    pass
