import logging
import sys

from tubelab.config import settings

DEBUG_FORMAT = "%(asctime)s | %(levelname)s | %(processName)s | %(name)s | %(filename)s:%(lineno)d | %(message)s"
PROD_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def setup_logging() -> None:
    """Настраивает логирование по окружению.

    - dev/test: DEBUG, имя процесса (движки с --jobs пишут из пула) и файл:строка
    - prod: INFO, компактный формат

    Всё уходит в stderr: stdout занят TSV. Предупреждения numpy попадают в лог через py.warnings.
    """
    if settings.debug:
        level = logging.DEBUG
        fmt = DEBUG_FORMAT
    else:
        level = logging.INFO
        fmt = PROD_FORMAT

    logging.basicConfig(
        level=level,
        format=fmt,
        stream=sys.stderr,
    )
    logging.captureWarnings(True)

    if settings.debug:
        logging.getLogger("sqlalchemy.engine").setLevel(logging.WARNING)
        logging.getLogger("alembic").setLevel(logging.INFO)
