import logging
import sys

from tubelab.cli import run
from tubelab.logging_config import setup_logging

logger = logging.getLogger(__name__)


def main() -> None:
    setup_logging()
    code = run(sys.argv[1:])
    logger.debug("Exit code %d", code)
    sys.exit(code)


if __name__ == "__main__":
    main()
