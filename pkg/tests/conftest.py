"""Корневой conftest: окружение test и профили hypothesis.

Лежит в корне дерева тестов, чтобы pytest_configure отработал до импорта
tests/…/conftest.py: иначе tubelab.config.Settings() успеет прочитать ENV из .env.
"""

import os

import pytest
from hypothesis import HealthCheck, settings

# ci: воспроизводимые примеры, без дедлайнов (точная арифметика на больших знаменателях медленная)
settings.register_profile("ci", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", max_examples=25, deadline=None)


def pytest_configure(config):
    """Запрет запуска на prod, ENV=test и выбор профиля hypothesis."""
    if os.environ.get("ENV", "") == "prod":
        pytest.exit("ERROR: Refusing to run tests with ENV=prod", returncode=1)

    os.environ["ENV"] = "test"
    # журнал прогонов в тестах не должен трогать рабочую БД
    os.environ.setdefault("DATABASE_URL", "sqlite:///:memory:")
    settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))
