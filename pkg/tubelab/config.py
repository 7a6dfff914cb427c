from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated

from pydantic import BeforeValidator, field_validator
from pydantic_settings import BaseSettings

from tubelab.utils import parse_rational

Rational = Annotated[Fraction, BeforeValidator(parse_rational)]


class Environment(str, Enum):
    dev = "dev"
    test = "test"
    prod = "prod"


class Settings(BaseSettings):
    env: Environment = Environment.prod
    database_url: str = "sqlite:///tubelab.db"
    output_dir: Path = Path("out")
    rotation_count: int = 100
    epsilon: Rational = Fraction(1, 10)
    jobs: int = 1
    seed: int = 0
    gap_class_constant: Rational = Fraction(1, 4)
    s_lower: Rational = Fraction(1, 4)
    s_upper: Rational = Fraction(3, 4)
    s_spread: Rational = Fraction(100)

    @field_validator("database_url")
    @classmethod
    def validate_database_url(cls, v: str) -> str:
        """Валидация URL подключения к БД."""
        if not v:
            raise ValueError("DATABASE_URL не может быть пустым")

        if not v.startswith(("sqlite", "postgresql")):
            raise ValueError("DATABASE_URL должен начинаться с 'sqlite' или 'postgresql'")

        return v

    @field_validator("rotation_count")
    @classmethod
    def validate_rotation_count(cls, v: int) -> int:
        # покрытие поворотами: сектора по π/4 должны перекрываться
        if v < 4:
            raise ValueError("ROTATION_COUNT должен быть не меньше 4")
        return v

    @field_validator("epsilon")
    @classmethod
    def validate_epsilon(cls, v: Fraction) -> Fraction:
        if not 0 < v < 1:
            raise ValueError("EPSILON должен лежать в интервале (0, 1)")
        return v

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v: int) -> int:
        if v < 1:
            raise ValueError("JOBS должен быть положительным")
        return v

    @field_validator("s_spread")
    @classmethod
    def validate_s_spread(cls, v: Fraction) -> Fraction:
        if v < 1:
            raise ValueError("S_SPREAD должен быть не меньше 1")
        return v

    @property
    def debug(self) -> bool:
        return self.env in (Environment.dev, Environment.test)

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore",
        "arbitrary_types_allowed": True,
    }


settings = Settings()
