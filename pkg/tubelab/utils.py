import math
import re
from collections.abc import Iterable
from fractions import Fraction

import numpy as np

RATIONAL_RE = re.compile(r"^\s*(?P<num>[+-]?\d+)(?:\s*/\s*(?P<den>\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Разбирает точное рациональное число вида `p/q` или `n`.

    Десятичные дроби и экспоненциальная запись отклоняются: ядро работает
    только с точной арифметикой.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Ожидалось рациональное число p/q, получено {text!r}")
    match = RATIONAL_RE.match(text)
    if not match:
        raise ValueError(f"Ожидалось рациональное число p/q, получено {text!r}")
    den = int(match.group("den") or 1)
    if den == 0:
        raise ValueError(f"Нулевой знаменатель: {text!r}")
    return Fraction(int(match.group("num")), den)


def format_rational(x: Fraction) -> str:
    """Fraction(3, 4) → "3/4", Fraction(2) → "2"."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def int_root_floor(n: int, k: int) -> int:
    """Целая часть корня степени k из неотрицательного целого n."""
    if n < 0 or k < 1:
        raise ValueError(f"int_root_floor: n={n}, k={k}")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    # Ньютон в целых числах, старт сверху
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def compare_power(x: Fraction, base: Fraction, exponent: Fraction) -> int:
    """Знак x − base**exponent, вычисленный точно.

    base > 0, x ≥ 0, показатель рациональный: x ? b^(p/q) ⟺ x^q ? b^p.
    """
    if base <= 0 or x < 0:
        raise ValueError("compare_power: нужно base > 0 и x ≥ 0")
    p, q = exponent.numerator, exponent.denominator
    lhs = x**q
    rhs = base**p
    return (lhs > rhs) - (lhs < rhs)


def floor_power(base: Fraction, exponent: Fraction) -> int:
    """Наибольшее целое m ≥ 0 с m ≤ base**exponent."""
    p, q = exponent.numerator, exponent.denominator
    value = base**p  # m^q ≤ value
    return int_root_floor(math.floor(value), q) if value >= 1 else 0


def ceil_power(base: Fraction, exponent: Fraction) -> int:
    """Наименьшее целое m ≥ 0 с m ≥ base**exponent."""
    m = floor_power(base, exponent)
    if compare_power(Fraction(m), base, exponent) < 0:
        m += 1
    return m


def power_float(base: Fraction, exponent: Fraction) -> float:
    return float(base) ** float(exponent)


def dyadic_floor(x: Fraction) -> Fraction:
    """Наибольшая степень двойки, не превосходящая x > 0."""
    if x <= 0:
        raise ValueError(f"dyadic_floor: x={x} ≤ 0")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    d = Fraction(2) ** k
    while d > x:
        d /= 2
    while d * 2 <= x:
        d *= 2
    return d


def log_inverse(delta: Fraction) -> float:
    """log δ⁻¹ (натуральный)."""
    return math.log(float(1 / delta))


def geometric_mean(values: Iterable[float]) -> float:
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0 or np.any(arr <= 0):
        raise ValueError("Среднее геометрическое определено только для положительных значений")
    return float(np.exp(np.mean(np.log(arr))))
