"""Константы лаборатории: пороги, значения по умолчанию и сообщения CLI."""

from fractions import Fraction

# Коды возврата CLI
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_PARAMETER_ERROR = 2

# Файл экземпляра
MAX_INSTANCE_LINES = 2_000_000
MAX_INSTANCE_LINE_LENGTH = 200
INSTANCE_HEADER_KEYS = ("delta", "W", "X", "K")

# Граница сетки в движке с корзинами: 2δ порог инцидентности плюс диаметр клетки
RASTER_MARGIN_FACTOR = 3

# Окно двойственных образов по умолчанию: [−2, 2]²
DUAL_WINDOW_HALF_SIZE = 2

# Глубина бисекции в точной проверке двойственности; дальше остаётся только касание
DUALITY_BISECTION_DEPTH = 64

# Почти вертикальные трубки для псевдотрубок: |v| ≤ 1/10
NEAR_VERTICAL_SLOPE = Fraction(1, 10)

# "d ≲ δ^α" читается как d ≤ 4·δ^α
TYPICAL_GAP_FACTOR = 4

# Богатый шар куста: |dx − v·dy| ≤ √5·δ, поэтому dy ≤ 2√5·δX/(r − 1)
# и расстояние до вершины не больше (7·X/(r − 1) + 3)·δ
BUSH_CLUSTER_SLOPE = 7
BUSH_CLUSTER_OFFSET = 3

# Богатые шары куста - треугольник высоты ≈ 4(X/r)·δ: ≈ 8(X/r)² шаров решётки шага δ
BUSH_RICH_AREA_FACTOR = 8

# Запас для семейства с иррациональным сдвигом
SQRT2_SPACING_SLACK = 4
SQRT2_DENOMINATOR_FACTOR = 10

# Угловая точность покрытия поворотами: ошибка < 2π/(100K)
ROTATION_ANGLE_PRECISION = 100

# Показатель логарифма в цели теоремы о множествах Фурстенберга
FURSTENBERG_LOG_EXPONENT = Fraction(-7, 2)

# Единая константа c в |V| ≥ c·min(|E|, |E|^{3/2}/cr^{1/2})
CROSSING_LEMMA_CONSTANT = Fraction(1, 64)

help_text = """Формат файла экземпляра (CSV, UTF-8):
```
delta=1/64,W=2,X=4,K=100
B,cx,cy[,window]
T,u,v,k[,window]
...
```
Все координаты - точные рациональные числа p/q. window: unit или dual.
"""
HELP_TEXT = help_text + (
    f"\nМаксимальное число строк = {MAX_INSTANCE_LINES}"
    f"\nМаксимальная длина строки = {MAX_INSTANCE_LINE_LENGTH}"
)

MSG_PARAMETER_ERROR = "❌ Ошибка параметров: "
MSG_INSTANCE_ERROR = "❌ Не удалось разобрать файл экземпляра: "
MSG_SPACING_FAILED = "❌ Условие разреженности нарушено: "
MSG_INVARIANT_FAILED = "❌ Нарушен инвариант: "
MSG_INFEASIBLE = "❌ Нет допустимых параметров: "
MSG_ENGINES_DISAGREE = "движки oracle и grid дали разные отчёты"
MSG_DUALITY_MISMATCH = "инцидентность не сохранилась при двойственности"
MSG_RUN_NOT_FOUND = "❌ Запуск не найден: "
