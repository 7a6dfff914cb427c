"""Лаборатория δ-дискретной геометрии инцидентности."""

__version__ = "1.0.0"
