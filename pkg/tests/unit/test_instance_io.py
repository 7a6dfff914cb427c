from fractions import Fraction

import pytest

from tubelab.exceptions import InstanceFormatError, InstanceTooLarge, ParameterError
from tubelab.services.geometry import Ball, Tube, Window
from tubelab.services.instance_io import (
    Instance,
    format_instance,
    parse_instance,
    read_instance,
    write_instance,
)

F = Fraction

SAMPLE = """delta=1/64,W=2,X=4,K=50
# комментарий
B,1/2,1/4

T,0,1/2,0
T,1/4,-1/2,3
B,1/2,1/2,dual
"""


class TestParseInstance:
    def test_parses_rows(self):
        inst = parse_instance(SAMPLE)
        assert inst.delta == F(1, 64)
        assert (inst.W, inst.X, inst.K) == (F(2), F(4), 50)
        assert inst.balls == (Ball((F(1, 2), F(1, 4)), F(1, 64)), Ball((F(1, 2), F(1, 2)), F(1, 64), Window.dual))
        assert inst.tubes[1] == Tube(F(1, 4), F(-1, 2), F(1, 64), 3)

    def test_params(self):
        params = parse_instance(SAMPLE).params
        assert params.integers() == (2, 4)

    def test_missing_spacing_header(self):
        with pytest.raises(ParameterError, match="W и X"):
            parse_instance("delta=1/8\n").params

    def test_invalid_lines_reported_together(self):
        """Все ошибочные строки собираются в одну ошибку с номерами."""
        text = "delta=1/8\nB,0,0\nB,0.5,0\nT,0,0,0\nQ,1,2\nT,0,2,0\n"
        with pytest.raises(InstanceFormatError) as exc_info:
            parse_instance(text)
        assert exc_info.value.line_numbers == [3, 5, 6]

    def test_rotation_outside_cover(self):
        """Индекс поворота ≥ K из заголовка - некорректная строка."""
        with pytest.raises(InstanceFormatError) as exc_info:
            parse_instance("delta=1/64,K=8\nT,1/2,0,2\nT,1/2,0,9\n")
        assert exc_info.value.line_numbers == [3]

    def test_empty_file(self):
        with pytest.raises(InstanceFormatError) as exc_info:
            parse_instance("")
        assert exc_info.value.line_numbers == [1]

    @pytest.mark.parametrize("header", ["delta=1/8,Y=2", "W=2,X=4", "delta=0", "delta=1/8,K=x"])
    def test_bad_header(self, header):
        with pytest.raises(InstanceFormatError):
            parse_instance(header + "\n")

    def test_long_line(self):
        with pytest.raises(InstanceTooLarge):
            parse_instance("delta=1/8\nB," + "1" * 300 + ",0\n")

    def test_too_many_lines(self, monkeypatch):
        monkeypatch.setattr("tubelab.services.instance_io.MAX_INSTANCE_LINES", 3)
        with pytest.raises(InstanceTooLarge):
            parse_instance("delta=1/8\nB,0,0\nB,0,1\nB,1,0\n")


class TestFormatInstance:
    def test_canonical_order(self):
        delta = F(1, 8)
        inst = Instance(
            delta=delta,
            balls=(Ball((F(1), F(0)), delta), Ball((F(0), F(1)), delta)),
            tubes=(Tube(F(1, 2), F(0), delta, 1), Tube(F(1, 2), F(0), delta)),
            K=100,
        )
        assert format_instance(inst) == "delta=1/8,K=100\nB,0,1\nB,1,0\nT,1/2,0,0\nT,1/2,0,1\n"

    def test_stable_after_reparse(self):
        text = format_instance(parse_instance(SAMPLE))
        assert format_instance(parse_instance(text)) == text
        assert text.splitlines()[0] == "delta=1/64,W=2,X=4,K=50"
        assert "B,1/2,1/2,dual" in text


class TestFiles:
    def test_write_and_read(self, tmp_path):
        inst = parse_instance(SAMPLE)
        path = write_instance(tmp_path / "nested" / "inst.csv", inst)
        assert path.exists()
        assert read_instance(path).tubes == tuple(sorted(inst.tubes, key=lambda t: t.sort_key))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceFormatError, match="прочитать"):
            read_instance(tmp_path / "absent.csv")
