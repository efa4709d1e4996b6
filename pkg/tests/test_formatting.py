from eulerq.formatting import fixed_digits, format_complex, indented, render_table


class TestFormatting:
    def test_fixed_digits(self):
        assert fixed_digits(-0.0) == "0"
        assert fixed_digits(0.1) == "0.10000000000000001"

    def test_format_complex(self):
        assert format_complex(-0.5j) == "0.0-0.5j"
        assert format_complex(complex(2, -0.0)) == "2.0"

    def test_render_table(self):
        text = render_table(["x", "value"], [["1.0", "0.5"], ["10.0", "-2.25"]])
        assert text.splitlines() == ["   x  value", " 1.0    0.5", "10.0  -2.25"]

    def test_indented(self):
        assert indented("a\nb") == "  a\n  b"
