from src.config.color_utils import Color, format_artifact, gray_text, green_text, red_text, yellow_text


def test_palette_only_has_used_colors():
    assert {c.name for c in Color} == {"GREEN", "YELLOW", "GRAY", "RESET", "RED"}


def test_text_wrappers_reset():
    for wrap, color in ((green_text, Color.GREEN), (yellow_text, Color.YELLOW),
                        (red_text, Color.RED), (gray_text, Color.GRAY)):
        text = wrap("ok")
        assert text.startswith(color.value), f"{wrap.__name__} 应以对应颜色开头"
        assert text.endswith(Color.RESET.value), f"{wrap.__name__} 应以 RESET 结尾"


def test_format_artifact():
    assert format_artifact("out/graph.csv") == gray_text("  -> out/graph.csv")
