import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hanyin.errors import InvalidCombination, InvalidSyllable, MultipleToneMarks, PinyinError
from hanyin.pinyin import (
    FINAL_GROUPS, INITIALS, Coda, Syllable, coda_of, enumerate_valid_syllables, finals,
    get_final, is_valid_combination, parse_phrase, parse_pinyin, read_table, render_pinyin,
    table_path, table_records,
)

# counted from the shipped data file with `grep -v '^#' | grep -c .`
TABLE_ROWS = 411


def syl(initial, final, tone):
    return Syllable(initial, get_final(final), tone)


@pytest.mark.parametrize("text, initial, final, tone, coda", [
    ("huá", "h", "ua", 2, Coda.NONE),
    ("shēng", "sh", "eng", 1, Coda.NG),
    ("yī", None, "i", 1, Coda.NONE),
    ("ma", "m", "a", 5, Coda.NONE),
    ("èr", None, "er", 4, Coda.NONE),
    ("liù", "l", "iu", 4, Coda.NONE),
    ("tiě", "t", "ie", 3, Coda.NONE),
    ("xué", "x", "üe", 2, Coda.NONE),
    ("sān", "s", "an", 1, Coda.N),
    ("wǔ", None, "u", 3, Coda.NONE),
    ("yuan2", None, "üan", 2, Coda.N),
    ("zhuang1", "zh", "uang", 1, Coda.NG),
])
def test_parse_examples(text, initial, final, tone, coda):
    s = parse_pinyin(text)
    assert (s.initial, s.final.spelling, s.tone, s.coda) == (initial, final, tone, coda)


def test_yi_is_written_with_y():
    assert parse_pinyin("yī").spelling == "yi"


@pytest.mark.parametrize("text", ["lv4", "lü4", "lu:4", "lǜ"])
def test_u_umlaut_spellings(text):
    s = parse_pinyin(text)
    assert (s.initial, s.final.spelling, s.tone) == ("l", "ü", 4)


def test_u_after_j_q_x_is_u_umlaut():
    assert parse_pinyin("ju2").final.spelling == "ü"
    assert parse_pinyin("qun").final.spelling == "ün"


def test_combining_marks_are_accepted():
    decomposed = unicodedata.normalize("NFD", "shēng")
    assert parse_pinyin(decomposed) == parse_pinyin("sheng1")


def test_greedy_initials():
    assert parse_pinyin("shi4").initial == "sh"
    assert parse_pinyin("zhang1").initial == "zh"
    assert parse_pinyin("si4").initial == "s"


def test_errors():
    with pytest.raises(InvalidCombination):
        parse_pinyin("fi1")
    with pytest.raises(InvalidSyllable):
        parse_pinyin("qq1")
    with pytest.raises(InvalidSyllable):
        parse_pinyin("")
    with pytest.raises(MultipleToneMarks):
        parse_pinyin("má2")
    with pytest.raises(MultipleToneMarks):
        parse_pinyin("mǎá")


def test_is_valid_combination_examples():
    assert is_valid_combination("b", "a")
    assert is_valid_combination(None, "er")
    assert not is_valid_combination("b", "er")
    assert not is_valid_combination("f", get_final("i"))


@pytest.mark.parametrize("s, text", [
    (("h", "ua", 2), "huá"),
    ((None, "er", 4), "èr"),
    (("l", "iu", 4), "liù"),
    (("g", "ui", 4), "guì"),
    (("x", "üe", 2), "xué"),
    (("l", "ü", 3), "lǚ"),
    (("m", "a", 5), "ma"),
    (("g", "uo", 2), "guó"),
    ((None, "ou", 3), "ǒu"),
])
def test_render_examples(s, text):
    assert render_pinyin(syl(*s)) == text


def test_enumeration_matches_data_file():
    all_syl = enumerate_valid_syllables()
    assert len(all_syl) == TABLE_ROWS == len(table_records())
    spellings = {s.spelling for s in all_syl}
    assert "zhuang" in spellings
    assert "fi" not in spellings
    assert all(s.tone == 1 for s in all_syl)


def test_round_trip_all_tones():
    for s in enumerate_valid_syllables():
        for tone in range(1, 6):
            want = Syllable(s.initial, s.final, tone)
            assert parse_pinyin(render_pinyin(want)) == want


def test_spelling_recovers_cell():
    for initial, final, spelling in table_records():
        s = parse_pinyin(spelling)
        assert (s.initial, s.final.spelling) == (initial, final)


def test_coda_function_over_all_finals():
    assert len(finals()) >= 35
    for f in finals():
        want = Coda.NG if f.spelling.endswith("ng") else (
            Coda.N if f.spelling.endswith("n") else Coda.NONE)
        assert f.coda == want == coda_of(f.spelling)
        assert f.nucleus + ("" if f.coda is Coda.NONE else f.coda.value) == f.spelling
    assert get_final("er").coda is Coda.NONE


def test_group_membership():
    assert get_final("iong").group == "ü"
    assert get_final("ong").group == "u"
    assert sum(len(v) for v in FINAL_GROUPS.values()) == len(finals())


def test_table_file_format():
    text = table_path().read_text(encoding="utf-8")
    records = read_table(text)
    assert records == table_records()
    for line in text.splitlines():
        if line and not line.startswith("#"):
            initial, final, spelling = line.split(",")
            assert initial == "-" or initial in INITIALS


def test_read_table_rejects_bad_rows():
    with pytest.raises(ValueError):
        read_table("b,a\n")


def test_phrase():
    tones = [s.tone for s in parse_phrase("huá tiě lú dà xué")]
    assert tones == [2, 3, 2, 4, 2]


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=12))
def test_parser_is_total(text):
    try:
        result = parse_pinyin(text)
    except PinyinError:
        return
    assert isinstance(result, Syllable)
