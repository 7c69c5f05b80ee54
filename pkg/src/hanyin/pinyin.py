"""Pinyin syllable parsing, validation, rendering and enumeration.

Every decision is a lookup in the initial/final combination table shipped
in ``data/pinyin_table.csv``; there are no spelling heuristics beyond
tone-mark handling and the usual ü spellings (``ü``, ``v``, ``u:``, and
plain ``u`` after j/q/x/y).
"""
from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import InvalidCombination, InvalidSyllable, MultipleToneMarks

INITIALS = (
    "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h",
    "j", "q", "x", "zh", "ch", "sh", "r", "z", "c", "s",
)
# longest first so that "sh" wins over "s"
_INITIALS_GREEDY = tuple(sorted(INITIALS, key=len, reverse=True))

FINAL_GROUPS = {
    "a": ("a", "o", "e", "ê", "ai", "ei", "ao", "ou", "an", "en", "ang", "eng", "er"),
    "i": ("i", "ia", "io", "ie", "iai", "iao", "iu", "ian", "in", "iang", "ing"),
    "u": ("u", "ua", "uo", "uai", "ui", "uan", "un", "uang", "ong"),
    "ü": ("ü", "üe", "üan", "ün", "iong"),
}

TONE_MARKS = {"\u0304": 1, "\u0301": 2, "\u030c": 3, "\u0300": 4}
_MARK_FOR_TONE = {tone: mark for mark, tone in TONE_MARKS.items()}
NEUTRAL_TONE = 5

_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyzüê")


class Coda(str, enum.Enum):
    NONE = "none"
    N = "n"
    NG = "ng"


def coda_of(spelling: str) -> Coda:
    if spelling.endswith("ng"):
        return Coda.NG
    if spelling.endswith("n"):
        return Coda.N
    return Coda.NONE


@dataclass(frozen=True)
class Final:
    spelling: str
    group: str

    @property
    def coda(self) -> Coda:
        return coda_of(self.spelling)

    @property
    def nucleus(self) -> str:
        coda = self.coda
        if coda is Coda.NONE:
            return self.spelling
        return self.spelling[: -len(coda.value)]


@dataclass(frozen=True)
class Syllable:
    """A parsed syllable. ``surface`` records the input text and is not
    part of equality."""

    initial: str | None
    final: Final
    tone: int
    surface: str = field(default="", compare=False)

    def __post_init__(self):
        if self.tone not in (1, 2, 3, 4, 5):
            raise ValueError(f"tone must be 1-5, got {self.tone!r}")

    @property
    def coda(self) -> Coda:
        return self.final.coda

    @property
    def spelling(self) -> str:
        """Toneless table spelling, e.g. ``"yuan"`` or ``"lü"``."""
        return _table().cells[(self.initial, self.final.spelling)]

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "spelling": self.spelling,
            "initial": self.initial,
            "final": self.final.spelling,
            "group": self.final.group,
            "nucleus": self.final.nucleus,
            "coda": self.coda.value,
            "tone": self.tone,
        }


class _Table:
    def __init__(self, records):
        group_of = {f: g for g, finals in FINAL_GROUPS.items() for f in finals}
        self.records = records
        self.finals = {}
        self.cells = {}
        self.by_spelling = {}
        for initial, final, spelling in records:
            if final not in group_of:
                raise ValueError(f"table row uses unknown final {final!r}")
            if initial is not None and initial not in INITIALS:
                raise ValueError(f"table row uses unknown initial {initial!r}")
            self.finals.setdefault(final, Final(final, group_of[final]))
            self.cells[(initial, final)] = spelling
            if spelling in self.by_spelling:
                raise ValueError(f"duplicate spelling {spelling!r} in table")
            self.by_spelling[spelling] = (initial, final)
        # what can follow an initial in writing: the final itself, or its
        # u-spelling after j/q/x
        self.written_finals = set(self.finals)
        for (initial, final), spelling in self.cells.items():
            if initial is not None:
                self.written_finals.add(spelling[len(initial):])


def table_path():
    return resources.files("hanyin") / "data" / "pinyin_table.csv"


def read_table(text: str):
    """Parse table file contents into ``(initial | None, final, spelling)`` tuples."""
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3 or not all(parts):
            raise ValueError(f"line {lineno}: expected initial,final,spelling")
        initial, final, spelling = parts
        records.append((None if initial == "-" else initial, final, spelling))
    return records


@lru_cache(maxsize=None)
def _table() -> _Table:
    return _Table(read_table(table_path().read_text(encoding="utf-8")))


def table_records():
    return list(_table().records)


def finals():
    return list(_table().finals.values())


def get_final(spelling: str) -> Final:
    try:
        return _table().finals[spelling]
    except KeyError:
        raise InvalidSyllable(f"unknown final {spelling!r}") from None


def is_valid_combination(initial: str | None, final: Final | str) -> bool:
    spelling = final.spelling if isinstance(final, Final) else final
    return (initial, spelling) in _table().cells


def _split_tone(text: str) -> tuple[str, int | None]:
    decomposed = unicodedata.normalize("NFD", text)
    tones = [TONE_MARKS[ch] for ch in decomposed if ch in TONE_MARKS]
    if len(tones) > 1:
        raise MultipleToneMarks(f"{text!r} carries {len(tones)} tone marks")
    stripped = "".join(ch for ch in decomposed if ch not in TONE_MARKS)
    stripped = unicodedata.normalize("NFC", stripped)
    digit = None
    if stripped and stripped[-1] in "12345":
        digit = int(stripped[-1])
        stripped = stripped[:-1]
    if tones and digit is not None:
        raise MultipleToneMarks(f"{text!r} has both a tone mark and a tone digit")
    if tones:
        return stripped, tones[0]
    return stripped, digit


def parse_pinyin(text: str) -> Syllable:
    """Parse one tone-marked or tone-numbered syllable.

    Raises
    ------
    InvalidSyllable
        The text is not a syllable spelling at all.
    InvalidCombination
        Initial and final are recognised but the table cell is empty.
    MultipleToneMarks
        More than one tone indication.
    """
    if not isinstance(text, str):
        raise InvalidSyllable(f"expected str, got {type(text).__name__}")
    surface = unicodedata.normalize("NFC", text.strip())
    body, tone = _split_tone(surface)
    body = body.lower().replace("u:", "ü").replace("v", "ü")
    if not body or not set(body) <= _LETTERS:
        raise InvalidSyllable(f"{text!r} is not a pinyin syllable")
    if tone is None:
        tone = NEUTRAL_TONE

    table = _table()
    initial = next((i for i in _INITIALS_GREEDY if body.startswith(i)), None)
    if initial is None:
        if body.startswith("yü"):
            body = "yu" + body[2:]
        hit = table.by_spelling.get(body)
        if hit is None or hit[0] is not None:
            raise InvalidSyllable(f"{text!r} is not a pinyin syllable")
        return Syllable(None, table.finals[hit[1]], tone, surface)

    rest = body[len(initial):]
    if initial in ("j", "q", "x") and rest.startswith("ü"):
        rest = "u" + rest[1:]
    hit = table.by_spelling.get(initial + rest)
    if hit is not None and hit[0] == initial:
        return Syllable(initial, table.finals[hit[1]], tone, surface)
    if rest in table.written_finals:
        raise InvalidCombination(f"{initial}+{rest} is not a Mandarin syllable")
    raise InvalidSyllable(f"{text!r} is not a pinyin syllable")


def _mark_position(spelling: str) -> int:
    if "a" in spelling:
        return spelling.index("a")
    for vowel in "oeê":
        if vowel in spelling:
            return spelling.index(vowel)
    for pair in ("iu", "ui"):
        if pair in spelling:
            return spelling.index(pair) + 1
    vowels = [k for k, ch in enumerate(spelling) if ch in "iuü"]
    return vowels[-1]


def render_pinyin(syllable: Syllable) -> str:
    """Canonical tone-marked spelling; the neutral tone is left unmarked."""
    spelling = syllable.spelling
    if syllable.tone == NEUTRAL_TONE:
        return spelling
    k = _mark_position(spelling)
    marked = spelling[: k + 1] + _MARK_FOR_TONE[syllable.tone] + spelling[k + 1:]
    return unicodedata.normalize("NFC", marked)


def enumerate_valid_syllables() -> list[Syllable]:
    table = _table()
    return [
        Syllable(initial, table.finals[final], 1, spelling)
        for initial, final, spelling in table.records
    ]


def parse_phrase(text: str) -> list[Syllable]:
    """Parse whitespace-separated syllables."""
    return [parse_pinyin(tok) for tok in text.split()]
