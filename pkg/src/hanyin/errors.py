"""Exception hierarchy shared by all hanyin modules.

File-system failures surface as the builtin :class:`OSError`.
"""


class HanyinError(Exception):
    """Base class for every error raised by this package."""


class PinyinError(HanyinError, ValueError):
    pass


class InvalidSyllable(PinyinError):
    """The text does not spell any syllable."""


class InvalidCombination(PinyinError):
    """Initial and final are both recognised but the table cell is empty."""


class MultipleToneMarks(PinyinError):
    pass


class AudioError(HanyinError):
    pass


class UnsupportedFormat(AudioError):
    pass


class MalformedHeader(AudioError):
    pass


class BufferTooShort(AudioError, ValueError):
    pass


class EmptyBand(HanyinError, ValueError):
    pass


class NoVoicedFrames(HanyinError):
    pass


class TooFewVoicedFrames(HanyinError):
    pass


class SilentRegion(HanyinError):
    pass


class InvalidSpec(HanyinError, ValueError):
    pass


class InvalidExpectedPinyin(HanyinError, ValueError):
    pass


class SyllableAnalysisError(HanyinError):
    """Wraps a module error with the index of the syllable being analysed."""

    def __init__(self, index, cause):
        super().__init__(f"syllable {index}: {type(cause).__name__}: {cause}")
        self.index = index
        self.cause = cause
