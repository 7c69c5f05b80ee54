"""Acoustic analysis of Mandarin syllables: pinyin, pitch, tone, segmentation."""

__version__ = "0.1.0"
