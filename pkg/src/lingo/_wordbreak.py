"""Default Unicode word-boundary segmentation.

Implements the default (untailored) word-boundary rules, with character
classes derived from `unicodedata` general categories plus explicit code
point sets for the small punctuation classes. Scripts that require
dictionary-based segmentation (Thai, Lao, Khmer, Myanmar, Han, Hiragana)
carry no letter class here, so the default rules break between their
characters; this is the standard no-dictionary behavior.
"""

import unicodedata

# Word-break character classes.
_OTHER = 0
_CR = 1
_LF = 2
_NEWLINE = 3
_EXTEND = 4
_ZWJ = 5
_FORMAT = 6
_RI = 7
_KATAKANA = 8
_HEBREW = 9
_ALETTER = 10
_SQ = 11
_DQ = 12
_MIDLETTER = 13
_MIDNUM = 14
_MIDNUMLET = 15
_NUMERIC = 16
_EXTNUMLET = 17
_WSEGSPACE = 18

_IGNORE = (_EXTEND, _FORMAT, _ZWJ)
_AHL = (_ALETTER, _HEBREW)

_MIDLETTER_CP = {0x003A, 0x00B7, 0x0387, 0x05F4, 0x2027, 0xFE13, 0xFE55, 0xFF1A}
_MIDNUM_CP = {0x002C, 0x003B, 0x037E, 0x0589, 0x060C, 0x060D, 0x066C, 0x07F8,
              0x2044, 0xFE10, 0xFE14, 0xFE50, 0xFE54, 0xFF0C, 0xFF1B}
_MIDNUMLET_CP = {0x002E, 0x2018, 0x2019, 0x2024, 0xFE52, 0xFF07, 0xFF0E}

# Scripts the default rules treat as plain "Other" (segmented per character
# absent a dictionary): Thai, Lao, Myanmar, Khmer, Tai Tham, Tai Viet,
# Hiragana, Han, Yi.
_NO_LETTER_RANGES = (
    (0x0E00, 0x0EFF),
    (0x1000, 0x109F),
    (0x1780, 0x17FF),
    (0x1A20, 0x1AAF),
    (0xA9E0, 0xA9FF),
    (0xAA60, 0xAADF),
    (0x3040, 0x309F),
    (0x2E80, 0x2FDF),
    (0x3400, 0x4DBF),
    (0x4E00, 0x9FFF),
    (0xA000, 0xA4CF),
    (0xF900, 0xFAFF),
    (0x20000, 0x3FFFF),
)

_KATAKANA_RANGES = (
    (0x30A0, 0x30FF),
    (0x31F0, 0x31FF),
    (0x32D0, 0x32FE),
    (0xFF66, 0xFF9D),
    (0x1B000, 0x1B000),
)


def _in_ranges(cp, ranges):
    for lo, hi in ranges:
        if lo <= cp <= hi:
            return True
    return False


def _char_class(ch):
    cp = ord(ch)
    if cp == 0x0D:
        return _CR
    if cp == 0x0A:
        return _LF
    if cp in (0x0B, 0x0C, 0x85, 0x2028, 0x2029):
        return _NEWLINE
    if cp == 0x200D:
        return _ZWJ
    if 0x1F1E6 <= cp <= 0x1F1FF:
        return _RI
    cat = unicodedata.category(ch)
    if cat in ("Mn", "Mc", "Me"):
        return _EXTEND
    if cat == "Cf":
        return _FORMAT
    if cp == 0x27:
        return _SQ
    if cp == 0x22:
        return _DQ
    if cp in _MIDLETTER_CP:
        return _MIDLETTER
    if cp in _MIDNUM_CP:
        return _MIDNUM
    if cp in _MIDNUMLET_CP:
        return _MIDNUMLET
    if cat == "Nd":
        return _NUMERIC
    if cat == "Pc":
        return _EXTNUMLET
    if _in_ranges(cp, _KATAKANA_RANGES):
        return _KATAKANA
    if 0x0590 <= cp <= 0x05FF and cat == "Lo":
        return _HEBREW
    if cat in ("Lu", "Ll", "Lt", "Lm", "Lo", "Nl"):
        if _in_ranges(cp, _NO_LETTER_RANGES):
            return _OTHER
        return _ALETTER
    if cat == "Zs" and cp not in (0x00A0, 0x2007, 0x202F):
        return _WSEGSPACE
    return _OTHER


def _is_break(props, i):
    """Whether a word boundary exists between props[i-1] and props[i]."""
    pl_raw = props[i - 1]
    pr = props[i]
    if pl_raw == _CR and pr == _LF:
        return False
    if pl_raw in (_CR, _LF, _NEWLINE) or pr in (_CR, _LF, _NEWLINE):
        return True
    if pl_raw == _WSEGSPACE and pr == _WSEGSPACE:
        return False
    if pr in _IGNORE:
        return False
    j = i - 1
    while j >= 0 and props[j] in _IGNORE:
        j -= 1
    if j < 0:
        return True
    pl = props[j]
    k = j - 1
    while k >= 0 and props[k] in _IGNORE:
        k -= 1
    p0 = props[k] if k >= 0 else None
    m = i + 1
    while m < len(props) and props[m] in _IGNORE:
        m += 1
    p3 = props[m] if m < len(props) else None

    if pl in _AHL and pr in _AHL:
        return False
    if pl in _AHL and pr in (_MIDLETTER, _MIDNUMLET, _SQ) and p3 in _AHL:
        return False
    if p0 in _AHL and pl in (_MIDLETTER, _MIDNUMLET, _SQ) and pr in _AHL:
        return False
    if pl == _HEBREW and pr == _SQ:
        return False
    if pl == _HEBREW and pr == _DQ and p3 == _HEBREW:
        return False
    if p0 == _HEBREW and pl == _DQ and pr == _HEBREW:
        return False
    if pl == _NUMERIC and pr == _NUMERIC:
        return False
    if pl in _AHL and pr == _NUMERIC:
        return False
    if pl == _NUMERIC and pr in _AHL:
        return False
    if p0 == _NUMERIC and pl in (_MIDNUM, _MIDNUMLET, _SQ) and pr == _NUMERIC:
        return False
    if pl == _NUMERIC and pr in (_MIDNUM, _MIDNUMLET, _SQ) and p3 == _NUMERIC:
        return False
    if pl == _KATAKANA and pr == _KATAKANA:
        return False
    if pl in (_ALETTER, _HEBREW, _NUMERIC, _KATAKANA, _EXTNUMLET) and pr == _EXTNUMLET:
        return False
    if pl == _EXTNUMLET and pr in (_ALETTER, _HEBREW, _NUMERIC, _KATAKANA):
        return False
    if pl == _RI and pr == _RI:
        count = 0
        t = j
        while t >= 0 and props[t] == _RI:
            count += 1
            t -= 1
        if count % 2 == 1:
            return False
    return True


def word_spans(text):
    """All word-boundary segments of text as (start, end) pairs.

    Every character belongs to exactly one segment; callers filter for
    word-like segments themselves.
    """
    if not text:
        return []
    props = [_char_class(c) for c in text]
    spans = []
    start = 0
    for i in range(1, len(text)):
        if _is_break(props, i):
            spans.append((start, i))
            start = i
    spans.append((start, len(text)))
    return spans
