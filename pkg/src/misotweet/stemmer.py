"""Classic Porter suffix-stripping stemmer (the original 1980 rule set).

Rule-table driven: each step is a list of ``(suffix, replacement, condition)``
entries and within a step only the longest matching suffix is considered; if
its condition fails on the stem, the step does nothing. Steps 1b, 1c, and 5
have procedural special cases and are coded directly.

Only tokens made of lowercase ASCII letters are stemmed; anything else passes
through unchanged, which keeps the pipeline total over arbitrary input.
"""

from __future__ import annotations

import re

_WORD_RE = re.compile(r"[a-z]+\Z")
_VOWELS = frozenset("aeiou")


def _forms(word: str) -> str:
    """Classify each position as vowel ``v`` or consonant ``c``.

    ``y`` counts as a vowel exactly when the preceding letter is a consonant.
    """
    out: list[str] = []
    for i, ch in enumerate(word):
        if ch in _VOWELS:
            out.append("v")
        elif ch == "y" and i > 0 and out[i - 1] == "c":
            out.append("v")
        else:
            out.append("c")
    return "".join(out)


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences: [C](VC)^m[V]."""
    forms = _forms(stem)
    m = 0
    for i in range(1, len(forms)):
        if forms[i] == "c" and forms[i - 1] == "v":
            m += 1
    return m


def _has_vowel(stem: str) -> bool:
    return "v" in _forms(stem)


def _ends_double_consonant(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _forms(word)[-1] == "c"


def _ends_cvc(word: str) -> bool:
    # consonant-vowel-consonant where the final consonant is not w, x, or y
    if len(word) < 3 or word[-1] in "wxy":
        return False
    return _forms(word)[-3:] == "cvc"


def _m_gt(n: int):
    return lambda stem: _measure(stem) > n


def _step4_ion(stem: str) -> bool:
    return _measure(stem) > 1 and stem[-1:] in ("s", "t")


# (suffix, replacement, condition on the stem); None means unconditional
_STEP1A = (
    ("sses", "ss", None),
    ("ies", "i", None),
    ("ss", "ss", None),
    ("s", "", None),
)

_STEP2 = tuple(
    (suf, rep, _m_gt(0))
    for suf, rep in (
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("abli", "able"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
    )
)

_STEP3 = tuple(
    (suf, rep, _m_gt(0))
    for suf, rep in (
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    )
)

_STEP4 = tuple(
    (suf, "", _step4_ion if suf == "ion" else _m_gt(1))
    for suf in (
        "al",
        "ance",
        "ence",
        "er",
        "ic",
        "able",
        "ible",
        "ant",
        "ement",
        "ment",
        "ent",
        "ion",
        "ou",
        "ism",
        "ate",
        "iti",
        "ous",
        "ive",
        "ize",
    )
)


def _apply_step(word: str, rules) -> str:
    # Longest matching suffix wins; a failed condition still consumes the step.
    best = None
    for suffix, replacement, condition in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, replacement, condition)
    if best is None:
        return word
    suffix, replacement, condition = best
    stem = word[: len(word) - len(suffix)]
    if condition is not None and not condition(stem):
        return word
    return stem + replacement


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word
    deleted = False
    if word.endswith("ed") and _has_vowel(word[:-2]):
        word = word[:-2]
        deleted = True
    elif word.endswith("ing") and _has_vowel(word[:-3]):
        word = word[:-3]
        deleted = True
    if not deleted:
        return word
    if word.endswith(("at", "bl", "iz")):
        return word + "e"
    if _ends_double_consonant(word) and word[-1] not in "lsz":
        return word[:-1]
    if _measure(word) == 1 and _ends_cvc(word):
        return word + "e"
    return word


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _step5(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]
    return word


def stem_token(token: str) -> str:
    """Stem one token; non-[a-z]+ tokens are returned unchanged."""
    if not _WORD_RE.fullmatch(token):
        return token
    word = _apply_step(token, _STEP1A)
    word = _step1b(word)
    word = _step1c(word)
    word = _apply_step(word, _STEP2)
    word = _apply_step(word, _STEP3)
    word = _apply_step(word, _STEP4)
    return _step5(word)
