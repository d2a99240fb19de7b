"""German suffix-stripping stemmer used for index keys.

Wraps the Snowball German algorithm and iterates it to a fixed point, so
that ``stem(stem(w)) == stem(w)`` holds for every input.
"""
from __future__ import annotations

import threading

import snowballstemmer

_local = threading.local()


def _stemmer():
    # snowballstemmer instances keep per-call state; one per thread.
    st = getattr(_local, "stemmer", None)
    if st is None:
        st = _local.stemmer = snowballstemmer.stemmer("german")
    return st


def _stem_token(token: str) -> str:
    st = _stemmer()
    prev = token
    while True:
        cur = st.stemWord(prev)
        if cur == prev:
            return cur
        prev = cur


def stem(word: str) -> str:
    """Stem a case-folded word; multi-word input is stemmed per token.

    >>> stem("nieren") == stem("niere")
    True
    """
    if not word:
        return ""
    return " ".join(_stem_token(tok) for tok in word.split())
