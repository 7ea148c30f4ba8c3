"""Rule-based extraction of person and company mentions.

Persons are found with three templates over a small tokenizer:

* ``Initial [Initial] Surname``   -- "D. Kovalenko", "D.V. Kovalenko"
* ``Surname Initial [Initial]``   -- "Kovalenko D.V."
* ``GivenName Capitalized``       -- "Dmitri Kovalenko"

where an initial is one capital letter followed by a period. Companies are
either occurrences of known names or a run of one to four capitalized
tokens directly followed by a legal-form suffix ("Acme Widgets Inc").

Matching is capitalization-sensitive, lexicon lookups are not.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .corpus_io import Document

__all__ = [
    "DEFAULT_COMPANY_SUFFIXES",
    "Lexicon",
    "Concept",
    "Mention",
    "read_lexicon_file",
    "extract_persons",
    "extract_companies",
    "extract_mentions",
    "canonicalize",
    "extract_document",
]

DEFAULT_COMPANY_SUFFIXES = ("Inc", "Corp.", "Ltd", "Company", "LLC", "PLC", "GmbH")

# a letter run, hyphenated parts stay in one token
_WORD_RE = re.compile(r"[^\W\d_]+(?:[-‐‑][^\W\d_]+)*")


class Mention(NamedTuple):
    surface: str
    span: tuple[int, int]


class _Tok(NamedTuple):
    text: str
    start: int
    end: int  # excludes a trailing period
    dot: bool

    @property
    def is_initial(self) -> bool:
        return self.dot and len(self.text) == 1 and self.text.isupper()

    @property
    def is_cap(self) -> bool:
        return self.text[0].isupper()

    @property
    def stop(self) -> int:
        return self.end + 1 if self.dot else self.end


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    n = len(text)
    for m in _WORD_RE.finditer(text):
        s, e = m.span()
        toks.append(_Tok(m.group(), s, e, e < n and text[e] == "."))
    return toks


def _spaced(text: str, left: _Tok, right: _Tok) -> bool:
    """Two words separated by whitespace only, no sentence period between."""
    g = text[left.end:right.start]
    return not left.dot and g != "" and g.isspace()


def _after_initial(text: str, left: _Tok, right: _Tok) -> bool:
    g = text[left.stop:right.start]
    return g == "" or g.isspace()


@dataclass(frozen=True)
class Lexicon:
    """Lookup tables for the extraction rules.

    Name tables are stored case-folded. ``company_suffixes`` keeps the
    spelling given (a trailing period is reproduced in surface forms) but is
    matched case-insensitively.
    """

    given_names: frozenset[str] = frozenset()
    surnames: frozenset[str] = frozenset()
    company_suffixes: tuple[str, ...] = DEFAULT_COMPANY_SUFFIXES
    known_companies: frozenset[str] = frozenset()
    _suffix_words: tuple[tuple[tuple[str, ...], bool], ...] = field(init=False, repr=False, compare=False)
    _known_words: tuple[tuple[str, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("given_names", "surnames", "known_companies"):
            entries = [e.strip() for e in getattr(self, name)]
            if any(not e for e in entries):
                raise ValueError(f"empty entry in {name}")
            if name != "known_companies":
                entries = [e.casefold() for e in entries]
            object.__setattr__(self, name, frozenset(entries))
        suffixes = tuple(dict.fromkeys(s.strip() for s in self.company_suffixes))
        if any(not s for s in suffixes):
            raise ValueError("empty entry in company_suffixes")
        object.__setattr__(self, "company_suffixes", suffixes)
        sw = []
        for s in suffixes:
            words = tuple(t.text.casefold() for t in _tokenize(s))
            if words:
                sw.append((words, s.endswith(".")))
        # longest suffix first so "Company Ltd" beats "Ltd"; ties by spelling
        sw.sort(key=lambda x: (-len(x[0]), x[0]))
        object.__setattr__(self, "_suffix_words", tuple(sw))
        kw = {tuple(t.text.casefold() for t in _tokenize(k)) for k in self.known_companies}
        kw.discard(())
        object.__setattr__(self, "_known_words", tuple(sorted(kw, key=lambda w: (-len(w), w))))

    @classmethod
    def from_files(
        cls,
        given_names: str | os.PathLike | None = None,
        surnames: str | os.PathLike | None = None,
        company_suffixes: str | os.PathLike | None = None,
        known_companies: str | os.PathLike | None = None,
    ) -> "Lexicon":
        kwargs = {}
        if given_names is not None:
            kwargs["given_names"] = frozenset(read_lexicon_file(given_names))
        if surnames is not None:
            kwargs["surnames"] = frozenset(read_lexicon_file(surnames))
        if company_suffixes is not None:
            kwargs["company_suffixes"] = tuple(read_lexicon_file(company_suffixes))
        if known_companies is not None:
            kwargs["known_companies"] = frozenset(read_lexicon_file(known_companies))
        return cls(**kwargs)

    def is_given_name(self, word: str) -> bool:
        return word.casefold() in self.given_names

    def is_surname(self, word: str) -> bool:
        return word.casefold() in self.surnames


def read_lexicon_file(path: str | os.PathLike) -> list[str]:
    """One entry per line; ``#`` starts a comment; blank lines ignored."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            entry = line.split("#", 1)[0].strip()
            if entry:
                out.append(" ".join(entry.split()))
    return out


@dataclass
class Concept:
    """A canonical entity and the surface forms it was seen under."""

    id: str
    kind: str
    surface_forms: set[str] = field(default_factory=set)

    def add(self, surface: str) -> None:
        if canonicalize(surface, self.kind) != self.id:
            raise ValueError(f"{surface!r} does not canonicalize to {self.id!r}")
        self.surface_forms.add(surface)


def _initials_at(text: str, toks: list[_Tok], i: int) -> int:
    """Number of chained initials starting at token i (0, 1 or 2)."""
    if i >= len(toks) or not toks[i].is_initial:
        return 0
    if i + 1 < len(toks) and toks[i + 1].is_initial and _after_initial(text, toks[i], toks[i + 1]):
        return 2
    return 1


def _surname_like(tok: _Tok, lexicon: Lexicon) -> bool:
    return tok.is_cap and not tok.is_initial and lexicon.is_surname(tok.text)


def _person_at(text: str, toks: list[_Tok], i: int, lexicon: Lexicon) -> tuple[int, int] | None:
    """Longest person match starting at token i, as a char span."""
    best = None

    def consider(start: int, end: int):
        nonlocal best
        if best is None or end - start > best[1] - best[0]:
            best = (start, end)

    tok = toks[i]
    # Initial [Initial] Surname
    k = _initials_at(text, toks, i)
    while k > 0:
        j = i + k
        if j < len(toks) and _surname_like(toks[j], lexicon) and _after_initial(text, toks[j - 1], toks[j]):
            consider(tok.start, toks[j].end)
            break
        k -= 1
    # Surname Initial [Initial]
    if _surname_like(tok, lexicon) and i + 1 < len(toks) and not tok.dot:
        nxt = toks[i + 1]
        g = text[tok.end:nxt.start]
        if g and g.isspace():
            k = _initials_at(text, toks, i + 1)
            if k:
                consider(tok.start, toks[i + k].stop)
    # GivenName Capitalized
    if tok.is_cap and not tok.is_initial and lexicon.is_given_name(tok.text) and i + 1 < len(toks):
        nxt = toks[i + 1]
        if nxt.is_cap and not nxt.is_initial and len(nxt.text) > 1 and _spaced(text, tok, nxt):
            consider(tok.start, nxt.end)
    return best


def extract_persons(text: str, lexicon: Lexicon) -> list[Mention]:
    """Person mentions, left to right, non-overlapping, longest match first."""
    toks = _tokenize(text)
    out = []
    i = 0
    while i < len(toks):
        span = _person_at(text, toks, i, lexicon)
        if span is None:
            i += 1
            continue
        out.append(Mention(text[span[0]:span[1]], span))
        while i < len(toks) and toks[i].start < span[1]:
            i += 1
    return out


def _words_match(text: str, toks: list[_Tok], i: int, words: tuple[str, ...]) -> bool:
    if i + len(words) > len(toks):
        return False
    for k, w in enumerate(words):
        t = toks[i + k]
        if t.text.casefold() != w:
            return False
        if k and not _spaced(text, toks[i + k - 1], t):
            return False
    return True


def _company_candidates(text: str, toks: list[_Tok], lexicon: Lexicon) -> list[tuple[int, int]]:
    cands = []
    for i, tok in enumerate(toks):
        if tok.is_cap:
            for words in lexicon._known_words:
                if _words_match(text, toks, i, words):
                    last = toks[i + len(words) - 1]
                    cands.append((tok.start, last.end))
                    break
        for words, keep_dot in lexicon._suffix_words:
            if not _words_match(text, toks, i, words):
                continue
            # capitalized run of 1..4 tokens immediately before the suffix
            j = i
            while (
                i - j < 4
                and j > 0
                and toks[j - 1].is_cap
                and not toks[j - 1].is_initial
                and _spaced(text, toks[j - 1], toks[j])
            ):
                j -= 1
            if j < i:
                last = toks[i + len(words) - 1]
                end = last.stop if (keep_dot and last.dot) else last.end
                cands.append((toks[j].start, end))
            break
    return cands


def extract_companies(text: str, lexicon: Lexicon) -> list[Mention]:
    """Known company names plus suffix-rule hits, non-overlapping."""
    toks = _tokenize(text)
    cands = sorted(set(_company_candidates(text, toks, lexicon)), key=lambda s: (s[0], s[0] - s[1]))
    out = []
    pos = -1
    for s, e in cands:
        if s >= pos:
            out.append(Mention(text[s:e], (s, e)))
            pos = e
    return out


def canonicalize(surface: str, kind: str, suffixes: Iterable[str] = DEFAULT_COMPANY_SUFFIXES) -> str:
    """Stable identity key for an extracted surface form.

    Persons map to ``SURNAME|I`` (first initial); companies to the upper-cased
    name with any legal-form suffix removed.

    >>> canonicalize("Kovalenko D.V.", "person")
    'KOVALENKO|D'
    >>> canonicalize("Acme Widgets Inc", "company")
    'ACME WIDGETS'
    """
    collapsed = " ".join(surface.split())
    if not collapsed:
        raise ValueError("empty surface form")
    if kind == "person":
        toks = _tokenize(surface)
        initials = [t for t in toks if t.is_initial]
        words = [t for t in toks if not t.is_initial]
        if initials and words:
            return f"{words[-1].text.upper()}|{initials[0].text.upper()}"
        if len(words) >= 2:
            return f"{words[-1].text.upper()}|{words[0].text[0].upper()}"
        # not a template output (e.g. a synthetic id): keep it verbatim
        return collapsed.upper()
    if kind == "company":
        words = collapsed.split(" ")
        bare = [w.strip(".,").casefold() for w in words]
        suffix_words = sorted(
            {tuple(w.strip(".,").casefold() for w in s.split()) for s in suffixes} - {()},
            key=lambda w: (-len(w), w),
        )
        for sw in suffix_words:
            if len(words) > len(sw) and tuple(bare[-len(sw):]) == sw:
                words = words[: -len(sw)]
                break
        return " ".join(words).rstrip(",").upper()
    raise ValueError(f"unknown concept kind {kind!r}")


def extract_mentions(
    text: str, lexicon: Lexicon, kinds: Iterable[str] = ("person", "company")
) -> list[tuple[str, str]]:
    """All ``(kind, surface)`` mentions in text order, persons before companies on ties."""
    kinds = set(kinds)
    found = []
    if "person" in kinds:
        found += [(m.span, 0, "person", m.surface) for m in extract_persons(text, lexicon)]
    if "company" in kinds:
        found += [(m.span, 1, "company", m.surface) for m in extract_companies(text, lexicon)]
    found.sort()
    return [(kind, surface) for _, _, kind, surface in found]


def extract_document(
    doc: Document, lexicon: Lexicon, kinds: Iterable[str] = ("person", "company")
) -> frozenset[str]:
    """Canonical concept ids mentioned in a document, each at most once."""
    if doc.text is not None:
        mentions = extract_mentions(doc.text, lexicon, kinds)
    else:
        kinds = set(kinds)
        mentions = [c for c in doc.concepts if c[0] in kinds]
    return frozenset(canonicalize(s, k, lexicon.company_suffixes) for k, s in mentions)
