"""
From sentences to concept sets
==============================

A tiny lexicon is enough to pull persons and companies out of text and to
merge different spellings of the same person.
"""

from coconet.corpus_io import Document
from coconet.extract import Lexicon, extract_document, extract_mentions

lexicon = Lexicon(
    given_names={"Dmitri", "Olga"},
    surnames={"Kovalenko", "Melnyk", "Petrova"},
    known_companies={"Zenitex"},
)

texts = [
    "D. Kovalenko and A. Melnyk met at Zenitex.",
    "Kovalenko D.V. later joined Acme Widgets Inc.",
    "Olga Petrova wrote to Dmitri Kovalenko.",
]

# %%
# Surface mentions in text order, then canonical ids per document.
for i, text in enumerate(texts):
    print(text)
    print("   mentions:", extract_mentions(text, lexicon, ("person", "company")))
    print("   concepts:", sorted(extract_document(Document(f"d{i}", text=text), lexicon, ("person", "company"))))
