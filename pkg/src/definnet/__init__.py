"""Word embeddings for out-of-vocabulary words, composed from dictionary definitions.

The package builds a vector for an unseen word from its dictionary definition:
a parser-driven analyzer picks the definition's super-type and modifier words,
and a small feed-forward network composes their pretrained embeddings into an
embedding for the defined word.  Baseline composers (hypernym lookup, additive,
character n-gram summation) and a WordNet-based evaluation protocol round out
the library.
"""

__version__ = "0.1.0"
