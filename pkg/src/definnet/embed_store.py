"""Pretrained word-embedding tables and character n-gram composition.

Two on-disk formats are supported, both with a leading "<count> <dim>" header
line:

* text   -- one line per entry: token followed by `dim` ascii floats.
* binary -- per entry: token bytes, a single space, `dim` little-endian
            32-bit floats, then a newline.  This mirrors the layout used by
            the widely distributed pretrained spaces, so those files load
            without conversion.

Tables are immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError, ShapeError, ZeroNormError

Vector = np.ndarray


class UnknownNgramsError(ZeroNormError):
    """Every n-gram of the word is missing from the n-gram table."""


class EmbeddingTable:
    """Vocabulary-to-vector map with fixed dimensionality.

    Vectors are stored as rows of a read-only float32 matrix; `tokens[i]`
    labels row `i`.
    """

    def __init__(self, name: str, dim: int, tokens: list[str], matrix: np.ndarray):
        if dim <= 0:
            raise ShapeError(f"dimensionality must be positive, got {dim}")
        if matrix.shape != (len(tokens), dim):
            raise ShapeError(
                f"matrix shape {matrix.shape} does not match "
                f"{len(tokens)} tokens of dim {dim}"
            )
        if len(set(tokens)) != len(tokens):
            raise FormatError("duplicate tokens in embedding table")
        self.name = name
        self.dim = dim
        self.tokens = tokens
        self.matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        self.matrix.setflags(write=False)
        self._index = {tok: i for i, tok in enumerate(tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def lookup(self, token: str) -> Vector | None:
        """Return the stored vector for `token`, or None if absent.

        Keys are matched bytewise; absence of a token is what defines its
        out-of-vocabulary status.
        """
        i = self._index.get(token)
        if i is None:
            return None
        return self.matrix[i]

    @classmethod
    def from_entries(cls, name: str, dim: int, entries: dict[str, np.ndarray]) -> "EmbeddingTable":
        tokens = list(entries.keys())
        if tokens:
            matrix = np.stack([np.asarray(entries[t], dtype=np.float32) for t in tokens])
        else:
            matrix = np.zeros((0, dim), dtype=np.float32)
        return cls(name, dim, tokens, matrix)


def _parse_header(line: bytes, path: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise FormatError(f"{path}: malformed header {line!r}, expected '<count> <dim>'")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"{path}: non-integer header fields {line!r}") from None
    if count < 0 or dim <= 0:
        raise FormatError(f"{path}: header values out of range (count={count}, dim={dim})")
    return count, dim


def load_embeddings(path: str, format: str = "text", name: str | None = None) -> EmbeddingTable:
    """Load an embedding table from `path` in 'text' or 'binary' format.

    Raises FormatError on a malformed header, a row whose vector length does
    not match the header dimensionality, or a duplicate token (the offending
    row index is reported, counting the first entry row as row 1).
    """
    if format not in ("text", "binary"):
        raise ValueError(f"unknown embedding format {format!r}")
    name = name if name is not None else str(path)
    with open(path, "rb") as fh:
        header = fh.readline()
        if not header:
            raise FormatError(f"{path}: empty file")
        count, dim = _parse_header(header, str(path))
        tokens: list[str] = []
        seen: dict[str, int] = {}
        matrix = np.empty((count, dim), dtype=np.float32)
        if format == "text":
            for row in range(1, count + 1):
                line = fh.readline()
                if not line:
                    raise FormatError(f"{path}: expected {count} rows, file ends at row {row}")
                parts = line.split()
                if len(parts) != dim + 1:
                    raise FormatError(
                        f"{path}: row {row} has {len(parts) - 1} components, expected {dim}"
                    )
                token = parts[0].decode("utf-8")
                if token in seen:
                    raise FormatError(
                        f"{path}: duplicate token {token!r} at row {row} "
                        f"(first at row {seen[token]})"
                    )
                seen[token] = row
                tokens.append(token)
                try:
                    matrix[row - 1] = [float(p) for p in parts[1:]]
                except ValueError:
                    raise FormatError(f"{path}: row {row} has a non-numeric component") from None
        else:
            vec_bytes = 4 * dim
            for row in range(1, count + 1):
                token_raw = bytearray()
                while True:
                    ch = fh.read(1)
                    if not ch:
                        raise FormatError(
                            f"{path}: expected {count} rows, file ends at row {row}"
                        )
                    if ch == b" ":
                        break
                    token_raw += ch
                # tolerate the newline terminating the previous entry
                token = token_raw.lstrip(b"\n").decode("utf-8")
                if token in seen:
                    raise FormatError(
                        f"{path}: duplicate token {token!r} at row {row} "
                        f"(first at row {seen[token]})"
                    )
                seen[token] = row
                tokens.append(token)
                raw = fh.read(vec_bytes)
                if len(raw) != vec_bytes:
                    raise FormatError(f"{path}: truncated vector at row {row}")
                matrix[row - 1] = np.frombuffer(raw, dtype="<f4")
    return EmbeddingTable(name, dim, tokens, matrix)


def save_embeddings(table: EmbeddingTable, path: str, format: str = "text") -> None:
    """Write `table` to `path`; load_embeddings round-trips both formats bit-exact."""
    if format not in ("text", "binary"):
        raise ValueError(f"unknown embedding format {format!r}")
    with open(path, "wb") as fh:
        fh.write(f"{len(table)} {table.dim}\n".encode("utf-8"))
        if format == "text":
            for token, row in zip(table.tokens, table.matrix):
                comps = " ".join(np.format_float_positional(x, unique=True, trim="0") for x in row)
                fh.write(f"{token} {comps}\n".encode("utf-8"))
        else:
            for token, row in zip(table.tokens, table.matrix):
                fh.write(token.encode("utf-8") + b" ")
                fh.write(row.astype("<f4").tobytes())
                fh.write(b"\n")


def cosine(a: Vector, b: Vector) -> float:
    """Cosine similarity of two nonzero vectors, clamped into [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"length mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("cosine undefined for zero-norm input")
    return float(min(1.0, max(-1.0, float(np.dot(a, b)) / (na * nb))))


def ngram_windows(word: str, n: int = 3, markers: bool = False) -> list[str]:
    """All length-`n` sliding substrings of `word`, optionally '<'/'>'-wrapped."""
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    w = f"<{word}>" if markers else word
    return [w[i : i + n] for i in range(len(w) - n + 1)]


def ngram_compose(ngrams: EmbeddingTable, word: str, n: int = 3, markers: bool = False) -> Vector:
    """Sum the vectors of the word's length-`n` sliding substrings.

    Repeated substrings contribute once per occurrence.  Substrings missing
    from the table are skipped; it is an error if all of them are missing or
    the (optionally wrapped) word is shorter than `n`.
    """
    if len(ngrams) == 0:
        raise ValueError("n-gram table is empty")
    windows = ngram_windows(word, n=n, markers=markers)
    if not windows:
        raise ValueError(f"word {word!r} shorter than n-gram length {n}")
    out = np.zeros(ngrams.dim, dtype=np.float64)
    matched = 0
    for g in windows:
        vec = ngrams.lookup(g)
        if vec is not None:
            out += vec
            matched += 1
    if matched == 0:
        raise UnknownNgramsError(f"no n-grams of {word!r} found in table {ngrams.name!r}")
    return out.astype(np.float32)
