"""The three feature blocks and their concatenation.

Per tweet we build, in this fixed order:

* ``tfidf``    -- sparse unigram counts weighted by smooth idf, L2-normalized
  per document (idf = ln((1+N)/(1+df)) + 1, fit on training tokens only)
* ``bowv``     -- component-wise mean of pretrained word embeddings (300-d)
* ``sentence`` -- precomputed sentence embedding looked up by tweet id (512-d)

Any subset of blocks can be enabled; offsets are contiguous over the enabled
blocks and the resulting layout is hashed into a fingerprint that trained
models carry, so predicting with an incompatible feature space fails fast.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DataError
from .preprocess import TokenSequence

log = logging.getLogger(__name__)

BLOCK_ORDER = ("tfidf", "bowv", "sentence")


@dataclass(frozen=True)
class TfidfVocabulary:
    """Term index (lexicographic) and smooth-idf weights fit on a corpus."""

    terms: tuple[str, ...]
    idf: np.ndarray
    n_docs: int
    index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.n_docs).encode())
        for term, w in zip(self.terms, self.idf):
            h.update(term.encode("utf-8"))
            h.update(repr(float(w)).encode())
        return h.hexdigest()


def fit_tfidf(
    corpus: Sequence[TokenSequence],
    min_df: int = 1,
    max_features: int | None = None,
) -> TfidfVocabulary:
    """Build the vocabulary from all distinct training tokens.

    ``min_df``/``max_features`` default to "keep everything"; when
    ``max_features`` is set, terms are kept by highest document frequency
    (ties to the lexicographically smaller term) before re-indexing.
    """
    if len(corpus) == 0:
        raise DataError("cannot fit TF-IDF on an empty corpus")
    df: Counter[str] = Counter()
    for doc in corpus:
        df.update(set(doc.tokens))
    terms = [t for t, c in df.items() if c >= min_df]
    if max_features is not None and len(terms) > max_features:
        terms.sort(key=lambda t: (-df[t], t))
        terms = terms[:max_features]
    terms.sort()
    n = len(corpus)
    idf = np.array([np.log((1.0 + n) / (1.0 + df[t])) + 1.0 for t in terms], dtype=np.float64)
    return TfidfVocabulary(terms=tuple(terms), idf=idf, n_docs=n)


def transform_tfidf(
    vocab: TfidfVocabulary, tokens: TokenSequence
) -> tuple[tuple[int, float], ...]:
    """Sparse (index, value) entries for one document, unit L2 norm unless
    every token is out of vocabulary."""
    counts: Counter[int] = Counter()
    for tok in tokens:
        idx = vocab.index.get(tok)
        if idx is not None:
            counts[idx] += 1
    if not counts:
        return ()
    indices = sorted(counts)
    values = np.array([counts[i] * vocab.idf[i] for i in indices], dtype=np.float64)
    values /= np.linalg.norm(values)
    return tuple(zip(indices, values.tolist()))


@dataclass(frozen=True)
class WordEmbeddingTable:
    vectors: dict[str, np.ndarray]
    dim: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors


def load_word_embeddings(
    path: str | Path, dim: int = 300, strict: bool = True
) -> WordEmbeddingTable:
    """Parse a GloVe-style text file: ``word v1 ... v<dim>`` per line.

    Malformed lines abort in strict mode and are counted and skipped in
    lenient mode. A repeated word keeps its last occurrence with a warning.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"word embedding file not found: {path}")
    vectors: dict[str, np.ndarray] = {}
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            word, raw = parts[0], parts[1:]
            try:
                if len(raw) != dim:
                    raise DataError(
                        f"expected {dim} values for {word!r}, got {len(raw)}", lineno
                    )
                vec = np.array([float(v) for v in raw], dtype=np.float64)
            except DataError:
                if strict:
                    raise
                skipped += 1
                continue
            except ValueError as err:
                if strict:
                    raise DataError(f"non-numeric value for {word!r}: {err}", lineno) from None
                skipped += 1
                continue
            if word in vectors:
                log.warning("%s: line %d: duplicate word %r, keeping last", path, lineno, word)
            vectors[word] = vec
    if skipped:
        log.warning("%s: skipped %d malformed line(s)", path, skipped)
    return WordEmbeddingTable(vectors=vectors, dim=dim)


def bowv(table: WordEmbeddingTable, tokens: TokenSequence) -> np.ndarray:
    """Mean of the embeddings of in-table tokens; zero vector if none match."""
    hits = [table.vectors[t] for t in tokens if t in table.vectors]
    if not hits:
        return np.zeros(table.dim, dtype=np.float64)
    return np.mean(hits, axis=0)


@dataclass(frozen=True)
class SentenceEmbeddingStore:
    vectors: dict[str, np.ndarray]
    dim: int

    def __len__(self) -> int:
        return len(self.vectors)

    def lookup(self, tweet_id: str) -> np.ndarray:
        try:
            return self.vectors[tweet_id]
        except KeyError:
            raise DataError(
                f"no sentence embedding for tweet id {tweet_id!r}"
            ) from None


def load_sentence_embeddings(path: str | Path, dim: int = 512) -> SentenceEmbeddingStore:
    """Parse the sentence-embedding TSV: header ``dim\t<dim>``, then one
    ``tweet_id\tf1 f2 ... f<dim>`` line per tweet."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"sentence embedding file not found: {path}")
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").rstrip("\r")
        fields = header.split("\t")
        if len(fields) != 2 or fields[0] != "dim":
            raise DataError(f"expected header 'dim\\t{dim}', got {header!r}", 1)
        if fields[1] != str(dim):
            raise DataError(f"dimension mismatch: file has {fields[1]}, expected {dim}", 1)
        for lineno, line in enumerate(fh, start=2):
            row = line.rstrip("\n").rstrip("\r")
            if not row:
                continue
            parts = row.split("\t")
            if len(parts) != 2:
                raise DataError(f"expected 'id\\tvalues', got {len(parts)} fields", lineno)
            tweet_id, raw = parts
            if tweet_id in vectors:
                raise DataError(f"duplicate tweet id {tweet_id!r}", lineno)
            values = raw.split()
            if len(values) != dim:
                raise DataError(f"expected {dim} values, got {len(values)}", lineno)
            try:
                vectors[tweet_id] = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as err:
                raise DataError(f"non-numeric value: {err}", lineno) from None
    return SentenceEmbeddingStore(vectors=vectors, dim=dim)


def merge_sentence_stores(stores: Iterable[SentenceEmbeddingStore]) -> SentenceEmbeddingStore:
    """Union of stores; a tweet id present twice is an error."""
    merged: dict[str, np.ndarray] = {}
    dim = None
    for store in stores:
        if dim is None:
            dim = store.dim
        elif store.dim != dim:
            raise DataError(f"cannot merge stores of dim {dim} and {store.dim}")
        for tid, vec in store.vectors.items():
            if tid in merged:
                raise DataError(f"tweet id {tid!r} present in more than one store")
            merged[tid] = vec
    if dim is None:
        raise DataError("no sentence embedding stores given")
    return SentenceEmbeddingStore(vectors=merged, dim=dim)


@dataclass(frozen=True)
class Block:
    name: str
    offset: int
    length: int
    meta: str = ""  # vocabulary content hash for the tfidf block


def layout_fingerprint(layout: tuple[Block, ...]) -> str:
    desc = "|".join(f"{b.name}:{b.offset}:{b.length}:{b.meta}" for b in layout)
    return hashlib.sha256(desc.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class FeatureVector:
    """One tweet's concatenated features.

    ``sparse`` holds (index, value) pairs local to the tfidf block; the dense
    payloads live in ``dense`` keyed by block name.
    """

    layout: tuple[Block, ...]
    sparse: tuple[tuple[int, float], ...]
    dense: Mapping[str, np.ndarray]
    source_id: str = ""

    @property
    def length(self) -> int:
        return sum(b.length for b in self.layout)

    @property
    def fingerprint(self) -> str:
        return layout_fingerprint(self.layout)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.float64)
        for block in self.layout:
            if block.name == "tfidf":
                for idx, val in self.sparse:
                    out[block.offset + idx] = val
            else:
                out[block.offset : block.offset + block.length] = self.dense[block.name]
        return out


def featurize(
    tokens: TokenSequence,
    tweet_id: str,
    vocab: TfidfVocabulary | None = None,
    word_table: WordEmbeddingTable | None = None,
    sent_store: SentenceEmbeddingStore | None = None,
    enabled_blocks: Sequence[str] = BLOCK_ORDER,
) -> FeatureVector:
    """Compute the enabled blocks and place them at their layout offsets."""
    enabled = [b for b in BLOCK_ORDER if b in enabled_blocks]
    unknown = set(enabled_blocks) - set(BLOCK_ORDER)
    if unknown:
        raise ConfigError(f"unknown feature block(s): {sorted(unknown)}")
    if not enabled:
        raise ConfigError("at least one feature block must be enabled")

    layout: list[Block] = []
    sparse: tuple[tuple[int, float], ...] = ()
    dense: dict[str, np.ndarray] = {}
    offset = 0
    for name in enabled:
        if name == "tfidf":
            if vocab is None:
                raise ConfigError("tfidf block enabled but no vocabulary given")
            layout.append(Block("tfidf", offset, len(vocab), meta=vocab.content_hash()))
            sparse = transform_tfidf(vocab, tokens)
            offset += len(vocab)
        elif name == "bowv":
            if word_table is None:
                raise ConfigError("bowv block enabled but no word embedding table given")
            layout.append(Block("bowv", offset, word_table.dim))
            dense["bowv"] = bowv(word_table, tokens)
            offset += word_table.dim
        else:
            if sent_store is None:
                raise ConfigError("sentence block enabled but no embedding store given")
            layout.append(Block("sentence", offset, sent_store.dim))
            dense["sentence"] = sent_store.lookup(tweet_id)
            offset += sent_store.dim
    return FeatureVector(
        layout=tuple(layout), sparse=sparse, dense=dense, source_id=tweet_id
    )


FEATURES_MAGIC = "misotweet-features v1"


def save_feature_space(
    path: str | Path,
    blocks: Sequence[str],
    vocab: TfidfVocabulary | None = None,
    bowv_dim: int | None = None,
    sentence_dim: int | None = None,
) -> None:
    """Persist what a later predict run needs to rebuild the feature space:
    the enabled blocks, dense block dims, and the fitted vocabulary."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(FEATURES_MAGIC + "\n")
        fh.write("blocks\t" + " ".join(blocks) + "\n")
        if bowv_dim is not None:
            fh.write(f"bowv_dim\t{bowv_dim}\n")
        if sentence_dim is not None:
            fh.write(f"sentence_dim\t{sentence_dim}\n")
        if vocab is not None:
            fh.write(f"vocab\t{vocab.n_docs}\t{len(vocab)}\n")
            for term, w in zip(vocab.terms, vocab.idf):
                fh.write(f"{term}\t{float(w)!r}\n")
        fh.write("end\n")


def load_feature_space(
    path: str | Path,
) -> tuple[tuple[str, ...], TfidfVocabulary | None, int | None, int | None]:
    """Inverse of :func:`save_feature_space`:
    returns (blocks, vocab, bowv_dim, sentence_dim)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"feature space file not found: {path}")
    lines = path.read_text("utf-8").splitlines()
    if not lines or lines[0] != FEATURES_MAGIC:
        raise DataError(f"{path}: not a {FEATURES_MAGIC} file")
    blocks: tuple[str, ...] = ()
    vocab = None
    bowv_dim = None
    sentence_dim = None
    i = 1
    while i < len(lines):
        line = lines[i]
        if line == "end":
            return blocks, vocab, bowv_dim, sentence_dim
        key, _, rest = line.partition("\t")
        if key == "blocks":
            blocks = tuple(rest.split())
        elif key == "bowv_dim":
            bowv_dim = int(rest)
        elif key == "sentence_dim":
            sentence_dim = int(rest)
        elif key == "vocab":
            n_docs_s, _, size_s = rest.partition("\t")
            size = int(size_s)
            terms = []
            idf = []
            for j in range(i + 1, i + 1 + size):
                if j >= len(lines):
                    raise DataError(f"{path}: truncated vocabulary", line=j + 1)
                term, _, w = lines[j].partition("\t")
                terms.append(term)
                idf.append(float(w))
            vocab = TfidfVocabulary(
                terms=tuple(terms), idf=np.array(idf), n_docs=int(n_docs_s)
            )
            i += size
        else:
            raise DataError(f"{path}: unexpected line {line!r}", line=i + 1)
        i += 1
    raise DataError(f"{path}: missing end marker (truncated file?)")


def stack_features(vectors: Sequence[FeatureVector]) -> tuple[np.ndarray, str]:
    """Dense design matrix for a list of feature vectors sharing one layout."""
    if not vectors:
        raise DataError("cannot stack an empty feature list")
    fp = vectors[0].fingerprint
    for v in vectors[1:]:
        if v.fingerprint != fp:
            raise DataError("feature vectors do not share a layout")
    return np.stack([v.to_dense() for v in vectors]), fp
