"""Word-level vocabulary with the usual specials."""

from __future__ import annotations

import re
from dataclasses import dataclass

PAD, UNK, CLS, SEP = 0, 1, 2, 3
SPECIALS = ["<pad>", "<unk>", "<cls>", "<sep>"]

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Vocab:
    token_to_id: dict[str, int]

    @classmethod
    def build(cls, texts: list[str], max_size: int = 30_000, min_freq: int = 1) -> "Vocab":
        counts: dict[str, int] = {}
        for text in texts:
            for token in tokenize(text):
                counts[token] = counts.get(token, 0) + 1
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        mapping = {tok: i for i, tok in enumerate(SPECIALS)}
        for token, freq in ranked:
            if freq < min_freq or len(mapping) >= max_size:
                break
            mapping[token] = len(mapping)
        return cls(mapping)

    def __len__(self) -> int:
        return len(self.token_to_id)

    def encode_tokens(self, text: str) -> list[int]:
        return [self.token_to_id.get(token, UNK) for token in tokenize(text)]

    def to_dict(self) -> dict[str, int]:
        return dict(self.token_to_id)

    @classmethod
    def from_dict(cls, data: dict[str, int]) -> "Vocab":
        return cls({str(k): int(v) for k, v in data.items()})


def encode_pair(vocab: Vocab, claim: str, article: str | None, max_tokens: int) -> list[int]:
    """[CLS] claim [SEP] article-head, truncated to ``max_tokens``. The claim
    always comes first; the article fills whatever budget remains."""
    ids = [CLS] + vocab.encode_tokens(claim)
    ids = ids[:max_tokens]
    if article is not None and len(ids) < max_tokens:
        ids = ids + [SEP] + vocab.encode_tokens(article)
        ids = ids[:max_tokens]
    return ids
