"""Scoring models behind the wire protocol.

Two implementations share the same surface (score_batch, train_on,
save/load): a small bidirectional transformer encoder scored per
(context, candidate) pair, and a model-free hash rule used for protocol
conformance runs where the recorded byte streams must replay exactly.
"""
from __future__ import annotations

import json
import os
import re
import zlib
from dataclasses import asdict, dataclass

import torch
from torch import nn

_TOKEN_RE = re.compile(r"[\w'-]+")

PAD_ID = 0
CLS_ID = 1
SEP_ID = 2
_FIRST_HASHED_ID = 3


@dataclass(frozen=True)
class TinyEncoderConfig:
    """Architecture and init settings; the pinned base-checkpoint identifier
    belongs in deployment config files, never in code."""

    vocab_size: int = 8192
    hidden: int = 64
    layers: int = 2
    heads: int = 4
    ffn: int = 128
    max_len: int = 256
    seed: int = 1234

    def validate(self) -> None:
        if self.vocab_size <= _FIRST_HASHED_ID:
            raise ValueError("vocab_size too small for the special tokens")
        if self.hidden % self.heads != 0:
            raise ValueError("hidden size must divide evenly across heads")
        if self.max_len < 8:
            raise ValueError("max_len must leave room for a sentence")


def hash_tokens(text: str, vocab_size: int) -> list[int]:
    """Deterministic vocabulary-free token ids; no downloads, no state."""
    span = vocab_size - _FIRST_HASHED_ID
    return [zlib.crc32(tok.casefold().encode("utf-8")) % span
            + _FIRST_HASHED_ID
            for tok in _TOKEN_RE.findall(text)]


class _Encoder(nn.Module):
    def __init__(self, config: TinyEncoderConfig):
        super().__init__()
        self.token_emb = nn.Embedding(config.vocab_size, config.hidden,
                                      padding_idx=PAD_ID)
        self.pos_emb = nn.Embedding(config.max_len, config.hidden)
        self.segment_emb = nn.Embedding(2, config.hidden)
        # Flags tokens that also occur on the other side of the separator;
        # lexical-overlap evidence the attention stack would otherwise have
        # to rediscover from scratch.
        self.match_emb = nn.Embedding(2, config.hidden)
        layer = nn.TransformerEncoderLayer(
            d_model=config.hidden, nhead=config.heads,
            dim_feedforward=config.ffn, dropout=0.0, batch_first=True)
        # The nested-tensor fast path changes execution by batch shape;
        # keep the one code path so scores stay reproducible.
        self.encoder = nn.TransformerEncoder(layer, num_layers=config.layers,
                                             enable_nested_tensor=False)
        self.head = nn.Linear(config.hidden, 1)

    def forward(self, ids, segments, matches, pad_mask):
        positions = torch.arange(ids.shape[1], device=ids.device)
        x = (self.token_emb(ids) + self.pos_emb(positions)[None, :, :]
             + self.segment_emb(segments) + self.match_emb(matches))
        encoded = self.encoder(x, src_key_padding_mask=pad_mask)
        return self.head(encoded[:, 0, :]).squeeze(-1)


class TinyEncoderModel:
    """Pointwise cross-encoder: sigmoid(head(CLS)) over [CLS] ctx [SEP] cand."""

    def __init__(self, config: TinyEncoderConfig | None = None):
        self.config = config or TinyEncoderConfig()
        self.config.validate()
        torch.manual_seed(self.config.seed)
        self.net = _Encoder(self.config)
        self.net.eval()

    def _encode_pair(self, context: str, candidate: str):
        cfg = self.config
        ctx = hash_tokens(context, cfg.vocab_size)
        cand = hash_tokens(candidate, cfg.vocab_size)
        cand_cap = max(1, (cfg.max_len - 2) // 3)
        cand = cand[:cand_cap]
        budget = cfg.max_len - 2 - len(cand)
        if len(ctx) > budget:
            # The fact prefix opens the context and the newest turns close
            # it; the middle of the history is the expendable part.
            head = budget // 2
            ctx = ctx[:head] + ctx[len(ctx) - (budget - head):]
        ctx_set, cand_set = set(ctx), set(cand)
        ids = [CLS_ID] + ctx + [SEP_ID] + cand
        segments = [0] * (len(ctx) + 2) + [1] * len(cand)
        matches = ([0] + [1 if t in cand_set else 0 for t in ctx] + [0]
                   + [1 if t in ctx_set else 0 for t in cand])
        return ids, segments, matches

    def _batch(self, pairs: list[tuple[str, str]]):
        encoded = [self._encode_pair(c, a) for c, a in pairs]
        width = max(len(ids) for ids, _, _ in encoded)
        ids = torch.full((len(encoded), width), PAD_ID, dtype=torch.long)
        segments = torch.zeros((len(encoded), width), dtype=torch.long)
        matches = torch.zeros((len(encoded), width), dtype=torch.long)
        pad = torch.ones((len(encoded), width), dtype=torch.bool)
        for row, (i, s, m) in enumerate(encoded):
            n = len(i)
            ids[row, :n] = torch.tensor(i, dtype=torch.long)
            segments[row, :n] = torch.tensor(s, dtype=torch.long)
            matches[row, :n] = torch.tensor(m, dtype=torch.long)
            pad[row, :n] = False
        return ids, segments, matches, pad

    def logits(self, pairs: list[tuple[str, str]]) -> torch.Tensor:
        return self.net(*self._batch(pairs))

    def score_batch(self, context: str, candidates: list[str]) -> list[float]:
        if not candidates:
            return []
        self.net.eval()
        with torch.no_grad():
            logits = self.logits([(context, c) for c in candidates])
        return torch.sigmoid(logits).tolist()

    def train_on(self, examples: list[dict], config) -> dict:
        from .finetune import run_finetune
        return run_finetune(self, examples, config)

    def save(self, directory: str) -> None:
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "config.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(asdict(self.config), fh, indent=2, sort_keys=True)
            fh.write("\n")
        torch.save(self.net.state_dict(),
                   os.path.join(directory, "weights.pt"))

    @classmethod
    def load(cls, directory: str) -> "TinyEncoderModel":
        with open(os.path.join(directory, "config.json"),
                  encoding="utf-8") as fh:
            config = TinyEncoderConfig(**json.load(fh))
        model = cls(config)
        state = torch.load(os.path.join(directory, "weights.pt"),
                           weights_only=True)
        model.net.load_state_dict(state)
        model.net.eval()
        return model


class HashModel:
    """Reference rule for conformance runs: scores and pseudo-losses are pure
    functions of the request bytes, so recorded streams replay byte-exact."""

    def score_batch(self, context: str, candidates: list[str]) -> list[float]:
        return [self._score(context, c) for c in candidates]

    @staticmethod
    def _score(context: str, candidate: str) -> float:
        digest = zlib.crc32((context + "\x00" + candidate).encode("utf-8"))
        return (digest % 10 ** 6) / 10 ** 6

    def train_on(self, examples: list[dict], config) -> dict:
        canonical = json.dumps(examples, sort_keys=True,
                               separators=(",", ":")).encode("utf-8")
        loss = (zlib.crc32(canonical) % 10 ** 6) / 10 ** 6
        return {"final_loss": loss, "epoch_losses": []}

    def save(self, directory: str) -> None:
        raise ValueError("the hash reference model has no weights to save")
