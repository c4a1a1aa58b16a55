"""Fine-tuning loop for the encoder model.

Pointwise examples are {"context", "candidate", "label"} rows trained with
binary cross-entropy on the pair score. Pairwise examples are {"context",
"positive", "negative"} rows trained on the score difference, pushing the
positive above the negative.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

import torch

MODES = ("pointwise", "pairwise")


@dataclass(frozen=True)
class FineTuneConfig:
    epochs: int = 10
    batch_size: int = 5
    learning_rate: float = 1e-6
    mode: str = "pointwise"
    max_sequence_length: int = 256

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


def _check_examples(examples: list[dict], mode: str) -> None:
    if not examples:
        raise ValueError("training stream is empty")
    wanted = (("context", "candidate", "label") if mode == "pointwise"
              else ("context", "positive", "negative"))
    for i, row in enumerate(examples):
        for key in wanted:
            if key not in row:
                raise ValueError(f"example {i} lacks field {key!r}")


def _batch_loss(model, batch: list[dict], mode: str) -> torch.Tensor:
    if mode == "pointwise":
        logits = model.logits([(r["context"], r["candidate"]) for r in batch])
        labels = torch.tensor([float(r["label"]) for r in batch])
        return torch.nn.functional.binary_cross_entropy_with_logits(
            logits, labels)
    pos = model.logits([(r["context"], r["positive"]) for r in batch])
    neg = model.logits([(r["context"], r["negative"]) for r in batch])
    # softplus(-(pos - neg)) is -log sigmoid(margin); zero when the positive
    # scores far above the negative.
    return torch.nn.functional.softplus(neg - pos).mean()


def run_finetune(model, examples: list[dict],
                 config: FineTuneConfig) -> dict:
    """Train in place; returns per-epoch mean losses and the final loss.

    Batch order is fixed by the example order, so a rerun on the same rows
    reproduces the same trajectory. With zero epochs the weights are
    untouched and the reported loss is the starting loss.
    """
    _check_examples(examples, config.mode)
    batches = [examples[i:i + config.batch_size]
               for i in range(0, len(examples), config.batch_size)]
    if config.epochs == 0:
        model.net.eval()
        with torch.no_grad():
            start = sum(_batch_loss(model, b, config.mode).item()
                        for b in batches) / len(batches)
        return {"final_loss": start, "epoch_losses": []}

    optimizer = torch.optim.Adam(model.net.parameters(),
                                 lr=config.learning_rate)
    epoch_losses = []
    model.net.train()
    for _ in range(config.epochs):
        total = 0.0
        for batch in batches:
            optimizer.zero_grad()
            loss = _batch_loss(model, batch, config.mode)
            loss.backward()
            optimizer.step()
            total += loss.item()
        epoch_losses.append(total / len(batches))
    model.net.eval()
    return {"final_loss": epoch_losses[-1], "epoch_losses": epoch_losses}


def save_checkpoint(model, directory: str, log: dict,
                    config: FineTuneConfig) -> None:
    """Checkpoint layout: config.json + weights.pt + training_log.json."""
    model.save(directory)
    record = {"config": asdict(config), **log}
    with open(os.path.join(directory, "training_log.json"), "w",
              encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
