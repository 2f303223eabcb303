"""Transformers-backed scorers: iterative masking or a single causal pass.

Imports are deferred so the package works without torch installed; anything
that is not a ``builtin:`` model id routes here.
"""

from __future__ import annotations

BATCH_SIZE = 16


class HfScorer:
    """Per-subword probabilities with character offsets from a fast tokenizer."""

    def __init__(self, model_id: str, mode: str, device: str = "cpu"):
        try:
            import torch
            from transformers import (AutoModelForCausalLM, AutoModelForMaskedLM,
                                      AutoTokenizer)
        except ImportError as exc:
            raise RuntimeError(
                "transformers and torch are required for non-builtin models") from exc
        self._torch = torch
        self.mode = mode
        self.device = device
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        if not self.tokenizer.is_fast:
            raise RuntimeError(f"{model_id}: a fast tokenizer is required for offsets")
        if mode == "masked":
            if self.tokenizer.mask_token_id is None:
                raise RuntimeError(f"{model_id} has no mask token; use --mode causal")
            self.model = AutoModelForMaskedLM.from_pretrained(model_id)
        else:
            self.model = AutoModelForCausalLM.from_pretrained(model_id)
        self.model.to(device)
        self.model.eval()

    def _encode(self, text: str):
        enc = self.tokenizer(text, return_offsets_mapping=True,
                             return_special_tokens_mask=True)
        return enc["input_ids"], enc["offset_mapping"], enc["special_tokens_mask"]

    def subword_count(self, text: str) -> int:
        return len(self._encode(text)[0])

    def score(self, text: str) -> list[tuple[int, int, float]]:
        if self.mode == "masked":
            return self._score_masked(text)
        return self._score_causal(text)

    def _score_masked(self, text: str):
        torch = self._torch
        ids, offsets, special = self._encode(text)
        positions = [i for i, s in enumerate(special) if not s]
        base = torch.tensor(ids, device=self.device)
        probs: dict[int, float] = {}
        with torch.no_grad():
            for chunk_start in range(0, len(positions), BATCH_SIZE):
                chunk = positions[chunk_start:chunk_start + BATCH_SIZE]
                batch = base.repeat(len(chunk), 1)
                for row, pos in enumerate(chunk):
                    batch[row, pos] = self.tokenizer.mask_token_id
                logits = self.model(input_ids=batch).logits
                soft = torch.softmax(logits.float(), dim=-1)
                for row, pos in enumerate(chunk):
                    probs[pos] = float(soft[row, pos, ids[pos]])
        return [(offsets[i][0], offsets[i][1], probs[i]) for i in positions]

    def _score_causal(self, text: str):
        torch = self._torch
        ids, offsets, special = self._encode(text)
        positions = [i for i, s in enumerate(special) if not s]
        bos = self.tokenizer.bos_token_id
        prepended = False
        if (bos is not None and (not ids or ids[0] != bos)):
            ids = [bos] + ids
            prepended = True
        batch = self._torch.tensor([ids], device=self.device)
        with torch.no_grad():
            logits = self.model(input_ids=batch).logits[0].float()
        soft = torch.softmax(logits, dim=-1)
        out = []
        for pos in positions:
            row = pos + 1 if prepended else pos
            if row == 0:
                # no left context available at all: leave the model's
                # unconditioned floor to the caller
                out.append((offsets[pos][0], offsets[pos][1], 0.0))
                continue
            prob = float(soft[row - 1, ids[row]])
            out.append((offsets[pos][0], offsets[pos][1], prob))
        return out
