"""Frequency vs contextual surprisal on a toy two-sentence text.

A frequency table gives each word its context-free cost in bits; a
contextual probability file (here built by hand) supplies per-word costs
conditioned on the whole sentence, for the original and the reversed order.
The text summary normalizes each condition by the same word count and forms
the two reduction indices.
"""

import math

from surprisalkit import (FrequencyTable, ContextualRecord, ContextualStore,
                          parse_conllu, summarize_text)

CONLLU = """\
# newdoc id = toy
1\tbirds\t_\t_\t_\t_\t2\tnsubj\t_\t_
2\tsing\t_\t_\t_\t_\t0\troot\t_\t_
3\tat\t_\t_\t_\t_\t4\tcase\t_\t_
4\tdawn\t_\t_\t_\t_\t2\tobl\t_\t_

1\tcats\t_\t_\t_\t_\t2\tnsubj\t_\t_
2\tsleep\t_\t_\t_\t_\t0\troot\t_\t_
3\tall\t_\t_\t_\t_\t4\tdet\t_\t_
4\tday\t_\t_\t_\t_\t2\tobl\t_\t_
"""

table = FrequencyTable(entries={
    "birds": 0.02, "sing": 0.01, "at": 0.2, "dawn": 0.005,
    "cats": 0.02, "sleep": 0.01, "all": 0.15, "day": 0.03,
})

store = ContextualStore()
for sent_idx, words in enumerate([["birds", "sing", "at", "dawn"],
                                  ["cats", "sleep", "all", "day"]]):
    freq_bits = [-math.log2(table.lookup(w)) for w in words]
    # context roughly halves each word's cost; reversing order undoes most of it
    ctx_bits = [b * 0.5 for b in freq_bits]
    rev_bits = [b * 0.9 for b in freq_bits][::-1]
    store.add(ContextualRecord("toy", sent_idx, "orig", "demo-model", "masked",
                               tuple(words), tuple(ctx_bits)))
    store.add(ContextualRecord("toy", sent_idx, "rev", "demo-model", "masked",
                               tuple(reversed(words)), tuple(rev_bits)))

doc = parse_conllu(CONLLU.encode(), language="en")[0]
summary = summarize_text(doc, table, store)
print(f"words pooled: {summary.n_words_total} over {summary.n_sentences_included} sentences")
print(f"bits/word   frequency: {summary.t_freq:.3f}")
print(f"bits/word   contextual: {summary.t_ctx:.3f}")
print(f"bits/word   reversed:  {summary.t_ctx_rev:.3f}")
print(f"\nreduction from frequency to context: {summary.diff_fb:.3f}")
print(f"cost of losing word order:           {summary.diff_rev:.3f}")
