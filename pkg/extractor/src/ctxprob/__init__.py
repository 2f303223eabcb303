"""Context-probability extraction for the surprisal analysis interchange format."""

from .embeddings import export_embeddings
from .extract import (ExtractionJob, ExtractionResult, make_scorer,
                      read_input_documents, run_extraction)
from .ngram_model import NgramScorer
from .subwords import SubwordTokenizer
from .wordspans import word_spans

__version__ = "0.1.0"
