"""Corpus curation and evaluation toolkit for accented speech synthesis.

Submodules:
    georegion  geographic bounding-box regions and accent-label assignment
    corpus     manifest handling, selection strategies, batching, augmentation plans
    knnmatch   frame-level kNN feature matching and the FMAT matrix format
    acceval    accent/speaker evaluation: embeddings, Gaussian backend, DCF,
               spectral clustering, WER, MOS intervals
    service    HTTP stats service (FastAPI)
    cli        command-line interface
"""

__version__ = "0.1.0"
