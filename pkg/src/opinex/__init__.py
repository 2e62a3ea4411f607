"""opinex: sentiment feature extraction and analysis for labeled review corpora."""

__version__ = "0.1.0"
