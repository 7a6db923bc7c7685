"""explora: a conversational engine for exploratory search.

A dialogue state machine with intent classification and query confirmation
drives a two-stage retrieval pipeline (web search, then a Wikipedia-style
section tree), an extractive TF-IDF/DBSCAN summarizer and an image ranker,
exposed as an HTTP session service and a headless REPL.
"""

__version__ = "0.1.0"
