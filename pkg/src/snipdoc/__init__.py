"""snipdoc: mine inner comments from Java methods, link them to the
statements they document, build text-to-text datasets, and evaluate
linking and summarization systems."""

__version__ = "0.1.0"
