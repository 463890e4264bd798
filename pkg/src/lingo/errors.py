"""Exception types shared across the toolkit."""


class LingoError(Exception):
    """Base class for all data errors raised by this toolkit.

    The CLI maps these to exit code 2 with a JSON error object; anything
    else escaping a subcommand is a bug.
    """


class CorpusError(LingoError):
    """Malformed or unreadable corpus input."""


class TokenizerError(LingoError):
    """Invalid tokenizer construction, file, or usage."""


class VocabExtensionError(LingoError):
    """Vocabulary extension could not satisfy the request."""


class EmbeddingError(LingoError):
    """Invalid embedding matrix, file, or initialization request."""


class MixtureError(LingoError):
    """Mixture construction or packing constraint violation."""
