class ArgmineError(Exception):
    """Base class for data errors raised by this package."""


class GraphError(ArgmineError):
    pass


class ParseError(ArgmineError):
    pass


class FeatureError(ArgmineError):
    pass


class ModelError(ArgmineError):
    pass


class ConfigError(ArgmineError):
    pass


class CorpusError(ArgmineError):
    pass


class NoArgumentFound(ArgmineError):
    """The pipeline detected no argumentative unit in the input."""
