"""Exception types shared across the toolkit."""


class LuxkitError(Exception):
    """Base class for all domain errors raised by this package."""


class CorpusFormatError(LuxkitError):
    """A corpus, fixture, or score file violates its documented schema."""


class ProviderError(LuxkitError):
    """An embedding or scoring backend failed or refused a request."""


class ProtocolError(LuxkitError):
    """The NDJSON scorer wire protocol was violated by a peer."""


class PipelineStageError(LuxkitError):
    """A corpus pipeline stage failed; carries the stage name."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage


class ConfigError(LuxkitError):
    """The toolkit configuration file is missing or malformed."""
