"""Reference implementation of the NDJSON scorer protocol.

See PROTOCOL.md at the repository root for the wire format. Stub mode is
deterministic and model-free; real mode delegates to wrapped models.
"""

from .server import serve
from .stub import StubScorer

__version__ = "0.1.0"
