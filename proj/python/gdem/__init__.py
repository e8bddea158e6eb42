"""Graph distillation by eigenbasis matching."""

try:
    from ._gdem import *  # noqa: F401,F403
    from ._gdem import __version__  # noqa: F401
except ImportError:  # running from a build tree without an installed package
    from _gdem import *  # noqa: F401,F403
    from _gdem import __version__  # noqa: F401
