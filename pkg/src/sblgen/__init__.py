"""sblgen: generate GUI plugins for command-line executables.

The pipeline has three stages: a designer layout file plus flag-selection
files are parsed and merged into a validated, platform-agnostic JSON GUI
specification, which per-backend emitters then turn into plugin source
trees for desktop (pyqt, tkinter) and web (panel-ngljs, panel-threejs)
targets.  A backend-neutral presenter runtime executes the wrapped CLI,
runs post-analysis, and maps artifacts back to output widgets.
"""

__version__ = "0.1.0"

SCHEMA_ID = "sblspec/1"


class SblgenError(Exception):
    """Base class for all errors raised by this package."""
