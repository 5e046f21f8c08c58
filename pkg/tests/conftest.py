import os
import pathlib

# keep the oracle cache inside the repo: repeated runs, the CLI and the
# acceptance timing all see the same persisted tables regardless of HOME
os.environ.setdefault(
    "FORMULALAB_CACHE",
    str(pathlib.Path(__file__).resolve().parent.parent / ".cache"),
)
