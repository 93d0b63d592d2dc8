"""Parity harness between boosttab and the reference AdaBoost implementation.

Talks to boosttab exclusively through its command line and file formats
(dataset CSV, outcome CSV, tree/report JSON); never imports it.
"""

from .harness import (
    PINNED_SKLEARN_VERSION,
    ParityRecord,
    check_pinned_version,
    export_reference_run,
    read_dataset_csv,
    run_parity,
)

__all__ = [
    "PINNED_SKLEARN_VERSION",
    "ParityRecord",
    "check_pinned_version",
    "export_reference_run",
    "read_dataset_csv",
    "run_parity",
]
