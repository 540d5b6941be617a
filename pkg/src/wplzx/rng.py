"""Deterministic random streams via counter-mode seed splitting.

All randomness in the package flows from one master seed; independent
substreams are derived by keying a Philox counter-based generator with
(master, index), so trial i's stream never depends on how many other trials
ran or in which order.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def trial_generator(master_seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for substream ``index`` of ``master_seed``."""
    key = [int(master_seed) & _MASK64, int(index) & _MASK64]
    return np.random.Generator(np.random.Philox(key=key))
