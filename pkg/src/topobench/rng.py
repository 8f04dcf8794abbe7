"""Deterministic random-stream derivation.

Every stochastic operation takes a 64-bit seed and derives an independent
substream keyed by a fixed string label.  Substreams are stable: adding new
labelled draws to a pipeline never perturbs the draws of existing labels.
"""

import zlib

import numpy as np


def substream(seed: int, *labels) -> np.random.Generator:
    """Return a generator for ``seed`` specialised by a label path.

    Labels may be strings or integers; strings are hashed with crc32 so the
    derivation does not depend on Python's randomized ``hash``.
    """
    keys = []
    for lab in labels:
        if isinstance(lab, str):
            keys.append(zlib.crc32(lab.encode("utf-8")))
        else:
            keys.append(int(lab) & 0xFFFFFFFF)
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(keys))
    return np.random.default_rng(ss)
