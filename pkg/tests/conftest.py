import os

import numpy as np
import pytest


@pytest.fixture(scope="session")
def eig_cache(tmp_path_factory):
    """Disk cache for expensive eigendecompositions shared across test modules.

    Keyed results are stored as .npz under SPIN1CHAIN_TEST_CACHE (defaults to
    a per-user cache directory) so repeated test runs skip the multi-minute
    dense diagonalizations; delete the directory to force recomputation.
    """
    root = os.environ.get(
        "SPIN1CHAIN_TEST_CACHE",
        os.path.join(os.path.expanduser("~"), ".cache", "spin1chain-tests"),
    )
    os.makedirs(root, exist_ok=True)

    def fetch(key, builder):
        path = os.path.join(root, key + ".npz")
        if os.path.exists(path):
            with np.load(path) as data:
                return {name: data[name] for name in data.files}
        result = builder()
        tmp = path + ".tmp.npz"
        np.savez_compressed(tmp, **result)
        os.replace(tmp, path)
        return result

    return fetch
