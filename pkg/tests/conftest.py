import numpy as np
import pytest

from eegsig.features import FeatureMatrix


def separable_blobs(classes=5, train_per_class=20, test_per_class=10, dims=30,
                    separation=6.0, seed=42):
    """Seeded Gaussian blobs with pairwise center distance 2*separation sigma.

    Returns ((train_x, train_y), (test_x, test_y)).
    """
    rng = np.random.default_rng(seed)
    centers = np.zeros((classes, dims))
    for c in range(classes):
        centers[c, 2 * c] = separation
        centers[c, 2 * c + 1] = separation

    def draw(per_class):
        x = np.vstack([centers[c] + rng.standard_normal((per_class, dims))
                       for c in range(classes)])
        y = np.repeat(np.arange(classes), per_class)
        perm = rng.permutation(len(y))
        return x[perm], y[perm]

    return draw(train_per_class), draw(test_per_class)


@pytest.fixture
def blobs5():
    (xtr, ytr), (xte, yte) = separable_blobs()
    names = tuple(f"f{i}" for i in range(xtr.shape[1]))
    return FeatureMatrix(xtr, names, ytr), xte, yte
