import numpy as np
import pytest

from abp import annulus


def corrected_divisor(rng, r, e, delta):
    """Random zeros in the annulus, radially corrected onto the existence locus.

    Moduli are sampled around the geometric sweet spot r^(delta/e) so the
    common rescale always stays inside the annulus.
    """
    # jitter coefficient keeps max |u_i - mean(u)| below the margin to the
    # boundary after the common rescale recenters the mean
    width = min(delta / e, 1.0 - delta / e) * abs(np.log(r))
    logmod = (delta / e) * np.log(r) + rng.uniform(-0.35, 0.35, e) * width
    pts = np.exp(logmod) * np.exp(2j * np.pi * rng.uniform(size=e))
    return annulus.radial_correct(r, delta, tuple(pts))


@pytest.fixture
def rng():
    return np.random.default_rng(42)
