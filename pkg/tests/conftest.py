import numpy as np
import pytest

from torsiongeo.catalog import epsilon3
from torsiongeo.frame_algebra import FrameTensor
from torsiongeo.invariant_geometry import LieFrameGeometry
from torsiongeo.random_geometry import (
    random_geometry,
    random_orthogonal,
    rotate_structure,
)


@pytest.fixture(scope="session")
def closed_torsion_suite():
    """100 randomized geometries (dim 3..6) with closed random torsion;
    shared by the identity suites so sampling cost is paid once."""
    return [random_geometry(np.random.default_rng(1000 + i), 3 + (i % 4),
                            closed_torsion=True)
            for i in range(100)]


@pytest.fixture(scope="session")
def open_torsion_suite():
    """40 randomized geometries with generic (typically non-closed) torsion."""
    return [random_geometry(np.random.default_rng(4000 + i), 3 + (i % 4))
            for i in range(40)]


@pytest.fixture(scope="session")
def parallel_torsion_suite():
    """Constructed geometries satisfying dH = 0 and parallel torsion
    nontrivially: conjugated block sums of group frames with the
    block canonical 3-forms at random scales."""
    samples = []
    rng = np.random.default_rng(77)
    for i in range(20):
        blocks = [3] if i % 3 == 0 else ([3, 3] if i % 3 == 1 else [3, 0, 0])
        dim = sum(max(b, 1) for b in blocks)
        dim = {0: 3, 1: 6, 2: 5}[i % 3]
        c = np.zeros((dim, dim, dim))
        H = np.zeros((dim, dim, dim))
        c[:3, :3, :3] = epsilon3()
        H[:3, :3, :3] = float(rng.uniform(0.5, 2.0)) * epsilon3()
        if dim == 6:
            c[3:, 3:, 3:] = epsilon3()
            H[3:, 3:, 3:] = float(rng.uniform(0.5, 2.0)) * epsilon3()
        O = random_orthogonal(rng, dim)
        c_rot, H_rot = rotate_structure(c, FrameTensor(dim, 3, H), O)
        samples.append(LieFrameGeometry(dim, c_rot, H_rot))
    return samples


@pytest.fixture(scope="session")
def su3_built():
    from torsiongeo.special_structures import build_su3
    return build_su3()
