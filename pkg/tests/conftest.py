"""Shared random generators and the acceptance-criteria summary hook."""
import numpy as np

from formalframes import ClassicalJet, FrameCoords, JetGroupElement
from formalframes.bundle import BundleTangent

# registry filled by tests/test_acceptance.py: num -> (description, passed)
CRITERIA = {}


def record_criterion(num, desc, passed):
    CRITERIA[num] = (desc, passed)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(CRITERIA):
        desc, ok = CRITERIA[num]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{status}] {desc}")


# ---------------------------------------------------------------------------
# random data (well-conditioned by construction, so linear solves stay tight)


def rand_linear(rng, n):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return q * rng.uniform(0.5, 2.0)


def rand_group(rng, n, r):
    arrays = [rand_linear(rng, n)] + [
        rng.uniform(-1, 1, (n,) * (k + 1)) for k in range(2, r + 1)
    ]
    return JetGroupElement.from_arrays(arrays)


def rand_classical(rng, n, r):
    from formalframes import symmetrize_array

    arrays = [rand_linear(rng, n)] + [
        symmetrize_array(rng.uniform(-1, 1, (n,) * (k + 1))) for k in range(2, r + 1)
    ]
    return ClassicalJet.from_arrays(arrays)


def rand_frame(rng, n, r, classical=False):
    g = rand_classical(rng, n, r) if classical else rand_group(rng, n, r)
    return FrameCoords.from_arrays(rng.uniform(-1, 1, n), g.arrays)


def rand_tangent(rng, n, r):
    return BundleTangent.from_arrays(
        rng.uniform(-1, 1, n),
        [rng.uniform(-1, 1, (n,) * (k + 1)) for k in range(1, r + 1)],
    )


def gap(x, y):
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))
