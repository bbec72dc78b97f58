import os

# No session log files from test runs
os.environ.setdefault("LIMITSHAPE_LOG_DIR", "")

import hypothesis  # noqa: E402
import numpy as np  # noqa: E402
import pytest  # noqa: E402

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture(scope="session")
def aztec_shape():
    from limitshape.regions import aztec_region
    from limitshape.solver import solve_parameters

    return solve_parameters(aztec_region())


@pytest.fixture(scope="session")
def octagon_shape():
    from limitshape.regions import octagon_region
    from limitshape.solver import solve_parameters

    return solve_parameters(octagon_region(0.5, 0.25))


@pytest.fixture(scope="session")
def fv_shape():
    from limitshape.regions import fv_hexagon_region
    from limitshape.solver import solve_parameters

    return solve_parameters(fv_hexagon_region(1.0))
