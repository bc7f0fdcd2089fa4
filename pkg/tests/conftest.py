import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vscmg_mpc import (draw_initial_state, preset_scenario, run_closed_loop)


@pytest.fixture(scope="session")
def paper_cfg():
    return preset_scenario("paper-s4")


@pytest.fixture(scope="session")
def paper_params(paper_cfg):
    return paper_cfg.params


@pytest.fixture(scope="session")
def paper_poles(paper_cfg):
    return paper_cfg.mpc.poles


@pytest.fixture(scope="session")
def paper_x0(paper_cfg):
    return draw_initial_state(paper_cfg, seed=1)


@pytest.fixture(scope="session")
def s4_run(paper_cfg, paper_x0):
    """The 100 s demonstration run shared by the long acceptance checks."""
    t0 = time.perf_counter()
    result = run_closed_loop(paper_cfg.params, paper_x0, paper_cfg.mpc,
                             dt_integrator=paper_cfg.dt, t_end=paper_cfg.t_end)
    elapsed = time.perf_counter() - t0
    return result, elapsed
