import numpy as np
import pytest

from spillnet import EconomyParams, QualityState, SpilloverMatrix, validate_model


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def raw_q_rk4(f, q0, nu, alpha, s_total, t_end, step):
    """Reference integrator in raw quality coordinates.

    Independent of the package's scale-free form: usable on short horizons
    only (raw q overflows on long exponential runs) as an oracle for the
    (z, log-sum) algebra.
    """
    f = np.asarray(f, dtype=float)

    def field(q):
        p = f @ q + alpha
        pmax = p.max()
        if pmax <= 0:
            s = np.full(q.size, 1.0 / q.size)
        else:
            w = (p / pmax) ** (1.0 / (1.0 - nu))
            s = w / w.sum()
        return (s * s_total) ** nu * p

    q = np.asarray(q0, dtype=float).copy()
    n_steps = int(round(t_end / step))
    for _ in range(n_steps):
        k1 = field(q)
        k2 = field(q + 0.5 * step * k1)
        k3 = field(q + 0.5 * step * k2)
        k4 = field(q + step * k3)
        q = q + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return q


@pytest.fixture
def raw_rk4():
    return raw_q_rk4


def make_model(rows, nu=0.5, alpha=0.0, s_total=1.0, c=1.0, q0=None):
    m = SpilloverMatrix(np.array(rows, dtype=float))
    if q0 is None:
        q0 = np.ones(m.n)
    return validate_model(
        m,
        EconomyParams(nu=nu, alpha=alpha, s_total=s_total, c=c),
        QualityState(0.0, np.asarray(q0, dtype=float)),
    )


@pytest.fixture
def model_factory():
    return make_model
