import itertools

import numpy as np
import pytest

from wsnlife.lpsolver import LPSolution, StandardLP, solve_lp


def enumerate_vertices(lp: StandardLP):
    """Brute-force oracle: best objective over all basic feasible
    solutions."""
    m, n = lp.a.shape
    best = None
    for cols in itertools.combinations(range(n), m):
        sub = lp.a[:, cols]
        if np.linalg.matrix_rank(sub) < m:
            continue
        x_b = np.linalg.solve(sub, lp.b)
        if (x_b < -1e-9).any():
            continue
        x = np.zeros(n)
        x[list(cols)] = x_b
        obj = float(lp.c @ x)
        if best is None or obj > best:
            best = obj
    return best


def random_feasible_lp(rng, m, n):
    a = rng.normal(size=(m, n))
    x0 = rng.random(n)  # strictly feasible point fixes b
    b = a @ x0
    c = rng.normal(size=n)
    # bound the feasible region so the LP cannot be unbounded:
    # add sum(x) <= bound as an equality with a slack column
    bound = float(x0.sum() + 5.0)
    a = np.hstack([a, np.zeros((m, 1))])
    a = np.vstack([a, np.ones(n + 1)])
    b = np.append(b, bound)
    c = np.append(c, 0.0)
    return StandardLP(a=a, b=b, c=c)


class TestSolveLp:
    def test_simple_cap(self):
        # max x s.t. x + s = 5
        lp = StandardLP(a=[[1.0, 1.0]], b=[5.0], c=[1.0, 0.0])
        sol = solve_lp(lp)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(5.0, abs=1e-10)

    def test_degenerate_face(self):
        lp = StandardLP(a=[[1.0, 1.0]], b=[1.0], c=[1.0, 1.0])
        sol = solve_lp(lp)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(1.0, abs=1e-10)

    def test_infeasible(self):
        # x + y = -1 with x, y >= 0
        lp = StandardLP(a=[[1.0, 1.0], [1.0, 1.0]], b=[1.0, 2.0], c=[1.0, 0.0])
        assert solve_lp(lp).status == "infeasible"

    def test_unbounded(self):
        # max x s.t. x - y = 0
        lp = StandardLP(a=[[1.0, -1.0]], b=[0.0], c=[1.0, 0.0])
        assert solve_lp(lp).status == "unbounded"

    def test_negative_rhs_handled(self):
        lp = StandardLP(a=[[-1.0, -1.0]], b=[-5.0], c=[1.0, 0.0])
        sol = solve_lp(lp)
        assert sol.objective == pytest.approx(5.0, abs=1e-10)

    def test_matches_vertex_enumeration(self):
        rng = np.random.default_rng(2024)
        for trial in range(20):
            m = int(rng.integers(2, 5))
            n = int(rng.integers(m + 1, 10))
            lp = random_feasible_lp(rng, m, n)
            sol = solve_lp(lp)
            oracle = enumerate_vertices(lp)
            assert sol.status == "optimal", trial
            assert sol.objective == pytest.approx(oracle, abs=1e-7), trial

    def test_feasibility_residual(self):
        rng = np.random.default_rng(7)
        lp = random_feasible_lp(rng, 4, 8)
        sol = solve_lp(lp)
        residual = np.abs(lp.a @ sol.x - lp.b).max()
        assert residual <= 1e-7 * (1.0 + np.abs(lp.b).max())
        assert (sol.x >= -1e-9).all()
        assert sol.objective == pytest.approx(float(lp.c @ sol.x), abs=1e-12)

    def test_deterministic(self):
        rng = np.random.default_rng(11)
        lp = random_feasible_lp(rng, 4, 9)
        a = solve_lp(lp)
        b = solve_lp(lp)
        assert (a.x == b.x).all() and a.objective == b.objective

    def test_rhs_scaling(self):
        lp = StandardLP(
            a=[[1.0, 2.0, 1.0, 0.0], [3.0, 1.0, 0.0, 1.0]],
            b=[4.0, 6.0],
            c=[3.0, 2.0, 0.0, 0.0],
        )
        base = solve_lp(lp).objective
        scaled = solve_lp(
            StandardLP(a=lp.a, b=lp.b * 2.5, c=lp.c)
        ).objective
        assert scaled == pytest.approx(2.5 * base, rel=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            StandardLP(a=[[1.0, 2.0]], b=[1.0, 2.0], c=[1.0, 0.0])
