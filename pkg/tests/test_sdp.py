"""Embedded SDP solver: known optima, certificates, self-verification."""

import numpy as np
import pytest

from lhvcert.sdp import (GAP_TOL, RES_TOL, SdpError, SdpProblem, dump_problem,
                         embed_hermitian, extract_hermitian, solve,
                         verify_solution)


def test_embedding_round_trip_and_spectrum():
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        h = m + m.conj().T
        s = embed_hermitian(h)
        assert np.allclose(s, s.T)
        assert np.allclose(extract_hermitian(s), h)
        # embedded spectrum doubles each eigenvalue
        we = np.linalg.eigvalsh(s)
        wh = np.linalg.eigvalsh(h)
        assert np.allclose(we, np.sort(np.repeat(wh, 2)))


def test_max_trace_under_unit_trace_constraint():
    # max <I, X> s.t. tr X = 1  -> 1, X any density matrix
    problem = SdpProblem(block_dims=[3],
                         objective=[np.eye(3, dtype=complex)],
                         constraints=[({0: np.eye(3, dtype=complex)}, 1.0)],
                         sense="maximize")
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-7)
    assert verify_solution(problem, sol)["certified"]


def test_min_diag_weighting_reaches_smallest_entry():
    # min <diag(1,2,3), X> s.t. tr X = 1, X >= 0  -> 1
    c = np.diag([1.0, 2.0, 3.0]).astype(complex)
    problem = SdpProblem(block_dims=[3], objective=[c],
                         constraints=[({0: np.eye(3, dtype=complex)}, 1.0)],
                         sense="minimize")
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-6)


def test_largest_eigenvalue_as_sdp():
    # max <H, X> s.t. tr X = 1 equals lambda_max(H)
    rng = np.random.default_rng(4)
    for _ in range(10):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = m + m.conj().T
        problem = SdpProblem(block_dims=[4], objective=[h],
                             constraints=[({0: np.eye(4, dtype=complex)}, 1.0)],
                             sense="maximize")
        sol = solve(problem)
        assert sol.status == "optimal"
        lam = np.linalg.eigvalsh(h)[-1]
        assert sol.objective_value == pytest.approx(lam, abs=1e-6 * (1 + abs(lam)))


def test_multi_block_with_scalar_coupling():
    # max t s.t. X = I/2 - t*I/2 >= 0 on a 2x2 block: t* = 1
    eye = np.eye(2, dtype=complex)
    constraints = []
    basis = [np.array([[1, 0], [0, 0]], dtype=complex),
             np.array([[0, 0], [0, 1]], dtype=complex),
             np.array([[0, 0.5], [0.5, 0]], dtype=complex),
             np.array([[0, -0.5j], [0.5j, 0]], dtype=complex)]
    for b in basis:
        tc = float(np.trace(b @ (eye / 2)).real)
        coeffs = {0: b}
        if tc != 0.0:
            coeffs[1] = np.array([[tc]])
        constraints.append((coeffs, tc))
    problem = SdpProblem(block_dims=[2, 1],
                         objective=[None, np.array([[1.0]])],
                         constraints=constraints, sense="maximize")
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-6)


def test_duality_gap_and_residual_meet_contract():
    rng = np.random.default_rng(6)
    m = rng.normal(size=(5, 5))
    h = (m + m.T).astype(complex)
    problem = SdpProblem(block_dims=[5], objective=[h],
                         constraints=[({0: np.eye(5, dtype=complex)}, 1.0),
                                      ({0: h @ h}, 2.0)],
                         sense="maximize")
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.duality_gap <= GAP_TOL * (1 + abs(sol.objective_value))
    assert sol.constraint_residual <= 10 * RES_TOL * (1 + 2.0)


def test_feasibility_positive_case():
    problem = SdpProblem(block_dims=[2], objective=[None],
                         constraints=[({0: np.eye(2, dtype=complex)}, 1.0)],
                         sense="feasibility")
    sol = solve(problem)
    assert sol.status == "optimal"
    assert np.linalg.eigvalsh(sol.primal_blocks[0])[0] >= -1e-9
    assert verify_solution(problem, sol)["certified"]


def test_feasibility_infeasible_gives_farkas_certificate():
    # tr X = -1 has no PSD solution
    problem = SdpProblem(block_dims=[2], objective=[None],
                         constraints=[({0: np.eye(2, dtype=complex)}, -1.0)],
                         sense="feasibility")
    sol = solve(problem)
    assert sol.status == "infeasible"
    report = verify_solution(problem, sol)
    assert report["certified"]
    assert report["farkas_by"] < 0


def test_input_validation():
    with pytest.raises(SdpError):
        SdpProblem(block_dims=[2], objective=[np.eye(2, dtype=complex)],
                   constraints=[], sense="sideways")
    with pytest.raises(SdpError):
        SdpProblem(block_dims=[2], objective=[np.eye(3, dtype=complex)],
                   constraints=[({0: np.eye(2, dtype=complex)}, 1.0)],
                   sense="maximize")
    # redundant (duplicated) constraints are tolerated via regularization
    eye = np.eye(2, dtype=complex)
    sol = solve(SdpProblem(block_dims=[2], objective=[eye],
                           constraints=[({0: eye}, 1.0), ({0: eye}, 1.0)],
                           sense="maximize"))
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-6)


def test_dump_problem_is_parseable_text():
    problem = SdpProblem(block_dims=[2, 1],
                         objective=[np.eye(2, dtype=complex), None],
                         constraints=[({0: np.eye(2, dtype=complex),
                                        1: np.array([[1.0]])}, 1.0)],
                         sense="maximize")
    text = dump_problem(problem)
    assert text.splitlines()[0] == "blocks 2 1"
    assert any(line.startswith("con 0 rhs 1") for line in text.splitlines())


def test_random_problems_obey_weak_duality_and_recheck():
    rng = np.random.default_rng(8)
    for _ in range(10):
        d = int(rng.integers(2, 5))
        m1 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        c = (m1 + m1.conj().T)
        a1 = np.eye(d, dtype=complex)
        m2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a2 = m2 + m2.conj().T
        problem = SdpProblem(
            block_dims=[d], objective=[c],
            constraints=[({0: a1}, 1.0),
                         ({0: a2}, float(np.trace(a2).real) / d)],
            sense="maximize")
        sol = solve(problem)
        assert sol.status == "optimal"
        assert verify_solution(problem, sol)["certified"]
        # dual upper bound dominates the primal objective
        b = np.array([1.0, float(np.trace(a2).real) / d])
        assert b @ sol.dual_vector >= sol.objective_value - 1e-6
