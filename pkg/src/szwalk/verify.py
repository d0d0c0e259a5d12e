"""Self-check suite behind the ``verify`` CLI command.

Each check exercises one contract of the pipeline at configurable sizes
and reports a machine-readable pass/fail with a short detail string. The
``perturb_row_sum`` flag injects a broken stochastic matrix as a negative
control, proving the harness actually detects violations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complete_graph import (
    CompleteGraphParams,
    closed_F,
    closed_pM,
    eigenvalue_one_closed,
    hitting_time_closed,
)
from .markov import absorb, complete_graph, mark_last, reduced
from .operators import build_operators, discriminant
from .simulate import (
    F_of_T,
    dist2_chebyshev,
    evolve_direct,
    evolve_spectral,
    hitting_time,
    initial_state,
    prepare_walk,
    success_probability,
)
from .spectral import svd_discriminant, walk_eigenpairs

DEFAULT_CASES: tuple[tuple[int, int], ...] = (
    (4, 1), (6, 2), (8, 0), (8, 3), (12, 5), (16, 4),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _max_abs(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def _chain(n, m):
    return mark_last(complete_graph(n), m)


def check_row_sums(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        chain = _chain(n, m)
        worst = max(worst,
                    _max_abs(chain.P.sum(axis=1) - 1.0),
                    _max_abs(chain.P - chain.P.T))
    return worst < 1e-12, f"max row-sum/symmetry deviation {worst:.3g}"


def check_perturbed_row_sums(n: int = 8) -> tuple[bool, str]:
    # negative control: a 1.01 row sum must be flagged
    P = (np.ones((n, n)) - np.eye(n)) / (n - 1)
    P[0, 0] += 0.01
    worst = _max_abs(P.sum(axis=1) - 1.0)
    return worst < 1e-12, f"injected perturbation: max row-sum deviation {worst:.3g}"


def check_absorb_reduce(cases) -> tuple[bool, str]:
    for n, m in cases:
        chain = _chain(n, m)
        absorbed = absorb(chain)
        again = absorb(absorbed)
        if not np.array_equal(absorbed.Pprime, again.Pprime):
            return False, f"absorb not idempotent at (n={n}, m={m})"
        if m >= 1:
            keep = chain.unmarked_idx
            sub = absorbed.Pprime[np.ix_(keep, keep)]
            if not np.array_equal(sub, reduced(chain).PM):
                return False, f"absorb/reduce mismatch at (n={n}, m={m})"
    return True, "absorb idempotent; unmarked block matches reduced matrix"


def check_reduced_eigenvalues(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        if m < 1 or n > 50:
            continue
        evals = np.sort(np.linalg.eigvalsh(reduced(_chain(n, m)).PM))
        expect = np.sort(np.concatenate([
            np.full(n - m - 1, -1.0 / (n - 1)), [(n - m - 1) / (n - 1)]]))
        worst = max(worst, _max_abs(evals - expect))
    return worst < 1e-12, f"max eigenvalue deviation {worst:.3g}"


def check_isometry(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        ops = build_operators(absorb(_chain(n, m)))
        A = ops.dense_a()
        B = ops.dense_b()
        eye = np.eye(n)
        worst = max(worst, _max_abs(A.T @ A - eye), _max_abs(B.T @ B - eye))
    return worst < 1e-12, f"max |A^T A - I|, |B^T B - I| entry {worst:.3g}"


def check_dense_unitarity(cases) -> tuple[bool, str]:
    worst = 0.0
    checked = []
    for n, m in cases:
        if n > 16:
            continue
        U = build_operators(absorb(_chain(n, m))).dense_unitary()
        worst = max(worst, _max_abs(U @ U.T - np.eye(n * n)))
        checked.append(n)
    return worst < 1e-10, f"max |U U^T - I| entry {worst:.3g} at n={sorted(set(checked))}"


def check_matrix_free_vs_dense(cases) -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for n, m in cases:
        if n > 16:
            continue
        ops = build_operators(absorb(_chain(n, m)))
        U = ops.dense_unitary()
        for _ in range(3):
            v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
            v /= np.linalg.norm(v)
            worst = max(worst, _max_abs(ops.step_amps(v) - U @ v))
    return worst < 1e-12, f"max matrix-free vs dense step deviation {worst:.3g}"


def check_singular_values(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        spec = svd_discriminant(discriminant(absorb(_chain(n, m))))
        values = np.sort([t.value for t in spec.triples])
        if values[0] < 0 or values[-1] > 1:
            return False, f"singular value outside [0,1] at (n={n}, m={m})"
        if m >= 1:
            expect = np.sort(np.concatenate([
                np.full(n - m - 1, 1.0 / (n - 1)),
                [(n - m - 1) / (n - 1)],
                np.ones(m)]))
            worst = max(worst, _max_abs(values - expect))
            if spec.k != m:
                return False, f"unit multiplicity {spec.k} != m={m} at n={n}"
    return worst < 1e-12, f"max singular-value deviation {worst:.3g}"


def check_intertwining(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        absorbed = absorb(_chain(n, m))
        ops = build_operators(absorbed)
        C = discriminant(absorbed).C
        spec = svd_discriminant(C)
        for t in spec.triples:
            a_mu = ops.apply_a(t.mu)
            b_nu = ops.apply_b(t.nu)
            lhs1 = ops.apply_a(ops.apply_a_t(b_nu)) - t.value * a_mu
            lhs2 = ops.apply_b(ops.apply_b_t(a_mu)) - t.value * b_nu
            worst = max(worst, float(np.linalg.norm(lhs1)), float(np.linalg.norm(lhs2)))
    return worst < 1e-10, f"max intertwining residual {worst:.3g}"


def check_eigenpair_residuals(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        ops = build_operators(absorb(_chain(n, m)))
        spec = walk_eigenpairs(ops, svd_discriminant(discriminant(absorb(_chain(n, m)))))
        for pair in spec.rotational_pairs:
            for vec, sign in ((pair.plus, +1), (pair.minus, -1)):
                if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
                    return False, f"eigenvector not normalized at (n={n}, m={m})"
                res = ops.step_amps(vec) - np.exp(sign * 2j * pair.theta) * vec
                worst = max(worst, float(np.linalg.norm(res)))
        for vec in spec.fixed_vectors:
            worst = max(worst, float(np.linalg.norm(ops.step_amps(vec) - vec)))
    return worst < 1e-9, f"max eigenpair residual {worst:.3g}"


def check_dense_eigenvalue_one_count(cases) -> tuple[bool, str]:
    for n, m in cases:
        if n > 16:
            continue
        ops = build_operators(absorb(_chain(n, m)))
        spec = svd_discriminant(discriminant(absorb(_chain(n, m))))
        eigs = np.linalg.eigvals(ops.dense_unitary())
        nonunit = eigs[np.abs(eigs - 1.0) > 1e-8]
        expected = np.concatenate([np.exp(2j * spec.thetas), np.exp(-2j * spec.thetas)])
        if len(nonunit) != 2 * (n - spec.k):
            return False, (f"(n={n}, m={m}): {len(nonunit)} non-unit eigenvalues, "
                           f"expected {2 * (n - spec.k)}")
        got = np.sort_complex(nonunit)
        want = np.sort_complex(expected)
        if _max_abs(got - want) > 1e-8:
            return False, f"(n={n}, m={m}): non-unit eigenvalues disagree"
    return True, "non-unit dense spectrum matches exp(+-2i theta); rest is 1"


def check_coefficients(cases) -> tuple[bool, str]:
    worst_sum = 0.0
    worst_pm = 0.0
    for n, m in cases:
        bundle = prepare_walk(_chain(n, m))
        coeffs = bundle.coeffs
        total = float(np.sum(np.abs(coeffs.c_plus) ** 2 + np.abs(coeffs.c_minus) ** 2))
        worst_sum = max(worst_sum, abs(total + coeffs.residual_norm_sq - 1.0))
        worst_pm = max(worst_pm, _max_abs(np.abs(coeffs.c_plus) ** 2
                                          - np.abs(coeffs.c_minus) ** 2))
    ok = worst_sum < 1e-10 and worst_pm < 1e-12
    return ok, f"completeness deviation {worst_sum:.3g}; |c+|^2-|c-|^2 {worst_pm:.3g}"


def check_eigenvalue_one_component(cases) -> tuple[bool, str]:
    worst_inv = 0.0
    worst_closed = 0.0
    for n, m in cases:
        bundle = prepare_walk(_chain(n, m))
        psi1 = bundle.psi1
        worst_inv = max(worst_inv, float(np.linalg.norm(
            bundle.ops.step_amps(psi1.amps) - psi1.amps)))
        if m >= 1:
            closed = eigenvalue_one_closed(CompleteGraphParams(n, m))
            worst_closed = max(worst_closed, _max_abs(psi1.amps - closed.amps))
    ok = worst_inv < 1e-9 and worst_closed < 1e-10
    return ok, f"U-invariance {worst_inv:.3g}; closed-form mismatch {worst_closed:.3g}"


def check_dist2_three_ways(cases, steps: int = 10) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        bundle = prepare_walk(_chain(n, m))
        trace = evolve_direct(bundle.ops, bundle.psi0, steps)
        for t in range(steps + 1):
            spectral = evolve_spectral(bundle.spectrum, bundle.coeffs, bundle.psi1, t)
            d_spec = float(np.real(np.vdot(spectral.amps - bundle.psi0.amps,
                                           spectral.amps - bundle.psi0.amps)))
            d_cheb = dist2_chebyshev(bundle.coeffs, t)
            worst = max(worst, abs(trace.dist2[t] - d_cheb),
                        abs(trace.dist2[t] - d_spec), abs(d_spec - d_cheb))
    return worst < 1e-9, f"max pairwise dist2 deviation {worst:.3g}"


def check_oracle_duality(cases, steps: int = 10) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        if m < 1:
            continue
        chain = _chain(n, m)
        params = CompleteGraphParams(n, m)
        bundle = prepare_walk(chain)
        trace = evolve_direct(bundle.ops, bundle.psi0, steps)
        for t in range(steps + 1):
            worst = max(worst,
                        abs(trace.pM[t] - closed_pM(params, t)),
                        abs(trace.F[t] - closed_F(params, t)))
    return worst < 1e-9, f"max simulation vs closed-form deviation {worst:.3g}"


def check_hitting_bracketing(cases) -> tuple[bool, str]:
    for n, m in cases:
        if m < 1:
            continue
        chain = _chain(n, m)
        rep = hitting_time(chain)
        bundle = prepare_walk(chain, materialize=False)
        if not (F_of_T(bundle.coeffs, rep.H) >= rep.threshold):
            return False, f"F(H) below threshold at (n={n}, m={m})"
        if rep.H >= 1 and not (F_of_T(bundle.coeffs, rep.H - 1) < rep.threshold):
            return False, f"F(H-1) not below threshold at (n={n}, m={m})"
        rep_closed = hitting_time_closed(CompleteGraphParams(n, m))
        if rep_closed.H != rep.H or abs(rep_closed.Tstar - rep.Tstar) > 1e-8:
            return False, f"closed/simulated hitting mismatch at (n={n}, m={m})"
    return True, "F(H-1) < 1 - m/n <= F(H); closed and spectral paths agree"


def check_norm_conservation(n: int = 12, m: int = 3, steps: int = 500) -> tuple[bool, str]:
    chain = _chain(n, m)
    bundle = prepare_walk(chain, materialize=False)
    amps = bundle.psi0.amps.copy()
    worst = 0.0
    for _ in range(steps):
        amps = bundle.ops.step_amps(amps)
        worst = max(worst, abs(float(np.linalg.norm(amps)) - 1.0))
    return worst < 1e-9, f"max norm drift over {steps} steps {worst:.3g}"


def check_initial_state_invariance(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        chain = complete_graph(n)  # unmarked operator
        ops = build_operators(absorb(chain))
        psi0 = initial_state(chain)
        worst = max(worst, float(np.linalg.norm(ops.step_amps(psi0.amps) - psi0.amps)))
    return worst < 1e-10, f"max |U psi(0) - psi(0)| for the unmarked walk {worst:.3g}"


def check_success_probability_anchor(cases) -> tuple[bool, str]:
    worst = 0.0
    for n, m in cases:
        chain = _chain(n, m)
        psi0 = initial_state(chain)
        worst = max(worst, abs(success_probability(psi0, chain.marked) - m / n))
    return worst < 1e-12, f"max |pM(0) - m/n| {worst:.3g}"


def run_checks(cases=None, perturb_row_sum: bool = False) -> list[CheckResult]:
    """Run every invariant check; returns one result per check."""
    cases = list(DEFAULT_CASES if cases is None else cases)
    suite = [
        ("markov/row-sums-symmetry", lambda: check_row_sums(cases)),
        ("markov/absorb-reduce", lambda: check_absorb_reduce(cases)),
        ("markov/reduced-eigenvalues", lambda: check_reduced_eigenvalues(cases)),
        ("operators/isometry", lambda: check_isometry(cases)),
        ("operators/dense-unitarity", lambda: check_dense_unitarity(cases)),
        ("operators/matrix-free-vs-dense", lambda: check_matrix_free_vs_dense(cases)),
        ("spectral/singular-values", lambda: check_singular_values(cases)),
        ("spectral/intertwining", lambda: check_intertwining(cases)),
        ("spectral/eigenpair-residuals", lambda: check_eigenpair_residuals(cases)),
        ("spectral/dense-eigenvalue-1-count",
         lambda: check_dense_eigenvalue_one_count(cases)),
        ("spectral/coefficients", lambda: check_coefficients(cases)),
        ("spectral/eigenvalue-one-component",
         lambda: check_eigenvalue_one_component(cases)),
        ("simulate/initial-state-invariance",
         lambda: check_initial_state_invariance(cases)),
        ("simulate/success-probability-anchor",
         lambda: check_success_probability_anchor(cases)),
        ("simulate/dist2-three-ways", lambda: check_dist2_three_ways(cases)),
        ("simulate/oracle-duality", lambda: check_oracle_duality(cases)),
        ("simulate/hitting-bracketing", lambda: check_hitting_bracketing(cases)),
        ("simulate/norm-conservation", check_norm_conservation),
    ]
    if perturb_row_sum:
        suite.append(("markov/row-sums-perturbed", check_perturbed_row_sums))
    results = []
    for name, fn in suite:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"exception: {exc!r}"
        results.append(CheckResult(name, bool(passed), detail))
    return results
