"""Self-contained oracle-equivalence and invariant checks.

These power the ``verify`` CLI command.  Each check returns a
:class:`CheckResult`; the suite passes only if every check passes.  The
equation-of-motion coefficient tables are hard-coded here, independent of the
generator construction they validate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .correlate import (g2_analytic, g2_avg_analytic, g2_avg_numeric,
                        g2_numeric_grid, _conditioned_state)
from .liouvillian import Liouvillian, build_generator, evolve, evolve_grid
from .model import CascadeParams, DetectorSetting, Level
from .observables import (STANDARD_CHSH_ANGLES, TSIRELSON_BOUND, bell_s_chsh,
                          bell_s_shortcut, chsh_coefficient,
                          degree_of_correlation)

GeneratorBuilder = Callable[[CascadeParams], Liouvillian]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def _random_params(rng: np.random.Generator, idx: int) -> CascadeParams:
    gd = rng.uniform(0.0, 2.0)
    return CascadeParams(
        delta_fs=rng.uniform(0.0, 10.0),
        rabi=rng.uniform(0.0, 35.0),
        detuning=rng.uniform(0.0, 100.0),
        gamma12=gd, gamma21=gd,
        gamma_u=0.01 if idx % 2 else 0.0,
    )


# Right-hand sides of the cascade equations of motion, one entry per
# independent matrix element, written with the intermediate-level splitting
# off.  Keys are (row element, {column element: coefficient}).
def _equation_table(p: CascadeParams) -> dict:
    g = (p.gamma1, p.gamma2, p.gamma3, p.gamma4)
    om, dl = p.rabi, p.detuning
    up, x1, x2, u, gr = (Level.TWO_X, Level.X1, Level.X2, Level.U, Level.G)
    return {
        (up, x1): {(up, x1): -0.5 * (g[0] + g[1] + g[2] + p.gamma21)},
        (up, x2): {(up, x2): -0.5 * (g[0] + g[1] + g[3] + p.gamma_u + p.gamma12),
                   (up, u): -1j * om},
        (up, gr): {(up, gr): -0.5 * (g[0] + g[1])},
        (up, u): {(up, u): -0.5 * (g[0] + g[1]) - 1j * dl, (up, x2): -1j * om},
        (x1, gr): {(x1, gr): -0.5 * (g[2] + p.gamma21)},
        (x1, u): {(x1, u): -0.5 * (g[2] + p.gamma21) - 1j * dl,
                  (x1, x2): -1j * om},
        (x1, x2): {(x1, x2): -0.5 * (g[2] + g[3] + p.gamma_u + p.gamma21 + p.gamma12),
                   (x1, u): -1j * om},
        (x2, gr): {(x2, gr): -0.5 * (g[3] + p.gamma_u + p.gamma12), (u, gr): 1j * om},
        (x2, u): {(x2, u): -0.5 * (g[3] + p.gamma_u + p.gamma12) - 1j * dl,
                  (x2, x2): -1j * om, (u, u): 1j * om},
        (u, gr): {(u, gr): 1j * dl, (x2, gr): 1j * om},
        (up, up): {(up, up): -(g[0] + g[1])},
        (x1, x1): {(x1, x1): -(g[2] + p.gamma21), (up, up): g[0], (x2, x2): p.gamma12},
        (x2, x2): {(x2, x2): -(g[3] + p.gamma_u + p.gamma12), (up, up): g[1],
                   (x1, x1): p.gamma21, (u, x2): 1j * om, (x2, u): -1j * om},
        (u, u): {(x2, x2): p.gamma_u, (u, x2): -1j * om, (x2, u): 1j * om},
    }


def _vec_index(element) -> int:
    i, j = element
    return int(i) + 5 * int(j)


def check_generator_restriction(builder: GeneratorBuilder = build_generator,
                                tol: float = 1e-14) -> CheckResult:
    """Row-by-row coefficient agreement with the equations of motion."""
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(5):
        params = CascadeParams(
            gamma1=rng.uniform(0, 2), gamma2=rng.uniform(0, 2),
            gamma3=rng.uniform(0, 2), gamma4=rng.uniform(0, 2),
            gamma_u=rng.uniform(0, 1), gamma12=rng.uniform(0, 2),
            gamma21=rng.uniform(0, 2), delta_fs=0.0,
            rabi=rng.uniform(0, 20), detuning=rng.uniform(-50, 50))
        gen = builder(params)
        for element, expected in _equation_table(params).items():
            row = gen.m[_vec_index(element)]
            target = np.zeros(25, dtype=complex)
            for col, coeff in expected.items():
                target[_vec_index(col)] = coeff
            worst = max(worst, float(np.max(np.abs(row - target))))
    return _result("generator_restriction", worst <= tol,
                   f"max coefficient deviation {worst:.2e} (tol {tol:.0e})")


def check_trace_preservation(builder: GeneratorBuilder = build_generator,
                             n_sets: int = 1000, tol: float = 1e-12) -> CheckResult:
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(n_sets):
        params = CascadeParams(
            gamma1=rng.uniform(0, 2), gamma2=rng.uniform(0, 2),
            gamma3=rng.uniform(0, 2), gamma4=rng.uniform(0, 2),
            gamma_u=rng.uniform(0, 1), gamma12=rng.uniform(0, 2),
            gamma21=rng.uniform(0, 2), delta_fs=rng.uniform(-10, 10),
            rabi=rng.uniform(0, 35), detuning=rng.uniform(-100, 100))
        gen = builder(params)
        herm = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        herm = herm + herm.conj().T
        worst = max(worst, abs(np.trace(gen.apply(herm))))
    return _result("trace_preservation", worst <= tol,
                   f"max  |tr(M x)| {worst:.2e} over {n_sets} sets (tol {tol:.0e})")


def check_hermiticity_preservation(builder: GeneratorBuilder = build_generator,
                                   tol: float = 1e-12) -> CheckResult:
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        params = _random_params(rng, 0)
        gen = builder(params)
        herm = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        herm = herm + herm.conj().T
        out = gen.apply(herm)
        worst = max(worst, float(np.max(np.abs(out - out.conj().T))))
    return _result("hermiticity_preservation", worst <= tol,
                   f"max |M(x) - M(x)^dag| {worst:.2e} (tol {tol:.0e})")


def check_positivity(builder: GeneratorBuilder = build_generator,
                     tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(8)
    rho0 = np.zeros((5, 5), dtype=complex)
    rho0[Level.TWO_X, Level.TWO_X] = 1.0
    taus = np.linspace(0.0, 20.0, 201)[1:]
    worst = 0.0
    for idx in range(5):
        gen = builder(_random_params(rng, idx))
        states = evolve_grid(gen, rho0, taus)
        for state in states:
            worst = min(worst, float(np.linalg.eigvalsh(
                0.5 * (state + state.conj().T))[0]))
    return _result("positivity", worst >= -tol,
                   f"min eigenvalue {worst:.2e} (floor -{tol:.0e})")


def check_semigroup(builder: GeneratorBuilder = build_generator,
                    tol: float = 1e-8) -> CheckResult:
    rng = np.random.default_rng(9)
    worst = 0.0
    for idx in range(4):
        params = _random_params(rng, idx)
        gen = builder(params)
        x0 = _conditioned_state(DetectorSetting(rng.uniform(0, np.pi)))
        t1, t2 = rng.uniform(0.2, 3.0, size=2)
        two_step = evolve(gen, evolve(gen, x0, t1), t2)
        one_step = evolve(gen, x0, t1 + t2)
        worst = max(worst, float(np.max(np.abs(two_step - one_step))))
    return _result("semigroup", worst <= tol,
                   f"max |e^{{Mt2}}e^{{Mt1}} - e^{{M(t1+t2)}}| {worst:.2e} (tol {tol:.0e})")


def check_evolve_routes(builder: GeneratorBuilder = build_generator,
                        tol: float = 1e-8) -> CheckResult:
    rng = np.random.default_rng(10)
    worst = 0.0
    for idx in range(4):
        gen = builder(_random_params(rng, idx))
        x0 = _conditioned_state(DetectorSetting(rng.uniform(0, np.pi)))
        tau = rng.uniform(0.5, 5.0)
        diff = evolve(gen, x0, tau, method="ode") - evolve(gen, x0, tau, method="expm")
        worst = max(worst, float(np.max(np.abs(diff))))
    return _result("evolve_route_agreement", worst <= tol,
                   f"max ODE vs expm deviation {worst:.2e} (tol {tol:.0e})")


def check_w_phase(builder: GeneratorBuilder = build_generator,
                  tol: float = 1e-6) -> CheckResult:
    """The cross coherence must rotate at -delta_fs when the drive is off."""
    delta_fs = 5.0
    params = CascadeParams(delta_fs=delta_fs)
    gen = builder(params)
    taus = np.linspace(0.01, 2.0, 200)
    states = evolve_grid(gen, _conditioned_state(DetectorSetting(np.pi / 4)), taus)
    coherence = states[:, Level.X1, Level.X2]
    phase = np.unwrap(np.angle(coherence))
    slope = np.polyfit(taus, phase, 1)[0]
    deviation = abs(slope + delta_fs)
    return _result("w_phase", deviation <= tol,
                   f"phase slope {slope:+.8f}, expected {-delta_fs:+.1f} "
                   f"(deviation {deviation:.2e}, tol {tol:.0e})")


def check_tau0_normalization(tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(12)
    worst = 0.0
    for idx in range(8):
        params = _random_params(rng, idx)
        th1, th2 = rng.uniform(0, np.pi, size=2)
        ph1, ph2 = rng.uniform(-np.pi, np.pi, size=2)
        det1, det2 = DetectorSetting(th1, ph1), DetectorSetting(th2, ph2)
        expected = (2.0 + 2.0 * np.cos(2 * th1) * np.cos(2 * th2)
                    + 2.0 * np.sin(2 * th1) * np.sin(2 * th2) * np.cos(ph1 + ph2))
        ana = g2_analytic(params, det1, det2, 0.0)
        num = g2_numeric_grid(params, det1, det2, np.array([0.0, 1.0]))[0]
        worst = max(worst, abs(ana - expected), abs(num - expected))
    return _result("tau0_normalization", worst <= tol,
                   f"max deviation from closed form at tau=0: {worst:.2e}")


def check_oracle_equivalence(builder: GeneratorBuilder = build_generator,
                             n_sets: int = 50, tol: float = 1e-6,
                             seed: int = 2024) -> CheckResult:
    """|g2_numeric - g2_analytic| < tol * max(1, g2) across the sweep family."""
    rng = np.random.default_rng(seed)
    taus = np.linspace(0.0, 10.0, 100)
    worst = 0.0
    for idx in range(n_sets):
        params = _random_params(rng, idx)
        det1 = DetectorSetting(rng.uniform(0, np.pi))
        det2 = DetectorSetting(rng.uniform(0, np.pi))
        numeric = g2_numeric_grid(params, det1, det2, taus,
                                  gen=builder(params))
        analytic = g2_analytic(params, det1, det2, taus)
        err = np.max(np.abs(numeric - analytic)
                     / np.maximum(1.0, np.abs(analytic)))
        worst = max(worst, float(err))
    return _result("oracle_equivalence", worst <= tol,
                   f"max relative deviation {worst:.2e} over {n_sets} "
                   f"parameter sets x {taus.size} delays (tol {tol:.0e})")


def check_average_cross_oracle(n_sets: int = 10, tol: float = 1e-6,
                               seed: int = 31) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for idx in range(n_sets):
        params = _random_params(rng, idx)
        det1 = DetectorSetting(rng.uniform(0, np.pi))
        det2 = DetectorSetting(rng.uniform(0, np.pi))
        ana = g2_avg_analytic(params, det1, det2)
        num = g2_avg_numeric(params, det1, det2)
        worst = max(worst, abs(num - ana) / max(1e-30, abs(ana)))
    return _result("average_cross_oracle", worst <= tol,
                   f"max relative deviation {worst:.2e} over {n_sets} sets")


def check_structural_identity(tol: float = 1e-9) -> CheckResult:
    """Averaged coincidences fit 1 + C_H c1 c2 + C_D s1 s2 exactly."""
    params = CascadeParams(delta_fs=3.7, rabi=8.0, detuning=14.0,
                           gamma12=0.35, gamma21=0.35)
    thetas = np.linspace(0.0, np.pi, 10, endpoint=False)
    rows, rhs = [], []
    for th1 in thetas:
        for th2 in thetas:
            rows.append([1.0, np.cos(2 * th1) * np.cos(2 * th2),
                         np.sin(2 * th1) * np.sin(2 * th2)])
            rhs.append(g2_avg_analytic(params, DetectorSetting(th1),
                                       DetectorSetting(th2)))
    coeffs, *_ = np.linalg.lstsq(np.asarray(rows), np.asarray(rhs), rcond=None)
    residual = np.max(np.abs(np.asarray(rows) @ coeffs - rhs)) / coeffs[0]
    c_h = degree_of_correlation(params, 0.0).value
    c_d = degree_of_correlation(params, np.pi / 4.0).value
    coeff_dev = max(abs(coeffs[1] / coeffs[0] - c_h),
                    abs(coeffs[2] / coeffs[0] - c_d))
    ok = residual <= tol and coeff_dev <= tol
    return _result("structural_identity", ok,
                   f"fit residual {residual:.2e}, coefficient vs C_H/C_D "
                   f"deviation {coeff_dev:.2e} (tol {tol:.0e})")


def check_bell_bridge(tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(14)
    worst_bridge = 0.0
    worst_e = 0.0
    for _ in range(5):
        gd = rng.uniform(0, 1.5)
        params = CascadeParams(delta_fs=rng.uniform(0, 8),
                               rabi=rng.uniform(0, 20),
                               detuning=rng.uniform(0, 60),
                               gamma12=gd, gamma21=gd)
        shortcut = bell_s_shortcut(params).s
        chsh = bell_s_chsh(params, *STANDARD_CHSH_ANGLES).s
        worst_bridge = max(worst_bridge, abs(shortcut - chsh))
        c_h = degree_of_correlation(params, 0.0).value
        c_d = degree_of_correlation(params, np.pi / 4.0).value
        alpha, beta = rng.uniform(0, np.pi, size=2)
        e_val = chsh_coefficient(params, alpha, beta)
        e_pred = (c_h * np.cos(2 * alpha) * np.cos(2 * beta)
                  + c_d * np.sin(2 * alpha) * np.sin(2 * beta))
        worst_e = max(worst_e, abs(e_val - e_pred))
    ok = worst_bridge <= tol and worst_e <= tol
    return _result("bell_bridge", ok,
                   f"shortcut vs CHSH deviation {worst_bridge:.2e}, "
                   f"E-structure deviation {worst_e:.2e} (tol {tol:.0e})")


def check_tsirelson(tol: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng(15)
    worst = 0.0
    for idx in range(10):
        params = _random_params(rng, idx)
        worst = max(worst, abs(bell_s_shortcut(params).s))
    return _result("tsirelson_bound", worst <= TSIRELSON_BOUND + tol,
                   f"max |S| {worst:.6f} vs bound {TSIRELSON_BOUND:.6f}")


def run_all_checks(tol: float = 1e-6, quick: bool = False,
                   builder: GeneratorBuilder = build_generator) -> list[CheckResult]:
    """Run the whole suite; ``tol`` scales the oracle-equivalence threshold."""
    n_oracle = 8 if quick else 50
    n_avg = 3 if quick else 10
    n_trace = 100 if quick else 1000
    staged = [
        ("generator_restriction", lambda: check_generator_restriction(builder)),
        ("trace_preservation",
         lambda: check_trace_preservation(builder, n_sets=n_trace)),
        ("hermiticity_preservation",
         lambda: check_hermiticity_preservation(builder)),
        ("positivity", lambda: check_positivity(builder)),
        ("semigroup", lambda: check_semigroup(builder)),
        ("evolve_route_agreement", lambda: check_evolve_routes(builder)),
        ("w_phase", lambda: check_w_phase(builder)),
        ("tau0_normalization", check_tau0_normalization),
        ("oracle_equivalence",
         lambda: check_oracle_equivalence(builder, n_sets=n_oracle, tol=tol)),
        ("average_cross_oracle",
         lambda: check_average_cross_oracle(n_sets=n_avg)),
        ("structural_identity", check_structural_identity),
        ("bell_bridge", check_bell_bridge),
        ("tsirelson_bound", check_tsirelson),
    ]
    results = []
    for name, runner in staged:
        try:
            results.append(runner())
        except Exception as exc:  # a crashed check is a failed check
            results.append(_result(name, False, f"raised {exc!r}"))
    return results


def summarize(results: Sequence[CheckResult]) -> tuple[str, bool]:
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status}  {res.name}: {res.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines), n_fail == 0
