"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute. Every tolerance is pinned here, not configurable.
"""

import time

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from cdtkit import cdt, classify, datagen, density
from conftest import smooth_fixture_suite

UNIFORM_REF = cdt.ReferenceDensity.uniform()


def report(name: str, ok: bool, detail: str) -> None:
    print(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name} failed: {detail}"


class TestAcceptance:
    def test_ac1_analytic_forward_agreement(self):
        start = time.perf_counter()
        signal = density.gaussian_density(0.0, 1.0, 10_000)
        transform = cdt.forward(signal, UNIFORM_REF, 10_000)
        elapsed = time.perf_counter() - start
        x = transform.grid
        keep = (x >= 0.01) & (x <= 0.99)
        err = float(np.max(np.abs(transform.values[keep] - (norm.ppf(x[keep]) - x[keep]))))
        report(
            "AC-1 analytic forward agreement",
            err <= 1e-2 and elapsed < 1.0,
            f"max_err={err:.2e} (tol 1e-2), runtime={elapsed:.3f}s (< 1 s)",
        )

    def test_ac2_round_trip(self):
        fixtures = smooth_fixture_suite(1024)
        assert len(fixtures) == 10
        start = time.perf_counter()
        worst = 0.0
        for d in fixtures:
            back = cdt.inverse(cdt.forward(d, UNIFORM_REF, 1024), d.centers)
            worst = max(worst, density.l1_distance(back, d))
        elapsed = time.perf_counter() - start
        report(
            "AC-2 forward/inverse round trip",
            worst <= 1e-3 and elapsed < 1.0,
            f"worst_l1={worst:.2e} (tol 1e-3) over 10 fixtures, runtime={elapsed:.3f}s (< 1 s)",
        )

    def test_ac3_property_oracles(self):
        base = smooth_fixture_suite(2048)[2]
        m = 2048
        t = cdt.forward(base, UNIFORM_REF, m)
        interior = slice(m // 100, m - m // 100)
        worst = 0.0

        for mu in (-0.2, 0.1, 2.0):
            lhs = cdt.forward(density.translate(base, mu), UNIFORM_REF, m)
            rhs = cdt.translate_oracle(t, mu)
            worst = max(worst, float(np.max(np.abs(lhs.values[interior] - rhs.values[interior]))))
        for a in (0.6, 1.0, 1.67, 2.0):
            lhs = cdt.forward(density.dilate(base, a), UNIFORM_REF, m)
            rhs = cdt.scale_oracle(t, a)
            worst = max(worst, float(np.max(np.abs(lhs.values[interior] - rhs.values[interior]))))

        # composition with g(z) = z^3 + z via exact CDF-composition binning
        narrow = density.regrid(base, 0.2 + 0.35 / 2048, 0.7 / 2048, 2048)
        t_narrow = cdt.forward(narrow, UNIFORM_REF, m)

        def g(z):
            return z**3 + z

        def g_inv_scalar(target):
            lo, hi = -10.0, 10.0
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if g(mid) < target:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)

        z_lo = g_inv_scalar(narrow.domain[0])
        z_hi = g_inv_scalar(narrow.domain[1])
        n_out = 4096
        spacing = (z_hi - z_lo) / n_out
        edges = z_lo + spacing * np.arange(n_out + 1)
        masses = np.clip(np.diff(density.cdf_value(density.cdf(narrow), g(edges))), 0, None)
        pushed = density.DiscreteDensity(
            masses / (masses.sum() * spacing), z_lo + 0.5 * spacing, spacing
        )
        z_dense = np.linspace(z_lo - 0.05, z_hi + 0.05, 20_000)
        lhs = cdt.forward(pushed, UNIFORM_REF, m)
        rhs = cdt.compose_oracle(t_narrow, cdt.MonotoneMap(g(z_dense), z_dense))
        worst = max(worst, float(np.max(np.abs(lhs.values[interior] - rhs.values[interior]))))

        report(
            "AC-3 closed-form property oracles",
            worst <= 2e-3,
            f"worst sup-norm={worst:.2e} (tol 2e-3) across translations, scalings, composition",
        )

    def test_ac4_wasserstein_isometry(self):
        n, m = 8192, 4096
        t_std = cdt.forward(density.gaussian_density(0.0, 1.0, n), UNIFORM_REF, m)
        t_shift = cdt.forward(density.gaussian_density(2.0, 1.0, n), UNIFORM_REF, m)
        t_wide = cdt.forward(density.gaussian_density(1.0, 2.0, n), UNIFORM_REF, m)
        d_shift = cdt.transport_distance(t_std, t_shift)
        d_wide = cdt.transport_distance(t_std, t_wide)

        u = (np.arange(1_000_000) + 0.5) / 1_000_000
        q_std = norm.ppf(u)
        oracle_shift = float(np.sqrt(np.mean((q_std - (q_std + 2.0)) ** 2)))
        oracle_wide = float(np.sqrt(np.mean((q_std - (1.0 + 2.0 * q_std)) ** 2)))

        ok = (
            abs(d_shift - 2.0) <= 1e-2
            and abs(d_wide - np.sqrt(2.0)) <= 1e-2
            and abs(d_shift - oracle_shift) <= 1e-2
            and abs(d_wide - oracle_wide) <= 1e-2
        )
        report(
            "AC-4 transport distance matches closed forms",
            ok,
            f"shift pair={d_shift:.4f} (exp 2.0, oracle {oracle_shift:.4f}), "
            f"location-scale pair={d_wide:.4f} (exp {np.sqrt(2):.4f}, oracle {oracle_wide:.4f})",
        )

    def test_ac5_texture_table_reproduction(self):
        start = time.perf_counter()
        seed = 7
        raw, cdt_data = datagen.texture_simulation(seed, grid_size=1024, cdt_size=256)
        errors = {}
        for space, data, methods in (
            ("raw", raw, ("lda", "svm")),
            ("cdt", cdt_data, ("lda", "plda", "svm")),
        ):
            for method in methods:
                rep = classify.cross_validate(data, method, folds=5, seed=seed)
                errors[(space, method)] = rep.mean_test_error
        elapsed = time.perf_counter() - start
        ok = (
            errors[("cdt", "lda")] <= 0.02
            and errors[("cdt", "plda")] <= 0.02
            and errors[("cdt", "svm")] <= 0.03
            and errors[("raw", "lda")] >= 0.30
            and errors[("raw", "svm")] >= 0.30
            and elapsed < 60.0
        )
        detail = ", ".join(f"{s}/{m}={e:.4f}" for (s, m), e in sorted(errors.items()))
        report(
            "AC-5 texture study reproduction",
            ok,
            f"{detail}, runtime={elapsed:.1f}s (< 60 s)",
        )

    def test_ac6_affine_family_separability(self):
        family_probe = datagen.ConfoundFamily(
            "affine", {"mu": (0.0, 0.8), "a": (0.6, 1.6)}, rng_seed=0
        )
        closure = datagen.verify_family_closure(family_probe, trials=32)

        n = 16
        domain = 2.4
        spacing = domain / n
        y = spacing * (np.arange(n) + 0.5)
        bump = lambda c, w: np.exp(-0.5 * ((y - c) / w) ** 2)
        mother_p = density.from_samples(0.2 + bump(0.95, 0.22), spacing / 2, spacing, 0.0)
        mother_q = density.from_samples(
            0.2 + np.where(y < 0.95, bump(0.95, 0.18), bump(0.95, 0.27)),
            spacing / 2, spacing, 0.0,
        )

        outcomes = []
        for seed in (1, 2, 3, 6, 7):
            family = datagen.ConfoundFamily(
                "affine", {"mu": (0.0, 0.8), "a": (0.6, 1.6)}, rng_seed=seed
            )
            spec = datagen.GenerativeSpec(mother_p, mother_q, family, samples_per_class=20)
            ps = datagen.sample_class(spec, 0)
            qs = datagen.sample_class(spec, 1)
            raw_res = classify.check_linear_separability(
                np.vstack([d.values for d in ps]), np.vstack([d.values for d in qs])
            )
            cdt_res = classify.check_linear_separability(
                np.vstack([cdt.forward(d, UNIFORM_REF, n).values for d in ps]),
                np.vstack([cdt.forward(d, UNIFORM_REF, n).values for d in qs]),
            )
            outcomes.append((seed, raw_res.separable, cdt_res.separable))
        ok = closure.zero_violations and all(
            (not raw_sep) and cdt_sep for _, raw_sep, cdt_sep in outcomes
        )
        detail = "; ".join(
            f"seed {s}: raw {'sep' if r else 'insep'}, cdt {'sep' if c else 'insep'}"
            for s, r, c in outcomes
        )
        report(
            "AC-6 transform makes affine-confounded classes separable",
            ok,
            f"closure violations={closure.failed_checks or 'none'}; {detail}",
        )

    def test_ac7_separability_checker_vs_brute_force(self):
        rng = np.random.default_rng(2024)
        agree = 0
        worst_residual = 0.0
        n_instances = 50
        for trial in range(n_instances):
            dim = int(rng.integers(1, 6))
            n_a = int(rng.integers(1, 11))
            n_b = int(rng.integers(1, 11))
            a = rng.integers(-3, 4, size=(n_a, dim)).astype(float)
            b = rng.integers(-3, 4, size=(n_b, dim)).astype(float)
            result = classify.check_linear_separability(a, b)
            oracle_dist = _hull_distance_oracle(a, b)
            oracle_separable = oracle_dist > 1e-6
            if result.separable == oracle_separable:
                agree += 1
            if not result.separable:
                worst_residual = max(worst_residual, result.residual)
        ok = agree == n_instances and worst_residual <= 1e-8
        report(
            "AC-7 separability checker matches brute-force oracle",
            ok,
            f"{agree}/{n_instances} agreements, worst certificate residual={worst_residual:.2e} (tol 1e-8)",
        )

    def test_ac8_linear_time_forward(self):
        m = 1024
        rng = np.random.default_rng(0)

        def timed_forward(n):
            values = 0.5 + rng.random(n)
            spacing = 1.0 / n
            d = density.from_samples(values, spacing / 2, spacing, epsilon_floor=0.0)
            cdt.forward(d, UNIFORM_REF, m)  # warmup
            best = np.inf
            for _ in range(3):
                start = time.perf_counter()
                cdt.forward(d, UNIFORM_REF, m)
                best = min(best, time.perf_counter() - start)
            return best

        t_small = timed_forward(100_000)
        t_large = timed_forward(1_000_000)
        ratio = t_large / t_small
        report(
            "AC-8 near-linear forward scaling",
            ratio <= 15.0,
            f"time(1e6)={t_large * 1e3:.1f}ms, time(1e5)={t_small * 1e3:.1f}ms, ratio={ratio:.1f} (<= 15)",
        )

    def test_pipeline_smoke_concatenated_block_transforms(self):
        # two-block feature layout: per-sample x and y histograms transformed
        # independently and concatenated, classified leave-one-out
        rng = np.random.default_rng(5)
        ref = UNIFORM_REF
        rows, labels = [], []
        for c in range(2):
            for _ in range(10):
                x_hist = density.from_samples(
                    0.2 + np.exp(-0.5 * ((np.linspace(0, 1, 64) - (0.3 + 0.3 * c + 0.05 * rng.random())) / 0.08) ** 2),
                    1 / 128, 1 / 64, epsilon_floor=1e-8,
                )
                y_hist = density.from_samples(
                    0.2 + np.exp(-0.5 * ((np.linspace(0, 1, 64) - (0.6 - 0.2 * c + 0.05 * rng.random())) / 0.1) ** 2),
                    1 / 128, 1 / 64, epsilon_floor=1e-8,
                )
                row = np.concatenate([
                    cdt.forward(x_hist, ref, 32).values,
                    cdt.forward(y_hist, ref, 32).values,
                ])
                rows.append(row)
                labels.append(c)
        data = classify.LabeledDataset(np.vstack(rows), np.array(labels))
        rep = classify.cross_validate(data, "lda", folds=data.n_samples, seed=1)
        report(
            "Smoke: concatenated per-block transforms",
            rep.mean_test_error == 0.0,
            f"leave-one-out error={rep.mean_test_error:.3f} on 20 two-block samples",
        )


def _hull_distance_oracle(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between convex hulls by direct quadratic minimization.

    Independent of the checker's LP route: minimizes the squared distance of
    convex combinations over the product of simplices with SLSQP restarts.
    """
    n_a, n_b = a.shape[0], b.shape[0]

    def objective(z):
        alpha, beta = z[:n_a], z[n_a:]
        diff = a.T @ alpha - b.T @ beta
        return float(diff @ diff)

    def jac(z):
        alpha, beta = z[:n_a], z[n_a:]
        diff = a.T @ alpha - b.T @ beta
        return np.concatenate([2.0 * (a @ diff), -2.0 * (b @ diff)])

    constraints = (
        {"type": "eq", "fun": lambda z: z[:n_a].sum() - 1.0},
        {"type": "eq", "fun": lambda z: z[n_a:].sum() - 1.0},
    )
    bounds = [(0.0, 1.0)] * (n_a + n_b)
    best = np.inf
    starts = [np.concatenate([np.full(n_a, 1.0 / n_a), np.full(n_b, 1.0 / n_b)])]
    rng = np.random.default_rng(7)
    for _ in range(2):
        za = rng.dirichlet(np.ones(n_a))
        zb = rng.dirichlet(np.ones(n_b))
        starts.append(np.concatenate([za, zb]))
    for z0 in starts:
        res = minimize(
            objective, z0, jac=jac, method="SLSQP", bounds=bounds,
            constraints=constraints, options={"maxiter": 400, "ftol": 1e-14},
        )
        if res.fun < best:
            best = float(res.fun)
    return float(np.sqrt(max(best, 0.0)))
