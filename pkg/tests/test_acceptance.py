"""End-to-end acceptance checks.

One test per criterion; each prints a single pass/fail line (run with -s to
see them all).  The assertions state the criteria literally, so a failing
line means the implemented behavior genuinely differs from the target.
"""

from __future__ import annotations

import math

import numpy as np

from rumorsim import (
    ExperimentConfig,
    FailureModel,
    ListStrategy,
    Phase,
    PhaseKind,
    Protocol,
    TrialRandomness,
    baseline_bound,
    azuma_bound,
    busy_growth_sample,
    chernoff_lower,
    chernoff_upper,
    complete_graph,
    coupled_run,
    default_max_rounds,
    exact_fully_random,
    exact_quasirandom,
    lower_bound,
    realize_lists,
    run,
    run_experiment,
    star_fully_random_expectation,
    star_graph,
    tv_distance,
    upper_bound,
)

STRATEGIES = (ListStrategy.CANONICAL, ListStrategy.REVERSED, ListStrategy.RANDOM)


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\ncriterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")


def _broadcast_times(lists, protocol, p, trials, seed, start=0, max_rounds=None):
    failure = FailureModel(p)
    if max_rounds is None:
        max_rounds = default_max_rounds(lists.topology.n, p)
    rounds = np.empty(trials, dtype=np.int64)
    completed = np.empty(trials, dtype=bool)
    for t in range(trials):
        res = run(lists, protocol, failure, start, TrialRandomness(seed, t), max_rounds)
        rounds[t] = res.rounds
        completed[t] = res.completed
    return rounds, completed


def test_criterion_01_lossless_baseline_law():
    lists = realize_lists(complete_graph(4096), ListStrategy.CANONICAL, 0)
    lo, hi = 0.95 * baseline_bound(4096), 1.05 * baseline_bound(4096)
    means = {}
    for proto in (Protocol.FULLY_RANDOM, Protocol.QUASIRANDOM):
        rounds, completed = _broadcast_times(lists, proto, 1.0, 500, seed=101)
        assert completed.all()
        means[proto] = float(rounds.mean())
    ok = all(lo <= m <= hi for m in means.values())
    _report(
        1, ok,
        f"window [{lo:.3f}, {hi:.3f}]; "
        f"random mean {means[Protocol.FULLY_RANDOM]:.3f}, "
        f"quasi mean {means[Protocol.QUASIRANDOM]:.3f}",
    )
    assert lo <= means[Protocol.QUASIRANDOM] <= hi
    assert lo <= means[Protocol.FULLY_RANDOM] <= hi


def test_criterion_02_slowdown_ratio_at_half():
    lists = realize_lists(complete_graph(4096), ListStrategy.CANONICAL, 0)
    lossless, c1 = _broadcast_times(lists, Protocol.QUASIRANDOM, 1.0, 1000, seed=202)
    lossy, c2 = _broadcast_times(lists, Protocol.QUASIRANDOM, 0.5, 1000, seed=203)
    assert c1.all() and c2.all()
    ratio = float(np.median(lossy) / np.median(lossless))
    ok = 1.70 <= ratio <= 1.95
    _report(2, ok, f"median ratio p=0.5 vs p=1: {ratio:.4f} (target [1.70, 1.95])")
    assert 1.70 <= ratio <= 1.95


def test_criterion_03_upper_bound_conformance():
    lists = realize_lists(complete_graph(4096), ListStrategy.CANONICAL, 0)
    worst = 0.0
    details = []
    for p in (0.3, 0.5, 1.0):
        rounds, completed = _broadcast_times(lists, Protocol.QUASIRANDOM, p, 1000, seed=303)
        hi = upper_bound(4096, p, 0.2)
        frac = float(np.mean(~completed | (rounds > hi)))
        worst = max(worst, frac)
        details.append(f"p={p}: {frac:.3f}")
    ok = worst <= 0.05
    _report(3, ok, "frac above (1+eps) bound " + ", ".join(details) + " (limit 0.05)")
    assert worst <= 0.05


def test_criterion_04_lower_bound_conformance():
    lists = realize_lists(complete_graph(4096), ListStrategy.CANONICAL, 0)
    worst = 0.0
    details = []
    for p in (0.3, 0.5, 1.0):
        rounds, completed = _broadcast_times(lists, Protocol.FULLY_RANDOM, p, 1000, seed=404)
        lo = lower_bound(4096, p, 0.2)
        frac = float(np.mean(completed & (rounds < lo)))
        worst = max(worst, frac)
        details.append(f"p={p}: {frac:.3f}")
    ok = worst <= 0.05
    _report(4, ok, "frac below (1-eps) bound " + ", ".join(details) + " (limit 0.05)")
    assert worst <= 0.05


def test_criterion_05_fully_random_matches_oracle():
    lists = realize_lists(complete_graph(5), ListStrategy.CANONICAL, 0)
    rounds, completed = _broadcast_times(
        lists, Protocol.FULLY_RANDOM, 0.7, 100_000, seed=505, max_rounds=100
    )
    dist = exact_fully_random(5, 0.7, 60)
    tv = tv_distance(dist, rounds, completed)
    ok = tv <= 0.02
    _report(5, ok, f"TV(empirical, exact) = {tv:.5f} over 1e5 trials (limit 0.02)")
    assert tv <= 0.02


def test_criterion_06_quasirandom_matches_oracle():
    lists = realize_lists(complete_graph(4), ListStrategy.CANONICAL, 0)
    rounds, completed = _broadcast_times(
        lists, Protocol.QUASIRANDOM, 0.6, 100_000, seed=606, max_rounds=80
    )
    dist = exact_quasirandom(4, lists, 0.6, horizon=8, start_vertex=0)
    tv = tv_distance(dist, rounds, completed)
    emp_tail = float(np.mean(~completed | (rounds > 8)))
    tail_gap = abs(emp_tail - dist.tail)
    ok = tv <= 0.02 and tail_gap <= 0.01
    _report(
        6, ok,
        f"TV = {tv:.5f} (limit 0.02), tail {emp_tail:.5f} vs exact {dist.tail:.5f} "
        f"(gap limit 0.01)",
    )
    assert tv <= 0.02
    assert tail_gap <= 0.01


def test_criterion_07_lossless_coverage_bound():
    violations = 0
    runs = 0
    for n in range(2, 65):
        topo = complete_graph(n)
        for strategy in STRATEGIES:
            for seed in range(100):
                list_seed = seed if strategy is ListStrategy.RANDOM else 0
                lists = realize_lists(topo, strategy, list_seed)
                res = run(
                    lists, Protocol.QUASIRANDOM, FailureModel(1.0), 0,
                    TrialRandomness(seed, 0), max_rounds=n + 8,
                )
                runs += 1
                if not res.completed or res.rounds > n - 1:
                    violations += 1
    ok = violations == 0
    _report(7, ok, f"{violations} of {runs} lossless runs exceeded n-1 rounds")
    assert violations == 0


def test_criterion_08_star_contrast():
    lists = realize_lists(star_graph(256), ListStrategy.CANONICAL, 0)
    quasi_rounds, quasi_completed = _broadcast_times(
        lists, Protocol.QUASIRANDOM, 1.0, 500, seed=808, start=1, max_rounds=300
    )
    assert quasi_completed.all()
    quasi_max = int(quasi_rounds.max())

    rand_rounds, rand_completed = _broadcast_times(
        lists, Protocol.FULLY_RANDOM, 1.0, 500, seed=809, start=1, max_rounds=6000
    )
    assert rand_completed.all()
    expected = star_fully_random_expectation(256)
    rand_mean = float(rand_rounds.mean())
    rand_ok = abs(rand_mean - expected) <= 0.10 * expected

    ok = quasi_max <= 255 and rand_ok
    _report(
        8, ok,
        f"quasi max T = {quasi_max} (target <= 255); "
        f"random mean {rand_mean:.1f} vs coupon-collector {expected:.1f} "
        f"({'within' if rand_ok else 'outside'} 10%)",
    )
    assert rand_ok
    assert quasi_max <= 255


def test_criterion_09_delayed_coupling_domination():
    schedules = (
        [Phase(PhaseKind.LAZY, 2), Phase(PhaseKind.BUSY, 4),
         Phase(PhaseKind.LAZY, 3), Phase(PhaseKind.BUSY, 400)],
        [Phase(PhaseKind.BUSY, 3), Phase(PhaseKind.LAZY, 5), Phase(PhaseKind.BUSY, 2),
         Phase(PhaseKind.LAZY, 1), Phase(PhaseKind.BUSY, 400)],
    )
    dominated = 0
    total = 0
    for n in (64, 1024):
        lists = realize_lists(complete_graph(n), ListStrategy.CANONICAL, 0)
        for p in (0.5, 1.0):
            failure = FailureModel(p)
            for trial in range(250):
                out = coupled_run(
                    lists, failure, 0, schedules[trial % 2],
                    TrialRandomness(900 + n, trial),
                )
                total += 1
                dominated += out.dominated
    ok = dominated == total
    _report(9, ok, f"{dominated} of {total} coupled runs dominated at every round")
    assert dominated == total


def test_criterion_10_busy_phase_growth():
    lists = realize_lists(complete_graph(100_000), ListStrategy.CANONICAL, 0)
    k = 6
    hits = 0
    total = 0
    for p in (0.5, 1.0):
        failure = FailureModel(p)
        collected = 0
        seed = 0
        while collected < 100:
            sample = busy_growth_sample(
                lists, failure, TrialRandomness(1000 + int(p * 10), seed),
                k=k, min_newly=200, max_informed=1000,
            )
            seed += 1
            if sample is None:
                continue
            collected += 1
            total += 1
            hits += sample.satisfies(p, k)
    freq = hits / total
    ok = freq >= 0.95
    _report(10, ok, f"growth >= p(1+p)^(k-2)|N_t| in {hits}/{total} windows ({freq:.3f})")
    assert freq >= 0.95


def test_criterion_11_concentration_bounds_hold():
    gen = np.random.default_rng(1111)
    samples = 100_000
    chernoff_checked = chernoff_bad = 0
    for m in (50, 500, 5000):
        for q in (0.2, 0.5, 0.8):
            x = gen.binomial(m, q, size=samples)
            mean = m * q
            for delta in (0.2, 0.5, 1.0):
                pairs = (
                    (chernoff_lower(mean, delta), float((x <= (1 - delta) * mean).mean())),
                    (chernoff_upper(mean, delta), float((x >= (1 + delta) * mean).mean())),
                )
                for bound, freq in pairs:
                    chernoff_checked += 1
                    se = math.sqrt(bound * (1 - bound) / samples)
                    if freq > bound + 3 * se + 1e-12:
                        chernoff_bad += 1

    # martingale side: distinct targets of m uniform draws, unit increments
    azuma_checked = azuma_bad = 0
    n_targets = 100
    for m in (20, 50):
        draws = np.sort(gen.integers(0, n_targets, size=(20_000, m)), axis=1)
        distinct = 1 + (np.diff(draws, axis=1) != 0).sum(axis=1)
        expected = n_targets * (1 - (1 - 1 / n_targets) ** m)
        for t in (2.0, 4.0, 6.0):
            bound = min(azuma_bound(t, [1.0] * m), 1.0)
            freq = float((np.abs(distinct - expected) >= t).mean())
            azuma_checked += 1
            se = math.sqrt(bound * (1 - bound) / len(distinct))
            if freq > bound + 3 * se + 1e-12:
                azuma_bad += 1

    ok = chernoff_bad == 0 and azuma_bad == 0
    _report(
        11, ok,
        f"chernoff violations {chernoff_bad}/{chernoff_checked}, "
        f"azuma violations {azuma_bad}/{azuma_checked}",
    )
    assert chernoff_bad == 0
    assert azuma_bad == 0


def test_criterion_12_byte_identical_reruns(tmp_path):
    sched = tmp_path / "sched.txt"
    sched.write_text("lazy,2\nbusy,80\n")
    configs = [
        dict(protocol="feedback", topology="complete", n=48, p=0.6, trials=40, seed=12),
        dict(protocol="delayed", topology="star", n=17, p=0.8, trials=25, seed=13,
             schedule_path=str(sched), max_rounds=400),
    ]
    mismatches = 0
    for i, kw in enumerate(configs):
        blobs = []
        for rerun in range(2):
            out = tmp_path / f"r{i}_{rerun}.csv"
            summ = tmp_path / f"s{i}_{rerun}.json"
            run_experiment(ExperimentConfig(**kw, out_path=str(out), summary_path=str(summ)))
            blobs.append(out.read_bytes() + summ.read_bytes())
        mismatches += blobs[0] != blobs[1]
    ok = mismatches == 0
    _report(12, ok, f"{mismatches} of {len(configs)} configs differed across re-runs")
    assert mismatches == 0
