"""How often runs escape the (1 +/- eps) window around the broadcast law.

At desk scale the distribution sits a few percent above the asymptotic law,
so the lower bound is comfortable while the upper tail needs a generous eps
at small p.
"""

from __future__ import annotations

from rumorsim import ExperimentConfig, bound_report, check_bounds

n = 4096
trials = 400

rep = bound_report(n, 0.5, 0.2)
print(f"n={n}, p=0.5, eps=0.2")
print(f"law {rep.baseline:.2f} lossless, {rep.upper / 1.2:.2f} lossy; "
      f"window [{rep.lower:.2f}, {rep.upper:.2f}]")
print(f"theoretical success probability {rep.success_prob_lower:.4f} "
      f"(asymptotic guarantee, nearly vacuous at this n)\n")

print(f"{'protocol':>9} {'p':>4} {'eps':>4} {'below':>7} {'above':>7} {'verdict':>8}")
for protocol in ("quasi", "random"):
    for p in (1.0, 0.5, 0.3):
        for eps in (0.2, 0.35):
            cfg = ExperimentConfig(protocol=protocol, n=n, p=p, trials=trials, seed=21)
            report = check_bounds(cfg, eps=eps)
            verdict = "ok" if report.passed else "exceeds"
            print(
                f"{protocol:>9} {p:>4.1f} {eps:>4.2f} "
                f"{report.frac_below_lower:>7.3f} {report.frac_above_upper:>7.3f} "
                f"{verdict:>8}"
            )
