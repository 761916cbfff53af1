"""A small weighted separability census over random covariance boxes.

Diagonals are drawn uniformly from [0, k] and off-diagonals from
[-l, l]; the filter chain keeps the matrices that describe physical
states, and survivors are weighted by det(M)^(-5/2).  Counts are exact
integers and the probabilities are weighted ratios, so rerunning with
the same seed reproduces every digit.
"""

from gausscensus.montecarlo import SamplerConfig, run_classical_census

BOXES = [
    (10.0, 5.0),
    (20.0, 10.0),
    (15.0, 15.0),
    (500.0, 250.0),
]


def main() -> None:
    print(f"{'box (k, l)':>14s} {'accepted':>9s} {'separable':>9s} "
          f"{'prob_sep':>10s} {'prob_classical':>15s} {'failures':>9s}")
    for k, l in BOXES:
        cfg = SamplerConfig(k=k, l=l, samples=300_000, seed=2024)
        res = run_classical_census(cfg)
        print(f"({k:6.1f},{l:6.1f}) {res.accepted:9d} {res.separable:9d} "
              f"{res.prob_sep():10.6f} {res.prob_classical():15.3e} "
              f"{res.solver_failures:9d}")
    print("\nNotes: the acceptance rate tracks the off-diagonal bound")
    print("relative to the diagonal one; at l = k (third row) almost")
    print("nothing passes the positivity and uncertainty gates.  The")
    print("count columns say most accepted states are separable, yet the")
    print("weighted probabilities can sit far lower: det^(-5/2) piles")
    print("weight onto near-pure states, and at this sample size a")
    print("handful of heavy entangled draws dominates the ratio.  The")
    print("wide box (last row) is the exception with weight concentrated")
    print("on its separable bulk.")


if __name__ == "__main__":
    main()
