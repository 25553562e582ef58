"""Residual scaling along the two perturbation families.

The copy-game rotation family has one question per player, so its commutator
defect is identically zero; the scaling shows up in r5.  The two-question
admixture family exercises the commutator defect itself.
"""
import argparse

from nlgames.game_model import copy_game, copy2_game
from nlgames.instances import copy_rotation_strategy, copy2_admixture_strategy
from nlgames.trace_witness import loglog_slope, witness_report

FAMILIES = {
    "rotation": (copy_rotation_strategy, copy_game),
    "admixture": (copy2_admixture_strategy, copy2_game),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--thetas", type=float, nargs="+", default=[0.2, 0.1, 0.05, 0.025])
    args = p.parse_args()

    for name, (make, game) in FAMILIES.items():
        g = game()
        reps = [witness_report(make(t), g) for t in args.thetas]
        print(f"{name}:")
        print(f"  {'theta':>8} {'eps':>11} {'r5':>11} {'comm':>11}")
        for t, r in zip(args.thetas, reps):
            print(f"  {t:8.4f} {r.eps_input:11.4e} {r.r5:11.4e} {r.commutator_defect:11.4e}")
        eps = [r.eps_input for r in reps]
        for key in ("r5", "commutator_defect"):
            ys = [getattr(r, key) for r in reps]
            print(f"  slope of {key} vs eps: {loglog_slope(eps, ys):.4f}")


if __name__ == "__main__":
    main()
