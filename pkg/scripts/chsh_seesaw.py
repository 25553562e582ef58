"""Seesaw lower bounds on CHSH against the classical and angle-sweep values."""
import argparse

import numpy as np

from nlgames.game_model import chsh_game
from nlgames.membership import classical_search, ns_feasible, seesaw


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--seeds", type=int, default=5)
    args = p.parse_args()

    g = chsh_game()
    print(f"ns-feasible perfect correlation: {ns_feasible(g).feasible}")
    cs = classical_search(g)
    print(f"classical perfect strategy: {cs.strategy} ({cs.visited}/{cs.total} visited)")
    for seed in range(args.seeds):
        r = seesaw(g, args.dim, args.iters, seed)
        print(f"seed {seed}: value {r.value:.8f} after {len(r.history)} steps")
    print(f"cos^2(pi/8) = {np.cos(np.pi / 8) ** 2:.8f}")


if __name__ == "__main__":
    main()
