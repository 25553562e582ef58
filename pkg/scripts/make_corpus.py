"""Write the canonical games and the copy strategy as JSON files."""
import argparse
from pathlib import Path

from nlgames.cli import write_corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("out", type=Path, nargs="?", default=Path("corpus"))
    args = p.parse_args()
    for name in write_corpus(args.out):
        print(args.out / name)


if __name__ == "__main__":
    main()
