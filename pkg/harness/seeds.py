# File: harness/seeds.py
# Named and explicit seed sets

from typing import Dict, List

from pathway.models import SeedSet

DEFAULT_COUNT = 100

# name -> first seed; a named set is DEFAULT_COUNT consecutive seeds
NAMED_BASES: Dict[str, int] = {
    "default": 0,
    "train": 10_000,
    "holdout": 20_000,
}


def named_seed_set(name: str, count: int = DEFAULT_COUNT) -> SeedSet:
    if name not in NAMED_BASES:
        raise ValueError(f"unknown seed set {name!r}; known: {', '.join(NAMED_BASES)}")
    base = NAMED_BASES[name]
    return SeedSet(name=name, seeds=list(range(base, base + count)))


def parse_seed_set(text: str) -> SeedSet:
    """
    Parse a --seed-set value.

    Accepts a registered name ("default", "train", "holdout"), a name with
    a count ("default:10"), an explicit comma-separated list ("1,2,3"), or
    an inclusive range ("5..9").
    """
    text = text.strip()
    if not text:
        raise ValueError("seed set must not be empty")
    name, _, count = text.partition(":")
    if name in NAMED_BASES:
        if count and (not count.isdigit() or int(count) < 1):
            raise ValueError(f"seed count must be a positive integer, got {count!r}")
        return named_seed_set(name, int(count) if count else DEFAULT_COUNT)
    try:
        if ".." in text:
            first, last = (int(part) for part in text.split("..", 1))
            if last < first:
                raise ValueError(f"empty seed range {text!r}")
            seeds: List[int] = list(range(first, last + 1))
        else:
            seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"cannot parse seed set {text!r}: {e}") from e
    if not seeds:
        raise ValueError("seed set must not be empty")
    return SeedSet(name=text, seeds=seeds)
