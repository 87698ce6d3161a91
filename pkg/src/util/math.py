from typing import Iterator, Sequence


def finite_differences(values: Sequence[int], order: int) -> list[int]:
    """
    The `order`-th forward differences of an integer sequence; the result is
    `order` entries shorter than the input (empty once it runs out).
    """
    diffs = list(values)
    for _ in range(order):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return diffs


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`, lexicographically descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in compositions(total - head, parts - 1):
            yield (head,) + tail
