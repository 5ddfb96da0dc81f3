"""Livorno Table 1 transcription (k EUR) and plain-math oracles.

Nothing here imports cport: these are the independent references the
package is checked against.
"""

import math

BUNDLES = ("Nv", "Fr", "Mb", "St")

# year -> bundle costs in k EUR ("-" cells are 0), plus the printed TOTAL AMOUNT
YEARLY = {
    2017: ((137, 773, 82, 310), 1304),
    2018: ((269, 435, 770, 3447), 4922),
    2019: ((444, 0, 0, 492), 937),
    2020: ((0, 71, 0, 80), 151),
}


def bundle_totals(start, end):
    """Per-bundle k EUR summed over the inclusive year range."""
    return tuple(
        sum(YEARLY[y][0][i] for y in YEARLY if start <= y <= end) for i in range(4)
    )


def printed_total_amount():
    return sum(total for _, total in YEARLY.values())


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def angle_deg(x, y):
    return math.degrees(math.acos(dot(x, y) / math.sqrt(dot(x, x) * dot(y, y))))


def shares(x):
    n = dot(x, x)
    return tuple(a * a / n for a in x)


# Frozen from the functions above.
FIRST_BIENNIUM = (406, 1208, 852, 3757)
SECOND_BIENNIUM = (444, 71, 0, 572)
BIENNIA_ANGLE = 35.112520181376944
YEARS_2017_2018_ANGLE = 60.18280496716208
CELL_TOTAL_KEUR = 7310
