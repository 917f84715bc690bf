"""Published census values used to self-check computed tables.

Census rows map ``(n, k)`` to ``(equality, isotopism, trisotopism, paratopism)``.
"""

from fractions import Fraction

MAXMOLS_SETS = {
    (2, 1): (1, 1, 1, 1),
    (3, 2): (1, 1, 1, 1),
    (4, 1): (3, 1, 1, 1),
    (4, 3): (1, 1, 1, 1),
    (5, 1): (50, 1, 1, 1),
    (5, 4): (6, 1, 1, 1),
    (6, 1): (9408, 22, 17, 12),
    (7, 1): (16765350, 549, 314, 141),
    (7, 2): (341880, 17, 11, 5),
    (7, 6): (120, 1, 1, 1),
    (8, 1): (532807827816, 1665394, 836595, 281633),
    (8, 2): (7832534400, 23005, 11704, 2127),
    (8, 3): (14923440, 221, 147, 38),
    (8, 7): (240, 1, 1, 1),
}

MOLS_SETS = {
    (2, 1): (1, 1, 1, 1),
    (3, 1): (1, 1, 1, 1),
    (3, 2): (1, 1, 1, 1),
    (4, 1): (4, 2, 2, 2),
    (4, 2): (2, 1, 1, 1),
    (4, 3): (1, 1, 1, 1),
    (5, 1): (56, 2, 2, 2),
    (5, 2): (18, 2, 2, 1),
    (5, 3): (18, 1, 1, 1),
    (5, 4): (6, 1, 1, 1),
    (6, 1): (9408, 22, 17, 12),
    (7, 1): (16942080, 564, 324, 147),
    (7, 2): (342480, 20, 14, 7),
    (7, 3): (1200, 4, 3, 1),
    (7, 4): (1200, 3, 3, 1),
    (7, 5): (600, 1, 1, 1),
    (7, 6): (120, 1, 1, 1),
    (8, 1): (535281401856, 1676267, 842227, 283657),
    (8, 2): (7850589120, 23362, 11887, 2165),
    (8, 3): (14927040, 224, 149, 39),
    (8, 4): (4800, 3, 2, 1),
    (8, 5): (3600, 1, 1, 1),
    (8, 6): (1440, 1, 1, 1),
    (8, 7): (240, 1, 1, 1),
}

MAXMOLS_LISTS = {
    (2, 1): (1, 1, 1, 1),
    (3, 2): (1, 1, 1, 1),
    (4, 1): (3, 1, 1, 1),
    (4, 3): (2, 1, 1, 1),
    (5, 1): (50, 1, 1, 1),
    (5, 4): (36, 6, 3, 1),
    (6, 1): (9408, 22, 17, 12),
    (7, 1): (16765350, 549, 314, 141),
    (7, 2): (341880, 29, 17, 5),
    (7, 6): (14400, 120, 60, 1),
    (8, 1): (532807827816, 1665394, 836595, 281633),
    (8, 2): (7832534400, 45222, 23005, 2127),
    (8, 3): (29846880, 1217, 616, 38),
    (8, 7): (172800, 240, 120, 1),
}

MOLS_LISTS = {
    (2, 1): (1, 1, 1, 1),
    (3, 1): (1, 1, 1, 1),
    (3, 2): (1, 1, 1, 1),
    (4, 1): (4, 2, 2, 2),
    (4, 2): (2, 1, 1, 1),
    (4, 3): (2, 1, 1, 1),
    (5, 1): (56, 2, 2, 2),
    (5, 2): (18, 3, 2, 1),
    (5, 3): (36, 6, 3, 1),
    (5, 4): (36, 6, 3, 1),
    (6, 1): (9408, 22, 17, 12),
    (7, 1): (16942080, 564, 324, 147),
    (7, 2): (342480, 34, 20, 7),
    (7, 3): (2400, 20, 10, 1),
    (7, 4): (7200, 60, 30, 1),
    (7, 5): (14400, 120, 60, 1),
    (7, 6): (14400, 120, 60, 1),
    (8, 1): (535281401856, 1676267, 842227, 283657),
    (8, 2): (7850589120, 45927, 23362, 2165),
    (8, 3): (29854080, 1227, 621, 39),
    (8, 4): (28800, 40, 20, 1),
    (8, 5): (86400, 120, 60, 1),
    (8, 6): (172800, 240, 120, 1),
    (8, 7): (172800, 240, 120, 1),
}

CENSUS_TABLES = {
    "maxmols_sets": MAXMOLS_SETS,
    "mols_sets": MOLS_SETS,
    "maxmols_lists": MAXMOLS_LISTS,
    "mols_lists": MOLS_LISTS,
}

# (proportion of species with a mate, P(random square has a mate), expected mates)
RANDOM_LS = {
    3: (Fraction(1), Fraction(1), Fraction(1)),
    4: (Fraction(1, 2), Fraction(1, 4), Fraction(1, 2)),
    5: (Fraction(1, 2), Fraction(3, 28), Fraction(9, 28)),
    6: (Fraction(0), Fraction(0), Fraction(0)),
    7: (Fraction(6, 147), Fraction(5891, 564736), Fraction(1427, 70592)),
    8: (Fraction(2024, 283657), Fraction(103065585, 22303391744), Fraction(40888485, 2787923968)),
}

# (#common transversals, max #disjoint) -> number of maxMOLS species
COMMON_TRANSVERSALS = {
    (7, 2): {(0, 0): 1, (1, 1): 1, (2, 1): 1, (4, 1): 2},
    (8, 2): {
        (0, 0): 1980, (1, 1): 23, (2, 1): 10, (2, 2): 60, (3, 1): 1,
        (4, 2): 16, (4, 4): 26, (8, 2): 1, (8, 4): 7, (12, 2): 1, (12, 4): 1, (19, 2): 1,
    },
    (8, 3): {(0, 0): 38},
}

# number of distinct latin square species among the aspects -> number of maxMOLS species
SPECIES_INVOLVED = {
    (3, 2): {1: 1},
    (4, 3): {1: 1},
    (5, 4): {1: 1},
    (7, 2): {1: 2, 2: 2, 3: 1},
    (7, 6): {1: 1},
    (8, 2): {1: 4, 2: 82, 3: 512, 4: 1529},
    (8, 3): {1: 1, 2: 6, 3: 13, 4: 16, 5: 2},
    (8, 7): {1: 1},
}

# floor(log2(theta)) -> number of species with theta > 0
LOG2_THETA = {
    7: {0: 1, 1: 3, 3: 1, 9: 1},
    8: {0: 1223, 1: 329, 2: 175, 3: 90, 4: 67, 5: 49, 6: 31, 7: 17, 8: 15, 9: 7,
        10: 4, 11: 6, 12: 5, 13: 1, 14: 3, 15: 1, 16: 1},
}

SPECIES_COUNT = {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 12, 7: 147, 8: 283657}
REDUCED_COUNT = {1: 1, 2: 1, 3: 1, 4: 4, 5: 56, 6: 9408, 7: 16942080, 8: 535281401856}
