"""Frozen coefficient tables for the fourth-order one-step law.

Auto-generated by tools/derive_closed_forms.py; do not edit by hand.
Each closed-form entry is a sum of terms q * gamma**a * eta**b *
exp(-c*gamma*eta) encoded as (q_numerator, q_denominator, a, b, c).
The *_SERIES tables hold the exact small-step Taylor expansions
(terms (q_num, q_den, a, b) meaning q * gamma**a * eta**b), truncated
six orders past each entry's leading order.
"""

MU_TERMS = {
    (0, 0): ((1, 1, 0, 0, 0),),
    (0, 1): ((1, 1, -1, 0, 0), (-1, 1, -1, 0, 1), (1, 2, 1, 2, 0), (-1, 3, 2, 3, 0), (1, 24, 3, 4, 0), (1, 120, 4, 5, 0)),
    (0, 2): ((1, 1, -1, 0, 0), (-1, 1, -1, 0, 1), (-1, 1, 0, 1, 0), (1, 1, 1, 2, 0), (-1, 6, 2, 3, 0), (-1, 24, 3, 4, 0)),
    (0, 3): ((1, 6, 2, 3, 0), (-1, 24, 3, 4, 0), (-1, 120, 4, 5, 0)),
    (1, 0): (),
    (1, 1): ((1, 1, 0, 0, 1), (1, 1, 1, 1, 0), (-1, 1, 2, 2, 0), (1, 6, 3, 3, 0), (1, 24, 4, 4, 0)),
    (1, 2): ((-1, 1, 0, 0, 0), (1, 1, 0, 0, 1), (2, 1, 1, 1, 0), (-1, 2, 2, 2, 0), (-1, 6, 3, 3, 0)),
    (1, 3): ((1, 2, 2, 2, 0), (-1, 6, 3, 3, 0), (-1, 24, 4, 4, 0)),
    (2, 0): (),
    (2, 1): ((3, 1, 0, 0, 0), (-3, 1, 0, 0, 1), (-3, 1, 1, 1, 0), (-1, 1, 1, 1, 1), (1, 2, 2, 2, 0), (1, 3, 3, 3, 0), (-1, 12, 4, 4, 0), (-1, 120, 5, 5, 0)),
    (2, 2): ((3, 1, 0, 0, 0), (-2, 1, 0, 0, 1), (-1, 1, 1, 1, 0), (-1, 1, 1, 1, 1), (-1, 1, 2, 2, 0), (1, 3, 3, 3, 0), (1, 24, 4, 4, 0)),
    (2, 3): ((1, 1, 1, 1, 0), (-1, 2, 2, 2, 0), (-1, 6, 3, 3, 0), (1, 12, 4, 4, 0), (1, 120, 5, 5, 0)),
    (3, 0): (),
    (3, 1): ((-4, 1, 0, 0, 0), (4, 1, 0, 0, 1), (1, 1, 1, 1, 0), (3, 1, 1, 1, 1), (1, 1, 2, 2, 0), (1, 2, 2, 2, 1), (-1, 2, 3, 3, 0), (1, 24, 4, 4, 0), (1, 120, 5, 5, 0)),
    (3, 2): ((-1, 1, 0, 0, 0), (1, 1, 0, 0, 1), (-2, 1, 1, 1, 0), (2, 1, 1, 1, 1), (3, 2, 2, 2, 0), (1, 2, 2, 2, 1), (-1, 6, 3, 3, 0), (-1, 24, 4, 4, 0)),
    (3, 3): ((1, 1, 0, 0, 1), (-1, 2, 2, 2, 0), (1, 3, 3, 3, 0), (-1, 24, 4, 4, 0), (-1, 120, 5, 5, 0)),
}

SIGMA_TERMS = {
    (0, 0): ((-3, 1, -2, 0, 0), (4, 1, -2, 0, 1), (-1, 1, -2, 0, 2), (2, 1, -1, 1, 0), (-2, 1, 0, 2, 0), (2, 1, 0, 2, 1), (4, 3, 1, 3, 0), (-1, 2, 2, 4, 0), (1, 10, 3, 5, 0)),
    (0, 1): ((1, 1, -1, 0, 0), (-2, 1, -1, 0, 1), (1, 1, -1, 0, 2), (-2, 1, 0, 1, 0), (2, 1, 0, 1, 1), (2, 1, 1, 2, 0), (-1, 1, 1, 2, 1), (-1, 1, 2, 3, 0), (1, 4, 3, 4, 0)),
    (0, 2): ((-15, 2, -1, 0, 0), (10, 1, -1, 0, 1), (-5, 2, -1, 0, 2), (4, 1, 0, 1, 0), (2, 1, 0, 1, 1), (-1, 1, 0, 1, 2), (-2, 1, 1, 2, 0), (2, 1, 1, 2, 1), (1, 3, 2, 3, 0), (1, 1, 2, 3, 1), (1, 4, 3, 4, 0), (-1, 10, 4, 5, 0)),
    (0, 3): ((75, 4, -1, 0, 0), (-22, 1, -1, 0, 1), (13, 4, -1, 0, 2), (-2, 1, 0, 1, 0), (-16, 1, 0, 1, 1), (5, 2, 0, 1, 2), (-7, 1, 1, 2, 1), (1, 2, 1, 2, 2), (2, 3, 2, 3, 0), (-3, 1, 2, 3, 1), (-1, 2, 3, 4, 0), (-1, 2, 3, 4, 1), (1, 10, 4, 5, 0)),
    (1, 1): ((1, 1, 0, 0, 0), (-1, 1, 0, 0, 2), (2, 1, 1, 1, 0), (-4, 1, 1, 1, 1), (-2, 1, 2, 2, 0), (2, 3, 3, 3, 0)),
    (1, 2): ((-5, 2, 0, 0, 0), (5, 2, 0, 0, 2), (-4, 1, 1, 1, 0), (8, 1, 1, 1, 1), (1, 1, 1, 1, 2), (2, 1, 2, 2, 0), (3, 1, 2, 2, 1), (1, 3, 3, 3, 0), (-1, 4, 4, 4, 0)),
    (1, 3): ((37, 4, 0, 0, 0), (-6, 1, 0, 0, 1), (-13, 4, 0, 0, 2), (2, 1, 1, 1, 0), (-12, 1, 1, 1, 1), (-5, 2, 1, 1, 2), (-7, 1, 2, 2, 1), (-1, 2, 2, 2, 2), (-1, 1, 3, 3, 0), (-1, 1, 3, 3, 1), (1, 4, 4, 4, 0)),
    (2, 2): ((5, 2, 0, 0, 0), (4, 1, 0, 0, 1), (-13, 2, 0, 0, 2), (8, 1, 1, 1, 0), (-12, 1, 1, 1, 1), (-5, 1, 1, 1, 2), (-10, 1, 2, 2, 1), (-1, 1, 2, 2, 2), (-4, 3, 3, 3, 0), (-2, 1, 3, 3, 1), (1, 10, 5, 5, 0)),
    (2, 3): ((-103, 8, 0, 0, 0), (4, 1, 0, 0, 1), (71, 8, 0, 0, 2), (-4, 1, 1, 1, 0), (16, 1, 1, 1, 1), (39, 4, 1, 1, 2), (-2, 1, 2, 2, 0), (15, 1, 2, 2, 1), (15, 4, 2, 2, 2), (1, 1, 3, 3, 0), (5, 1, 3, 3, 1), (1, 2, 3, 3, 2), (1, 4, 4, 4, 0), (1, 2, 4, 4, 1), (-1, 10, 5, 5, 0)),
    (3, 3): ((103, 8, 0, 0, 0), (-103, 8, 0, 0, 2), (2, 1, 1, 1, 0), (-8, 1, 1, 1, 1), (-71, 4, 1, 1, 2), (2, 1, 2, 2, 0), (-12, 1, 2, 2, 1), (-39, 4, 2, 2, 2), (-6, 1, 3, 3, 1), (-5, 2, 3, 3, 2), (-1, 2, 4, 4, 0), (-1, 1, 4, 4, 1), (-1, 4, 4, 4, 2), (1, 10, 5, 5, 0)),
}

GBAR_MOMENT_TERMS = {
    (0, 0): ((-1, 2, 0, 2, 0),),
    (0, 1): ((-1, 6, 0, 3, 0),),
    (0, 2): ((-1, 12, 0, 4, 0),),
    (0, 3): ((-1, 20, 0, 5, 0),),
    (0, 4): ((-1, 30, 0, 6, 0),),
    (0, 5): ((-1, 42, 0, 7, 0),),
    (1, 0): ((-1, 1, 0, 1, 0),),
    (1, 1): ((-1, 2, 0, 2, 0),),
    (1, 2): ((-1, 3, 0, 3, 0),),
    (1, 3): ((-1, 4, 0, 4, 0),),
    (1, 4): ((-1, 5, 0, 5, 0),),
    (1, 5): ((-1, 6, 0, 6, 0),),
    (2, 0): ((1, 2, 1, 2, 0),),
    (2, 1): ((1, 6, 1, 3, 0),),
    (2, 2): ((1, 12, 1, 4, 0),),
    (2, 3): ((1, 20, 1, 5, 0),),
    (2, 4): ((1, 30, 1, 6, 0),),
    (2, 5): ((1, 42, 1, 7, 0),),
    (3, 0): ((-1, 1, -1, 0, 0), (1, 1, -1, 0, 1), (1, 1, 0, 1, 0), (-1, 2, 1, 2, 0)),
    (3, 1): ((1, 1, -2, 0, 0), (-1, 1, -2, 0, 1), (-1, 1, -1, 1, 0), (1, 2, 0, 2, 0), (-1, 6, 1, 3, 0)),
    (3, 2): ((-2, 1, -3, 0, 0), (2, 1, -3, 0, 1), (2, 1, -2, 1, 0), (-1, 1, -1, 2, 0), (1, 3, 0, 3, 0), (-1, 12, 1, 4, 0)),
    (3, 3): ((6, 1, -4, 0, 0), (-6, 1, -4, 0, 1), (-6, 1, -3, 1, 0), (3, 1, -2, 2, 0), (-1, 1, -1, 3, 0), (1, 4, 0, 4, 0), (-1, 20, 1, 5, 0)),
    (3, 4): ((-24, 1, -5, 0, 0), (24, 1, -5, 0, 1), (24, 1, -4, 1, 0), (-12, 1, -3, 2, 0), (4, 1, -2, 3, 0), (-1, 1, -1, 4, 0), (1, 5, 0, 5, 0), (-1, 30, 1, 6, 0)),
    (3, 5): ((120, 1, -6, 0, 0), (-120, 1, -6, 0, 1), (-120, 1, -5, 1, 0), (60, 1, -4, 2, 0), (-20, 1, -3, 3, 0), (5, 1, -2, 4, 0), (-1, 1, -1, 5, 0), (1, 6, 0, 6, 0), (-1, 42, 1, 7, 0)),
}

GTILDE_MOMENT_TERMS = {
    (0, 0): ((1, 24, 2, 4, 0),),
    (0, 1): ((1, 120, 2, 5, 0),),
    (0, 2): ((1, 360, 2, 6, 0),),
    (0, 3): ((1, 840, 2, 7, 0),),
    (1, 0): ((1, 6, 2, 3, 0),),
    (1, 1): ((1, 24, 2, 4, 0),),
    (1, 2): ((1, 60, 2, 5, 0),),
    (1, 3): ((1, 120, 2, 6, 0),),
    (2, 0): ((1, 1, -1, 0, 0), (-1, 1, -1, 0, 1), (-1, 1, 0, 1, 0), (1, 2, 1, 2, 0), (-1, 6, 2, 3, 0), (-1, 24, 3, 4, 0)),
    (2, 1): ((-1, 1, -2, 0, 0), (1, 1, -2, 0, 1), (1, 1, -1, 1, 0), (-1, 2, 0, 2, 0), (1, 6, 1, 3, 0), (-1, 24, 2, 4, 0), (-1, 120, 3, 5, 0)),
    (2, 2): ((2, 1, -3, 0, 0), (-2, 1, -3, 0, 1), (-2, 1, -2, 1, 0), (1, 1, -1, 2, 0), (-1, 3, 0, 3, 0), (1, 12, 1, 4, 0), (-1, 60, 2, 5, 0), (-1, 360, 3, 6, 0)),
    (2, 3): ((-6, 1, -4, 0, 0), (6, 1, -4, 0, 1), (6, 1, -3, 1, 0), (-3, 1, -2, 2, 0), (1, 1, -1, 3, 0), (-1, 4, 0, 4, 0), (1, 20, 1, 5, 0), (-1, 120, 2, 6, 0), (-1, 840, 3, 7, 0)),
    (3, 0): ((-3, 1, -1, 0, 0), (3, 1, -1, 0, 1), (2, 1, 0, 1, 0), (1, 1, 0, 1, 1), (-1, 2, 1, 2, 0), (1, 24, 3, 4, 0)),
    (3, 1): ((4, 1, -2, 0, 0), (-4, 1, -2, 0, 1), (-3, 1, -1, 1, 0), (-1, 1, -1, 1, 1), (1, 1, 0, 2, 0), (-1, 6, 1, 3, 0), (1, 120, 3, 5, 0)),
    (3, 2): ((-10, 1, -3, 0, 0), (10, 1, -3, 0, 1), (8, 1, -2, 1, 0), (2, 1, -2, 1, 1), (-3, 1, -1, 2, 0), (2, 3, 0, 3, 0), (-1, 12, 1, 4, 0), (1, 360, 3, 6, 0)),
    (3, 3): ((36, 1, -4, 0, 0), (-36, 1, -4, 0, 1), (-30, 1, -3, 1, 0), (-6, 1, -3, 1, 1), (12, 1, -2, 2, 0), (-3, 1, -1, 3, 0), (1, 2, 0, 4, 0), (-1, 20, 1, 5, 0), (1, 840, 3, 7, 0)),
}

MU_SERIES = {
    (0, 0): ((1, 1, 0, 0),),
    (0, 1): ((1, 1, 0, 1), (-1, 6, 2, 3), (1, 60, 4, 5), (-1, 720, 5, 6), (1, 5040, 6, 7)),
    (0, 2): ((1, 2, 1, 2), (-1, 12, 3, 4), (1, 120, 4, 5), (-1, 720, 5, 6), (1, 5040, 6, 7), (-1, 40320, 7, 8)),
    (0, 3): ((1, 6, 2, 3), (-1, 24, 3, 4), (-1, 120, 4, 5)),
    (1, 0): (),
    (1, 1): ((1, 1, 0, 0), (-1, 2, 2, 2), (1, 12, 4, 4), (-1, 120, 5, 5), (1, 720, 6, 6)),
    (1, 2): ((1, 1, 1, 1), (-1, 3, 3, 3), (1, 24, 4, 4), (-1, 120, 5, 5), (1, 720, 6, 6), (-1, 5040, 7, 7)),
    (1, 3): ((1, 2, 2, 2), (-1, 6, 3, 3), (-1, 24, 4, 4)),
    (2, 0): (),
    (2, 1): ((-1, 1, 1, 1), (1, 3, 3, 3), (-1, 24, 4, 4), (-1, 40, 5, 5), (1, 240, 6, 6), (-1, 1260, 7, 7)),
    (2, 2): ((1, 1, 0, 0), (-1, 1, 2, 2), (1, 6, 3, 3), (1, 8, 4, 4), (-1, 40, 5, 5), (1, 180, 6, 6)),
    (2, 3): ((1, 1, 1, 1), (-1, 2, 2, 2), (-1, 6, 3, 3), (1, 12, 4, 4), (1, 120, 5, 5)),
    (3, 0): (),
    (3, 1): ((1, 2, 2, 2), (-1, 6, 3, 3), (-1, 24, 4, 4), (1, 60, 5, 5), (1, 720, 6, 6), (-1, 1260, 7, 7), (1, 5040, 8, 8)),
    (3, 2): ((-1, 1, 1, 1), (1, 2, 2, 2), (1, 6, 3, 3), (-1, 12, 4, 4), (-1, 120, 5, 5), (1, 180, 6, 6), (-1, 630, 7, 7)),
    (3, 3): ((1, 1, 0, 0), (-1, 1, 1, 1), (1, 6, 3, 3), (-1, 60, 5, 5), (1, 720, 6, 6)),
}

SIGMA_SERIES = {
    (0, 0): ((1, 126, 5, 7), (-1, 288, 6, 8), (13, 12960, 7, 9), (-1, 4320, 8, 10), (19, 415800, 9, 11), (-29, 3628800, 10, 12), (179, 141523200, 11, 13)),
    (0, 1): ((1, 36, 5, 6), (-1, 72, 6, 7), (13, 2880, 7, 8), (-1, 864, 8, 9), (19, 75600, 9, 10), (-29, 604800, 10, 11), (179, 21772800, 11, 12)),
    (0, 2): ((1, 15, 4, 5), (-1, 24, 5, 6), (1, 2520, 6, 7), (11, 2880, 7, 8), (-41, 22680, 8, 9), (67, 120960, 9, 10), (-383, 2851200, 10, 11)),
    (0, 3): ((1, 12, 3, 4), (-1, 12, 4, 5), (1, 60, 5, 6), (13, 2520, 6, 7), (-3, 2240, 7, 8), (-13, 36288, 8, 9), (299, 907200, 9, 10)),
    (1, 1): ((1, 10, 5, 5), (-1, 18, 6, 6), (5, 252, 7, 7), (-1, 180, 8, 8), (17, 12960, 9, 9), (-41, 151200, 10, 10), (167, 3326400, 11, 11)),
    (1, 2): ((1, 4, 4, 4), (-1, 6, 5, 5), (1, 72, 6, 6), (29, 2520, 7, 7), (-1, 144, 8, 8), (11, 4536, 9, 9), (-79, 120960, 10, 10)),
    (1, 3): ((1, 3, 3, 3), (-1, 3, 4, 4), (1, 12, 5, 5), (1, 90, 6, 6), (-13, 2520, 7, 7), (-1, 1344, 8, 8), (41, 36288, 9, 9)),
    (2, 2): ((2, 3, 3, 3), (-1, 2, 4, 4), (-1, 30, 5, 5), (1, 9, 6, 6), (-19, 630, 7, 7), (1, 480, 8, 8), (13, 7560, 9, 9)),
    (2, 3): ((1, 1, 2, 2), (-1, 1, 3, 3), (1, 6, 4, 4), (1, 6, 5, 5), (-23, 360, 6, 6), (-1, 252, 7, 7), (19, 3360, 8, 8)),
    (3, 3): ((2, 1, 1, 1), (-2, 1, 2, 2), (2, 3, 3, 3), (1, 6, 4, 4), (-2, 15, 5, 5), (-1, 90, 6, 6), (3, 140, 7, 7)),
}

GBAR_MOMENT_SERIES = {
    (0, 0): ((-1, 2, 0, 2),),
    (0, 1): ((-1, 6, 0, 3),),
    (0, 2): ((-1, 12, 0, 4),),
    (0, 3): ((-1, 20, 0, 5),),
    (0, 4): ((-1, 30, 0, 6),),
    (0, 5): ((-1, 42, 0, 7),),
    (1, 0): ((-1, 1, 0, 1),),
    (1, 1): ((-1, 2, 0, 2),),
    (1, 2): ((-1, 3, 0, 3),),
    (1, 3): ((-1, 4, 0, 4),),
    (1, 4): ((-1, 5, 0, 5),),
    (1, 5): ((-1, 6, 0, 6),),
    (2, 0): ((1, 2, 1, 2),),
    (2, 1): ((1, 6, 1, 3),),
    (2, 2): ((1, 12, 1, 4),),
    (2, 3): ((1, 20, 1, 5),),
    (2, 4): ((1, 30, 1, 6),),
    (2, 5): ((1, 42, 1, 7),),
    (3, 0): ((-1, 6, 2, 3), (1, 24, 3, 4), (-1, 120, 4, 5), (1, 720, 5, 6), (-1, 5040, 6, 7), (1, 40320, 7, 8), (-1, 362880, 8, 9)),
    (3, 1): ((-1, 24, 2, 4), (1, 120, 3, 5), (-1, 720, 4, 6), (1, 5040, 5, 7), (-1, 40320, 6, 8), (1, 362880, 7, 9), (-1, 3628800, 8, 10)),
    (3, 2): ((-1, 60, 2, 5), (1, 360, 3, 6), (-1, 2520, 4, 7), (1, 20160, 5, 8), (-1, 181440, 6, 9), (1, 1814400, 7, 10), (-1, 19958400, 8, 11)),
    (3, 3): ((-1, 120, 2, 6), (1, 840, 3, 7), (-1, 6720, 4, 8), (1, 60480, 5, 9), (-1, 604800, 6, 10), (1, 6652800, 7, 11), (-1, 79833600, 8, 12)),
    (3, 4): ((-1, 210, 2, 7), (1, 1680, 3, 8), (-1, 15120, 4, 9), (1, 151200, 5, 10), (-1, 1663200, 6, 11), (1, 19958400, 7, 12), (-1, 259459200, 8, 13)),
    (3, 5): ((-1, 336, 2, 8), (1, 3024, 3, 9), (-1, 30240, 4, 10), (1, 332640, 5, 11), (-1, 3991680, 6, 12), (1, 51891840, 7, 13), (-1, 726485760, 8, 14)),
}

GTILDE_MOMENT_SERIES = {
    (0, 0): ((1, 24, 2, 4),),
    (0, 1): ((1, 120, 2, 5),),
    (0, 2): ((1, 360, 2, 6),),
    (0, 3): ((1, 840, 2, 7),),
    (1, 0): ((1, 6, 2, 3),),
    (1, 1): ((1, 24, 2, 4),),
    (1, 2): ((1, 60, 2, 5),),
    (1, 3): ((1, 120, 2, 6),),
    (2, 0): ((-1, 12, 3, 4), (1, 120, 4, 5), (-1, 720, 5, 6), (1, 5040, 6, 7), (-1, 40320, 7, 8), (1, 362880, 8, 9), (-1, 3628800, 9, 10)),
    (2, 1): ((-1, 60, 3, 5), (1, 720, 4, 6), (-1, 5040, 5, 7), (1, 40320, 6, 8), (-1, 362880, 7, 9), (1, 3628800, 8, 10), (-1, 39916800, 9, 11)),
    (2, 2): ((-1, 180, 3, 6), (1, 2520, 4, 7), (-1, 20160, 5, 8), (1, 181440, 6, 9), (-1, 1814400, 7, 10), (1, 19958400, 8, 11), (-1, 239500800, 9, 12)),
    (2, 3): ((-1, 420, 3, 7), (1, 6720, 4, 8), (-1, 60480, 5, 9), (1, 604800, 6, 10), (-1, 6652800, 7, 11), (1, 79833600, 8, 12), (-1, 1037836800, 9, 13)),
    (3, 0): ((1, 60, 4, 5), (-1, 240, 5, 6), (1, 1260, 6, 7), (-1, 8064, 7, 8), (1, 60480, 8, 9), (-1, 518400, 9, 10), (1, 4989600, 10, 11)),
    (3, 1): ((1, 360, 4, 6), (-1, 1680, 5, 7), (1, 10080, 6, 8), (-1, 72576, 7, 9), (1, 604800, 8, 10), (-1, 5702400, 9, 11), (1, 59875200, 10, 12)),
    (3, 2): ((1, 1260, 4, 7), (-1, 6720, 5, 8), (1, 45360, 6, 9), (-1, 362880, 7, 10), (1, 3326400, 8, 11), (-1, 34214400, 9, 12), (1, 389188800, 10, 13)),
    (3, 3): ((1, 3360, 4, 8), (-1, 20160, 5, 9), (1, 151200, 6, 10), (-1, 1330560, 7, 11), (1, 13305600, 8, 12), (-1, 148262400, 9, 13), (1, 1816214400, 10, 14)),
}
