from collections import Counter
from itertools import product
from math import factorial

import pytest

from flatrank.combinatorics import Tableau, enumerate_ssyt, optimal_shape, partitions, tableau
from flatrank.ghs import (
    GHSNotFound,
    StripSelection,
    _blocks,
    all_ghs,
    find_ghs,
    place_ghs,
    place_keys,
)
from flatrank.straighten import FormalSum


def sorted_alphas(max_degree):
    for d in range(1, max_degree + 1):
        for p in partitions(d):
            yield tuple(p)


def optimal_cases(max_degree):
    for alpha in sorted_alphas(max_degree):
        if len(alpha) < 2:
            continue
        lam = optimal_shape(alpha)
        n = len(alpha) - 1
        for t in enumerate_ssyt(lam, n, start=1):
            yield alpha, t


def test_worked_example_block_contents():
    t = Tableau.from_columns(
        tableau("111111122223/22222233444/33333344/44444").columns
    )
    nu = (0, 5, 3, 3, 1)
    sel = find_ghs(t, nu)
    assert sel.content(5) == nu
    word = "431111132223"  # reference selection, one letter per column
    by_col = {c: x for _, c, x in sel.cells}
    for block in _blocks(t.shape):
        ours = Counter(by_col[c] for c in block if c in by_col)
        theirs = Counter(int(word[c]) for c in block)
        assert ours == theirs


def test_trivial_selections():
    t = tableau("1122/23")
    assert find_ghs(t, (0, 0, 0, 0)).cells == ()
    row = tableau("1223")
    sel = find_ghs(row, row.content(4))
    assert len(sel.cells) == 4


def test_selection_rejects_shared_column():
    with pytest.raises(ValueError):
        StripSelection(((0, 0, 1), (1, 0, 2)))
    assert StripSelection(((0, 1, 1),)).to_json() == "[[0, 1, 1]]"


def test_all_ghs_small_examples():
    t = tableau("11/2")
    sels = all_ghs(t, (0, 1, 1))
    # the 2 sits in column 0, so the 1 must come from column 1
    assert [s.cells for s in sels] == [((0, 1, 1), (1, 0, 2))]
    assert all_ghs(t, (0, 3, 0)) == []


@pytest.mark.parametrize("alpha,t", list(optimal_cases(5)), ids=str)
def test_finder_agrees_with_brute_force(alpha, t):
    n = len(alpha) - 1
    for nu_tail in product(*(range(a + 1) for a in alpha[1:])):
        nu = (0,) + nu_tail
        brute = all_ghs(t, nu)
        assert brute, f"no strip with content {nu} in {t}"
        assert find_ghs(t, nu) in brute
    # contents outside the guaranteed range: the finder succeeds exactly when one exists
    for nu_tail in product(range(3), repeat=n):
        nu = (0,) + nu_tail
        brute = all_ghs(t, nu)
        if brute:
            assert find_ghs(t, nu) in brute
        else:
            with pytest.raises(GHSNotFound):
                find_ghs(t, nu)


def test_failure_witness_for_542():
    # content 0011223 cannot be added to 11111/2222/33 on the first 7 columns
    t = tableau("11111/2222/33")
    assert place_keys(t.columns, 7, (2, 2, 2, 1)) == {}
    assert not place_ghs(t, (2, 2, 2, 1))
    # one more 0 makes it possible
    assert place_ghs(t, (3, 2, 2, 1))


def test_place_row_of_zeros():
    for d in (2, 3, 4):
        for t in enumerate_ssyt((2, 1), 2, start=1):
            out = place_ghs(t, (d, 0, 0))
            top = Tableau(((0,) * d,) + t.rows)
            # d! arrangements; each zero moves up past the column above it, 3 cells in all
            assert out == FormalSum((d, 2, 1), {top: -factorial(d)})


def test_place_three_twos():
    out = place_ghs(tableau("00/1"), (0, 0, 3))
    assert out == FormalSum((3, 2, 1), {tableau("002/12/2"): 6})


def test_place_empty_content():
    empty = Tableau(())
    assert place_ghs(empty, ()) == FormalSum((), {empty: 1})
    with pytest.raises(ValueError):
        place_ghs(tableau("01/2"), (1,))


def test_place_nonvanishing_on_optimal_shapes():
    for alpha in sorted_alphas(5):
        if len(alpha) < 2:
            continue
        lam = optimal_shape(alpha)
        for t in enumerate_ssyt(lam, len(alpha) - 1):
            if 0 in t.reading_word():
                continue
            assert place_ghs(t, alpha), (alpha, t)
