from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from mgcolor.floor_division import Floor, FloorDivisionScheme, build_scheme, verify_scheme


def floors(scheme, t):
    return [(set(f.rows), f.marginal) for f in scheme.divisions[t]]


def test_example_m10_l4():
    s = build_scheme(10, 4)
    assert (s.Q, s.r) == (3, 2)
    assert floors(s, 0) == [({1, 2, 3, 4}, 1), ({5, 6, 7, 8}, 5), ({9, 10}, 9)]
    assert floors(s, 1) == [({2, 3, 4, 5}, 2), ({6, 7, 8, 9}, 6), ({10, 1}, 10)]
    assert floors(s, 2) == [({3, 4, 5, 6}, 3), ({7, 8, 9, 10}, 7), ({1, 2}, None)]
    assert floors(s, 3) == [({4, 5, 6, 7}, 4), ({8, 9, 10}, 8), ({1, 2, 3}, None)]
    assert s.marginal_rows(2) == [3, 7] and s.marginal_rows(3) == [4, 8]
    every = sorted(m for t in range(4) for m in s.marginal_rows(t))
    assert every == list(range(1, 11))


@pytest.mark.parametrize("M,L", [(3, 3), (5, 1), (4, 7)])
def test_rejects_bad_heights(M, L):
    with pytest.raises(ValueError):
        build_scheme(M, L)


def test_all_small_schemes_pass():
    for M in range(3, 31):
        for L in range(2, M):
            rep = verify_scheme(build_scheme(M, L))
            assert rep.ok, (M, L, rep.failure)


def _mutate(scheme, t, j, floor):
    div = list(scheme.divisions[t])
    div[j] = floor
    divs = list(scheme.divisions)
    divs[t] = tuple(div)
    return replace(scheme, divisions=tuple(divs))


def test_mutation_deleted_marginal_fails():
    s = build_scheme(10, 4)
    f = s.divisions[0][1]
    bad = _mutate(s, 0, 1, Floor(f.rows, None))
    assert not verify_scheme(bad).ok


def test_mutation_oversized_floor_fails():
    s = build_scheme(10, 3)
    div = s.divisions[0]
    merged = Floor(div[0].rows + (div[1].rows[0],), div[0].marginal)
    rest = Floor(div[1].rows[1:], div[1].rows[1])
    divs = list(s.divisions)
    divs[0] = (merged, rest) + div[2:]
    rep = verify_scheme(replace(s, divisions=tuple(divs)))
    assert not rep.ok and "rows" in rep.failure


def test_dict_round_trip():
    s = build_scheme(13, 5)
    assert FloorDivisionScheme.from_dict(s.to_dict()) == s


@given(M=st.integers(3, 40), data=st.data())
def test_scheme_invariants_on_path_graph(M, data):
    # checked directly rather than through verify_scheme
    L = data.draw(st.integers(2, M - 1))
    s = build_scheme(M, L)
    inner_count = dict.fromkeys(range(1, M + 1), 0)
    marginal_count = dict.fromkeys(range(1, M + 1), 0)
    for div in s.divisions:
        owner = {}
        for j, f in enumerate(div):
            assert len(f.rows) <= L and len(f.inner_rows) <= L - 1
            for m in f.rows:
                assert m not in owner
                owner[m] = j
            for m in f.inner_rows:
                inner_count[m] += 1
            if f.marginal is not None:
                marginal_count[f.marginal] += 1
        assert sorted(owner) == list(range(1, M + 1))
        kept = {m for f in div for m in f.inner_rows}
        for m in range(1, M):
            if m in kept and m + 1 in kept:
                assert owner[m] == owner[m + 1]
    assert set(inner_count.values()) == {L - 1}
    assert set(marginal_count.values()) == {1}
