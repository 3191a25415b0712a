"""Parity colorings, matching overlap algebra, Kempe tables, theta-fitting."""

import itertools
import math
import random

import pytest

from snarklab.rings import (
    MEMO_LIMIT,
    canonical_matching,
    fit_neighbors,
    get_kempe,
    get_kempe_stats,
    is_parity_coloring,
    is_planar_matching,
    is_projective_matching,
    kempe_cache_path,
    load_kempe_table,
    overlaps,
    parity_classes,
    parity_colorings,
    save_kempe_table,
    theta_fit,
)


def perfect_matchings(points):
    """All perfect matchings of an ordered point list."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for i in range(len(rest)):
        pair = (first, rest[i])
        for sub in perfect_matchings(rest[:i] + rest[i + 1 :]):
            yield (pair,) + sub


# -- parity colorings ---------------------------------------------------------


def test_parity_counts_and_classes():
    assert len(parity_colorings(2)) == 3
    assert len(parity_colorings(4)) == 21
    assert len(parity_colorings(5)) == 60
    assert len(parity_classes(2)) == 1
    assert len(parity_classes(4)) == 4
    assert len(parity_classes(5)) == 10


def test_parity_count_matches_multinomial_formula():
    for k in range(2, 10):
        expected = 0
        for n0 in range(k + 1):
            for n1 in range(k + 1 - n0):
                n2 = k - n0 - n1
                if n0 % 2 == n1 % 2 == n2 % 2:
                    expected += math.comb(k, n0) * math.comb(k - n0, n1)
        assert len(parity_colorings(k)) == expected


def test_parity_classes_partition_the_colorings():
    for k in (4, 5, 6):
        classes = parity_classes(k)
        flattened = [kappa for cls in classes for kappa in cls]
        assert sorted(flattened) == sorted(parity_colorings(k))
        for cls in classes:
            for perm in itertools.permutations((0, 1, 2)):
                for kappa in cls:
                    assert tuple(perm[c] for c in kappa) in cls


def test_parity_rejects_tiny_ring():
    with pytest.raises(ValueError):
        parity_colorings(1)


# -- overlap predicate --------------------------------------------------------


def test_overlap_examples():
    assert overlaps((1, 3), (2, 4))
    assert not overlaps((1, 2), (3, 4))
    assert not overlaps((1, 4), (2, 3))
    assert not overlaps((1, 2), (2, 3))
    assert overlaps((2, 4), (1, 3))


def test_overlap_rejects_degenerate_match():
    with pytest.raises(ValueError):
        overlaps((2, 2), (1, 3))


# -- Kempe tables -------------------------------------------------------------


def test_planar_tables_match_noncrossing_oracle():
    sizes = {}
    for r in range(1, 6):
        oracle = {
            canonical_matching(m)
            for m in perfect_matchings(tuple(range(1, 2 * r + 1)))
            if is_planar_matching(m)
        }
        got = get_kempe(r, "planar")
        assert got == oracle
        sizes[r] = len(got)
    assert sizes == {1: 1, 2: 2, 3: 5, 4: 14, 5: 42}


def test_projective_tables_match_definition_oracle():
    for r in range(1, 5):
        oracle = {
            canonical_matching(m)
            for m in perfect_matchings(tuple(range(1, 2 * r + 1)))
            if is_projective_matching(m)
        }
        assert get_kempe(r, "projective") == oracle


def test_projective_r2_contains_the_crossing_pair():
    table = get_kempe(2, "projective")
    assert get_kempe(2, "planar") < table
    assert ((1, 3), (2, 4)) in table


def test_planar_subset_of_projective():
    for r in range(1, 7):
        assert get_kempe(r, "planar") <= get_kempe(r, "projective")


def test_table_members_satisfy_their_invariants():
    for r in range(1, 6):
        for m in get_kempe(r, "planar"):
            assert is_planar_matching(m)
        for m in get_kempe(r, "projective"):
            assert is_projective_matching(m)


def test_generation_emits_duplicates_that_are_removed():
    stats = get_kempe_stats(3, "planar")
    assert stats == {"raw": 6, "unique": 5}


def test_kempe_rejects_nonpositive_r():
    with pytest.raises(ValueError):
        get_kempe(0, "planar")
    with pytest.raises(ValueError):
        get_kempe(2, "spherical")


def test_kempe_warns_outside_memo_range():
    r = MEMO_LIMIT + 1
    with pytest.warns(UserWarning):
        table = get_kempe(r, "planar")
    catalan = math.comb(2 * r, r) // (r + 1)
    assert len(table) == catalan


# -- cache files --------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    table = get_kempe(3, "projective", cache_dir=str(tmp_path))
    path = kempe_cache_path(str(tmp_path), 3, "projective")
    assert path.exists()
    head = path.read_text().splitlines()[0]
    assert head == f"kempe 3 projective {len(table)}"
    assert set(load_kempe_table(path, 3, "projective")) == table


def test_cache_is_actually_loaded(tmp_path):
    table = sorted(get_kempe(2, "planar"))
    path = kempe_cache_path(str(tmp_path), 2, "planar")
    save_kempe_table(path, 2, "planar", table[:1])
    assert get_kempe(2, "planar", cache_dir=str(tmp_path)) == set(table[:1])


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("SNARKLAB_CACHE", str(tmp_path))
    get_kempe(2, "projective")
    assert kempe_cache_path(str(tmp_path), 2, "projective").exists()


def test_cache_rejects_mismatched_header(tmp_path):
    path = kempe_cache_path(str(tmp_path), 2, "planar")
    save_kempe_table(path, 2, "planar", get_kempe(2, "planar"))
    with pytest.raises(ValueError):
        load_kempe_table(path, 3, "planar")


# -- theta fitting ------------------------------------------------------------


def test_theta_fit_examples():
    assert theta_fit((2, 2, 2, 2), (), 2)
    kappa = (0, 0, 1, 1)
    assert theta_fit(kappa, (((1, 2), 1), ((3, 4), 1)), 2)
    assert not theta_fit(kappa, (((1, 3), 1), ((2, 4), 1)), 2)
    assert theta_fit(kappa, (((1, 3), -1), ((2, 4), -1)), 2)


def test_fit_neighbors_empty_matching():
    assert fit_neighbors((2, 2, 2, 2), (), 2) == {(2, 2, 2, 2)}


def test_fit_neighbors_worked_example():
    kappa = (0, 0, 1, 1)
    matches = (((1, 2), 1), ((3, 4), 1))
    got = fit_neighbors(kappa, matches, 2)
    assert got == {(0, 0, 0, 0), (0, 0, 1, 1), (1, 1, 0, 0), (1, 1, 1, 1)}
    assert kappa in got


def test_fit_neighbors_symmetric():
    kappa = (0, 0, 1, 1)
    matches = (((1, 2), 1), ((3, 4), 1))
    for other in fit_neighbors(kappa, matches, 2):
        assert kappa in fit_neighbors(other, matches, 2)


def test_fit_neighbors_requires_fit():
    with pytest.raises(ValueError):
        fit_neighbors((0, 1, 0, 1), (((1, 2), 1), ((3, 4), 1)), 2)
    with pytest.raises(ValueError):
        fit_neighbors((0, 0, 0, 2, 2), (((1, 2), 1), ((3, 5), 1)), 1)


def test_fit_neighbors_size_is_two_to_the_pairs():
    rng = random.Random(5)
    for r in (1, 2, 3):
        for matching in sorted(get_kempe(r, "planar")):
            kappa = [0] * (2 * r)
            signed = []
            for a, b in matching:
                c = rng.choice((0, 1))
                kappa[a - 1] = kappa[b - 1] = c
                signed.append(((a, b), 1))
            got = fit_neighbors(tuple(kappa), tuple(signed), 2)
            assert len(got) == 2 ** r
