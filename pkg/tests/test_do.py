import numpy as np
import pytest

from superchan.covariance import covariance_sampler_tuple, superchannel_covariance_check
from superchan.do import (
    DOSuperParams,
    NotDOCovariantError,
    TABLE_NAMES,
    do_build_choi,
    do_from_choi,
    do_mask_tables,
    do_validate,
    from_du_params,
)
from superchan.du import build_choi, du_identity
from superchan.pauli import PauliSuperParams, pauli_super_choi
from superchan.superchannels import sandwich_superchannel

from helpers import (
    haar_unitary,
    random_hermitian_du_params,
    random_valid_du_params,
    unitary_conjugation,
)

rng = np.random.default_rng(31)

# transcription of the displayed d=2 sparsity grid for the nine-table family
PATTERN_DO_D2 = [
    "A....B....C....D",
    ".A..R......C..S.",
    "..A....BE....P..",
    "...A..R..E..Q...",
    ".R..A......S..C.",
    "B....A....D....C",
    "...R..A..Q..E...",
    "..B....AP....E..",
    "..E....PA....B..",
    "...E..Q..A..R...",
    "C....D....A....B",
    ".C..S......A..R.",
    "...Q..E..R..A...",
    "..P....EB....A..",
    ".S..C......R..A.",
    "D....C....B....A",
]

SENTINELS = dict(zip(TABLE_NAMES, (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0)))


def random_do_params(d):
    tables = {}
    for name in TABLE_NAMES:
        t = rng.normal(size=(d * d, d * d))
        if name != "A":
            t = t + 1j * rng.normal(size=(d * d, d * d))
        tables[name] = t
    return do_mask_tables(d, **tables)


def test_embedded_du_params_build_identically():
    for d in (2, 3):
        for p in (du_identity(d), random_hermitian_du_params(rng, d)):
            emb = from_du_params(p)
            assert np.array_equal(do_build_choi(emb).choi.mat, build_choi(p).choi.mat)


def test_sentinel_pattern_matches_displayed_grid():
    filled = do_mask_tables(2, **{n: np.full((4, 4), SENTINELS[n]) for n in TABLE_NAMES})
    mat = do_build_choi(filled).choi.mat
    expected = np.zeros((16, 16), dtype=complex)
    for r, row in enumerate(PATTERN_DO_D2):
        for c, letter in enumerate(row):
            if letter != ".":
                expected[r, c] = SENTINELS[letter]
    assert np.array_equal(mat, expected)


def test_round_trip_exact():
    for d in (2, 3):
        p = random_do_params(d)
        again = do_from_choi(do_build_choi(p), tol=1e-9)
        for name in TABLE_NAMES:
            assert np.array_equal(getattr(p, name), getattr(again, name)), name


def test_du_within_do_extraction():
    for d in (2, 3):
        p = random_valid_du_params(rng, d)
        extracted = do_from_choi(build_choi(p))
        for name in "ABCD":
            assert np.array_equal(getattr(extracted, name), getattr(p, name))
        for name in ("E", "P", "Q", "R", "S"):
            assert np.abs(getattr(extracted, name)).max() == 0.0


def test_support_masks_enforced():
    d = 2
    bad = np.ones((4, 4), dtype=complex)
    with pytest.raises(ValueError):
        DOSuperParams(
            d,
            np.zeros((4, 4)),
            *(np.zeros((4, 4), dtype=complex) for _ in range(7)),
            bad,  # S must vanish on i == j or a == b
        )


def test_pauli_superchannel_extracts_with_nonzero_extra_tables():
    pi = rng.dirichlet(np.ones(16)).reshape(4, 4)
    s = pauli_super_choi(PauliSuperParams(pi))
    p = do_from_choi(s)
    extra_weight = sum(np.abs(getattr(p, n)).max() for n in ("E", "P", "Q", "R", "S"))
    assert extra_weight > 1e-3


def test_generic_sandwich_is_rejected():
    s = sandwich_superchannel(
        unitary_conjugation(haar_unitary(rng, 2)),
        unitary_conjugation(haar_unitary(rng, 2)),
    )
    with pytest.raises(NotDOCovariantError):
        do_from_choi(s)


def test_do_covariance_sampling():
    for d in (2, 3):
        p = random_do_params(d)
        s = do_build_choi(p)
        v = superchannel_covariance_check(s, covariance_sampler_tuple("do", d, 17), n=50)
        assert v.max_deviation <= 1e-12
        v = superchannel_covariance_check(s, covariance_sampler_tuple("du", d, 17), n=20)
        assert v.max_deviation > 1e-3


def test_do_validate():
    # embedded valid diagonal-unitary parameters pass
    p = from_du_params(random_valid_du_params(rng, 2))
    assert do_validate(p).ok
    # every Pauli probability table passes
    pi = rng.dirichlet(np.ones(16)).reshape(4, 4)
    assert do_validate(do_from_choi(pauli_super_choi(PauliSuperParams(pi)))).ok
    # generic sentinel tables fail positivity
    assert not do_validate(random_do_params(2)).ok
