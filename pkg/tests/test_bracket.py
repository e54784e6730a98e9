"""Poisson brackets: pinned identities, algebraic laws, and consistency."""

import pytest

from cmpoisson.bracket import (
    bracket,
    bracket_raw_terms,
    bracket_standard,
    bracket_traceless,
    jacobi_check,
)
from cmpoisson.grammar import format_polynomial as F, format_terms, parse_polynomial as P
from cmpoisson.poly import PLAIN, TRACELESS
from conftest import random_polynomial


def test_canonical_pair_gives_n():
    assert F(bracket_standard(P("tr(X)", PLAIN), P("tr(Y)", PLAIN))) == "n"


def test_same_letter_powers_commute():
    for j, k in ((1, 2), (2, 3), (3, 5)):
        b = bracket_standard(P(f"tr(X^{j})", PLAIN), P(f"tr(X^{k})", PLAIN))
        assert b.is_zero()


def test_squares_bracket_to_crossed_trace():
    b = bracket_standard(P("tr(X^2)", PLAIN), P("tr(Y^2)", PLAIN))
    assert b == P("4*tr(X Y)", PLAIN)


def test_corrected_power_pair_identity():
    # {tr A^j, tr B^q} = jq tr A^{j-1}B^{q-1} - (jq/n) tr A^{j-1} tr B^{q-1}
    b = bracket_traceless(P("tr(A^3)", TRACELESS), P("tr(B^2)", TRACELESS))
    assert b == P("6*tr(A^2 B) - 6*n^-1*tr(A^2)*tr(B)", TRACELESS)
    assert b == P("6*tr(A^2 B)", TRACELESS)  # tr B = 0


def test_weight_identity():
    b = bracket_traceless(P("tr(A^2 B)", TRACELESS), P("tr(A B)", TRACELESS))
    assert b == P("tr(A^2 B)", TRACELESS)


def test_single_splice_identity():
    b = bracket_traceless(P("tr(A^4)", TRACELESS), P("tr(B^2)", TRACELESS))
    assert b == P("8*tr(A^3 B)", TRACELESS)


def test_mode_mismatch_rejected():
    with pytest.raises(ValueError):
        bracket(P("tr(X)", PLAIN), P("tr(A^2)", TRACELESS))
    with pytest.raises(ValueError):
        bracket_standard(P("tr(A^2)", TRACELESS), P("tr(A^2)", TRACELESS))


def test_central_symbols_bracket_like_the_plane():
    # {tr X, tr Y} = n survives the traceless substitution
    sx = P("tr(X)", TRACELESS)
    sy = P("tr(Y)", TRACELESS)
    assert F(bracket_traceless(sx, sy)) == "n"
    assert bracket_traceless(sx, P("tr(A^2 B)", TRACELESS)).is_zero()


def test_raw_terms_show_prereduction_formula():
    raw = bracket_raw_terms(P("tr(A^2)", TRACELESS), P("tr(B^2)", TRACELESS))
    assert format_terms(raw, TRACELESS) == "4*tr(A B) - 4*n^-1*tr(A)*tr(B)"


def test_antisymmetry(rng):
    for mode in (PLAIN, TRACELESS):
        for _ in range(30):
            f = random_polynomial(rng, mode, max_degree=6, allow_central=True)
            g = random_polynomial(rng, mode, max_degree=6, allow_central=True)
            assert (bracket(f, g) + bracket(g, f)).is_zero()


def test_leibniz_rule(rng):
    for mode in (PLAIN, TRACELESS):
        for _ in range(20):
            f = random_polynomial(rng, mode, max_degree=4, allow_central=True)
            g = random_polynomial(rng, mode, max_degree=4, allow_central=True)
            h = random_polynomial(rng, mode, max_degree=4, allow_central=True)
            lhs = bracket(f * g, h)
            rhs = f * bracket(g, h) + g * bracket(f, h)
            assert lhs == rhs


def test_jacobi_with_central_symbols(rng):
    for _ in range(10):
        f = random_polynomial(rng, TRACELESS, max_degree=4, max_terms=1, allow_central=True)
        g = random_polynomial(rng, TRACELESS, max_degree=4, max_terms=1, allow_central=True)
        h = random_polynomial(rng, TRACELESS, max_degree=4, max_terms=1, allow_central=True)
        assert jacobi_check(f, g, h).is_zero()


def test_jacobi_identity_examples():
    a = P("tr(A^2)", TRACELESS)
    b = P("tr(B^2)", TRACELESS)
    c = P("tr(A B)", TRACELESS)
    assert jacobi_check(a, b, c).is_zero()
    assert jacobi_check(P("tr(A^3)", TRACELESS), b, P("tr(A B^2)", TRACELESS)).is_zero()


def test_jacobi_on_random_triples(rng):
    for _ in range(15):
        f = random_polynomial(rng, TRACELESS, max_degree=5, max_terms=1)
        g = random_polynomial(rng, TRACELESS, max_degree=5, max_terms=1)
        h = random_polynomial(rng, TRACELESS, max_degree=5, max_terms=1)
        assert jacobi_check(f, g, h).is_zero()


def test_bracket_bidegree_bound(rng):
    from conftest import straight_product_poly

    for _ in range(40):
        j, k = int(rng.integers(0, 5)), int(rng.integers(0, 5))
        p, q = int(rng.integers(0, 5)), int(rng.integers(0, 5))
        if j + k < 2 or p + q < 2:
            continue
        b = bracket_traceless(
            straight_product_poly(((j, k),)), straight_product_poly(((p, q),))
        )
        if b.is_zero():
            continue
        bi, bj = b.bidegree()
        assert bi <= j + p - 1 and bj <= k + q - 1


def _brute_force_word_bracket(v, w, mode):
    """Flat-letter reimplementation of the single-word bracket (test oracle).

    Enumerates letter positions directly instead of run-length cuts."""
    from cmpoisson.poly import TracePolynomial
    from cmpoisson.ring import QnCoeff
    from cmpoisson.words import FIRST, SECOND, Word, canonicalize

    corrected = mode == TRACELESS

    def cuts(letters, letter):
        out = []
        for i, l in enumerate(letters):
            if l == letter:
                out.append(tuple(letters[i + 1:]) + tuple(letters[:i]))
        return out

    lv, lw = v.letters(), w.letters()
    terms = []
    for sign, a, b in ((1, FIRST, SECOND), (-1, SECOND, FIRST)):
        for cv in cuts(lv, a):
            for cw in cuts(lw, b):
                joined = canonicalize(Word.from_letters(cv + cw))
                terms.append((((0, 0), (joined,)), QnCoeff.of(sign)))
                if corrected:
                    terms.append(
                        (
                            (
                                (0, 0),
                                (
                                    canonicalize(Word.from_letters(cv)),
                                    canonicalize(Word.from_letters(cw)),
                                ),
                            ),
                            QnCoeff.of(-sign, -1),
                        )
                    )
    return TracePolynomial(mode, terms)


def test_splice_engine_matches_flat_letter_oracle(rng):
    from cmpoisson.bracket import _word_bracket
    from cmpoisson.words import Word, canonicalize

    for mode in (PLAIN, TRACELESS):
        for _ in range(30):
            v = canonicalize(Word.from_letters([int(rng.integers(0, 2)) for _ in range(int(rng.integers(1, 8)))]))
            w = canonicalize(Word.from_letters([int(rng.integers(0, 2)) for _ in range(int(rng.integers(1, 8)))]))
            assert _word_bracket(v, w, mode) == _brute_force_word_bracket(v, w, mode)


def test_traceless_substitution_is_a_poisson_map(rng):
    for _ in range(15):
        f = random_polynomial(rng, PLAIN, max_degree=5)
        g = random_polynomial(rng, PLAIN, max_degree=5)
        lhs = bracket_standard(f, g).to_traceless()
        rhs = bracket_traceless(f.to_traceless(), g.to_traceless())
        assert lhs == rhs
        # the restriction to tr X = tr Y = 0 agrees a fortiori
        assert lhs.substitute_central() == rhs.substitute_central()
