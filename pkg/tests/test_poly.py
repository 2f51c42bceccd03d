import json
import random

import pytest

from klforge.poly import LaurentPoly, NotAQPolynomial

V = LaurentPoly.v
ONE = LaurentPoly.one()
ZERO = LaurentPoly.zero()


def random_poly(rng, span=6, terms=4):
    return LaurentPoly({rng.randint(-span, span): rng.randint(-9, 9)
                        for _ in range(rng.randint(0, terms))})


def test_add_cancellation():
    assert V(1) + ONE + (-1 * V(1)) == ONE


def test_add_identity():
    p = V(3) - 2 * V(-1)
    assert ZERO + p == p


def test_add_q_view():
    one_plus_q = LaurentPoly.from_q_coeffs({0: 1, 1: 1})
    assert one_plus_q + ONE == LaurentPoly({0: 2, -2: 1})


def test_mul_examples():
    assert (V(-1) - V(1)) * V(1) == ONE - V(2)
    p = LaurentPoly({-3: 2, 0: 1, 5: -1})
    assert p * ONE == p
    assert V(4) * V(-7) == V(-3)


def test_pow():
    assert (V(1) + ONE) ** 2 == V(2) + 2 * V(1) + ONE
    assert (V(1)) ** 0 == ONE


def test_ring_axioms_random():
    rng = random.Random(20240811)
    for _ in range(200):
        p, r, s = (random_poly(rng) for _ in range(3))
        assert (p + r) + s == p + (r + s)
        assert p + r == r + p
        assert (p * r) * s == p * (r * s)
        assert p * r == r * p
        assert p * (r + s) == p * r + p * s


def test_q_roundtrip_random():
    rng = random.Random(7)
    for _ in range(100):
        qc = {rng.randint(0, 8): rng.randint(-5, 5) for _ in range(rng.randint(0, 5))}
        qc = {j: c for j, c in qc.items() if c}
        p = LaurentPoly.from_q_coeffs(qc)
        assert p.as_q_polynomial() == qc


def test_as_q_polynomial_examples():
    assert LaurentPoly({0: 1, -2: 1}).as_q_polynomial() == {0: 1, 1: 1}
    assert LaurentPoly({-4: 1}).as_q_polynomial() == {2: 1}
    with pytest.raises(NotAQPolynomial):
        V(1).as_q_polynomial()
    with pytest.raises(NotAQPolynomial):
        V(2).as_q_polynomial()


def test_monomial_inspection():
    assert V(-2, 3).monomial() == (-2, 3)
    assert (V(1) + ONE).monomial() is None
    assert ZERO.monomial() is None
    with pytest.raises(ValueError):
        ZERO.min_exponent()


def test_json_roundtrip():
    p = LaurentPoly({-2: 1, 0: -3, 5: 2})
    for var in ("v",):
        data = json.loads(json.dumps(p.to_json(var)))
        assert LaurentPoly.from_json(data) == p
    q = LaurentPoly.from_q_coeffs({0: 1, 3: -2})
    assert LaurentPoly.from_json(q.to_json("q")) == q
    assert q.to_json("q") == {"var": "q", "coeffs": {"0": 1, "3": -2}}


def test_format():
    assert ZERO.format("q") == "0"
    assert ONE.format("q") == "1"
    assert LaurentPoly.from_q_coeffs({0: 1, 1: 1}).format("q") == "1+q"
    assert LaurentPoly.from_q_coeffs({1: 1}).format("q") == "q"
    assert LaurentPoly.from_q_coeffs({2: 3, 0: -1}).format("q") == "-1+3q^2"
    assert (V(-1) - V(1)).format("v") == "v^-1-v"


def test_hash_consistency():
    assert hash(V(2) + ONE) == hash(ONE + V(2))
    assert len({V(0), ONE, LaurentPoly({0: 1})}) == 1
