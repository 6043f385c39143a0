import cmath
import io
import random
from math import gcd, log, pi

import numpy as np
import pytest

import arithphase.arith as ar


def naive_totient(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def naive_moebius(n):
    if n == 1:
        return 1
    primes = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            if e > 1:
                return 0
            primes.append(d)
        d += 1
    if m > 1:
        primes.append(m)
    return -1 if len(primes) % 2 else 1


def direct_ramanujan(q, n):
    total = 0j
    for p in range(q):
        if gcd(p, q) == 1:
            total += cmath.exp(2j * pi * p * n / q)
    return total


def direct_kloosterman(q, n, l):
    total = 0j
    for p in range(1, q):
        if gcd(p, q) != 1:
            continue
        pbar = next(b for b in range(q) if (p * b + 1) % q == 0)
        total += cmath.exp(2j * pi / q * (p * n - pbar * l))
    return total


def test_primes_up_to_matches_trial_division():
    got = list(ar.primes_up_to(1000))
    want = [n for n in range(2, 1001)
            if all(n % d for d in range(2, int(n**0.5) + 1))]
    assert got == want


def test_primes_up_to_bounds():
    assert list(ar.primes_up_to(0)) == []
    assert list(ar.primes_up_to(2)) == [2]
    with pytest.raises(ValueError):
        ar.primes_up_to(-1)
    with pytest.raises(ValueError):
        ar.primes_up_to(ar.SIEVE_CAP + 1)


def test_is_prime_small():
    sieve = set(ar.primes_up_to(10000))
    for n in range(-3, 10001):
        assert ar.is_prime(n) == (n in sieve), n


def test_is_prime_large_known():
    assert ar.is_prime(2**61 - 1)
    assert not ar.is_prime(2**62 - 1)
    assert not ar.is_prime(561)  # Carmichael pseudoprime
    assert not ar.is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7
    assert ar.is_prime(10**18 + 9)


def test_factorize_reconstructs_random():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(1, 10**6)
        f = ar.factorize(n)
        prod = 1
        for p, e in f.factors:
            assert ar.is_prime(p)
            prod *= p**e
        assert prod == n == f.value


def test_factorize_hard_composites():
    p, q = 1000003, 1000033
    assert ar.factorize(p * q).factors == ((p, 1), (q, 1))
    assert ar.factorize(2**61 - 1).factors == ((2**61 - 1, 1),)
    assert ar.factorize(2**60).factors == ((2, 60),)
    assert ar.factorize(1).factors == ()


def test_factorize_validation():
    for bad in (0, -5, 2**63):
        with pytest.raises(ValueError):
            ar.factorize(bad)
    with pytest.raises(TypeError):
        ar.factorize(3.5)


def test_factored_integer_invariants():
    with pytest.raises(ValueError):
        ar.FactoredInteger(6, ((2, 1),))  # product mismatch
    with pytest.raises(ValueError):
        ar.FactoredInteger(12, ((4, 1), (3, 1)))  # 4 not prime
    with pytest.raises(ValueError):
        ar.FactoredInteger(36, ((3, 1), (2, 1), (2, 1), (3, 1)))  # unordered
    with pytest.raises(ValueError):
        ar.FactoredInteger(2, ((2, 0),))


def test_totient_bruteforce():
    for n in range(1, 300):
        assert ar.euler_totient(n) == naive_totient(n), n


def test_moebius_bruteforce():
    for n in range(1, 300):
        assert ar.moebius(n) == naive_moebius(n), n


def test_mangoldt_values():
    assert ar.mangoldt(1) == 0.0
    assert ar.mangoldt(2) == pytest.approx(log(2))
    assert ar.mangoldt(8) == pytest.approx(log(2))
    assert ar.mangoldt(9) == pytest.approx(log(3))
    assert ar.mangoldt(6) == 0.0
    assert ar.mangoldt(12) == 0.0


def test_mangoldt_b_identity():
    for n in range(1, 200):
        assert ar.mangoldt_b(n) == pytest.approx(
            ar.mangoldt(n) * ar.euler_totient(n) / n, abs=1e-15
        )


def test_ramanujan_holder_vs_direct():
    for q in range(1, 40):
        for n in range(-10, 40):
            direct = direct_ramanujan(q, n)
            assert abs(direct.imag) < 1e-9
            assert ar.ramanujan_sum(q, n) == round(direct.real), (q, n)


def test_ramanujan_known_rows():
    assert [ar.ramanujan_sum(6, n) for n in range(7)] == [2, 1, -1, -2, -1, 1, 2]
    assert ar.ramanujan_sum(5, 0) == 4
    assert all(ar.ramanujan_sum(1, n) == 1 for n in range(-3, 4))
    # even in n, and c_q(0) counts the coprime residues
    for q in range(2, 30):
        assert ar.ramanujan_sum(q, 0) == ar.euler_totient(q)
        for n in range(1, 15):
            assert ar.ramanujan_sum(q, n) == ar.ramanujan_sum(q, -n)


def test_ramanujan_multiplicative_in_q():
    for q1, q2 in ((3, 4), (5, 8), (7, 9), (4, 25)):
        for n in range(12):
            assert ar.ramanujan_sum(q1 * q2, n) == ar.ramanujan_sum(
                q1, n
            ) * ar.ramanujan_sum(q2, n)


def test_ramanujan_bruteforce_wrapper():
    vals = ar.ramanujan_bruteforce_values(12, range(-5, 20))
    assert list(vals) == [ar.ramanujan_sum(12, n) for n in range(-5, 20)]
    assert ar.ramanujan_sum_bruteforce(30, 7) == ar.ramanujan_sum(30, 7)
    with pytest.raises(ValueError):
        ar.ramanujan_sum(0, 1)
    with pytest.raises(ValueError):
        ar.ramanujan_bruteforce_values(0, [1])


def test_kloosterman_pairs_structure():
    for q in range(2, 60):
        pairs = ar.kloosterman_pairs(q)
        assert len(pairs) == ar.euler_totient(q)
        seen = set()
        for pr in pairs:
            assert 1 <= pr.p < q and 1 <= pr.pbar < q
            assert (pr.p * pr.pbar + 1) % q == 0
            seen.add(pr.p)
        assert len(seen) == len(pairs)
    with pytest.raises(ValueError):
        ar.kloosterman_pairs(1)


def test_kloosterman_pair_invariants():
    with pytest.raises(ValueError):
        ar.KloostermanPair(p=2, pbar=3, q=5)  # 2*3 = 6 != -1 mod 5
    with pytest.raises(ValueError):
        ar.KloostermanPair(p=0, pbar=1, q=5)
    with pytest.raises(ValueError):
        ar.KloostermanPair(p=2, pbar=2, q=4)  # not coprime


def test_kloosterman_sum_vs_direct():
    for q in range(2, 25):
        for n in range(0, q):
            for l in (0, 1, q - 1):
                got = ar.kloosterman_sum(q, n, l)
                want = direct_kloosterman(q, n, l)
                assert abs(got - want) < 1e-9, (q, n, l)


def test_kloosterman_reality_and_symmetry():
    for q in range(2, 40):
        for n, l in ((0, 0), (1, 2), (3, 5), (2, 2)):
            v = ar.kloosterman_sum(q, n, l)
            assert abs(v.imag) < 1e-9
            w = ar.kloosterman_sum(q, l, n)
            assert abs(v - w) < 1e-9


def test_k6_closed_form():
    for n in range(8):
        for l in range(8):
            want = 2.0 * np.cos(pi * (n + l) / 3.0)
            assert ar.kloosterman_sum(6, n, l).real == pytest.approx(want, abs=1e-9)


def test_kloosterman_integer_view():
    assert ar.kloosterman_sum_integer(5, 0, 0) == 4
    assert ar.kloosterman_sum_integer(5, 1, 1) is None  # 0.3819..., irrational
    for n in range(5):
        for l in range(5):
            assert ar.kloosterman_sum_integer(6, n, l) is not None


def test_carmichael_known_row_and_exponent_property():
    assert [ar.carmichael_lambda(n) for n in range(1, 9)] == [1, 1, 2, 2, 4, 2, 6, 2]
    for q in range(1, 100):
        lam = ar.carmichael_lambda(q)
        orders = []
        for g in range(1, q + 1):
            if gcd(g, q) == 1:
                assert pow(g, lam, q) == 1 % q, (g, q)
                orders.append(ar.multiplicative_order(g, q))
        assert max(orders) == lam, q


def test_multiplicative_order_brute():
    for q in range(2, 60):
        for g in range(1, q):
            if gcd(g, q) != 1:
                with pytest.raises(ValueError):
                    ar.multiplicative_order(g, q)
                continue
            alpha, x = 1, g % q
            while x != 1:
                x = x * g % q
                alpha += 1
            assert ar.multiplicative_order(g, q) == alpha


def test_primitive_root_existence_and_minimality():
    for q in range(2, 200):
        phi = ar.euler_totient(q)
        brute = next(
            (g for g in range(1, q)
             if gcd(g, q) == 1 and ar.multiplicative_order(g, q) == phi),
            None,
        )
        assert ar.primitive_root(q) == brute, q
    assert ar.primitive_root(2) == 1
    assert ar.primitive_root(7) == 3
    for q in (8, 12, 15, 16):
        assert ar.primitive_root(q) is None


def test_power_cycle_known_tables():
    cases = {
        (3, 7): ([3, 2, 6, 4, 5, 1, 3, 2], 6),
        (2, 9): ([2, 4, 8, 7, 5, 1, 2, 4], 6),
        (3, 8): ([3, 1, 3, 1, 3, 1, 3, 1], 2),
    }
    for (g, q), (row, period) in cases.items():
        table = ar.power_cycle(g, q)
        assert table.period == period
        got = [table.powers[i % len(table.powers)] for i in range(8)]
        assert got == row, (g, q)


def test_power_cycle_validation():
    with pytest.raises(ValueError):
        ar.power_cycle(2, 8)  # not a unit
    with pytest.raises(ValueError):
        ar.power_cycle(3, 1)
    with pytest.raises(ValueError):
        ar.CycleTable(g=3, q=8, powers=(3, 1, 3), period=2)  # wrong length
    with pytest.raises(ValueError):
        ar.CycleTable(g=3, q=8, powers=(3, 2, 3, 2), period=2)  # not periodic


def test_tabulate_plain_and_fixed_q():
    buf = io.StringIO()
    assert ar.tabulate("totient", 10, buf) == 10
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,value" and lines[1] == "1,1" and lines[-1] == "10,4"

    buf = io.StringIO()
    assert ar.tabulate("ramanujan", 6, buf, q=6) == 7
    assert [int(r.split(",")[1]) for r in buf.getvalue().splitlines()[1:]] == [
        2, 1, -1, -2, -1, 1, 2]

    buf = io.StringIO()
    assert ar.tabulate("kloosterman", 2, buf, q=5) == 9
    rows = buf.getvalue().splitlines()
    assert rows[0] == "n,l,re,im,integer"
    assert rows[1].startswith("0,0,4,")

    buf = io.StringIO()
    ar.tabulate("carmichael", 8, buf)
    assert buf.getvalue().splitlines()[-1] == "8,2"


def test_tabulate_errors():
    with pytest.raises(ValueError):
        ar.tabulate("nope", 5, io.StringIO())
    with pytest.raises(ValueError):
        ar.tabulate("ramanujan", 5, io.StringIO())  # q missing
    with pytest.raises(ValueError):
        ar.tabulate("totient", -1, io.StringIO())


def test_numpy_integer_inputs():
    assert ar.factorize(np.int64(360)).factors == ((2, 3), (3, 2), (5, 1))
    assert ar.is_prime(np.int64(97))
    assert ar.euler_totient(np.int64(30)) == 8
    assert ar.ramanujan_sum(np.int64(6), np.int64(2)) == -1
    assert ar.carmichael_lambda(np.int64(16)) == 4
