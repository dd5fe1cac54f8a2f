"""Acceptance gate: golden instances and engine property suites.

Each criterion records one PASS/FAIL line, printed in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py``.
"""

import random
import subprocess
import sys

import numpy as np
import pytest

from fibertool.blowup import fiber_cone_module, tor1_dense_values, tor1_length, tor1_lengths
from fibertool.groebner import buchberger
from fibertool.modules import Submodule, depth_by_regular_sequence
from fibertool.verdict import Analysis, check_additivity, check_fiber_quotient, check_fiber_freeness

from conftest import CORPUS, GOLDEN, load, record, ring

SEED = 42


@pytest.fixture(scope="module")
def analyses():
    return {name: Analysis(load(name), SEED) for name in GOLDEN}


def test_1_example_reproduction():
    an = Analysis(load("ex5"), SEED, nmax=10, cutoff=12)
    assert an.A.field.p == 32003
    lengths = tor1_lengths(an.M, an.I, 10)
    # the hand computation (L ∩ y^n F)/(y^n L) = y^n A / y^(n+1) A, recounted densely
    dense = [sum(tor1_dense_values(an.M, an.I, n, 12)) for n in range(1, 11)]
    checks = {
        "tor": lengths == dense == [1] * 10,
        "deg": an.tor.degree == 0,
        "cone": an.cone_hf == [1] * 13,
        "module": an.fmod_hf == [2] + [1] * 12,
        "not_free": an.freeness == {"free_to_cutoff": False, "witness_degree": 1},
        "depth": an.fmod.depth == 0,
    }
    ok = record("1 example reproduction (ex5)", all(checks.values()),
                " ".join(k for k, v in checks.items() if not v) or "Tor=1, deg 0, HF 2,1,1.., witness 1, depth 0")
    assert ok, checks


def test_2_regular_sequence_vanishing(analyses):
    an = analyses["lemma21"]
    lengths = tor1_lengths(an.M, an.I, 10)
    checks = {
        "tor": lengths == [0] * 10,
        "deg": an.tor.poly is not None and an.tor.poly.to_json()["degree"] == "minus_infinity",
        "free": an.freeness["free_to_cutoff"],
        "hf": an.fmod_hf == [1] * (an.D + 1),
    }
    ok = record("2 regular-sequence vanishing", all(checks.values()),
                " ".join(k for k, v in checks.items() if not v) or "Tor=0, deg minus_infinity, free, HF 1")
    assert ok, checks


def test_3_additivity_along_superficial_element(analyses):
    an = analyses["a1"]
    v = check_additivity(an)
    sup = an.superficial
    ok = (
        v.applicable
        and v.status == "consistent"
        and v.details["additive"]
        and v.details["degree_drop"]
        and sup.passed
        and all(sup.checks["M"].vv)
    )
    record("3 additivity and degree drop (a1, seed 42)", ok,
           f"status {v.status}, window {v.details.get('window')}, deg {v.details.get('deg_M')} -> {v.details.get('deg_N')}")
    assert ok, v.details


def test_4_fiber_of_quotient(analyses):
    parts = []
    ok = True
    for name in ("a1", "free"):
        v = check_fiber_quotient(analyses[name])
        good = (v.status == "consistent"
                and len(v.details["hf_fiber_of_quotient"]) == 12
                and v.details["hf_fiber_of_quotient"] == v.details["hf_quotient_of_fiber"])
        ok &= good
        parts.append(f"{name}:{v.status}")
    record("4 fiber module of the quotient, n <= 11", ok, " ".join(parts))
    assert ok


EXPECTED_LABELS = {
    # applicable, antecedent_held
    "ex5": (True, False),
    "a1": (True, False),
    "lemma21": (False, True),
    "free": (False, True),
}


def test_5_freeness_criterion_consistency(analyses):
    parts = []
    ok = True
    for name in GOLDEN:
        an = analyses[name]
        v = check_fiber_freeness(an)
        deg = an.tor.degree
        bound = deg is None or deg <= an.l_I - 1
        antecedent = deg is None or deg < an.d - 1
        good = (v.consistent is True and (v.applicable, v.antecedent_held) == EXPECTED_LABELS[name]
                and v.antecedent_held == antecedent and bound and v.details["degree_bound"])
        ok &= good
        parts.append(f"{name}:{v.status}")
    record("5 freeness criterion consistent, labels and degree bound", ok, " ".join(parts))
    assert ok


def _random_poly(rng, S, homogeneous):
    f = S.zero()
    d = rng.randint(1, 3)
    for _ in range(rng.randint(1, 3)):
        if homogeneous:
            cuts = sorted(rng.randint(0, d) for _ in range(S.nvars - 1))
            e = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        else:
            e = [rng.randint(0, 3) for _ in range(S.nvars)]
            while sum(e) > 3:
                e[rng.randrange(S.nvars)] = 0
        f = f + S.monomial(e, rng.randint(1, 32002))
    return f


def _random_ideals(homogeneous, count=200, seed=2024):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        S = ring("xyz"[: rng.randint(1, 3)])
        gens = [g for g in (_random_poly(rng, S, homogeneous) for _ in range(rng.randint(1, 4))) if g]
        if gens:
            out.append((S, gens))
    return out


def test_6a_normal_forms_and_certificates():
    rng = random.Random(6)
    failures = 0
    for S, gens in _random_ideals(False):
        G = buchberger(gens)
        good = G.verify() and G.is_reduced() and all(G.contains(g) for g in gens)
        for _ in range(3):
            f = _random_poly(rng, S, False) * rng.choice(gens) + _random_poly(rng, S, False)
            r = G.normal_form(f)
            good &= G.normal_form(r) == r and G.contains(f - r)
        failures += not good
    ok = record("6a normal-form idempotence and S-pair certificates (200 ideals)", failures == 0,
                f"{failures} failures")
    assert ok


def test_6b_hilbert_function_two_ways():
    failures = 0
    for S, gens in _random_ideals(True, seed=77):
        U = Submodule.ideal(gens, S)
        failures += U.hilbert_values(4) != U.dense_values(4)
    ok = record("6b Hilbert function: initial module vs dense ranks (200 ideals, deg <= 4)", failures == 0,
                f"{failures} failures")
    assert ok


def test_6c_tor_oracle(analyses):
    bad = []
    for name in GOLDEN:
        an = analyses[name]
        for n in range(1, 4):
            dense = tor1_dense_values(an.M, an.I, n, an.D)
            sub = tor1_length(an.M, an.I, n)
            if dense[-1] != 0 or sum(dense) != sub or tor1_length(an.M, an.I, n, balanced=True) != sub:
                bad.append(f"{name}:{n}")
    ok = record("6c Tor subquotient vs dense linear algebra (n <= 3)", not bad, " ".join(bad) or "all agree")
    assert ok


def test_6d_auslander_buchsbaum(analyses):
    rng = np.random.default_rng(SEED)
    mods = []
    for name in GOLDEN:
        an = analyses[name]
        mods += [(f"{name}:A", an.ring_module), (f"{name}:M", an.M),
                 (f"{name}:F(I)", fiber_cone_module(an.A, an.I).module), (f"{name}:F_I(M)", an.fmod.module)]
    bad = []
    for label, M in mods:
        if M.is_zero:
            continue
        res = M.resolution()
        oracle = depth_by_regular_sequence(M, rng)
        if not res.is_complex() or res.length + oracle != M.ring.nvars:
            bad.append(label)
    ok = record("6d Auslander-Buchsbaum on every resolved module", not bad,
                " ".join(bad) or f"{len(mods)} modules")
    assert ok


def test_7_determinism():
    outputs = {}
    for name in GOLDEN:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "fibertool", "check", "--input", str(CORPUS / f"{name}.alg"),
                 "--seed", str(SEED), "--format", "json"],
                capture_output=True, check=False,
            ).stdout
            for _ in range(2)
        ]
        outputs[name] = runs[0] == runs[1] and len(runs[0]) > 0
    ok = record("7 byte-identical JSON for check --seed 42", all(outputs.values()),
                " ".join(k for k, v in outputs.items() if not v) or "4 instances")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
