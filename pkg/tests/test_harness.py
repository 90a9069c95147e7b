import itertools
import json

import pytest

from conftest import build_f1
from tpsa.errors import BudgetExceeded, IncompatibleFixture, ParseError, SchemaError, UnknownCheck
from tpsa.harness.cache import LatticeCache
from tpsa.harness.checks import REGISTRY, CheckContext, check_seed, compatible_checks, run_all, run_check
from tpsa.harness.cli import main
from tpsa.harness.fixtures import bundled_names, fixture_from_dict, load_fixture, parse_fixture
from tpsa.harness.generator import GeneratorCaps, GeneratorStats, fixture_generator
from tpsa.harness.search import search_open_question
from tpsa.paction import check_axioms
from tpsa.report import VerificationReport, emit_report
from tpsa.ringcore import FactorSpec, ring_product

F3 = {
    "name": "f3x",
    "presentation": "finite_support",
    "ring": {"factors": [{"kind": "cyclic", "modulus": 2}, {"kind": "cyclic", "modulus": 2}]},
    "bound": 1,
    "idempotents": {"1": [1, 0], "-1": [0, 1]},
    "alpha": {"1": [[[0, 0], [0, 0]], [[0, 1], [1, 0]]]},
}


def test_load_bundled_round_trip():
    for name in bundled_names():
        fx = load_fixture(name)
        again = fixture_from_dict(fx.to_json())
        assert again.digest() == fx.digest()
        assert check_axioms(fx.action).passed
    assert load_fixture("f1.json").digest() == load_fixture("f1").digest()


def test_f1_fixture_matches_construction():
    fx = load_fixture("f1").action
    ref = build_f1()
    assert [fx.idem_label(i) for i in range(3)] == [ref.idem_label(i) for i in range(3)]


def test_schema_errors():
    bad = json.loads(json.dumps(F3))
    bad["ring"]["factors"][0]["modulus"] = 1
    with pytest.raises(SchemaError):
        fixture_from_dict(bad)
    bad = json.loads(json.dumps(F3))
    bad["idempotents"]["1"] = [1, 1]
    bad["idempotents"]["-1"] = [0, 1]
    with pytest.raises(SchemaError):
        fixture_from_dict(bad)
    g = {"name": "g", "presentation": "restricted_global",
         "ring": {"factors": [{"kind": "cyclic", "modulus": 4}]},
         "automorphism": {"permutation": [0]}, "e": [2]}
    with pytest.raises(SchemaError):
        fixture_from_dict(g)
    with pytest.raises(SchemaError):
        fixture_from_dict({**F3, "colour": "red"})
    with pytest.raises(SchemaError):
        fixture_from_dict({k: v for k, v in F3.items() if k != "alpha"})


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_fixture('{"name": "x",\n  "ring": }', source="broken.json")
    assert str(info.value).startswith("broken.json:2:")


def test_missing_fixture():
    with pytest.raises(ParseError):
        load_fixture("no_such_fixture_anywhere")


def test_unknown_and_incompatible_checks():
    f1 = load_fixture("f1")
    with pytest.raises(UnknownCheck):
        run_check("NOPE-9.9", f1)
    with pytest.raises(IncompatibleFixture):
        run_check("RAD-2.9", f1)


def test_check_seed_independent_of_order():
    assert check_seed("AX-1.1", 7) == check_seed("AX-1.1", 7)
    assert check_seed("AX-1.1", 7) != check_seed("ISO-2.1", 7)


@pytest.mark.parametrize("name", ["f1", "f2", "f3", "f3p", "trivial_global"])
def test_all_compatible_checks_run(name):
    fx = load_fixture(name)
    reports = run_all(fx, {"samples": 200})
    assert [r.check_id for r in reports] == compatible_checks(fx)
    for r in reports:
        assert r.status in ("pass", "reported"), (r.check_id, r.witnesses)
        assert r.well_formed()


def test_f3_check_examples():
    f3 = load_fixture("f3")
    rad = run_check("RAD-2.9", f3)
    assert rad.passed and rad.details["nil_star_size"] == 1 == rad.details["formula_size"]
    prime = run_check("PRIME-2.4b", f3)
    assert prime.passed
    w = prime.witnesses[0]
    assert w["strongly_alpha_prime_pair"] == ((0, 1), (1, 0))
    assert w["power_zero_divisor_pair"] is not None
    assert run_check("AX-1.1", load_fixture("f1")).passed


def test_registry_covers_required_ids():
    required = {"AX-1.1", "ISO-2.1", "CRIT-2.3", "PRIME-2.4a", "PRIME-2.4b", "PRIME-2.4c", "RAD-2.9",
                "SEMI-2.10", "DICH-2.11", "CHAIN-3.1", "RANK-3.3"}
    assert required <= set(REGISTRY)


def test_cache_matches_cold_computation(tmp_path):
    fx = load_fixture("f3p")
    warm = LatticeCache(tmp_path)
    first = CheckContext(fx, cache=warm).lattice("laurent")
    second = CheckContext(load_fixture("f3p"), cache=warm).lattice("laurent")
    cold = CheckContext(load_fixture("f3p"), cache=LatticeCache(tmp_path, enabled=False)).lattice("laurent")
    assert warm.hits == 1 and warm.misses == 1
    assert [I.bits for I in first] == [I.bits for I in second] == [I.bits for I in cold]


def test_cache_rejects_wrong_ring(tmp_path):
    cache = LatticeCache(tmp_path)
    fx = load_fixture("f3")
    cache.lattice(fx.action.ring, fx.digest(), "lattice:base")
    key = cache.key(fx.digest(), "lattice:base")
    assert cache.load(fx.action.ring, key) is not None
    assert cache.load(ring_product([FactorSpec.cyclic(3)]), key) is None


def test_generator_deterministic():
    a = [fx.digest() for fx in itertools.islice(fixture_generator(3), 12)]
    b = [fx.digest() for fx in itertools.islice(fixture_generator(3), 12)]
    assert a == b
    first = next(fixture_generator(0))
    assert check_axioms(first.action).passed


def test_generator_caps():
    stats = GeneratorStats()
    caps = GeneratorCaps(allow_matrix=False)
    for fx in itertools.islice(fixture_generator(1, caps, stats), 15):
        assert all(f.kind == "cyclic" for f in fx.model.ring.factors)
        assert fx.action.ring.cardinality <= caps.max_ring
    assert stats.produced == 15


def test_report_invariants(tmp_path):
    with pytest.raises(ValueError):
        VerificationReport("X", "maybe")
    fail = run_check("AX-1.1", fixture_from_dict({**F3, "name": "bad", "w": [{"i": 0, "j": 0, "value": [0, 0]}]}))
    assert fail.status == "fail" and fail.witnesses
    out = tmp_path / "r.json"
    text = emit_report(fail, out)
    assert out.read_text() == text
    assert json.loads(text)["status"] == "fail"
    again = emit_report(run_check("AX-1.1", fixture_from_dict({**F3, "name": "bad",
                                                               "w": [{"i": 0, "j": 0, "value": [0, 0]}]})))
    assert again == text


def test_search_semantics():
    rep = search_open_question("OQ-2.5")
    assert rep.status == "reported" and rep.witnesses[0]["fixture"] == "f3"
    with pytest.raises(BudgetExceeded) as info:
        search_open_question("OQ-2.16i", budget=2)
    assert info.value.report.details["fixtures_scanned"] == 2
    with pytest.raises(UnknownCheck):
        search_open_question("OQ-9.9")


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["validate", "f1"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "pass"
    assert main(["validate", "does_not_exist.json"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    assert main(["validate", str(bad)]) == 2
    assert main(["verify", "NOPE", "f1"]) == 2
    assert main(["verify", "RAD-2.9", "f1"]) == 2
    assert main(["search", "OQ-2.16ii", "--budget", "1"]) == 3
    assert main(["bogus"]) == 2
    capsys.readouterr()
    out = tmp_path / "rep.json"
    assert main(["verify", "AX-1.1", "f3", "--json-out", str(out), "--no-cache"]) == 0
    assert json.loads(out.read_text())["check_id"] == "AX-1.1"


def test_cli_commands(capsys):
    for argv in (["radicals", "f3"], ["primes", "f3", "--ring", "laurent"], ["rank", "f3"], ["checks"]):
        assert main(argv) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["status"] in ("pass", "reported")
    assert main(["primes", "f1", "--ring", "power"]) == 2
