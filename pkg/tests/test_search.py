import copy

import pytest

from grassfold.arrangement import Step, expand_factors
from grassfold.errors import SchemaError
from grassfold.grassmann import SearchBudget, certificate_digest, search_u, verify_certificate
from grassfold.grassmann.search import prune_script, script_depth


@pytest.fixture(scope="module")
def cert_p2():
    return search_u(2, seed=0)


@pytest.fixture(scope="module")
def cert_p3():
    return search_u(3, SearchBudget(max_q=2), seed=0)


def test_prune_and_depth():
    script = (
        Step(("span", (0, 1)), (2,)),
        Step(("span", (1, 2)), (3,)),
        Step(("meet", (("step", 0), ("span", (3, 4)))), (1,)),
    )
    assert script_depth(script) == 2
    pruned = prune_script(script, 2)
    assert len(pruned) == 2
    assert pruned[-1].base == ("meet", (("step", 0), ("span", (3, 4))))
    assert script_depth(()) == 0


def test_p1_is_trivial():
    doc = search_u(1)
    assert doc["complete"] and doc["failure"] is None
    assert all(not lv["excluded"] for lv in doc["levels"])
    assert verify_certificate(doc) == []


def test_p2_certificate(cert_p2):
    assert cert_p2["complete"]
    assert verify_certificate(cert_p2) == []
    for lv in cert_p2["levels"][1:]:
        fib = lv["fiber"]
        # points in a line: the fiber arrangement is q + 1 points plus infinity
        assert fib["poincare"] == expand_factors(fib["factors"])


def test_search_is_deterministic(cert_p2):
    assert search_u(2, seed=0)["digest"] == cert_p2["digest"]
    assert search_u(2, seed=1)["digest"] != cert_p2["digest"]


def test_p3_excludes_concurrency_templates(cert_p3):
    assert cert_p3["complete"]
    lv1, lv2 = cert_p3["levels"][1], cert_p3["levels"][2]
    assert lv1["fiber"]["poincare"] == [1, 6, 11, 6]
    assert lv2["excluded"]
    for t in lv2["excluded"]:
        assert t["script"], "exclusions carry a nontrivial script"
    assert all(b > 0 for b in lv2["fiber"]["factors"])
    assert verify_certificate(cert_p3) == []


def test_tampered_sample_detected(cert_p2):
    doc = copy.deepcopy(cert_p2)
    lv = doc["levels"][-1]
    lv["samples"][0]["matrix"][1][-1] = "12345/7"
    doc["digest"] = certificate_digest(doc)
    assert verify_certificate(doc)


def test_tampered_digest_detected(cert_p2):
    doc = copy.deepcopy(cert_p2)
    doc["seed"] = 99
    assert "digest mismatch" in verify_certificate(doc)


def test_tampered_fiber_detected(cert_p3):
    doc = copy.deepcopy(cert_p3)
    doc["levels"][1]["fiber"]["poincare"] = [1, 6, 11, 7]
    doc["digest"] = certificate_digest(doc)
    assert verify_certificate(doc)


def test_schema_errors():
    with pytest.raises(SchemaError):
        verify_certificate({"schema": "nope"})
    with pytest.raises(SchemaError):
        verify_certificate({"schema": "grassfold.ucert/1"})


def test_poset_budget_exhaustion():
    doc = search_u(3, SearchBudget(max_q=2, max_poset=10))
    assert not doc["complete"]
    assert doc["failure"]["reason"] == "poset-budget"
