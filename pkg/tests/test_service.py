import json

from fastapi.testclient import TestClient

from refinealg.axioms import AXIOM_SIGNATURE_TEXT, facet_axioms
from refinealg.service.app import app
from refinealg.wireformat import encode_f_morphism

client = TestClient(app)

AXIOM_SIG = json.loads(AXIOM_SIGNATURE_TEXT)

DEMO_SIG = {
    "datatypes": ["S", "M"],
    "operations": [
        {"name": "concat", "dom": ["S", "S"], "cod": ["S"]},
        {"name": "upper", "dom": ["S"], "cod": ["S"]},
    ],
    "filters": [{"name": "min_donation", "dom": ["M"]}],
}
DEMO_VAL = {
    "types": {"S": {"kind": "string"}, "M": {"kind": "money"}},
    "ops": {
        "concat": {"kind": "builtin", "fn": "concat", "args": {"sep": " "}},
        "upper": {"kind": "builtin", "fn": "uppercase"},
    },
    "filters": {"min_donation": {"kind": "builtin", "fn": "ge", "args": {"value": 2000}}},
}
FULL_NAME = {
    "dom": ["S", "S", "M"],
    "cod": ["S", "S", "S", "M"],
    "slices": [
        {"offset": 0, "gen": {"kind": "copy", "type": "S"}},
        {"offset": 2, "gen": {"kind": "copy", "type": "S"}},
        {"offset": 1, "gen": {"kind": "swap", "type": "S", "type2": "S"}},
        {"offset": 2, "gen": {"kind": "swap", "type": "S", "type2": "S"}},
        {"offset": 2, "gen": {"kind": "op", "name": "concat"}},
        {"offset": 0, "gen": {"kind": "op", "name": "upper"}},
    ],
}
DONORS_CSV = "S,S,M\nGreen,Amanda,25€\nDawson,Rupert,12€\nde Boer,John,40€\nTusk,Maria,3€\n"


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200 and resp.json() == {"status": "ok"}


def test_check_axiom_pair_equal():
    lhs, rhs = facet_axioms()["merge_after_filter"]
    resp = client.post(
        "/check",
        json={
            "signature": AXIOM_SIG,
            "left": encode_f_morphism(lhs),
            "right": encode_f_morphism(rhs),
            "oracle": True,
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["verdict"] == "equal" and body["exit_code"] == 0
    assert body["oracle_agrees"] is True
    assert body["left_tables"][0]["cases"]


def test_check_multi_sheet_is_conjectural():
    lhs, rhs = facet_axioms()["filters_commute"]
    resp = client.post(
        "/check",
        json={
            "signature": AXIOM_SIG,
            "left": encode_f_morphism(lhs),
            "right": encode_f_morphism(rhs),
        },
    )
    body = resp.json()
    assert body["verdict"] == "equal" and body["conjectural"] and body["exit_code"] == 3


def test_check_distinct_constants_not_equal():
    ident = {"dom": ["S"], "cod": ["S"], "slices": []}
    upper = {
        "dom": ["S"],
        "cod": ["S"],
        "slices": [{"offset": 0, "gen": {"kind": "op", "name": "upper"}}],
    }
    resp = client.post(
        "/check", json={"signature": DEMO_SIG, "left": ident, "right": upper}
    )
    body = resp.json()
    assert body["verdict"] == "not-equal" and body["exit_code"] == 1


def test_check_rejects_bad_signature():
    resp = client.post(
        "/check",
        json={"signature": {"datatypes": ["S"]}, "left": {}, "right": {}},
    )
    assert resp.status_code == 422
    assert "missing key" in resp.json()["error"]


def test_normalize_is_stable():
    payload = {"signature": DEMO_SIG, "workflow": FULL_NAME}
    first = client.post("/normalize", json=payload).json()
    second = client.post(
        "/normalize", json={"signature": DEMO_SIG, "workflow": first["normalized"]}
    ).json()
    assert first["normalized"] == second["normalized"]
    assert first["summary"]["kind"] == "e"
    assert first["summary"]["operations"] == 2


def test_normalize_faceted_summary():
    sig = AXIOM_SIG
    lhs, _ = facet_axioms()["merge_after_filter"]
    resp = client.post(
        "/normalize", json={"signature": sig, "workflow": encode_f_morphism(lhs)}
    )
    body = resp.json()
    assert body["summary"]["kind"] == "f"
    assert body["summary"]["filters"] == []  # the detour cancels


def test_run_full_name_workflow():
    resp = client.post(
        "/run",
        json={
            "signature": DEMO_SIG,
            "valuation": DEMO_VAL,
            "workflow": FULL_NAME,
            "inputs": [DONORS_CSV],
        },
    )
    assert resp.status_code == 200
    sheets = resp.json()["sheets"]
    assert len(sheets) == 1
    assert "DE BOER,John,John de Boer,40€" in sheets[0]


def test_run_wrong_input_count():
    resp = client.post(
        "/run",
        json={
            "signature": DEMO_SIG,
            "valuation": DEMO_VAL,
            "workflow": FULL_NAME,
            "inputs": [],
        },
    )
    assert resp.status_code == 422


def test_check_aborts_when_oracle_disagrees(monkeypatch):
    import refinealg.service.app as service_app

    monkeypatch.setattr(service_app, "symbolic_oracle_equal", lambda *a, **k: False)
    lhs, rhs = facet_axioms()["merge_after_filter"]
    resp = client.post(
        "/check",
        json={
            "signature": AXIOM_SIG,
            "left": encode_f_morphism(lhs),
            "right": encode_f_morphism(rhs),
            "oracle": True,
        },
    )
    assert resp.status_code == 500
    assert "disagree" in resp.json()["error"]


def test_export_dot():
    resp = client.post(
        "/export",
        json={"signature": DEMO_SIG, "workflow": FULL_NAME, "format": "dot"},
    )
    assert resp.status_code == 200
    assert resp.json()["content"].startswith("digraph workflow {")
