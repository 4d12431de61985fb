"""Acceptance suite: one test per criterion, each leaving a single verdict line.

The verdicts are printed in the pytest terminal summary (section "acceptance
criteria").  Checks run at the default tolerance of the engine, which is exact
equality everywhere.
"""

import json
import os

import pytest

from spincalogero.cli import main, run_scenario
from spincalogero.coxeter import build_root_system, generate_group, matmul, reflection_matrix
from spincalogero.scenarios import CATALOG, ScenarioContext, default_config

from conftest import ACCEPTANCE, GOLDEN_DIR

PAPER_SCENARIOS = ["bl_standard", "bl_orbit", "g2_six_spins", "g2_three_spins", "i2m_two_spins"]


def closure_size(rs):
    """Brute-force closure of the reflection matrices of all positive roots."""
    gens = [reflection_matrix(a) for a in rs.positive_roots]
    seen = {tuple(map(tuple, g)) for g in gens}
    frontier = list(seen)
    while frontier:
        fresh = []
        for a in frontier:
            for g in gens:
                b = tuple(map(tuple, matmul([list(r) for r in a], g)))
                if b not in seen:
                    seen.add(b)
                    fresh.append(b)
        frontier = fresh
    return len(seen)


def verdict(number, failures, detail=""):
    ok = not failures
    ACCEPTANCE[number] = (ok, detail if ok else "; ".join(failures)[:300])
    assert ok, failures


def records(report, *prefixes, **params):
    out = [c for c in report.checks if c.name.startswith(prefixes)]
    return [c for c in out if all(str(c.params.get(k)) == str(v) for k, v in params.items())]


def not_passing(recs, tag=""):
    return [f"{tag}{c.name} {c.params}: {c.status} {c.defect[:80]}" for c in recs if c.status != "pass"]


def direct(name, prefixes, **overrides):
    """Run only the checks of a scenario whose names start with one of prefixes."""
    cfg = default_config(name)
    for key, value in overrides.items():
        cfg.apply(key, str(value))
    ctx = ScenarioContext(cfg.validate())
    found = []
    for check in ctx.checks():
        if check.name.startswith(prefixes):
            status, defect, extra = ctx.run(check)
            found.append((check.name, {**check.params, **extra}, status, defect))
    return found


def direct_failures(found, tag):
    return [f"{tag}{n} {p}: {d}" for n, p, s, d in found if s is not True and s != "pass"]


@pytest.fixture(scope="module")
def b3_checks():
    return direct("bl_standard", ("group", "dunkl", "independence", "hierarchy.parity"), L=3)


def dunkl_models(catalog_reports, b3_checks, kind):
    failures, count = [], 0
    for name in ("bl_standard", "g2_six_spins", "i2m_two_spins"):
        recs = records(catalog_reports[name], kind)
        count += len(recs)
        failures += not_passing(recs, f"{name}: ")
    b3 = [f for f in b3_checks if f[0].startswith(kind)]
    count += len(b3)
    failures += direct_failures(b3, "B3: ")
    if count < 4 * 5:
        failures.append(f"only {count} checks ran")
    return failures, count


def test_criterion_01_dunkl_commutativity(catalog_reports, b3_checks):
    failures, count = dunkl_models(catalog_reports, b3_checks, "dunkl.commutativity")
    verdict(1, failures, f"{count} exact commutator checks on B2, B3, I2(6) in R3 and R2")


def test_criterion_02_equivariance(catalog_reports, b3_checks):
    failures, count = dunkl_models(catalog_reports, b3_checks, "dunkl.equivariance")
    verdict(2, failures, f"{count} equivariance checks")


def test_criterion_03_group_data(catalog_reports, b3_checks):
    failures = []
    for name in PAPER_SCENARIOS:
        failures += not_passing(records(catalog_reports[name], "group."), f"{name}: ")
    failures += direct_failures([f for f in b3_checks if f[0].startswith("group.")], "B3: ")
    for label, n, order in (("B", 2, 8), ("B", 3, 48), ("I2R3", 6, 12), ("I2R2", 6, 12)):
        rs = build_root_system(label, n)
        if len(generate_group(rs)) != order or closure_size(rs) != order:
            failures.append(f"{label}{n}: order differs from {order}")
    verdict(3, failures, "orders 8, 48, 12, 12 and every presentation relation")


def test_criterion_04_halfloop(catalog_reports):
    rep = catalog_reports["bl_orbit"]
    rel = records(rep, "relation.halfloop")
    failures = not_passing(rel)
    if {c.name for c in rel} != {"relation.halfloop", "relation.halfloop.negative_control"}:
        failures.append("relation or negative control missing")
    corrupt = run_scenario(_corrupt_cfg(), workers=1)
    bad = records(corrupt, "relation.halfloop")
    if not any(c.status == "fail" and c.defect for c in bad):
        failures.append("corrupted monodromy was not flagged")
    verdict(4, failures, "m+n <= 5 exact; corrupted monodromy reports a defect")


def _corrupt_cfg():
    cfg = default_config("bl_orbit")
    cfg.apply("corrupt", "yes")
    return cfg


def test_criterion_05_twisted(catalog_reports):
    rep = catalog_reports["bl_standard"]
    recs = records(rep, "relation.twisted", "twist.symmetry", "twist.projector_paths")
    failures = not_passing(recs)
    if len(recs) < 3:
        failures.append("twisted checks missing")
    verdict(5, failures, "order-2 twisted relation through m+n <= 5 and twist symmetry")


def test_criterion_06_intertwining(catalog_reports):
    failures = []
    for name in PAPER_SCENARIOS:
        recs = records(catalog_reports[name], "intertwine", "projector.idempotent")
        if len(recs) != 2 or any(c.name == "intertwine" and c.params.get("n_max") != 7 for c in recs):
            failures.append(f"{name}: intertwining or idempotence check missing")
        failures += not_passing(recs, f"{name}: ")
    failures += not_passing(records(catalog_reports["g2_three_spins"], "projector.factorization"), "g2_three: ")
    verdict(6, failures, "n <= 7 for all five models, Lambda^2 = Lambda, Lambda = Lambda_Q Lambda_P = Lambda_P Lambda_Q")


def test_criterion_07_hamiltonians(catalog_reports):
    failures, count = [], 0
    for name in PAPER_SCENARIOS:
        rep = catalog_reports[name]
        recs = records(rep, "hamiltonian.identity", form="displayed") + records(rep, "hamiltonian.free_limit")
        count += len(recs)
        failures += not_passing(recs, f"{name}: ")
    verdict(7, failures, f"{count} displayed Hamiltonian and free-limit identities")


def test_criterion_08_hierarchy(catalog_reports):
    failures = []
    for name in PAPER_SCENARIOS:
        recs = records(catalog_reports[name], "hierarchy.commutation", "hierarchy.trace_is_scalar")
        if len(recs) != 2:
            failures.append(f"{name}: hierarchy checks missing")
        failures += not_passing(recs, f"{name}: ")
    verdict(8, failures, "[J_m, J_n] = 0 and [J_m, B^(n) Lambda] = 0 for m, n <= 7")


def test_criterion_09_parity(catalog_reports, b3_checks):
    failures = []
    for name in ("bl_standard", "bl_orbit"):
        recs = records(catalog_reports[name], "hierarchy.parity")
        failures += not_passing(recs, f"{name}: ") if recs else [f"{name}: parity check missing"]
    failures += direct_failures([f for f in b3_checks if f[0] == "hierarchy.parity"], "B3: ")
    verdict(9, failures, "odd coefficients of b(u) Lambda vanish")


def test_criterion_10_independence(catalog_reports, b3_checks):
    failures = not_passing(records(catalog_reports["bl_standard"], "independence.rank", rank=2), "L=2: ")
    l3 = [f for f in b3_checks if f[0] == "independence.rank"]
    failures += direct_failures(l3, "L=3: ")
    if not l3 or l3[0][1].get("rank") != 3:
        failures.append(f"L=3: rank {l3[0][1].get('rank') if l3 else None}")
    for name in ("g2_six_spins", "g2_three_spins"):
        recs = records(catalog_reports[name], "independence.subring")
        failures += not_passing(recs, f"{name}: ") if recs else [f"{name}: subring check missing"]
    recs = records(catalog_reports["i2m_two_spins"], "independence.greedy")
    failures += not_passing(recs, "i2m: ")
    if not recs or recs[0].params.get("orders") != ["u^-2", "u^-7"]:
        failures.append(f"i2m: independent orders {recs[0].params.get('orders') if recs else None}")
    verdict(10, failures, "rank L for L = 2, 3; u^-4..u^-6 in the P, H subring, J6 outside; u^-2, u^-7 for I2(6)")


def test_criterion_11_complex_structure(catalog_reports):
    rep = catalog_reports["i2m_two_spins"]
    recs = records(rep, "complex_dunkl.conjugation", "hierarchy.j6")
    failures = not_passing(recs)
    if len([c for c in recs if c.name == "hierarchy.j6_commutes_with_h"]) != 5:
        failures.append("[H, J6] not checked at every k point")
    verdict(11, failures, "conjugation relations and [H, J6] = 0 at five k points")


def test_criterion_12_i2m_generalization():
    found = direct("i2m_two_spins", ("independence",), m=4)
    orders = found[0][1].get("orders") if found else None
    failures = direct_failures(found, "m=4: ")
    if orders != ["u^-3", "u^-5"]:
        failures.append(f"m=4: independent invariants at {orders}, expected ['u^-3', 'u^-5']")
    verdict(12, failures, "m=4 invariants at u^-3 and u^-5")


def test_criterion_13_reporting(catalog_reports, tmp_path):
    failures = []
    again = run_scenario(default_config("bl_standard"), workers=1)
    if again.to_json(timing=False) != catalog_reports["bl_standard"].to_json(timing=False):
        failures.append("repeat run differs")
    for name in CATALOG:
        path = os.path.join(GOLDEN_DIR, f"{name}.json")
        if not os.path.exists(path):
            failures.append(f"{name}: golden report missing")
            continue
        with open(path, encoding="utf-8") as fh:
            if fh.read() != catalog_reports[name].to_json(timing=False):
                failures.append(f"{name}: differs from golden report")
    good = tmp_path / "good.cfg"
    good.write_text("scenario = bl_orbit\n")
    bad = tmp_path / "bad.cfg"
    bad.write_text("scenario = bl_orbit\ncorrupt = yes\n")
    out = tmp_path / "r.json"
    if main(["report", str(good), "--out", str(out)]) != 0 or not json.loads(out.read_text())["checks"]:
        failures.append("all-pass run did not exit 0")
    if main(["verify", str(bad)]) != 1:
        failures.append("failing run did not exit 1")
    for name in CATALOG:
        expected = 0 if catalog_reports[name].passed else 1
        if (catalog_reports[name].summary["fail"] == 0) != (expected == 0):
            failures.append(f"{name}: exit code contract")
    verdict(13, failures, "byte-identical JSON, golden reports for every scenario, exit codes 0/1")
