"""Acceptance suite: one test (and one PASS/FAIL line) per criterion."""
import pytest

from affusion import characters, fusion
from affusion.verify import RUNTIME_BUDGET, run_suite

TITLES = {
    1: "S-matrix structure",
    2: "Kac-Walton equals Verlinde",
    3: "fusion lists with level thresholds",
    4: "automorphism groups",
    5: "isomorphisms between rings",
    6: "q-dimension classes",
    7: "Galois identity",
    8: "genus formula",
    9: "runtime",
}


def _cold_start():
    fusion._TABLES.clear()
    characters._S_CACHE.clear()
    for fn in (characters.dominant_weights, characters._freudenthal, characters._weight_system):
        fn.cache_clear()


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    _cold_start()
    return run_suite(cache_dir=tmp_path_factory.mktemp("fusion-cache"))


@pytest.mark.parametrize("criterion", sorted(TITLES))
def test_criterion(report, criterion, capsys):
    checks = [c for c in report.checks if c.criterion == criterion]
    failed = [c for c in checks if not c.passed]
    elapsed = report.timings.get(criterion, report.timings["total"])
    with capsys.disabled():
        status = "PASS" if checks and not failed else "FAIL"
        print(f"\n[{status}] criterion {criterion}: {TITLES[criterion]} "
              f"({len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.1f}s)")
        for c in failed:
            print(f"         failed: {c.name} {c.detail}".rstrip())
    assert checks, "no checks were run"
    assert not failed, "; ".join(f"{c.name}: {c.detail}" for c in failed)
    if criterion == 9:
        assert report.timings["total"] < RUNTIME_BUDGET
