import io

from prewitt import cli, suites
from prewitt.suites import _run, report, run_suite


def test_run_records_failures_and_crashes():
    flips = iter([None, "bad value", None])

    def trial(rng):
        note = next(flips, None)
        return note

    res = _run("demo", 0, 3, trial)
    assert (res.trials, res.passed, res.ok) == (3, 2, False)
    assert res.failures == ["trial 1: bad value"]
    assert res.summary() == "demo: FAIL"

    def boom(rng):
        raise ZeroDivisionError("x")

    res = _run("crash", 0, 2, boom)
    assert res.passed == 0 and res.failures[0] == "trial 0: ZeroDivisionError: x"
    obj = res.to_json("python3 -m prewitt verify cd --seed 0 --trials 2")
    assert obj["status"] == "FAIL" and obj["repro"].startswith("python3 -m prewitt verify")


def test_streams_depend_on_seed_and_name():
    a = suites.rng_for(1, "x").random()
    assert a == suites.rng_for(1, "x").random()
    assert a != suites.rng_for(2, "x").random()
    assert a != suites.rng_for(1, "y").random()


def test_report_is_sorted_and_passing():
    rep = report("cd", 4, 10)
    assert rep["ok"] and [r["name"] for r in rep["results"]] == sorted(r["name"] for r in rep["results"])
    assert all("repro" not in r for r in rep["results"])
    assert {r.name for r in run_suite("all", 0, 2)} >= {"phi additivity over Z/9", "case(1) nonzero det"}


def test_failing_suite_exits_1(monkeypatch):
    def broken(seed, trials):
        return [_run("always fails", seed, trials, lambda rng: "no")]

    monkeypatch.setitem(suites._SUITE_FUNCS, "vandermonde", broken)
    out = io.StringIO()
    assert cli.run(["verify", "vandermonde", "--trials", "2", "--format", "text"], out, io.StringIO()) == 1
    text = out.getvalue()
    assert "always fails: FAIL (0/2)" in text
    assert "reproduce: python3 -m prewitt verify vandermonde --seed 0 --trials 2" in text
