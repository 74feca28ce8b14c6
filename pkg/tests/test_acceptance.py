"""Acceptance gate: one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -s`` (the lines are printed
even without ``-s``). The timing criterion is marked ``slow``.
"""
import json
import statistics
import time
from fractions import Fraction
from itertools import product

import jsonschema
import numpy as np
import pytest

from conftest import params
from fairpart import (
    Instance,
    Partition,
    almost_uniform_partition,
    audit,
    brute_force_solve,
    dp_solve,
    find_deviating_groups,
    gen_adversarial,
    gen_clustered,
    gen_mostly_clustered,
    guarantee_check,
    partition_clustered,
    schemas,
)
from fairpart.cli import main
from oracles import feasible as naive_feasible


@pytest.fixture
def report(capsys):
    def _report(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        assert ok, detail
    return _report


def _from_bits(bits, n):
    return Instance(np.array([(bits >> k) & 1 for k in range(n)], dtype=np.uint8))


def test_criterion_1_exhaustive_oracle_equivalence(report):
    grids = [(10, 2, "0", ["1/2", "1"]), (12, 3, "1/3", ["1/2", "2/3"])]
    checked = mismatches = 0
    for n, sigma, eps, betas in grids:
        for beta, mode in product(betas, ("inclusive", "strict")):
            p = params(sigma, eps, beta, mode)
            for bits in range(2 ** n):
                x = _from_bits(bits, n)
                a = dp_solve(x, p, verify=False).feasible
                b = brute_force_solve(x, p).feasible
                checked += 1
                mismatches += a != b
    report("1 exhaustive dp == oracle", mismatches == 0, f"{checked} cases, {mismatches} mismatches")


def test_criterion_2_randomized_oracle_equivalence(report):
    rng = np.random.default_rng(20240601)
    epss = ["0", "1/4", "1/3", "1/2"]
    betas = ["1/2", "5/8", "2/3", "1"]
    mismatches = bad_audits = naive_disagree = feasible = 0
    for trial in range(1000):
        n = int(rng.integers(20, 41))
        sigma = int(rng.choice([4, 5, 8]))
        eps = epss[int(rng.integers(4))]
        beta = betas[int(rng.integers(4))]
        x = Instance((rng.random(n) < rng.random()).astype(np.uint8))
        for mode in ("inclusive", "strict"):
            p = params(sigma, eps, beta, mode)
            a = dp_solve(x, p, verify=False)
            b = brute_force_solve(x, p)
            mismatches += a.feasible != b.feasible
            for r in (a, b):
                if r.feasible:
                    feasible += 1
                    rep = audit(x, r.partition, p)
                    bad_audits += not (rep.is_fair and rep.alpha == 0)
            # an independent string-based search on a subsample
            if trial % 50 == 0:
                want = naive_feasible(x.to_string(), sigma, Fraction(eps), Fraction(beta),
                                      mode == "strict")
                naive_disagree += want != b.feasible
    ok = mismatches == 0 and bad_audits == 0 and naive_disagree == 0
    report("2 randomized dp == oracle, partitions audit fair", ok,
           f"2000 cases, {mismatches} mismatches, {bad_audits} bad audits, "
           f"{naive_disagree} naive disagreements, {feasible} feasible partitions")


def test_criterion_3_alternating_runs_construction(report):
    p = params(8, "1/4", "5/8", "inclusive")
    results = {}
    for n in (22, 26, 30):
        g = gen_adversarial(8, "1/4", "5/8", n)
        assert g.meta["run_length"] == 5 and Fraction(g.meta["threshold_n0"]) == 20
        results[n] = brute_force_solve(g.instance, p, "circle").feasible
        naive = naive_feasible(g.instance.to_string(), 8, Fraction(1, 4), Fraction(5, 8), False,
                               circular=True)
        assert naive == results[n]
    x = gen_adversarial(8, "1/4", "5/8", 30).instance
    groups = find_deviating_groups(x, Partition.from_sizes([6] * 5), p)
    five_red = [g for g in groups if g.color.letter == "R" and g.unhappy_count == 5]
    ok = not any(results.values()) and bool(five_red)
    report("3 alternating runs of 5 infeasible on circle, uniform-6 has 5-red group", ok,
           f"circle feasible by n {results} (string oracle agrees), first 5-red group "
           f"{five_red[0].interval.render() if five_red else None}")


def test_criterion_4_uniform_guarantee_soundness(report):
    betas = [Fraction(8 + k, 16) for k in range(9)]
    certified = audited = failures = skipped = 0
    for n, sigma, eps in product((96, 200), (8, 10), ("0", "1/4", "1/3")):
        for beta, mode in product(betas, ("inclusive", "strict")):
            p = params(sigma, eps, beta, mode)
            try:
                part = almost_uniform_partition(n, p)
            except ValueError:
                skipped += 1
                continue
            if not guarantee_check(n, p):
                continue
            certified += 1
            rng = np.random.default_rng([n, sigma, beta.numerator, beta.denominator])
            for _ in range(200):
                x = Instance((rng.random(n) < rng.random()).astype(np.uint8))
                audited += 1
                failures += not audit(x, part, p, first_only=True).is_fair
    ok = failures == 0 and certified > 0
    report("4 certified uniform partitions audit fair", ok,
           f"{certified} certified points, {audited} audits, {failures} failures, "
           f"{skipped} grid points without an allowable near-equal cut")


def _clustered_instance(seed, sigma):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(8, 20))
    lengths = rng.integers(2 * sigma, 4 * sigma + 1, size=k)
    first = int(rng.integers(2))
    return Instance.from_runs([("RB"[(first + t) % 2], int(L)) for t, L in enumerate(lengths)])


def test_criterion_5_clustered_guarantees(report):
    sigma = 10
    problems = []
    for eps in ("0", "1/4"):
        p = params(sigma, eps, "1/2", "inclusive")
        for seed in range(200):
            x = _clustered_instance(seed, sigma)
            res = partition_clustered(x, p)
            if res.alpha > (1 - p.epsilon) * sigma / x.n:
                problems.append(("alpha", eps, seed))
            if eps == "1/4" and res.alpha != 0:
                problems.append(("nonzero", eps, seed))
            if not audit(x, res.partition, p).is_fair:
                problems.append(("unfair", eps, seed))
    p = params(sigma, "1/4", "1/2")
    mostly = 0
    for seed in range(200):
        g = gen_mostly_clustered(500, sigma, "1/10", 2 * sigma, seed)
        gamma = Fraction(g.meta["realized_gamma"])
        assert gamma <= Fraction(1, 10)
        res = partition_clustered(g.instance, p)
        mostly += 1
        if res.alpha > (1 - p.epsilon) * sigma / g.instance.n + gamma:
            problems.append(("mostly", seed))
    report("5 clustered partitions alpha-bounded and fair", not problems,
           f"400 clustered + {mostly} mostly-clustered, problems {problems[:5]}")


@pytest.mark.slow
def test_criterion_6_scaling(report):
    p = params(16, "1/4", "3/4")
    dp_solve(gen_clustered(200, 32, 64, 0).instance, p)  # compile
    medians = []
    for n in (1000, 2000, 4000):
        x = gen_clustered(n, 32, 64, n).instance
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            dp_solve(x, p, verify=False)
            times.append(time.perf_counter() - t0)
        medians.append(statistics.median(times))
    ratios = [b / a for a, b in zip(medians, medians[1:])]
    report("6 dp time per doubling <= 2.5x", all(r <= 2.5 for r in ratios),
           "medians " + ", ".join(f"{m:.3f}s" for m in medians)
           + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios))


def _cli(argv, capsys):
    capsys.readouterr()
    code = main(argv)
    return code, capsys.readouterr().out


def test_criterion_7_determinism_and_schemas(report, tmp_path, capsys):
    problems = []
    gens = [
        ["adversarial", "--sigma", "8", "--epsilon", "1/4", "--beta", "5/8", "--n", "30"],
        ["multi-sigma", "--sigmas", "4,8", "--epsilon", "1/4", "--beta", "5/8", "--n", "240"],
        ["clustered", "--n", "200", "--min-run", "20", "--max-run", "40", "--seed", "11"],
        ["mostly-clustered", "--n", "400", "--sigma", "10", "--gamma", "1/10", "--min-run", "20",
         "--seed", "11"],
        ["random", "--n", "40", "--seed", "11"],
    ]
    files = []
    for k, argv in enumerate(gens):
        paths = [tmp_path / f"g{k}_{rep}.txt" for rep in range(2)]
        for path in paths:
            _cli(["gen", *argv, "-o", str(path)], capsys)
        a, b = (path.read_bytes() for path in paths)
        if a != b:
            problems.append(("gen", argv[0]))
        meta = json.loads(a.decode().splitlines()[0][len("# meta: "):])
        jsonschema.validate(meta, schemas.GENERATOR_META)
        files.append(str(paths[0]))

    p_args = ["--sigma", "10", "--epsilon", "1/4", "--beta", "5/8"]
    for path in files[2:4]:
        outs = {}
        for cmd in (["solve", path, *p_args, "--no-timing"],
                    ["partition", "clustered", path, "--sigma", "10", "--epsilon", "1/4"]):
            runs = [_cli(cmd, capsys)[1] for _ in range(2)]
            if runs[0] != runs[1]:
                problems.append((cmd[0], path))
            outs[cmd[0]] = runs[0]
        jsonschema.validate(json.loads(outs["solve"]), schemas.SOLVE_RESULT)
        jsonschema.validate(json.loads(outs["partition"]), schemas.PARTITION)
        part = tmp_path / "part.json"
        part.write_text(outs["partition"])
        audits = [_cli(["audit", path, "--partition", str(part), *p_args], capsys)[1]
                  for _ in range(2)]
        if audits[0] != audits[1]:
            problems.append(("audit", path))
        jsonschema.validate(json.loads(audits[0]), schemas.AUDIT_REPORT)

    _, uni = _cli(["partition", "uniform", "--n", "100", "--sigma", "10", "--epsilon", "1/5",
                   "--beta", "1"], capsys)
    jsonschema.validate(json.loads(uni), schemas.PARTITION)
    _, circ = _cli(["solve", files[4], "--sigma", "4", "--epsilon", "1/2", "--topology", "circle",
                    "--no-timing"], capsys)
    jsonschema.validate(json.loads(circ), schemas.SOLVE_RESULT)
    report("7 byte-identical reruns, JSON validates", not problems, f"problems {problems}")
