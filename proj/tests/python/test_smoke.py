import pytest

import hrp_toolkit as hrp


def block(prefix, first, last):
    base = prefix.rsplit(".", 1)[0]
    return [f"{base}.{h}" for h in range(first, last + 1)]


def test_threshold_boundary():
    assert hrp.DEFAULT_THRESHOLD.min_count == 231
    assert hrp.STRICT_THRESHOLD.min_count == 244
    assert hrp.HrpThreshold(0.90).classifies(231)
    assert not hrp.HrpThreshold(0.90).classifies(230)
    with pytest.raises(hrp.UsageError):
        hrp.HrpThreshold(1.5)


def test_aggregate_and_classify():
    meta = hrp.ScanMeta("tcp", 443, "smoke")
    addrs = block("10.0.0.0", 0, 230) + ["10.0.1.5", "10.0.1.5"]
    table = hrp.aggregate(addrs, meta)
    assert len(table) == 2
    assert table.count("10.0.0.0/24") == 231
    assert "10.0.1.5" in table
    stats = hrp.classify(table)
    assert hrp.hrp_set(stats) == ["10.0.0.0/24"]
    assert hrp.hrp_address_share(stats) == pytest.approx(231 / 232)
    assert hrp.histogram(stats)["prefix_count"][231] == 1
    assert hrp.stats_csv(stats).splitlines()[1] == "10.0.0.0/24,443,tcp,231,true,0.900000,,"


def test_aggregate_file(tmp_path):
    scan = tmp_path / "scan.txt"
    scan.write_text("# zmap\n10.0.0.1\nbogus\n10.0.0.2\n")
    table = hrp.aggregate_file(str(scan), hrp.ScanMeta("tcp", 80))
    assert table.total_addresses == 2
    with pytest.raises(hrp.IngestError):
        hrp.aggregate_file(str(scan), hrp.ScanMeta("tcp", 80), policy="strict")
    with pytest.raises(hrp.IoError):
        hrp.aggregate_file(str(tmp_path / "missing"), hrp.ScanMeta("tcp", 80))


def test_merge_requires_same_service():
    a = hrp.aggregate(["10.0.0.1"], hrp.ScanMeta("tcp", 443))
    with pytest.raises(hrp.UsageError):
        a.merge_from(hrp.aggregate(["10.0.0.2"], hrp.ScanMeta("tcp", 80)))


def test_routing_lookup_and_enrich():
    routes = hrp.RoutingTable.from_text("10.0.0.0/8,64500\n10.1.0.0/16,64501\n")
    assert routes.lookup("10.1.2.3") == ("10.1.0.0/16", 64501)
    assert routes.lookup("10.2.3.4") == ("10.0.0.0/8", 64500)
    assert routes.lookup("192.0.2.1") is None
    stats = hrp.classify(hrp.aggregate(["10.1.2.3"], hrp.ScanMeta("tcp", 443)))
    enriched = hrp.enrich(stats, routes)
    assert enriched[0].origin_asn == 64501
    assert enriched[0].covering_prefix == "10.1.0.0/16"


def test_plan_escalate_evaluate():
    meta = hrp.ScanMeta("tcp", 443)
    table = hrp.aggregate(block("10.0.0.0", 0, 255), meta)
    hrps = hrp.hrp_set(hrp.classify(table))
    policy = hrp.SamplePolicy(k=10, rng_seed=3)
    plan = hrp.build_plan(table, hrps, [("10.0.0.7", 2)], policy)
    assert plan.target_count == 10
    assert plan.targets()[0] == ("10.0.0.7", "10.0.0.0/24", "sampled", "dns_seed")
    assert plan.to_csv() == hrp.build_plan(table, hrps, [("10.0.0.7", 2)], policy).to_csv()

    truth = [hrp.AppResult(a, meta, "success", f"id{i % 3}") for i, a in enumerate(block("10.0.0.0", 0, 255))]
    sampled = {t[0] for t in plan.targets()}
    sample = [r for r in truth if r.target in sampled]
    assert hrp.classify_sample(sample, policy) == "diverse"
    full = hrp.escalate(plan, sample, table, policy)
    assert full.target_count == 256
    assert hrp.evaluate_plan(full, truth)["identifier_coverage"] == 1.0


def test_vantage_diff():
    d = hrp.vantage_diff(["10.0.0.0/24", "10.0.1.0/24"], ["10.0.1.0/24"])
    assert d["only_a"] == ["10.0.0.0/24"]
    assert d["divergence"] == pytest.approx(0.5)
