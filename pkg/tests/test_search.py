import json

import pytest

from fms.errors import ResumeTokenMismatch
from fms.homology import HomologyGroup
from fms.homotopy import beat_points
from fms.models import sphere_model
from fms.poset import is_isomorphic
from fms.search import (
    CampaignConfig,
    Check,
    Filter,
    brute_force_classes,
    count_posets,
    enumerate_posets,
    minimal_model_search,
    parse_signature,
    run_campaign,
)
from fms.search import _to_poset

ALL = [1, 1, 2, 5, 16, 63, 318, 2045, 16999]
CONNECTED = [0, 1, 1, 3, 10, 44, 238, 1650, 14512]


def test_small_counts():
    assert count_posets(3) == 5
    assert count_posets(4) == 16
    assert count_posets(2, ["connected"]) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_counts_match_brute_force_oracle(n):
    gen = list(enumerate_posets(n))
    assert len(gen) == len(brute_force_classes(n))
    assert count_posets(n, ["connected"]) == len(brute_force_classes(n, connected=True))


@pytest.mark.parametrize("n", range(1, 7))
def test_no_two_outputs_isomorphic(n):
    forms = [p.canonical_form() for p in enumerate_posets(n)]
    assert len(set(forms)) == len(forms)


def test_known_sequence_up_to_eight():
    for n in range(1, 9):
        assert count_posets(n) == ALL[n]
    assert count_posets(8, ["connected"]) == CONNECTED[8]


def test_filters():
    assert Filter.parse("height<=1") == Filter("height", "<=", 1)
    with pytest.raises(ValueError):
        Filter.parse("wiggly")
    # height <= 1 prunes; compare against post-filtering
    direct = [p for p in enumerate_posets(6) if Filter("height", "<=", 1).accepts(p)]
    assert count_posets(6, ["height<=1"]) == len(direct)
    # oracle: brute-force classes filtered by the independent beat-point scan
    for n in (4, 5):
        expect = sum(1 for f in brute_force_classes(n, connected=True) if not beat_points(_to_poset(f)))
        assert count_posets(n, ["connected", "no-beat-points"]) == expect


def test_signature_parsing():
    assert parse_signature("S2") == (HomologyGroup(1), HomologyGroup(), HomologyGroup(1))
    assert parse_signature("Z,Z+Z/2,0") == (HomologyGroup(1), HomologyGroup(1, (2,)))
    assert Check.parse("homology-signature(S1)").target == parse_signature("Z,Z")
    with pytest.raises(ValueError):
        Check.parse("nonsense")


def test_campaign_examples():
    rep = run_campaign(CampaignConfig(max_points=8, filters=["connected"], check="h1-torsion-free"))
    assert rep.tallies["fail"] == 0 and rep.counts[8] == CONNECTED[8]
    rep = run_campaign(CampaignConfig(max_points=6, min_points=6, filters=["connected"],
                                      check="homology-signature:S2"))
    assert len(rep.matches) == 1
    rep = run_campaign(CampaignConfig(max_points=4, min_points=4, check="homology-signature:S1"))
    assert len(rep.matches) == 1


def test_modes_agree_on_homotopy_invariant_checks():
    for check in ("any-torsion", "homology-signature:S1", "homology-signature:Z,Z^2"):
        a = run_campaign(CampaignConfig(max_points=7, check=check, mode="direct"))
        b = run_campaign(CampaignConfig(max_points=7, check=check, mode="cores"))
        assert a.to_json(include_time=False) == b.to_json(include_time=False)


def test_reports_do_not_depend_on_workers_or_split():
    cfgs = [CampaignConfig(max_points=7, filters=["connected"], check="homology-signature:S1", workers=w, split_level=s)
            for w, s in ((1, 6), (2, 5), (3, 4))]
    outs = [json.dumps(run_campaign(c).to_json(include_time=False), sort_keys=True) for c in cfgs]
    assert outs[0] == outs[1] == outs[2]


def test_resume_token(tmp_path, monkeypatch):
    import fms.search as search

    tok = str(tmp_path / "tok.json")
    cfg = CampaignConfig(max_points=7, check="h1-torsion-free", split_level=5, resume=tok)
    reference = run_campaign(CampaignConfig(max_points=7, check="h1-torsion-free", split_level=5))

    real, calls = search._run_subtree, []

    def flaky(job):
        if len(calls) == 3:
            raise KeyboardInterrupt
        calls.append(job)
        return real(job)

    monkeypatch.setattr(search, "_run_subtree", flaky)
    with pytest.raises(KeyboardInterrupt):
        run_campaign(cfg)
    data = json.load(open(tok))
    assert len(data["done"]) == 3 < data["units"]
    monkeypatch.setattr(search, "_run_subtree", real)
    resumed = run_campaign(cfg)
    assert resumed.to_json(include_time=False) == reference.to_json(include_time=False)
    assert len(json.load(open(tok))["done"]) == data["units"]
    with pytest.raises(ResumeTokenMismatch):
        run_campaign(CampaignConfig(max_points=7, check="any-torsion", split_level=5, resume=tok))


def test_large_campaigns_need_a_flag():
    with pytest.raises(ValueError):
        CampaignConfig(max_points=11)
    CampaignConfig(max_points=11, allow_large=True)


def test_minimal_models():
    s1 = minimal_model_search("S1", 6)
    assert s1.size == 4 and len(s1.matches) == 1
    assert is_isomorphic(s1.matches[0].poset, sphere_model(1))[0]
    assert s1.matches[0].status == "confirmed"
    wedge = minimal_model_search("S1vS1", 7)
    assert wedge.size == 5 and wedge.matches
    none = minimal_model_search("RP2", 7)
    assert none.size is None and none.matches == []
