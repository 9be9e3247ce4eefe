import pytest

from cloneaudit.pairwise import (
    IntegrityError,
    enumerate_pairs,
    save_scores,
    score_all,
    score_histogram,
)

from synth import make_scored_repos


def test_within_group_pair_count():
    repos = make_scored_repos(3)
    pairs = enumerate_pairs(repos, "mcp-mcp")
    assert len(pairs) == 3
    assert all(a < b for a, b in pairs)


def test_same_developer_excluded():
    repos = make_scored_repos(2)
    repos = [
        type(repos[0])(**{**repos[0].__dict__, "developer_key": "same"}),
        type(repos[1])(**{**repos[1].__dict__, "developer_key": "same"}),
    ]
    assert enumerate_pairs(repos, "mcp-mcp", exclude_same_developer=True) == []
    assert len(enumerate_pairs(repos, "mcp-mcp", exclude_same_developer=False)) == 1


def test_cross_group_bipartite_product():
    repos = make_scored_repos(5, ecosystems=("MCP", "MCP", "Skills", "Skills", "Skills"))
    pairs = enumerate_pairs(repos, "mcp-skills")
    assert len(pairs) == 6


def test_no_self_pairs():
    repos = make_scored_repos(10)
    for group in ("mcp-mcp",):
        for a, b in enumerate_pairs(repos, group):
            assert a != b


def test_score_all_cardinality():
    repos = make_scored_repos(3)
    repo_map = {r.repo_id: r for r in repos}
    pairs = enumerate_pairs(repos, "mcp-mcp")
    records = score_all(pairs, repo_map, "mcp-mcp", ("jaccard", "ctph"))
    assert len(records) == 6
    assert {r["metric"] for r in records} == {"jaccard", "ctph"}


def test_score_all_missing_document():
    repos = make_scored_repos(2)
    repo_map = {repos[0].repo_id: repos[0]}
    with pytest.raises(IntegrityError, match=repos[1].repo_id):
        score_all([(repos[0].repo_id, repos[1].repo_id)], repo_map, "mcp-mcp")


def test_worker_count_does_not_change_output(tmp_path):
    repos = make_scored_repos(70, tokens_per_repo=120)
    repo_map = {r.repo_id: r for r in repos}
    pairs = enumerate_pairs(repos, "mcp-mcp")
    assert len(pairs) > 1024  # force the parallel path
    seq = score_all(pairs, repo_map, "mcp-mcp", workers=1)
    par = score_all(pairs, repo_map, "mcp-mcp", workers=4)
    assert seq == par
    save_scores(seq, tmp_path / "a", "mcp-mcp")
    save_scores(par, tmp_path / "b", "mcp-mcp")
    for metric in ("jaccard", "ctph"):
        fa = (tmp_path / "a" / f"mcp-mcp.{metric}.ndjson").read_bytes()
        fb = (tmp_path / "b" / f"mcp-mcp.{metric}.ndjson").read_bytes()
        assert fa == fb


def test_conservation_identity():
    n = 12
    repos = make_scored_repos(n, tokens_per_repo=80)
    repo_map = {r.repo_id: r for r in repos}
    pairs = enumerate_pairs(repos, "mcp-mcp", exclude_same_developer=False)
    records = score_all(pairs, repo_map, "mcp-mcp", ("jaccard",))
    assert len(records) == n * (n - 1) // 2


def test_histogram_boundaries():
    records = [{"score": 0.0}, {"score": 50.0}, {"score": 100.0}]
    counts = score_histogram(records, 50.0)
    assert counts == [1, 2]


def test_histogram_empty():
    assert score_histogram([], 20.0) == [0] * 5


def test_histogram_conservation():
    import random

    rnd = random.Random(3)
    records = [{"score": rnd.uniform(0, 100)} for _ in range(500)]
    assert sum(score_histogram(records, 1.0)) == 500


def test_histogram_invalid_width():
    with pytest.raises(ValueError):
        score_histogram([], 33.0)


def test_minhash_prefilter_mode():
    repos = make_scored_repos(6, tokens_per_repo=100)
    from cloneaudit.pairwise import ScoredRepo
    from cloneaudit.tokensim import minhash_signature

    with_sigs = {
        r.repo_id: ScoredRepo(
            **{**r.__dict__, "minhash": tuple(minhash_signature(r.token_set, 64))}
        )
        for r in repos
    }
    pairs = enumerate_pairs(repos, "mcp-mcp")
    records = score_all(
        pairs, with_sigs, "mcp-mcp", ("jaccard",), minhash_prefilter_margin=10.0
    )
    assert len(records) == len(pairs)
    exact = score_all(pairs, with_sigs, "mcp-mcp", ("jaccard",))
    # Unrelated repos are far below threshold under either path.
    for approx, ex in zip(records, exact):
        assert abs(approx["score"] - ex["score"]) < 25
