"""End-to-end smoke tests of the compiled module and the CLI binary."""

import json
import math
import os
import subprocess

import pytest

import scanpath_toolkit as st


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    ids = st.synth_corpus(4, 3, str(out))
    return out, ids


def test_version_string():
    parts = st.__version__.split(".")
    assert len(parts) == 3 and all(p.isdigit() for p in parts)


def test_metrics_and_score_identities(corpus):
    out, ids = corpus
    humans = {p.image_id: p for p in st.read_scanpaths_jsonl(str(out / "scanpaths.jsonl"))}
    models = {p.image_id: p for p in st.read_scanpaths_jsonl(str(out / "model.jsonl"))}
    assert set(humans) == set(ids) == set(models)

    cfg = st.GcsConfig()
    for image_id in ids:
        human = humans[image_id]
        assert len(human) == 12
        assert st.dtw(human, human) == 0.0
        assert st.scanmatch(human, human) == 1.0

        density = st.density_grid([human], human.frame, cfg.metric.nss_sigma)
        refs = st.GcsRefInputs()
        refs.human_ref = human
        refs.corner_ref = st.corner_fixed(human.frame, len(human), "tr")
        refs.center_ref = st.center_fixed(human.frame, len(human))

        report = st.compute_gcs(models[image_id], human, density, refs, cfg)
        resid = report.gcs - (report.debiased.mean() + report.lambda_ * report.movement_similarity)
        assert abs(resid) <= 1e-12

        center_report = st.compute_gcs(refs.center_ref, human, density, refs, cfg)
        for name in ("dtw", "scanmatch", "nss", "auc"):
            assert getattr(center_report.debiased, name) == 0.0


def test_hash_and_fixation_recovery(corpus):
    out, ids = corpus
    index = st.HashIndex()
    for image_id in ids:
        img = st.read_image(str(out / "images" / f"{image_id}.ppm"))
        index.entries = index.entries + [st.HashIndexEntry(st.phash(img), image_id)]
    for image_id in ids:
        img = st.read_image(str(out / "images" / f"{image_id}.ppm"))
        match = st.match_image(img, index)
        assert match.image_id == image_id and match.distance == 0 and match.exact

        resized = st.resize_bilinear(st.resize_bilinear(img, 64, 64), 32, 32)
        assert st.hamming(st.phash(img), st.phash(resized)) <= 4

    planted = {p.image_id: p for p in st.read_scanpaths_jsonl(str(out / "scanpaths.jsonl"))}
    for image_id in ids:
        trace = st.read_gaze_trace(str(out / "traces" / f"{image_id}.csv"))
        recovered = st.idt_fixations(trace, 15.0)
        for want in planted[image_id].fixations:
            best = min(math.hypot(f.x - want.x, f.y - want.y) for f in recovered)
            assert best <= 5.000001
        fitted = st.fit_length(recovered, 12)
        assert len(fitted.fixations) == 12 and not fitted.padded


def test_rollout_replay_and_objective(corpus):
    out, ids = corpus
    dims = st.EvaDims()
    dims.periphery_feat = 16
    dims.h1 = 24
    dims.h2 = 24
    dims.attn = 8
    weights = st.init_weights(dims, 7)

    img = st.read_image(str(out / "images" / f"{ids[0]}.ppm"))
    glimpse = st.GlimpseConfig()
    glimpse.steps = 6
    t1 = st.rollout(img, weights, glimpse, seed=11, label=3, image_id=ids[0])
    t2 = st.rollout(img, weights, glimpse, seed=11, label=3, image_id=ids[0])
    assert st.trace_to_json(t1) == st.trace_to_json(t2)
    assert len(t1.steps) == 6
    assert all(abs(s.probs.sum() - 1.0) < 1e-9 for s in t1.steps)

    path = t1.scanpath()
    shuffled = st.shuffled(path, 5)
    replay = st.rollout(img, weights, glimpse, seed=11, label=3,
                        override_path=shuffled, image_id=ids[0], policy="shuffled")
    original = sorted((f.x, f.y) for f in path.fixations)
    replayed = sorted((f.x, f.y) for f in replay.scanpath().fixations)
    assert replayed == original

    ce, floored = st.ce_loss(t1, 3)
    assert ce > 0.0 and not floored
    total = st.total_objective(t1, 3)
    reg = st.gate_regularizers(t1)
    assert math.isfinite(total)
    assert abs(reg.total - (reg.cost + reg.l1 + reg.entropy)) <= 1e-12

    roundtrip = st.trace_from_json(st.trace_to_json(t1))
    assert roundtrip.scanpath() == path


def test_pca_shapes():
    states = [[[1.0, 0.0]], [[-1.0, 0.0]], [[2.0, 0.5]], [[-2.0, -0.5]]]
    labels = [0, 1, 0, 1]
    res = st.pca_trajectories(states, labels)
    assert res.ev1 >= res.ev2 >= 0.0
    assert abs(sum(v * v for v in res.pc1) - 1.0) < 1e-12
    assert abs(sum(a * b for a, b in zip(res.pc1, res.pc2))) < 1e-12
    assert {(p.label, p.step) for p in res.projected} == {(0, 1), (1, 1)}


def test_cli_binary(tmp_path):
    cli = os.environ.get("SCANPATH_CLI")
    if not cli:
        pytest.skip("SCANPATH_CLI not set")
    version = subprocess.run([cli, "--version"], capture_output=True, text=True)
    assert version.returncode == 0 and "scanpath_toolkit" in version.stdout

    subprocess.run([cli, "synth-corpus", "--out", str(tmp_path), "--n", "2", "--seed", "1"],
                   check=True, capture_output=True)
    result = subprocess.run(
        [cli, "gcs", "--model", str(tmp_path / "model.jsonl"),
         "--human", str(tmp_path / "scanpaths.jsonl"), "--out", str(tmp_path / "gcs.csv")],
        capture_output=True, text=True)
    assert result.returncode == 0
    header = next(line for line in (tmp_path / "gcs.csv").read_text().splitlines()
                  if not line.startswith("#"))
    assert header.split(",")[:2] == ["image_id", "gcs"]
