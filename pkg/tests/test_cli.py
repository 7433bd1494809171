import json
import re

import numpy as np
import pytest

from gaborscatter.cli import chain_pad_length, run
from gaborscatter.io import default_config, load_features, read_wav


@pytest.fixture(scope="module")
def mini_config(tmp_path_factory):
    """A small config: one short tone at fs 8000, default layer geometry."""
    data = json.loads(default_config().to_json())
    data["fs"] = 8000.0
    data["signal_length"] = 512
    data["tones"] = [{
        "id": "blip",
        "xi0_hz": 500.0,
        "n_harmonics": 3,
        "duration_s": 0.06,
        "envelopes": [{"kind": "smooth_adsr", "attack_s": 0.01, "decay_s": 0.01,
                       "sustain_level": 0.8, "release_s": 0.01}],
    }]
    path = tmp_path_factory.mktemp("cfg") / "mini.json"
    path.write_text(json.dumps(data, indent=2))
    return str(path)


def test_chain_pad_length_default_layers():
    layers = default_config().data["omega"]["layers"]
    unit = chain_pad_length(layers)
    assert unit == 128
    # Every multiple of the unit divides cleanly through the whole chain.
    length = unit * 3
    for spec in layers:
        assert length % spec["a"] == 0 and length % spec["M"] == 0
        length //= spec["a"]


def test_synth_writes_wav_and_envelope_table(mini_config, tmp_path):
    code = run(["synth", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--seed", "7"])
    assert code == 0
    samples, rate = read_wav(tmp_path / "blip.wav")
    assert rate == 8000.0
    assert samples.shape == (480,)  # 0.06 s at 8 kHz
    lines = (tmp_path / "blip_envelopes.csv").read_text().splitlines()
    assert lines[0] == "t_s,A_1,A_2,A_3"
    assert len(lines) == 481


def test_synth_nyquist_violation_exits_2(mini_config, tmp_path, capsys):
    code = run(["synth", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--set", "tones.0.xi0_hz=3000.0"])
    assert code == 2
    assert "is not below fs/2" in capsys.readouterr().err


def test_synth_unknown_tone_exits_2(mini_config, tmp_path, capsys):
    code = run(["synth", "--config", mini_config, "--tone", "nosuch",
                "--out", str(tmp_path)])
    assert code == 2
    assert "no tone with id" in capsys.readouterr().err


def test_scatter_outputs_and_determinism(mini_config, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    for out in (out1, out2):
        code = run(["scatter", "--config", mini_config, "--tone", "blip",
                    "--out", str(out)])
        assert code == 0
    for name in ("blip_layer1.pgm", "blip_layer2.pgm",
                 "blip_features.gsfv", "blip_features.csv"):
        assert (out1 / name).exists()
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    fv = load_features(out1 / "blip_features.gsfv")
    assert fv.meta["depth"] == 2
    assert fv.meta["input_length"] == 512  # 480 samples padded to the unit


def test_scatter_depth_override(mini_config, tmp_path, capsys):
    code = run(["scatter", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--depth", "1"])
    assert code == 0
    assert (tmp_path / "blip_layer1.pgm").exists()
    assert not (tmp_path / "blip_layer2.pgm").exists()
    # Feature extraction needs one layer beyond the deepest scatter level,
    # so depth 3 cannot run on a three-layer stack.
    code = run(["scatter", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--depth", "3"])
    assert code == 2
    assert "4 configured layers" in capsys.readouterr().err


def test_scatter_reads_wav_input(mini_config, tmp_path):
    assert run(["synth", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path)]) == 0
    code = run(["scatter", "--config", mini_config,
                "--in", str(tmp_path / "blip.wav"), "--out", str(tmp_path)])
    assert code == 0
    fv = load_features(tmp_path / "blip_features.gsfv")
    assert fv.meta["input_length"] == 512
    root = fv.entries[()]
    assert np.all(root >= 0)  # modulus features


def test_scatter_needs_exactly_one_source(mini_config, tmp_path, capsys):
    code = run(["scatter", "--config", mini_config, "--out", str(tmp_path)])
    assert code == 2
    assert "exactly one" in capsys.readouterr().err
    code = run(["scatter", "--config", mini_config, "--tone", "blip",
                "--in", "x.wav", "--out", str(tmp_path)])
    assert code == 2


def test_scatter_missing_wav_exits_4(mini_config, tmp_path, capsys):
    code = run(["scatter", "--config", mini_config,
                "--in", str(tmp_path / "nope.wav"), "--out", str(tmp_path)])
    assert code == 4
    assert "i/o error" in capsys.readouterr().err


def test_scatter_budget_exhaustion_exits_2(mini_config, tmp_path, capsys):
    code = run(["scatter", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--set", "scatter_budget=16"])
    assert code == 2
    assert "budget" in capsys.readouterr().err.lower()


def test_set_override_errors(mini_config, tmp_path, capsys):
    code = run(["synth", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--set", "nosuch.key=1"])
    assert code == 2
    assert "no key 'nosuch'" in capsys.readouterr().err
    code = run(["synth", "--config", mini_config, "--tone", "blip",
                "--out", str(tmp_path), "--set", "depth"])
    assert code == 2
    assert "expects key=value" in capsys.readouterr().err


def test_framebounds_reports_normalized_layers(mini_config, capsys):
    assert run(["framebounds", "--config", mini_config]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l]
    assert len(lines) == 3
    for i, line in enumerate(lines, start=1):
        assert line.startswith(f"layer {i}:")
        upper = float(re.search(r"B=([^ ]+)", line).group(1))
        assert abs(upper - 1.0) < 1e-6  # contractivity-normalized stack


def test_argparse_level_errors(capsys):
    assert run([]) == 2  # a subcommand is required
    assert run(["synth"]) == 2  # --tone is required
    assert run(["--help"]) == 0


def test_verify_battery_passes(tmp_path, capsys):
    code = run(["verify", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    text = (tmp_path / "verification.txt").read_text()
    assert "0 failed" in text
    assert "FAIL" not in text
    assert (tmp_path / "verification.csv").exists()
    assert "verification.csv" in out


def test_verify_fails_on_impossible_threshold(tmp_path, capsys):
    code = run(["verify", "--out", str(tmp_path),
                "--set", "verification.onset_spike.min_ratio=1e9"])
    captured = capsys.readouterr()
    assert code == 3
    assert "FAILED" in captured.err
    text = (tmp_path / "verification.txt").read_text()
    assert "FAIL  layer1-onset-bound-spike" in text


def test_figures_writes_reference_set(tmp_path):
    code = run(["figures", "--out", str(tmp_path)])
    assert code == 0
    for name in ("fig1_gabor.pgm", "fig1_layer1.pgm", "fig1_layer2.pgm",
                 "fig2_gabor.pgm", "fig2_layer1.pgm", "fig3_layer2_slices.pgm"):
        assert (tmp_path / name).exists(), name
    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert metrics["checks"]
    assert all(c["passed"] for c in metrics["checks"])
