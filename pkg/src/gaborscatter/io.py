"""Persistence and interchange.

Four file families, all self-contained (no third-party format libraries):

* WAV audio — RIFF mono, PCM16 (format tag 1) or IEEE float32 (tag 3).
* Spectrogram images — binary PGM (P5, 8-bit) with a CSV sidecar carrying
  the exact values, so external tools can re-plot losslessly.
* Feature containers — a little-endian binary format (magic ``GSFV``) plus
  a text CSV form; both round-trip `FeatureVector` objects exactly.
* Experiment configuration — versioned JSON (``"version": 1``), validated
  against an explicit schema that rejects unknown keys by name, with
  builders turning config records into tones, frames, and layer stacks.

Byte layout of the ``GSFV`` container (all little-endian):

    magic           4 bytes  b"GSFV"
    format version  u16      (= 1)
    depth           u16
    input_length    u64
    omega id        u8 length + that many ASCII bytes
    layer count     u16, then per layer: a u32, M u32
    entry count     u32, then per entry:
        path length u16, then that many u32 channel indices
        value count u64, then that many f64 samples
    pruned count    u32, then per pruned path: u16 length + u32 indices

Entries are written in sorted path order, so identical feature vectors
serialize to identical bytes.
"""

import json
import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, FormatError, InvalidArgument
from .scattering import FeatureVector, ScatterLayer, TripletSequence
from .signal_model import EnvelopeSpec, Tone
from .windows import Window, make_window, normalize_for_contractivity

# --------------------------------------------------------------------------
# WAV


def write_wav(path, samples: np.ndarray, fs: float, fmt: str = "float32") -> None:
    """Write a mono WAV file.

    ``fmt`` selects PCM16 (samples scaled by 2^15, clipped to full scale)
    or IEEE float32 (written verbatim).  Complex input is rejected rather
    than silently dropping the imaginary part.
    """
    samples = np.asarray(samples)
    if np.iscomplexobj(samples):
        raise InvalidArgument("WAV samples must be real; take .real or the modulus first")
    samples = samples.astype(np.float64).ravel()
    rate = int(round(fs))
    if rate <= 0:
        raise InvalidArgument(f"sample rate must be positive, got {fs}")
    pre_data = b""
    if fmt == "pcm16":
        scaled = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2")
        payload = scaled.tobytes()
        fmt_body = struct.pack("<HHIIHH", 1, 1, rate, rate * 2, 2, 16)
    elif fmt == "float32":
        payload = samples.astype("<f4").tobytes()
        # Non-PCM formats carry the cbSize field and a fact chunk.
        fmt_body = struct.pack("<HHIIHHH", 3, 1, rate, rate * 4, 4, 32, 0)
        pre_data = struct.pack("<4sI", b"fact", 4) + struct.pack("<I", samples.size)
    else:
        raise InvalidArgument(f"unknown WAV format {fmt!r}; choose 'pcm16' or 'float32'")
    chunks = struct.pack("<4sI", b"fmt ", len(fmt_body)) + fmt_body
    chunks += pre_data
    chunks += struct.pack("<4sI", b"data", len(payload)) + payload
    if len(payload) % 2:
        chunks += b"\x00"
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sI4s", b"RIFF", 4 + len(chunks), b"WAVE"))
        fh.write(chunks)


def read_wav(path):
    """Read a mono WAV file; returns (samples as float64, sample rate).

    PCM16 samples are scaled to [-1, 1) by 2^-15.  Unknown chunks are
    skipped; malformed structure raises FormatError naming the offending
    chunk or field.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12 or data[:4] != b"RIFF":
        raise FormatError(f"{path}: missing 'RIFF' magic; not a WAV file")
    if data[8:12] != b"WAVE":
        raise FormatError(f"{path}: RIFF form type is {data[8:12]!r}, expected 'WAVE'")
    fmt_fields = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack("<I", data[pos + 4 : pos + 8])
        body = data[pos + 8 : pos + 8 + size]
        if len(body) < size:
            raise FormatError(f"{path}: chunk {cid!r} claims {size} bytes but the file ends early")
        if cid == b"fmt ":
            if size < 16:
                raise FormatError(f"{path}: 'fmt ' chunk is {size} bytes, need at least 16")
            fmt_fields = struct.unpack("<HHIIHH", body[:16])
        elif cid == b"data":
            payload = body
        pos += 8 + size + (size % 2)
    if fmt_fields is None:
        raise FormatError(f"{path}: no 'fmt ' chunk")
    if payload is None:
        raise FormatError(f"{path}: no 'data' chunk")
    tag, channels, rate, _, _, bits = fmt_fields
    if channels != 1:
        raise FormatError(f"{path}: 'fmt ' chunk declares {channels} channels; only mono is supported")
    if tag == 1:
        if bits != 16:
            raise FormatError(f"{path}: PCM with {bits} bits per sample; only 16 supported")
        samples = np.frombuffer(payload, dtype="<i2").astype(np.float64) / 32768.0
    elif tag == 3:
        if bits != 32:
            raise FormatError(f"{path}: float format with {bits} bits per sample; only 32 supported")
        samples = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    else:
        raise FormatError(
            f"{path}: 'fmt ' chunk has audio format tag {tag}; only PCM16 (1) and IEEE float32 (3) supported"
        )
    return samples, float(rate)


# --------------------------------------------------------------------------
# spectrogram images


def _as_grid_values(grid) -> np.ndarray:
    values = getattr(grid, "values", grid)
    return np.asarray(values)


def write_pgm(pixels: np.ndarray, path) -> None:
    """Write an 8-bit binary PGM (P5).  Row 0 of the array is the top row."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.ndim != 2 or pixels.size == 0:
        raise InvalidArgument("PGM output needs a nonempty 2-D array")
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def spectrogram_pixels(values: np.ndarray, scale: str = "db", db_floor: float = -80.0) -> np.ndarray:
    """Map grid values to 8-bit pixels, channel 0 at the BOTTOM row.

    db scale: 20 log10(v / max), clamped at ``db_floor``; linear scale:
    plain max-normalization.  An all-zero grid maps to all-black.
    """
    v = np.asarray(values)
    if np.iscomplexobj(v):
        raise InvalidArgument("spectrogram values must be real (apply the modulus first)")
    if v.ndim != 2 or v.size == 0:
        raise InvalidArgument("spectrogram needs a nonempty 2-D grid")
    if scale not in ("linear", "db"):
        raise InvalidArgument(f"unknown scale {scale!r}; choose 'linear' or 'db'")
    v = v.astype(np.float64)
    ref = float(np.max(v))
    if scale == "db":
        if np.any(v < 0):
            raise InvalidArgument("db scale needs nonnegative (post-modulus) values")
        if ref <= 0:
            pix = np.zeros(v.shape, dtype=np.uint8)
        else:
            with np.errstate(divide="ignore"):
                level = 20.0 * np.log10(v / ref)
            level = np.maximum(level, db_floor)
            pix = np.round((level - db_floor) / (-db_floor) * 255.0).astype(np.uint8)
    else:
        if ref <= 0:
            pix = np.zeros(v.shape, dtype=np.uint8)
        else:
            pix = np.round(np.clip(v, 0.0, None) / ref * 255.0).astype(np.uint8)
    return np.flipud(pix)


def write_spectrogram(grid, path, scale: str = "db") -> None:
    """Emit a grid as PGM image plus a CSV sidecar of the raw values.

    Image rows run channels low-to-high bottom-up; the sidecar (same stem,
    ``.csv``) keeps channel 0 as its first data row and carries exact
    values for external re-plotting.
    """
    values = _as_grid_values(grid)
    pix = spectrogram_pixels(values, scale)
    write_pgm(pix, path)
    sidecar = Path(path).with_suffix(".csv")
    write_grid_csv(values, sidecar)


def write_grid_csv(values: np.ndarray, path) -> None:
    """CSV of a 2-D grid: header row, then one row per channel (0 first)."""
    v = np.asarray(values)
    if v.ndim != 2 or v.size == 0:
        raise InvalidArgument("grid CSV needs a nonempty 2-D array")
    with open(path, "w", newline="") as fh:
        fh.write("channel," + ",".join(f"t{k}" for k in range(v.shape[1])) + "\n")
        for ch in range(v.shape[0]):
            fh.write(str(ch) + "," + ",".join(f"{x:.9g}" for x in v[ch]) + "\n")


def read_grid_csv(path) -> np.ndarray:
    """Inverse of `write_grid_csv` (values at CSV precision)."""
    rows = []
    with open(path, "r") as fh:
        header = fh.readline()
        if not header.startswith("channel,"):
            raise FormatError(f"{path}: missing grid CSV header row")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) < 2:
                continue
            rows.append([float(x) for x in parts[1:]])
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return np.asarray(rows)


# --------------------------------------------------------------------------
# feature containers

FEATURES_MAGIC = b"GSFV"
FEATURES_VERSION = 1


class _Cursor:
    """Sequential reader over bytes with format-error reporting."""

    def __init__(self, data: bytes, label: str):
        self.data = data
        self.pos = 0
        self.label = label

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise FormatError(f"{self.label}: truncated (needed {size} bytes at offset {self.pos})")
        out = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return out

    def take_bytes(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(f"{self.label}: truncated (needed {n} bytes at offset {self.pos})")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out


def save_features(fv: FeatureVector, path) -> None:
    """Serialize a feature vector to the GSFV binary container."""
    meta = fv.meta
    buf = bytearray()
    buf += struct.pack("<4sHH", FEATURES_MAGIC, FEATURES_VERSION, int(meta["depth"]))
    buf += struct.pack("<Q", int(meta["input_length"]))
    oid = str(meta["omega_id"]).encode("ascii")
    buf += struct.pack("<B", len(oid)) + oid
    layers = meta["layers"]
    buf += struct.pack("<H", len(layers))
    for a, m in layers:
        buf += struct.pack("<II", int(a), int(m))
    entries = sorted(fv.entries.items())
    buf += struct.pack("<I", len(entries))
    for p, vec in entries:
        buf += struct.pack("<H", len(p))
        if p:
            buf += struct.pack(f"<{len(p)}I", *p)
        v = np.asarray(vec, dtype=np.float64)
        buf += struct.pack("<Q", v.size) + v.astype("<f8").tobytes()
    pruned = sorted(tuple(q) for q in meta.get("pruned_paths", ()))
    buf += struct.pack("<I", len(pruned))
    for p in pruned:
        buf += struct.pack("<H", len(p))
        if p:
            buf += struct.pack(f"<{len(p)}I", *p)
    with open(path, "wb") as fh:
        fh.write(bytes(buf))


def load_features(path) -> FeatureVector:
    """Read a GSFV container back into a FeatureVector."""
    with open(path, "rb") as fh:
        cur = _Cursor(fh.read(), str(path))
    magic, version, depth = cur.take("<4sHH")
    if magic != FEATURES_MAGIC:
        raise FormatError(f"{path}: magic is {magic!r}, expected {FEATURES_MAGIC!r}")
    if version != FEATURES_VERSION:
        raise FormatError(f"{path}: container version {version}; this build reads version 1")
    (input_length,) = cur.take("<Q")
    (oid_len,) = cur.take("<B")
    omega_id = cur.take_bytes(oid_len).decode("ascii")
    (n_layers,) = cur.take("<H")
    layers = [tuple(cur.take("<II")) for _ in range(n_layers)]
    (n_entries,) = cur.take("<I")
    entries = {}
    for _ in range(n_entries):
        (plen,) = cur.take("<H")
        p = cur.take(f"<{plen}I") if plen else ()
        (vlen,) = cur.take("<Q")
        vec = np.frombuffer(cur.take_bytes(8 * vlen), dtype="<f8").astype(np.float64)
        entries[tuple(p)] = vec
    (n_pruned,) = cur.take("<I")
    pruned = []
    for _ in range(n_pruned):
        (plen,) = cur.take("<H")
        pruned.append(tuple(cur.take(f"<{plen}I")) if plen else ())
    meta = {
        "omega_id": omega_id,
        "input_length": int(input_length),
        "depth": int(depth),
        "layers": layers,
        "pruned_paths": tuple(pruned),
    }
    return FeatureVector(entries=entries, meta=meta)


def features_to_csv(fv: FeatureVector, path) -> None:
    """Text form of a feature vector.

    Header lines start with '#' and carry the metadata as JSON; each data
    row is  path_len, path channels..., values...  with %.17g floats (which
    round-trip float64 exactly).
    """
    meta = dict(fv.meta)
    meta["layers"] = [list(x) for x in meta["layers"]]
    meta["pruned_paths"] = [list(x) for x in meta.get("pruned_paths", ())]
    with open(path, "w", newline="") as fh:
        fh.write("# gaborscatter-features v1\n")
        fh.write("# meta " + json.dumps(meta, sort_keys=True) + "\n")
        fh.write("# columns: path_len, path channels..., feature values...\n")
        for p, vec in sorted(fv.entries.items()):
            cells = [str(len(p))] + [str(q) for q in p]
            cells += [f"{x:.17g}" for x in np.asarray(vec, dtype=np.float64)]
            fh.write(",".join(cells) + "\n")


def features_from_csv(path) -> FeatureVector:
    """Inverse of `features_to_csv`."""
    meta = None
    entries = {}
    with open(path, "r") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("meta "):
                    meta = json.loads(body[5:])
                continue
            parts = line.split(",")
            plen = int(parts[0])
            p = tuple(int(x) for x in parts[1 : 1 + plen])
            vec = np.asarray([float(x) for x in parts[1 + plen :]], dtype=np.float64)
            entries[p] = vec
    if meta is None:
        raise FormatError(f"{path}: missing '# meta' header line")
    meta["layers"] = [tuple(x) for x in meta["layers"]]
    meta["pruned_paths"] = tuple(tuple(x) for x in meta.get("pruned_paths", ()))
    return FeatureVector(entries=entries, meta=meta)


# --------------------------------------------------------------------------
# experiment configuration

CONFIG_VERSION = 1

_NUM = (int, float)

_WINDOW_SCHEMA = {
    "kind": str,
    "length": int,
    "shape_param": ("opt", _NUM),
}

_LAYER_SCHEMA = {
    "window": _WINDOW_SCHEMA,
    "a": int,
    "M": int,
    "output_atom_channel": ("opt", int),
}

_ENVELOPE_SCHEMA = {
    "kind": str,
    "attack_s": ("opt", _NUM),
    "decay_s": ("opt", _NUM),
    "sustain_level": ("opt", _NUM),
    "release_s": ("opt", _NUM),
    "rate_hz": ("opt", _NUM),
    "depth": ("opt", _NUM),
    "mode": ("opt", str),
}

_TONE_SCHEMA = {
    "id": str,
    "xi0_hz": _NUM,
    "n_harmonics": int,
    "duration_s": _NUM,
    "fs": ("opt", _NUM),
    "edge_fade_s": ("opt", _NUM),
    "envelopes": ("list", _ENVELOPE_SCHEMA),
}

_VERIF_LAYER1_SCHEMA = {
    "fs": _NUM,
    "xi0_list": ("list", _NUM),
    "duration_s": _NUM,
    "signal_length": int,
    "frame": _LAYER_SCHEMA,
    "s": _NUM,
    "max_harmonics": int,
    "steady_window_s": ("list", _NUM),
    "envelopes": ("list", _ENVELOPE_SCHEMA),
}

_VERIF_SPIKE_SCHEMA = {
    "fs": _NUM,
    "xi0_hz": _NUM,
    "n_harmonics": int,
    "duration_s": _NUM,
    "signal_length": int,
    "frame": _LAYER_SCHEMA,
    "s": _NUM,
    "envelope": _ENVELOPE_SCHEMA,
    "min_ratio": _NUM,
}

_VERIF_LAYER2_SCHEMA = {
    "fs": _NUM,
    "xi0_hz": _NUM,
    "n_harmonics": int,
    "duration_s": _NUM,
    "signal_length": int,
    "s": _NUM,
    "layers": ("list", _LAYER_SCHEMA),
    "envelope": _ENVELOPE_SCHEMA,
    "channels": ("list", int),
}

_VERIF_DEFORM_SCHEMA = {
    "fs": _NUM,
    "duration_s": _NUM,
    "xi0_range": ("list", _NUM),
    "max_harmonics": int,
    "warp_sup_range": ("list", _NUM),
    "eps_range": ("list", _NUM),
}

_VERIFICATION_SCHEMA = {
    "random_signals": int,
    "oracle_cases": int,
    "deformation_trials": int,
    "contractivity_pairs": int,
    "layer1": _VERIF_LAYER1_SCHEMA,
    "onset_spike": _VERIF_SPIKE_SCHEMA,
    "layer2": _VERIF_LAYER2_SCHEMA,
    "deformation": _VERIF_DEFORM_SCHEMA,
}

_FIGURES_SCHEMA = {
    "fs": _NUM,
    "single_length": int,
    "pair_length": int,
    "layer1": _LAYER_SCHEMA,
    "layer2_features": _LAYER_SCHEMA,
    "layer2_am": _LAYER_SCHEMA,
    "envelope_pair": ("list", str),
    "pitch_pair": ("list", str),
    "keep_window_s": ("list", _NUM),
    "am_window_s": ("list", _NUM),
    "slice_exclude_s": _NUM,
    "am_rate_hz": _NUM,
    "shared_harmonic_hz": _NUM,
    "invariance_max_rel": _NUM,
    "raw_min_rel": _NUM,
    "am_margin_db": _NUM,
    "cross_energy_max_rel": _NUM,
    "shared_min_rel": _NUM,
}

_ROOT_SCHEMA = {
    "version": int,
    "seed": int,
    "fs": _NUM,
    "out_dir": ("opt", str),
    "depth": int,
    "scatter_budget": ("opt", int),
    "signal_length": int,
    "omega": {"normalize": bool, "layers": ("list", _LAYER_SCHEMA)},
    "tones": ("list", _TONE_SCHEMA),
    "verification": _VERIFICATION_SCHEMA,
    "figures": _FIGURES_SCHEMA,
}


def _type_ok(value, types) -> bool:
    if types is bool:
        return isinstance(value, bool)
    if isinstance(value, bool):
        return False  # bool passes isinstance(int) checks; keep them apart
    return isinstance(value, types)


def _check_schema(data, schema, where: str) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object, got {type(data).__name__}")
    for key in data:
        if key not in schema:
            raise ConfigError(f"{where}: unknown key {key!r}")
    for key, rule in schema.items():
        optional = isinstance(rule, tuple) and len(rule) == 2 and rule[0] == "opt"
        if optional:
            rule = rule[1]
        if key not in data:
            if optional:
                continue
            raise ConfigError(f"{where}: missing required key {key!r}")
        value = data[key]
        spot = f"{where}.{key}"
        if isinstance(rule, dict):
            _check_schema(value, rule, spot)
        elif isinstance(rule, tuple) and len(rule) == 2 and rule[0] == "list":
            if not isinstance(value, list):
                raise ConfigError(f"{spot}: expected a list, got {type(value).__name__}")
            for i, item in enumerate(value):
                sub = rule[1]
                if isinstance(sub, dict):
                    _check_schema(item, sub, f"{spot}[{i}]")
                elif not _type_ok(item, sub):
                    raise ConfigError(f"{spot}[{i}]: wrong type {type(item).__name__}")
        else:
            if not _type_ok(value, rule):
                raise ConfigError(f"{spot}: wrong type {type(value).__name__}")


def validate_config_dict(data: dict) -> None:
    """Schema-check a raw config mapping; ConfigError names any offense."""
    _check_schema(data, _ROOT_SCHEMA, "config")
    if data["version"] != CONFIG_VERSION:
        raise ConfigError(
            f"config.version is {data['version']}; this build reads version {CONFIG_VERSION}"
        )
    if not data["tones"]:
        raise ConfigError("config.tones: need at least one tone")
    ids = [t["id"] for t in data["tones"]]
    if len(set(ids)) != len(ids):
        raise ConfigError("config.tones: duplicate tone ids")
    if not data["omega"]["layers"]:
        raise ConfigError("config.omega.layers: need at least one layer")


# -- builders ---------------------------------------------------------------


def window_from_spec(spec: dict) -> Window:
    return make_window(spec["kind"], spec["length"], spec.get("shape_param"))


def frame_from_spec(spec: dict, signal_length: int, normalize: bool = False):
    from .gabor import GaborFrame

    window = window_from_spec(spec["window"])
    a, m = spec["a"], spec["M"]
    if normalize:
        window = normalize_for_contractivity(window, a, m)
    return GaborFrame(window=window, a=a, M=m, signal_length=signal_length)


def stack_from_specs(layer_specs, signal_length: int, normalize: bool = False) -> TripletSequence:
    """Build a layer stack at chained lengths L, L/a1, L/(a1 a2), ..."""
    layers = []
    length = signal_length
    for spec in layer_specs:
        frame = frame_from_spec(spec, length, normalize)
        layers.append(
            ScatterLayer(frame=frame, output_atom_channel=spec.get("output_atom_channel", 0))
        )
        length //= spec["a"]
    return TripletSequence(layers=tuple(layers))


def envelope_from_spec(spec: dict) -> EnvelopeSpec:
    kwargs = {k: v for k, v in spec.items()}
    return EnvelopeSpec(**kwargs)


def tone_from_spec(spec: dict, default_fs: float) -> Tone:
    kwargs = dict(
        xi0_hz=spec["xi0_hz"],
        n_harmonics=spec["n_harmonics"],
        duration_s=spec["duration_s"],
        fs=spec.get("fs", default_fs),
        envelopes=tuple(envelope_from_spec(e) for e in spec["envelopes"]),
    )
    if "edge_fade_s" in spec:
        kwargs["edge_fade_s"] = spec["edge_fade_s"]
    return Tone(**kwargs)


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment configuration.

    Wraps the JSON mapping verbatim (so serialize-then-parse is the
    identity) and exposes builders for the domain objects it describes.
    """

    data: dict

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        validate_config_dict(data)
        return cls(data=data)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    # -- plain accessors --

    @property
    def version(self) -> int:
        return self.data["version"]

    @property
    def seed(self) -> int:
        return self.data["seed"]

    @property
    def fs(self) -> float:
        return float(self.data["fs"])

    @property
    def depth(self) -> int:
        return self.data["depth"]

    @property
    def out_dir(self) -> str:
        return self.data.get("out_dir", "out")

    @property
    def scatter_budget(self) -> int:
        return self.data.get("scatter_budget", 1 << 20)

    @property
    def signal_length(self) -> int:
        return self.data["signal_length"]

    @property
    def verification(self) -> dict:
        return self.data["verification"]

    @property
    def figures(self) -> dict:
        return self.data["figures"]

    # -- builders --

    def tone_ids(self):
        return [t["id"] for t in self.data["tones"]]

    def tone(self, tone_id: str) -> Tone:
        for spec in self.data["tones"]:
            if spec["id"] == tone_id:
                return tone_from_spec(spec, self.fs)
        raise ConfigError(f"no tone with id {tone_id!r} (have {', '.join(self.tone_ids())})")

    def omega(self, signal_length: int | None = None) -> TripletSequence:
        block = self.data["omega"]
        length = self.signal_length if signal_length is None else signal_length
        return stack_from_specs(block["layers"], length, block["normalize"])


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ExperimentConfig.from_json(text)


def save_config(config: ExperimentConfig, path) -> None:
    with open(path, "w") as fh:
        fh.write(config.to_json())


def default_config() -> ExperimentConfig:
    """The packaged default experiment configuration."""
    text = resources.files("gaborscatter").joinpath("data/default.json").read_text()
    return ExperimentConfig.from_json(text)
