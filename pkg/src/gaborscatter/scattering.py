"""The scattering cascade: layer operators, path tree, feature extraction.

Each layer applies a Gabor transform followed by the modulus; row j of the
result is one "node" signal, and the tree of channel choices across layers
forms the paths.  Features are the node signals smoothed by the NEXT layer's
output atom (a designated frame element, low-pass channel 0 by default) and
subsampled on that layer's time grid — so computing depth-d features needs
d+1 configured layers.

Energy accounting inside `extract_features`: each node's transform energy
splits between the output channel (which becomes this node's smoothed
feature) and the remaining channels (which propagate as children).  The
output channel is therefore NOT propagated further — counting it both as an
output and as a child would double its energy and break the norm-decrease
guarantee that normalized frames (B <= 1) otherwise provide.  The raw
`scatter` tree, by contrast, keeps every channel: depth 1 is exactly the M1
modulus rows.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, InvalidArgument
from .gabor import CoefficientGrid, GaborFrame, dgt, frame_upper_bound

NONLINEARITIES = ("modulus",)
DEFAULT_NODE_BUDGET = 1 << 20

Path = tuple


@dataclass(frozen=True)
class ScatterLayer:
    """One layer's recipe: frame + nonlinearity + output atom channel.

    ``output_atom_channel`` selects which frame element smooths the PREVIOUS
    layer's node signals when this layer is the "next" one.
    """

    frame: GaborFrame
    nonlinearity: str = "modulus"
    output_atom_channel: int = 0

    def __post_init__(self):
        if self.nonlinearity not in NONLINEARITIES:
            raise InvalidArgument(
                f"unsupported nonlinearity {self.nonlinearity!r}; "
                f"this package implements {', '.join(NONLINEARITIES)} only"
            )
        if not 0 <= self.output_atom_channel < self.frame.M:
            raise InvalidArgument(
                f"output atom channel {self.output_atom_channel} out of range "
                f"[0, {self.frame.M})"
            )


@dataclass(frozen=True)
class TripletSequence:
    """Ordered layer recipes; the network architecture record.

    Construction checks the length chain (layer l+1 operates on layer l's
    frame count) and estimates every layer's upper frame bound.  The
    ``normalized`` flag reports whether all bounds are <= 1 + 1e-9, which is
    the precondition for contractivity; `io.stack_from_specs` with
    normalize=True builds sequences that satisfy it by scaling.
    """

    layers: tuple
    upper_bounds: tuple = field(init=False)

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise InvalidArgument("a triplet sequence needs at least one layer")
        for layer in layers:
            if not isinstance(layer, ScatterLayer):
                raise InvalidArgument("layers must be ScatterLayer instances")
        for i in range(1, len(layers)):
            expected = layers[i - 1].frame.n_frames
            got = layers[i].frame.signal_length
            if got != expected:
                raise InvalidArgument(
                    f"layer {i + 1} expects signal length {got} but layer {i} "
                    f"produces {expected} time frames"
                )
        object.__setattr__(self, "layers", layers)
        bounds = tuple(float(frame_upper_bound(l.frame)) for l in layers)
        object.__setattr__(self, "upper_bounds", bounds)

    @property
    def depth_available(self) -> int:
        return len(self.layers)

    @property
    def input_length(self) -> int:
        return self.layers[0].frame.signal_length

    @property
    def normalized(self) -> bool:
        return all(b <= 1.0 + 1e-9 for b in self.upper_bounds)

    def identifier(self) -> str:
        """Stable short hash of the architecture (used in metadata)."""
        parts = []
        for layer in self.layers:
            f = layer.frame
            w = f.window
            parts.append(
                f"{w.kind}:{w.length}:{w.shape_param}:{w.l2_norm:.12e}:"
                f"{f.a}:{f.M}:{f.signal_length}:{layer.output_atom_channel}"
            )
        digest = hashlib.md5("|".join(parts).encode()).hexdigest()
        return digest[:12]


def layer_forward(
    signal: np.ndarray, frame: GaborFrame, nonlinearity: str = "modulus", layer: int = 1
) -> CoefficientGrid:
    """One layer: transform + pointwise nonlinearity (modulus).

    Row j of the returned grid is the node signal for channel j.
    """
    if nonlinearity not in NONLINEARITIES:
        raise InvalidArgument(
            f"unsupported nonlinearity {nonlinearity!r}; "
            f"this package implements {', '.join(NONLINEARITIES)} only"
        )
    grid = dgt(signal, frame, layer=layer)
    return CoefficientGrid(values=np.abs(grid.values), frame=frame, layer=layer)


def _check_budget(omega: TripletSequence, depth: int, budget: int) -> None:
    total = 0
    width = 1
    for level in range(1, depth + 1):
        width *= omega.layers[level - 1].frame.M
        total += width
        if total > budget:
            raise BudgetExceeded(
                f"path tree reaches {total} nodes at layer {level}, over the "
                f"budget of {budget}; raise the budget or prune channels",
                layer=level,
            )


def scatter(
    signal: np.ndarray,
    omega: TripletSequence,
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
    prune_threshold: float = 0.0,
) -> dict:
    """All node signals U[q]f for paths 1 <= |q| <= depth.

    Every channel of every layer is kept (depth 1 is exactly the M1 modulus
    rows).  ``prune_threshold`` > 0 stops expanding nodes whose l2 norm falls
    at or below it; pruned nodes stay in the result, their children don't
    exist.  Evaluation is breadth-first and deterministic.

    Raises:
        BudgetExceeded: the unpruned tree would exceed ``budget`` nodes.
        InvalidArgument: depth exceeds the configured layers.
    """
    signal = np.asarray(signal)
    if depth < 1:
        raise InvalidArgument(f"depth must be >= 1, got {depth}")
    if depth > omega.depth_available:
        raise InvalidArgument(
            f"depth {depth} exceeds the {omega.depth_available} configured layers"
        )
    if signal.shape[0] != omega.input_length:
        raise InvalidArgument(
            f"signal length {signal.shape[0]} does not match the first layer's "
            f"{omega.input_length}"
        )
    _check_budget(omega, depth, budget)
    nodes: dict = {}
    frontier = [((), signal)]
    for level in range(1, depth + 1):
        frame = omega.layers[level - 1].frame
        next_frontier = []
        for path, vec in frontier:
            grid = layer_forward(vec, frame, layer=level).values
            for j in range(frame.M):
                child_path = path + (j,)
                row = grid[j]
                nodes[child_path] = row
                if level < depth and (
                    prune_threshold <= 0.0 or np.linalg.norm(row) > prune_threshold
                ):
                    next_frontier.append((child_path, row))
        frontier = next_frontier
    return nodes


@dataclass(frozen=True)
class FeatureVector:
    """Smoothed, subsampled node outputs keyed by path, plus metadata.

    ``entries`` maps each path (tuple of channel indices, () for the root)
    to a real vector; ``meta`` records the architecture id, input length,
    depth, per-layer (a, M), and any pruned paths.
    """

    entries: dict
    meta: dict

    def total_norm(self) -> float:
        return float(np.sqrt(sum(np.sum(v**2) for v in self.entries.values())))


def _smooth_and_subsample(vec: np.ndarray, atom: np.ndarray, hop: int) -> np.ndarray:
    """|circular conv of vec with atom| on the hop grid."""
    conv = np.fft.ifft(np.fft.fft(vec) * np.fft.fft(atom))
    return np.abs(conv[::hop])


def extract_features(
    signal: np.ndarray,
    omega: TripletSequence,
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
    prune_threshold: float = 0.0,
) -> FeatureVector:
    """The invariant feature map: smoothed outputs of all paths |q| <= depth.

    The path-q entry is |(U[q]f) * phi| subsampled by the next layer's hop,
    with phi that layer's output atom.  Children of each node exclude the
    output channel (see the module docstring for the energy argument), so
    the per-layer path alphabet has M - 1 symbols.

    Raises:
        InvalidArgument: fewer than depth+1 layers configured.
        BudgetExceeded: as for scatter.
    """
    signal = np.asarray(signal)
    if depth < 0:
        raise InvalidArgument(f"depth must be >= 0, got {depth}")
    if depth + 1 > omega.depth_available:
        raise InvalidArgument(
            f"depth-{depth} features need {depth + 1} configured layers, "
            f"only {omega.depth_available} available"
        )
    if signal.shape[0] != omega.input_length:
        raise InvalidArgument(
            f"signal length {signal.shape[0]} does not match the first layer's "
            f"{omega.input_length}"
        )
    _check_budget(omega, depth, budget)

    entries: dict = {}
    pruned: list = []
    frontier = [((), signal)]
    for level in range(0, depth + 1):
        smoother = omega.layers[level]
        atom = smoother.frame.atom(smoother.output_atom_channel, 0)
        hop = smoother.frame.a
        for path, vec in frontier:
            entries[path] = _smooth_and_subsample(vec, atom, hop)
        if level == depth:
            break
        frame = smoother.frame
        skip = smoother.output_atom_channel
        next_frontier = []
        for path, vec in frontier:
            grid = layer_forward(vec, frame, layer=level + 1).values
            for j in range(frame.M):
                if j == skip:
                    continue
                row = grid[j]
                child = path + (j,)
                if prune_threshold > 0.0 and np.linalg.norm(row) <= prune_threshold:
                    pruned.append(child)
                    continue
                next_frontier.append((child, row))
        frontier = next_frontier

    meta = {
        "omega_id": omega.identifier(),
        "input_length": int(signal.shape[0]),
        "depth": int(depth),
        "layers": [
            (int(l.frame.a), int(l.frame.M)) for l in omega.layers[: depth + 1]
        ],
        "pruned_paths": tuple(pruned),
    }
    return FeatureVector(entries=entries, meta=meta)


def feature_distance(u: FeatureVector, v: FeatureVector) -> float:
    """Aggregate l2 distance: sqrt of the summed squared per-path distances.

    Raises:
        InvalidArgument: the two vectors cover different path sets.
    """
    if set(u.entries.keys()) != set(v.entries.keys()):
        raise InvalidArgument("feature vectors cover different path sets")
    total = 0.0
    for path, uvec in u.entries.items():
        dvec = uvec - v.entries[path]
        total += float(np.sum(np.abs(dvec) ** 2))
    return float(np.sqrt(total))
