"""Exact-arithmetic aggregate-combine-readout GNN engine.

States are tuples of Python ints. A layer holds up to four named functions:

* ``agg`` (undirected) or ``agg_in`` / ``agg_out`` (directed), each mapping
  the multiset of neighbour states to a value;
* ``read``, mapping the multiset of all states to a value;
* ``comb(state, aggregates, readout)`` producing the new state, where
  ``aggregates`` is ``(agg,)`` or ``(agg_in, agg_out)``.

Absent functions contribute ``None``. Multisets are passed as tuples sorted
by state so that a function cannot observe node order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from ..graph import Graph, is_undirected

State = tuple[int, ...]


class GnnError(ValueError):
    pass


@dataclass(frozen=True)
class Fn:
    """A named function, so traces and reports can say what a layer does."""

    name: str
    fn: Callable[..., Any] = field(compare=False)
    params: tuple = ()

    def __call__(self, *args):
        return self.fn(*args)

    def describe(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(map(str, self.params))})"


@dataclass(frozen=True)
class Layer:
    width_in: int
    width_out: int
    comb: Fn
    agg: Fn | None = None
    agg_in: Fn | None = None
    agg_out: Fn | None = None
    read: Fn | None = None
    directed: bool = False
    # Output positions that hold base-10 binary numerals stored as bit sets.
    bitset_positions: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.directed and self.agg is not None:
            raise GnnError("directed layers use agg_in / agg_out")
        if not self.directed and (self.agg_in or self.agg_out):
            raise GnnError("undirected layers use agg")

    def describe(self) -> dict:
        out = {"width_in": self.width_in, "width_out": self.width_out, "comb": self.comb.describe()}
        for name in ("agg", "agg_in", "agg_out", "read"):
            f = getattr(self, name)
            if f is not None:
                out[name] = f.describe()
        return out


@dataclass(frozen=True)
class GnnClassifier:
    name: str
    layers: tuple[Layer, ...]
    cls: Fn
    input_width: int
    directed: bool = False

    def __post_init__(self) -> None:
        width = self.input_width
        for k, layer in enumerate(self.layers):
            if layer.width_in != width:
                raise GnnError(f"layer {k + 1} expects width {layer.width_in}, gets {width}")
            if layer.directed != self.directed:
                raise GnnError(f"layer {k + 1} directedness differs from the model")
            width = layer.width_out


def identity_layer(width: int, directed: bool = False) -> Layer:
    return Layer(width, width, Fn("keep", lambda s, a, r: s), directed=directed)


def _multiset(states: Sequence[State], nodes) -> tuple[State, ...]:
    return tuple(sorted(states[w] for w in nodes))


def apply_layer(g: Graph, states: Sequence[State], layer: Layer) -> list[State]:
    if len(states) != g.num_nodes:
        raise GnnError(f"expected {g.num_nodes} states, got {len(states)}")
    for s in states:
        if len(s) != layer.width_in:
            raise GnnError(f"state width {len(s)} does not match layer input width {layer.width_in}")
    readout = layer.read(tuple(sorted(states))) if layer.read is not None else None
    out = []
    for v in g.nodes:
        if layer.directed:
            a_in = layer.agg_in(_multiset(states, g.in_sets[v])) if layer.agg_in else None
            a_out = layer.agg_out(_multiset(states, g.out_sets[v])) if layer.agg_out else None
            aggs = (a_in, a_out)
        else:
            aggs = (layer.agg(_multiset(states, g.out_sets[v])) if layer.agg else None,)
        new = tuple(layer.comb(states[v], aggs, readout))
        if len(new) != layer.width_out:
            raise GnnError(f"comb produced width {len(new)}, layer declares {layer.width_out}")
        out.append(new)
    return out


def _check_input(g: Graph, model: GnnClassifier) -> None:
    if g.dimension != model.input_width:
        raise GnnError(
            f"model {model.name} expects graphs of dimension {model.input_width}, got {g.dimension}"
        )
    if not model.directed and not is_undirected(g):
        raise GnnError(f"model {model.name} is undirected but the graph is not symmetric")


def run_layers(g: Graph, model: GnnClassifier) -> list[list[State]]:
    """States after each layer; entry 0 is the input labelling."""
    _check_input(g, model)
    states: list[State] = [tuple(lab) for lab in g.labels]
    trace = [states]
    for layer in model.layers:
        states = apply_layer(g, states, layer)
        trace.append(states)
    return trace


def run_classifier(g: Graph, model: GnnClassifier) -> list[bool]:
    final = run_layers(g, model)[-1]
    return [bool(model.cls(s)) for s in final]


def render_state(state: State, bitset_positions: Sequence[int] = ()) -> list[int]:
    """Bit-set positions as the decimal numeral with the same digits (bit i = digit i)."""
    return [int(bin(x)[2:]) if k in bitset_positions else x for k, x in enumerate(state)]


def trace(g: Graph, model: GnnClassifier) -> list[dict]:
    rows = run_layers(g, model)
    out = [{"layer": 0, "states": [list(s) for s in rows[0]]}]
    for k, (layer, states) in enumerate(zip(model.layers, rows[1:]), start=1):
        out.append(
            {
                "layer": k,
                "functions": layer.describe(),
                "states": [render_state(s, layer.bitset_positions) for s in states],
            }
        )
    return out


# -- concatenation -----------------------------------------------------------


def _slices(widths: Sequence[int]) -> list[slice]:
    out, start = [], 0
    for w in widths:
        out.append(slice(start, start + w))
        start += w
    return out


def _concat_layer(layers: Sequence[Layer], head: int) -> Layer:
    """Run ``layers`` side by side on consecutive segments; ``head`` leading
    positions (the input labels) are kept in front of every segment list."""
    directed = layers[0].directed
    ins = _slices([head] + [l.width_in - head for l in layers])
    outs_w = [l.width_out - head for l in layers]
    hs = ins[0]

    def seg(state: State, k: int) -> State:
        return tuple(state[hs]) + tuple(state[ins[k + 1]])

    def lift(name: str):
        fns = [getattr(l, name) for l in layers]
        if all(f is None for f in fns):
            return None

        def run(multiset):
            return tuple(
                f(tuple(sorted(seg(s, k) for s in multiset))) if f is not None else None
                for k, f in enumerate(fns)
            )

        return Fn(name + "_concat", run, tuple(f.describe() if f else "-" for f in fns))

    aggs = {name: lift(name) for name in ("agg", "agg_in", "agg_out")}
    read = lift("read")

    def comb(state, agg_values, readout):
        new = list(state[hs])
        for k, layer in enumerate(layers):
            parts = tuple(a[k] if a is not None else None for a in agg_values)
            r = readout[k] if readout is not None else None
            sub = tuple(layer.comb(seg(state, k), parts, r))
            if tuple(sub[:head]) != tuple(state[hs]):
                raise GnnError("concatenated sub-layers must preserve the shared label prefix")
            new.extend(sub[head:])
        return tuple(new)

    bits: list[int] = []
    offset = head
    for layer, w in zip(layers, outs_w):
        bits += [offset + p - head for p in layer.bitset_positions if p >= head]
        offset += w
    return Layer(
        head + sum(l.width_in - head for l in layers),
        head + sum(outs_w),
        Fn("comb_concat", comb, tuple(l.comb.describe() for l in layers)),
        agg=aggs["agg"],
        agg_in=aggs["agg_in"],
        agg_out=aggs["agg_out"],
        read=read,
        directed=directed,
        bitset_positions=tuple(bits),
    )


def concat_classifiers(name: str, models: Sequence[GnnClassifier]) -> GnnClassifier:
    """Run several models in parallel on one concatenated state.

    Every model must keep its input labels as a prefix of each state. Shorter
    models are padded with identity layers; the combined verdict is the
    conjunction of the sub-verdicts.
    """
    if not models:
        raise GnnError("nothing to concatenate")
    head = models[0].input_width
    directed = models[0].directed
    if any(m.input_width != head or m.directed != directed for m in models):
        raise GnnError("concatenated models need equal input widths and directedness")
    depth = max(len(m.layers) for m in models)
    padded = []
    for m in models:
        last = m.layers[-1].width_out if m.layers else head
        padded.append(list(m.layers) + [identity_layer(last, directed)] * (depth - len(m.layers)))
    layers = tuple(_concat_layer([p[k] for p in padded], head) for k in range(depth))
    final = [head] + [p[-1].width_out - head for p in padded]
    segs = _slices(final)

    def cls(state):
        return all(
            m.cls(tuple(state[segs[0]]) + tuple(state[segs[k + 1]])) for k, m in enumerate(models)
        )

    return GnnClassifier(
        name, layers, Fn("all", cls, tuple(m.name for m in models)), head, directed
    )
