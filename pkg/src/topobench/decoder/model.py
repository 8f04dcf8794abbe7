"""Forward-only diagram decoder.

The pipeline is: combine encoder blocks -> adapt features and patch
centers to the model width -> run learned queries through decoder blocks
(self-attention, cross-attention over tokens with positional encodings
added to the keys, feed-forward) -> output heads.  The pair head's
sigmoid/softplus parameterization makes death strictly exceed birth for
every query.  Everything is plain numpy and deterministic.
"""

import numpy as np

from ..errors import InvalidParameterError, NumericOverflowError
from ..persistence.diagram import PersistenceDiagram
from ..setpred.losses import PredictionSet, sigmoid
from .weights import WeightManifest

LN_EPS = 1e-5


def combine_blocks(block_features, mode: str = "last") -> np.ndarray:
    """Reduce per-block patch features to a single (n, d) matrix.

    ``block_features`` is (12, n, d) (or a list of 12 such matrices) for
    mode "combined", which sums over blocks; mode "last" accepts any
    non-empty stack and returns the final block unchanged.
    """
    stack = np.asarray(block_features, dtype=np.float64)
    if stack.ndim == 2:
        stack = stack[None]
    if stack.ndim != 3 or stack.shape[0] == 0:
        raise InvalidParameterError(f"expected (blocks, n, d) features, got {stack.shape}")
    if mode == "last":
        return stack[-1]
    if mode == "combined":
        if stack.shape[0] != 12:
            raise InvalidParameterError(
                f"mode 'combined' needs all 12 blocks, got {stack.shape[0]}")
        return stack.sum(axis=0)
    raise InvalidParameterError(f"mode must be 'last' or 'combined', got {mode!r}")


def _layer_norm(x, scale, shift, eps=LN_EPS):
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mean) / np.sqrt(var + eps) * scale + shift


def adapt(features, centers, weights: WeightManifest):
    """Project features and patch centers into the decoder width.

    Features get per-token layer normalization then an affine projection;
    centers go through the positional MLP.  Returns (tokens, pos), both
    (n, model_dim).
    """
    f = np.asarray(features, dtype=np.float64)
    c = np.asarray(centers, dtype=np.float64)
    cfg = weights.config
    if f.ndim != 2 or f.shape[1] != cfg.feature_dim:
        raise InvalidParameterError(
            f"features must be (n, {cfg.feature_dim}), got {f.shape}")
    if c.shape != (f.shape[0], 3):
        raise InvalidParameterError(
            f"centers must be ({f.shape[0]}, 3), got {c.shape}")
    normed = _layer_norm(f, weights["adapter.norm.scale"], weights["adapter.norm.shift"])
    tokens = normed @ weights["adapter.proj.weight"] + weights["adapter.proj.bias"]
    hidden = np.maximum(c @ weights["pos.mlp1.weight"] + weights["pos.mlp1.bias"], 0.0)
    pos = hidden @ weights["pos.mlp2.weight"] + weights["pos.mlp2.bias"]
    return tokens, pos


def _split_heads(x, n_heads):
    n, d = x.shape
    return x.reshape(n, n_heads, d // n_heads).transpose(1, 0, 2)  # (H, n, dh)


def _attention(query, key, value, weights, prefix, n_heads, trace=None):
    q = _split_heads(query @ weights[f"{prefix}.q.weight"] + weights[f"{prefix}.q.bias"], n_heads)
    k = _split_heads(key @ weights[f"{prefix}.k.weight"] + weights[f"{prefix}.k.bias"], n_heads)
    v = _split_heads(value @ weights[f"{prefix}.v.weight"] + weights[f"{prefix}.v.bias"], n_heads)
    scores = q @ k.transpose(0, 2, 1) / np.sqrt(q.shape[-1])
    scores -= scores.max(axis=-1, keepdims=True)
    attn = np.exp(scores)
    attn /= attn.sum(axis=-1, keepdims=True)
    if trace is not None:
        trace.append((prefix, attn.sum(axis=-1)))
    out = attn @ v  # (H, n, dh)
    out = out.transpose(1, 0, 2).reshape(query.shape[0], -1)
    return out @ weights[f"{prefix}.out.weight"] + weights[f"{prefix}.out.bias"]


def decode(tokens, pos, weights: WeightManifest, debug: bool = False):
    """Run the learned queries through the decoder blocks.

    Positional encodings are added to the cross-attention keys at every
    block.  Returns the (N, model_dim) query states, or (states, trace)
    when ``debug`` is set; the trace records softmax row sums per
    attention site.
    """
    cfg = weights.config
    x = weights["queries"].copy()
    keys = np.asarray(tokens, dtype=np.float64)
    pos = np.asarray(pos, dtype=np.float64)
    if keys.shape != pos.shape:
        raise InvalidParameterError("tokens and positional encodings must align")
    trace = [] if debug else None
    pre = cfg.norm_placement == "pre"
    for i in range(cfg.n_blocks):
        p = f"block{i}"

        def norm(k, y):
            return _layer_norm(y, weights[f"{p}.norm{k}.scale"], weights[f"{p}.norm{k}.shift"])

        if pre:
            x = x + _attention(norm(1, x), norm(1, x), norm(1, x),
                               weights, f"{p}.self_attn", cfg.n_heads, trace)
            x = x + _attention(norm(2, x), keys + pos, keys,
                               weights, f"{p}.cross_attn", cfg.n_heads, trace)
            h = norm(3, x)
            h = np.maximum(h @ weights[f"{p}.ffn.1.weight"] + weights[f"{p}.ffn.1.bias"], 0.0)
            x = x + h @ weights[f"{p}.ffn.2.weight"] + weights[f"{p}.ffn.2.bias"]
        else:
            x = norm(1, x + _attention(x, x, x, weights, f"{p}.self_attn",
                                       cfg.n_heads, trace))
            x = norm(2, x + _attention(x, keys + pos, keys, weights,
                                       f"{p}.cross_attn", cfg.n_heads, trace))
            h = np.maximum(x @ weights[f"{p}.ffn.1.weight"] + weights[f"{p}.ffn.1.bias"], 0.0)
            x = norm(3, x + h @ weights[f"{p}.ffn.2.weight"] + weights[f"{p}.ffn.2.bias"])
        if not np.all(np.isfinite(x)):
            raise NumericOverflowError(f"non-finite decoder state in block {i}")
    x = _layer_norm(x, weights["final_norm.scale"], weights["final_norm.shift"])
    return (x, trace) if debug else x


def _softplus(x):
    return np.log1p(np.exp(-np.abs(x))) + np.maximum(x, 0.0)


def heads(states, weights: WeightManifest) -> PredictionSet:
    """Map decoder states to persistence pairs and existence logits."""
    x = np.asarray(states, dtype=np.float64)
    h = np.maximum(x @ weights["pair_head.1.weight"] + weights["pair_head.1.bias"], 0.0)
    h = np.maximum(h @ weights["pair_head.2.weight"] + weights["pair_head.2.bias"], 0.0)
    logits2 = h @ weights["pair_head.3.weight"] + weights["pair_head.3.bias"]
    births = sigmoid(logits2[:, 0])
    gaps = _softplus(logits2[:, 1])
    deaths = births + gaps
    # an underflowed softplus would be absorbed by the addition and break
    # the strict ordering; bump those deaths by one ulp
    absorbed = deaths <= births
    deaths[absorbed] = np.nextafter(births[absorbed], np.inf)
    exist = (x @ weights["exist_head.weight"] + weights["exist_head.bias"]).ravel()
    return PredictionSet(np.stack([births, deaths], axis=1), exist)


def predict_diagram(features, centers, weights: WeightManifest, mode: str = "last",
                    threshold=0.5) -> PersistenceDiagram:
    """Full forward pass producing a persistence diagram.

    With ``threshold=None`` all N pairs are kept (safe for models trained
    with the diagonal regularizer); otherwise pairs with existence
    probability >= threshold survive.
    """
    combined = combine_blocks(features, mode)
    tokens, pos = adapt(combined, centers, weights)
    states = decode(tokens, pos, weights)
    pred = heads(states, weights)
    if threshold is None:
        pairs = pred.pairs
    else:
        pairs = pred.thresholded_pairs(threshold)
    return PersistenceDiagram(1, pairs, provenance={
        "source": "decoder", "mode": mode,
        "threshold": None if threshold is None else float(threshold)})
