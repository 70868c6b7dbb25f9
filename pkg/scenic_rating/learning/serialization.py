#!/usr/bin/env python
"""
Versioned JSON model documents.

A document names its format and version, the model kind, the class ratings, the feature
count, the training parameters and the seed. Trees store their nodes recursively:

    split  {"feature", "threshold", "counts", "left", "right"}
    leaf   {"counts", "predicted"}

Ensembles store {"weight", "model"} member entries, each model being a complete document.
Floats are written in their shortest round-trip form, so a reloaded model predicts exactly
like the saved one.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import ModelFormatError
from scenic_rating.learning.models import ENSEMBLE_KINDS, EnsembleModel, Leaf, Model, Split, TreeModel, TreeNode

logger = get_logger("serialization")

MODEL_FORMAT = "scenic-rating-model"
MODEL_VERSION = 1


def _node_to_dict(node: TreeNode) -> Dict[str, Any]:
    if isinstance(node, Leaf):
        return {"counts": list(node.counts), "predicted": node.predicted}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "counts": list(node.counts),
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(doc: Dict[str, Any], n_classes: int) -> TreeNode:
    counts = tuple(float(c) for c in doc["counts"])
    if len(counts) != n_classes:
        raise ModelFormatError(f"node has {len(counts)} class counts, expected {n_classes}")
    if "predicted" in doc:
        predicted = int(doc["predicted"])
        if not 0 <= predicted < n_classes:
            raise ModelFormatError(f"leaf predicts unknown class index {predicted}")
        return Leaf(counts=counts, predicted=predicted)
    return Split(
        feature=int(doc["feature"]),
        threshold=float(doc["threshold"]),
        left=_node_from_dict(doc["left"], n_classes),
        right=_node_from_dict(doc["right"], n_classes),
        counts=counts,
    )


def model_to_dict(model: Model) -> Dict[str, Any]:
    """Encode a model as a JSON-compatible document."""
    doc: Dict[str, Any] = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": "tree" if isinstance(model, TreeModel) else model.kind,
        "classes": list(model.classes),
        "n_features": model.n_features,
        "params": model.params,
        "seed": model.seed,
    }
    if isinstance(model, TreeModel):
        doc["root"] = _node_to_dict(model.root)
    else:
        doc["members"] = [{"weight": weight, "model": model_to_dict(member)} for member, weight in model.members]
    return doc


def model_from_dict(doc: Dict[str, Any]) -> Model:
    """
    Decode a model document.

    Raises:
        ModelFormatError: On a foreign format, an unsupported version or a malformed body
    """
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
    try:
        kind = doc["kind"]
        classes = tuple(float(c) for c in doc["classes"])
        common = {
            "classes": classes,
            "params": doc.get("params") or {},
            "seed": int(doc["seed"]),
            "n_features": int(doc["n_features"]),
        }
        if kind == "tree":
            return TreeModel(root=_node_from_dict(doc["root"], len(classes)), **common)
        if kind in ENSEMBLE_KINDS:
            members = tuple((model_from_dict(m["model"]), float(m["weight"])) for m in doc["members"])
            return EnsembleModel(members=members, kind=kind, **common)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"malformed model document: {e}") from e
    raise ModelFormatError(f"unknown model kind {kind!r}")


def dumps(model: Model) -> str:
    """Serialize a model to JSON text."""
    return json.dumps(model_to_dict(model), indent=1) + "\n"


def loads(text: str) -> Model:
    """Parse JSON text produced by dumps."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"model file is not valid JSON: {e}") from e
    return model_from_dict(doc)


def save_model(model: Model, path: Union[str, Path]) -> Path:
    """Write a model document atomically."""
    target = atomic_write_text(path, dumps(model))
    logger.info("Saved %s model to %s", type(model).__name__, target)
    return target


def load_model(path: Union[str, Path]) -> Model:
    """
    Read a model document.

    Raises:
        ModelFormatError: If the file is missing or malformed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ModelFormatError(f"cannot read model file {path}: {e}") from e
    return loads(text)
