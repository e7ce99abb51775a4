"""JSON (de)serialization of instances, schemes and graphs.

Floats are written with ``repr`` precision, so any decimal with at most 15
significant digits survives a dump/load cycle unchanged.
"""
import json

import numpy as np

from .core import AuctionInstance, SignalingScheme, ValuationDistribution
from .errors import InvalidInstance, InvalidScheme


def instance_to_dict(inst):
    return {
        "states": list(inst.states),
        "prior": [float(x) for x in inst.prior],
        "buyers": [
            {"support": [{"values": [float(x) for x in v], "prob": float(p)}
                         for v, p in zip(dist.values, dist.probs)]}
            for dist in inst.buyers
        ],
    }


def instance_from_dict(data):
    try:
        buyers = [
            ValuationDistribution(
                [atom["values"] for atom in b["support"]],
                [atom["prob"] for atom in b["support"]],
            )
            for b in data["buyers"]
        ]
        return AuctionInstance(data["states"], data["prior"], buyers)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInstance):
            raise
        raise InvalidInstance(f"malformed instance JSON: {exc}") from exc


def scheme_to_dict(inst, scheme):
    return {
        "signals": [list(labels) for labels in scheme.signals],
        "kernel": {
            state: [{"profile": list(prof), "prob": float(pr)} for prof, pr in row.items()]
            for state, row in zip(inst.states, scheme.kernel)
        },
        "prices": [dict(pm) for pm in scheme.prices],
    }


def scheme_from_dict(inst, data):
    try:
        kernel = []
        for state in inst.states:
            rows = data["kernel"][state]
            kernel.append({tuple(r["profile"]): float(r["prob"]) for r in rows})
        return SignalingScheme(data["signals"], kernel, data["prices"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidScheme):
            raise
        raise InvalidScheme(f"malformed scheme JSON: {exc}") from exc


def _read_json(path, error):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise error(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise error(f"{path} is not valid JSON: {exc}") from exc


def load_instance(path):
    return instance_from_dict(_read_json(path, InvalidInstance))


def load_scheme(inst, path):
    return scheme_from_dict(inst, _read_json(path, InvalidScheme))


def dumps(obj):
    """Deterministic JSON text (sorted keys are *not* used: field order is part of the format)."""
    return json.dumps(obj, indent=2, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_instance(inst, path):
    with open(path, "w") as fh:
        fh.write(dumps(instance_to_dict(inst)))
