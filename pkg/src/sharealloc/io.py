"""JSON documents for instances, sharings and tree decompositions, plus seeded
random instances.

Rationals travel as ``"p/q"`` strings. Parse errors carry the line and column of
the offending key (or of the JSON syntax error).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

import numpy as np

from .envy.treewidth import NiceTreeDecomposition, TreeNode
from .model import Instance, InstanceError, InvalidSharingError, Sharing, edge_key, validate_sharing

__all__ = [
    "DocumentError",
    "parse_instance",
    "serialize_instance",
    "instance_to_dict",
    "parse_sharing",
    "serialize_sharing",
    "parse_decomposition",
    "serialize_decomposition",
    "generate_random",
]

INSTANCE_KEYS = (
    "agents",
    "resources",
    "utilities",
    "allocation",
    "sharing_edges",
    "attention_arcs",
    "alpha",
    "beta",
    "costs",
    "budget",
)
REQUIRED = INSTANCE_KEYS[:6]


class DocumentError(ValueError):
    """A document that does not parse, with a 1-based position."""

    def __init__(self, reason: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.reason = reason
        self.line = line
        self.column = column


def _decode(data: bytes | str) -> tuple[str, Any]:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError(f"input is not UTF-8 ({exc.reason})") from None
    try:
        return data, json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None


def _where(text: str, key: str | None) -> tuple[int, int]:
    if key is None:
        return 1, 1
    at = text.find(json.dumps(key))
    if at < 0:
        return 1, 1
    line = text.count("\n", 0, at) + 1
    return line, at - (text.rfind("\n", 0, at) + 1) + 1


def _fail(text: str, key: str | None, reason: str):
    raise DocumentError(reason, *_where(text, key))


def _int(text, key, value, *, minimum: int | None = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(text, key, f'"{key}" must be an integer')
    if minimum is not None and value < minimum:
        _fail(text, key, f'"{key}" must be at least {minimum}')
    return value


def _pairs(text, key, value, width=2) -> list[tuple[int, ...]]:
    if not isinstance(value, list):
        _fail(text, key, f'"{key}" must be an array')
    out = []
    for item in value:
        if (
            not isinstance(item, list)
            or len(item) != width
            or any(isinstance(x, bool) or not isinstance(x, int) for x in item)
        ):
            _fail(text, key, f'"{key}" entries must be arrays of {width} integers, got {item!r}')
        out.append(tuple(item))
    return out


def _rational(text, key, value) -> Fraction:
    if not isinstance(value, str) or not re.fullmatch(r"\s*-?\d+\s*(/\s*\d+\s*)?", value):
        _fail(text, key, f'"{key}" must be a string "p/q"')
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        _fail(text, key, f'"{key}" has a zero denominator')


def parse_instance(data: bytes | str) -> Instance:
    """Parse an instance document, expanding the graph shorthands."""
    text, doc = _decode(data)
    if not isinstance(doc, dict):
        _fail(text, None, "an instance document must be a JSON object")
    for key in doc:
        if key not in INSTANCE_KEYS:
            _fail(text, key, f'unknown key "{key}"')
    for key in REQUIRED:
        if key not in doc:
            _fail(text, None, f'missing key "{key}"')
    n = _int(text, "agents", doc["agents"])
    m = _int(text, "resources", doc["resources"])
    util = doc["utilities"]
    if not isinstance(util, list) or len(util) != n:
        _fail(text, "utilities", f'"utilities" must have one row per agent ({n})')
    for i, row in enumerate(util):
        if not isinstance(row, list) or len(row) != m:
            _fail(text, "utilities", f"utilities row {i} must have {m} entries")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                _fail(text, "utilities", f"utilities row {i} has a non-integer entry {x!r}")
    alloc = doc["allocation"]
    if not isinstance(alloc, list) or len(alloc) != n:
        _fail(text, "allocation", f'"allocation" must have one bundle per agent ({n})')
    for i, bundle in enumerate(alloc):
        if not isinstance(bundle, list) or any(isinstance(r, bool) or not isinstance(r, int) for r in bundle):
            _fail(text, "allocation", f"bundle {i} must be an array of resource indices")
    sharing = doc["sharing_edges"]
    if sharing != "clique":
        if isinstance(sharing, str):
            _fail(text, "sharing_edges", f'unknown sharing-edge shorthand "{sharing}"')
        sharing = _pairs(text, "sharing_edges", sharing)
    attention = doc["attention_arcs"]
    if attention not in ("clique", "same_as_sharing_bidirected"):
        if isinstance(attention, str):
            _fail(text, "attention_arcs", f'unknown attention shorthand "{attention}"')
        attention = _pairs(text, "attention_arcs", attention)
    alpha = _rational(text, "alpha", doc["alpha"]) if "alpha" in doc else Fraction(1)
    beta = _rational(text, "beta", doc["beta"]) if "beta" in doc else Fraction(1)
    costs = {}
    if "costs" in doc:
        for i, j, c in _pairs(text, "costs", doc["costs"], 3):
            costs[edge_key(i, j)] = c
    budget = doc.get("budget", "unbounded")
    if budget == "unbounded":
        budget = None
    else:
        budget = _int(text, "budget", budget)
    try:
        inst = Instance.build(util, alloc, sharing, attention, alpha, beta, costs, budget)
        if n == 0 and m:
            inst = Instance(inst.utilities, inst.allocation, inst.sharing_edges, inst.attention_arcs, inst.extension, m)
    except (InstanceError, ValueError) as exc:
        msg = str(exc)
        # point at the key the message mentions first
        hits = [(msg.find(k.split("_")[0].rstrip("s")), k) for k in INSTANCE_KEYS]
        hits = [h for h in hits if h[0] >= 0]
        key = min(hits)[1] if hits else None
        _fail(text, key, msg)
    return inst


def _ratio(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def instance_to_dict(inst: Instance) -> dict:
    """Canonical document: fixed key order, explicit sorted graphs, defaults omitted."""
    doc: dict[str, Any] = {
        "agents": inst.n,
        "resources": inst.m,
        "utilities": [list(row) for row in inst.utilities],
        "allocation": [sorted(b) for b in inst.allocation],
        "sharing_edges": [list(e) for e in inst.sorted_edges],
        "attention_arcs": [list(a) for a in sorted(inst.attention_arcs)],
    }
    ext = inst.extension
    if ext.alpha != 1:
        doc["alpha"] = _ratio(ext.alpha)
    if ext.beta != 1:
        doc["beta"] = _ratio(ext.beta)
    if ext.edge_costs:
        doc["costs"] = [[i, j, c] for (i, j), c in sorted(ext.edge_costs.items())]
    if ext.budget is not None:
        doc["budget"] = ext.budget
    return doc


def _layout(doc: dict) -> str:
    lines = [f"  {json.dumps(k)}: {json.dumps(v, separators=(', ', ': '))}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def serialize_instance(inst: Instance) -> str:
    return _layout(instance_to_dict(inst))


def parse_sharing(data: bytes | str, instance: Instance | None = None) -> Sharing:
    """Parse a sharing document; with an instance, also validate against it."""
    text, doc = _decode(data)
    if not isinstance(doc, dict):
        _fail(text, None, "a sharing document must be a JSON object")
    for key in doc:
        if key not in ("bound", "assignments"):
            _fail(text, key, f'unknown key "{key}"')
    bound = _int(text, "bound", doc.get("bound", 1), minimum=1)
    items = doc.get("assignments", [])
    if not isinstance(items, list):
        _fail(text, "assignments", '"assignments" must be an array')
    assignments = []
    for item in items:
        if not isinstance(item, dict) or set(item) != {"edge", "resource"}:
            _fail(text, "assignments", 'each assignment needs exactly "edge" and "resource"')
        (edge,) = _pairs(text, "edge", [item["edge"]])
        r = _int(text, "resource", item["resource"])
        assignments.append((edge, r))
    sharing = Sharing(tuple(assignments), bound)
    if instance is not None:
        result = validate_sharing(instance, sharing)
        if not result.ok:
            raise InvalidSharingError(result.violations)
    return sharing


def serialize_sharing(sharing: Sharing) -> str:
    doc = {
        "bound": sharing.bound,
        "assignments": [{"edge": list(e), "resource": r} for e, r in sharing.assignments],
    }
    return _layout(doc)


def parse_decomposition(data: bytes | str) -> NiceTreeDecomposition:
    """Either ``{"nodes": [{"kind", "bag", "vertex"?, "children"?}], "root"}`` for a
    nice decomposition or ``{"bags": [[...]], "edges": [[a, b]], "root"?}`` for any
    tree decomposition, which is converted."""
    text, doc = _decode(data)
    if not isinstance(doc, dict):
        _fail(text, None, "a decomposition document must be a JSON object")
    if "bags" in doc:
        bags = doc["bags"]
        if not isinstance(bags, list) or any(not isinstance(b, list) for b in bags):
            _fail(text, "bags", '"bags" must be an array of arrays')
        edges = _pairs(text, "edges", doc.get("edges", []))
        root = _int(text, "root", doc.get("root", 0))
        if bags and not 0 <= root < len(bags):
            _fail(text, "root", '"root" is not a bag index')
        try:
            return NiceTreeDecomposition.from_tree(bags, edges, root)
        except (ValueError, IndexError) as exc:
            _fail(text, "edges", str(exc))
    nodes = doc.get("nodes")
    if not isinstance(nodes, list):
        _fail(text, "nodes", 'expected "nodes" or "bags"')
    out = []
    for t in nodes:
        if not isinstance(t, dict) or t.get("kind") not in ("leaf", "introduce", "forget", "join"):
            _fail(text, "kind", f"bad node {t!r}")
        out.append(
            TreeNode(t["kind"], frozenset(t.get("bag", [])), t.get("vertex"), tuple(t.get("children", [])))
        )
    root = doc.get("root")
    if root is not None:
        root = _int(text, "root", root)
    return NiceTreeDecomposition(tuple(out), root)


def serialize_decomposition(dec: NiceTreeDecomposition) -> str:
    nodes = []
    for t in dec.nodes:
        node: dict[str, Any] = {"kind": t.kind, "bag": sorted(t.bag)}
        if t.vertex is not None:
            node["vertex"] = t.vertex
        if t.children:
            node["children"] = list(t.children)
        nodes.append(node)
    return json.dumps({"nodes": nodes, "root": dec.root}, indent=1) + "\n"


# --- random instances -------------------------------------------------------

_ER = re.compile(r"(?:er:|erdos_renyi\()([0-9]*\.?[0-9]+)\)?")


def _graph(rng: np.random.Generator, n: int, model: str) -> list[tuple[int, int]]:
    if model == "clique":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if model == "path":
        return [(i, i + 1) for i in range(n - 1)]
    if model == "tree":
        return [(int(rng.integers(0, i)), i) for i in range(1, n)]
    match = _ER.fullmatch(model)
    if match:
        p = float(match.group(1))
        if not 0 <= p <= 1:
            raise ValueError(f"edge probability must lie in [0, 1], got {p}")
        return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    raise ValueError(f"unknown graph model {model!r} (clique, path, tree, er:p)")


def generate_random(
    seed: int,
    n: int,
    m: int,
    sharing_model: str = "clique",
    attention_model: str = "same_as_sharing_bidirected",
    u_max: int = 5,
) -> Instance:
    """Random instance, deterministic in ``seed``.

    Each resource goes to a uniformly random agent, utilities are uniform in
    ``0..u_max``. Attention models are the graph models made bidirected; with
    ``er:p`` every ordered pair is an arc with probability ``p``.
    """
    if n < 1 or m < 0 or u_max < 0:
        raise ValueError("need n >= 1, m >= 0 and u_max >= 0")
    rng = np.random.default_rng(seed)
    owners = rng.integers(0, n, size=m)
    util = rng.integers(0, u_max + 1, size=(n, m))
    alloc = [[int(r) for r in range(m) if owners[r] == i] for i in range(n)]
    edges = _graph(rng, n, sharing_model)
    if attention_model == "same_as_sharing_bidirected":
        arcs: Any = "same_as_sharing_bidirected"
    elif _ER.fullmatch(attention_model):
        p = float(_ER.fullmatch(attention_model).group(1))
        if not 0 <= p <= 1:
            raise ValueError(f"arc probability must lie in [0, 1], got {p}")
        arcs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
    else:
        arcs = [a for i, j in _graph(rng, n, attention_model) for a in ((i, j), (j, i))]
    return Instance.build(util.tolist(), alloc, edges, arcs)
