"""Instance files: JSON parsing, canonical serialization, and generators.

Every instance is one JSON object with a ``kind`` discriminator::

    {"kind":"table","k":K,"n":N,"values":[...]}                  # index = encode(x)
    {"kind":"skew-table","k":2,"n":N,"values":[...],"alpha":[p,q]}
    {"kind":"cutsum","k":K,"vertices":N,"edges":[[u,v,w],...]}
    {"kind":"welfare","k":K,"n":N,"universe_weights":[[w,...]*K],"covers":[[[ids],...]*K]}
    {"kind":"hardness-f","k":K,"n":N,"eps":[p,q]}
    {"kind":"hardness-g","k":K,"n":N,"eps":[p,q],"partition":[b_0,...]}

Exact quantities (``eps``, ``alpha``) are integer pairs, never floats.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from ..checkers import check_alpha_bisubmodular, check_domain, check_ksubmodular, digits, tabulate
from ..hardness import HardnessError, HardnessOracle, HardnessParams, random_partition
from ..oracles import CutSumOracle, OracleError, TableOracle, ValueOracle, WelfareOracle


class InstanceError(ValueError):
    """Schema or semantic violation in an instance description."""


class GenerationError(RuntimeError):
    """A rejection sampler ran out of its retry budget."""


_SIZE = {"type": "integer", "minimum": 0}
_ARITY = {"type": "integer", "minimum": 1}
_RATIO = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
_NUMBERS = {"type": "array", "items": {"type": "number"}}


def _schema(kind: str, **props) -> dict:
    properties = {"kind": {"const": kind}, "k": _ARITY, **props}
    return {"type": "object", "properties": properties, "required": list(properties),
            "additionalProperties": False}


SCHEMAS = {
    "table": _schema("table", n=_SIZE, values=_NUMBERS),
    "skew-table": _schema("skew-table", n=_SIZE, values=_NUMBERS, alpha=_RATIO),
    "cutsum": _schema("cutsum", vertices=_SIZE, edges={
        "type": "array",
        "items": {"type": "array", "prefixItems": [{"type": "integer"}, {"type": "integer"}, {"type": "number"}],
                  "items": False, "minItems": 3}}),
    "welfare": _schema("welfare", n=_SIZE, universe_weights={"type": "array", "items": _NUMBERS}, covers={
        "type": "array",
        "items": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}}),
    "hardness-f": _schema("hardness-f", n=_SIZE, eps=_RATIO),
    "hardness-g": _schema("hardness-g", n=_SIZE, eps=_RATIO,
                          partition={"type": "array", "items": {"type": "integer"}}),
}
KINDS = tuple(SCHEMAS)


def _ratio(pair, name: str) -> Fraction:
    p, q = pair
    if q <= 0:
        raise InstanceError(f"{name}: denominator must be positive, got {pair}")
    return Fraction(p, q)


@dataclass(frozen=True)
class InstanceFile:
    kind: str
    k: int
    n: int
    payload: dict = field(default_factory=dict)

    @property
    def alpha(self) -> Fraction | None:
        return _ratio(self.payload["alpha"], "alpha") if "alpha" in self.payload else None

    def hardness_params(self) -> HardnessParams:
        if not self.kind.startswith("hardness"):
            raise InstanceError(f"{self.kind} instance has no hardness parameters")
        try:
            return HardnessParams(self.k, self.n, _ratio(self.payload["eps"], "eps"),
                                  tuple(self.payload["partition"]) if "partition" in self.payload else None)
        except HardnessError as exc:
            raise InstanceError(str(exc)) from exc

    def oracle(self) -> ValueOracle:
        p = self.payload
        try:
            if self.kind in ("table", "skew-table"):
                return TableOracle(self.k, self.n, p["values"])
            if self.kind == "cutsum":
                return CutSumOracle(self.k, self.n, p["edges"])
            if self.kind == "welfare":
                return WelfareOracle(self.k, self.n, p["universe_weights"], p["covers"])
            return HardnessOracle(self.hardness_params(), hidden=self.kind == "hardness-g")
        except OracleError as exc:
            raise InstanceError(f"{self.kind}: {exc}") from exc

    def to_dict(self) -> dict:
        size_key = "vertices" if self.kind == "cutsum" else "n"
        return {"kind": self.kind, "k": self.k, size_key: self.n, **self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"


_PAYLOAD_ORDER = {
    "table": ("values",),
    "skew-table": ("values", "alpha"),
    "cutsum": ("edges",),
    "welfare": ("universe_weights", "covers"),
    "hardness-f": ("eps",),
    "hardness-g": ("eps", "partition"),
}


def parse_instance(text: bytes | str) -> InstanceFile:
    """Parse and validate; the returned instance's oracle is ready to build."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceError(f"instance is not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    kind = obj.get("kind")
    if kind not in SCHEMAS:
        raise InstanceError(f"field 'kind': expected one of {', '.join(KINDS)}, got {kind!r}")
    errors = sorted(jsonschema.Draft202012Validator(SCHEMAS[kind]).iter_errors(obj),
                    key=lambda err: list(err.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(part) for part in err.absolute_path) or "<root>"
        raise InstanceError(f"field '{where}': {err.message}")
    n = obj["vertices"] if kind == "cutsum" else obj["n"]
    inst = InstanceFile(kind, obj["k"], n, {key: obj[key] for key in _PAYLOAD_ORDER[kind]})
    _validate_semantics(inst)
    return inst


def _validate_semantics(inst: InstanceFile) -> None:
    p = inst.payload
    if inst.kind in ("table", "skew-table"):
        expected = (inst.k + 1) ** inst.n
        if len(p["values"]) != expected:
            raise InstanceError(f"field 'values': expected {expected} entries for k={inst.k}, n={inst.n}, "
                                f"got {len(p['values'])}")
        for idx, v in enumerate(p["values"]):
            if v < 0:
                raise InstanceError(f"field 'values/{idx}': negative value {v}")
    if inst.kind == "skew-table":
        if inst.k != 2:
            raise InstanceError(f"field 'k': skew-table needs k = 2, got {inst.k}")
        alpha = inst.alpha
        if not 0 <= alpha <= 1:
            raise InstanceError(f"field 'alpha': must lie in [0, 1], got {alpha}")
    if inst.kind == "welfare":
        if len(p["universe_weights"]) != inst.k or len(p["covers"]) != inst.k:
            raise InstanceError(f"fields 'universe_weights'/'covers': need exactly k={inst.k} valuations")
    if inst.kind.startswith("hardness"):
        inst.hardness_params()
    # construction runs the remaining per-family checks
    inst.oracle()


def load_instance(path: str) -> InstanceFile:
    """Read an instance file, or stdin when ``path`` is ``-``."""
    if path == "-":
        return parse_instance(sys.stdin.buffer.read())
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_instance(data)


def table_instance(oracle: ValueOracle, alpha=None) -> InstanceFile:
    values = [int(v) if oracle.integral else float(v) for v in tabulate(oracle)]
    if alpha is None:
        return InstanceFile("table", oracle.k, oracle.n, {"values": values})
    alpha = Fraction(alpha)
    return InstanceFile("skew-table", 2, oracle.n,
                        {"values": values, "alpha": [alpha.numerator, alpha.denominator]})


# -- generators ---------------------------------------------------------------

def _random_cutsum(rng, k: int, n: int, edge_prob: float, max_weight: int) -> CutSumOracle:
    edges = [[u, v, int(rng.integers(1, max_weight + 1))]
             for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob]
    return CutSumOracle(k, n, edges)


def _random_welfare_payload(rng, k: int, n: int, universe: int, cover_prob: float, max_weight: int) -> dict:
    weights = [[int(w) for w in rng.integers(1, max_weight + 1, size=universe)] for _ in range(k)]
    covers = [[[u for u in range(universe) if rng.random() < cover_prob] for _ in range(n)] for _ in range(k)]
    return {"universe_weights": weights, "covers": covers}


def _perturb(rng, values: np.ndarray, max_changes: int = 3) -> np.ndarray:
    out = values.copy()
    for _ in range(int(rng.integers(0, max_changes + 1))):
        idx = int(rng.integers(0, out.size))
        out[idx] = max(0, out[idx] + int(rng.integers(-2, 3)))
    return out


def _ksubmodular_proposal(rng, k: int, n: int) -> np.ndarray:
    """Cut sum + coverage welfare + pairwise-monotone unary terms, then noise."""
    cut = tabulate(_random_cutsum(rng, k, n, 0.6, 3))
    welfare = tabulate(WelfareOracle(k, n, **_random_welfare_payload(rng, k, n, 3, 0.4, 3)))
    D = digits(n, k)
    unary = np.zeros(cut.size)
    for e in range(n):
        base = int(rng.integers(0, 3))
        # phi(i) + phi(j) >= 2 phi(0) keeps a single-coordinate term k-submodular
        phi = [base] + [base + int(rng.integers(-1, 4)) for _ in range(k)]
        low = sorted(phi[1:])
        if k >= 2 and low[0] + low[1] < 2 * base:
            phi = [base] + [v + (2 * base - low[0] - low[1]) for v in phi[1:]]
        unary += np.array(phi)[D[:, e]]
    values = cut * int(rng.integers(0, 2)) + welfare * int(rng.integers(0, 2)) + unary
    values -= min(0, values.min())
    return _perturb(rng, values)


def _skew_proposal(rng, n: int, alpha: Fraction) -> np.ndarray:
    """Skewed single-coordinate terms + monotone coverage of either block, then noise."""
    D = digits(n, 2)
    values = np.zeros(3 ** n)
    for e in range(n):
        zero = int(rng.integers(1, 17))
        low = int(rng.integers(0, zero + 1))
        # alpha*phi(1) + phi(2) >= (1+alpha)*phi(0) is the single-coordinate
        # condition; near the boundary it fails for every larger alpha
        high = zero + math.ceil(alpha * (zero - low)) + int(rng.integers(0, 2))
        phi = np.array([zero, low, high])
        values += phi[D[:, e]]
    for block in (1, 2):
        if rng.random() < 0.5:
            payload = _random_welfare_payload(rng, 1, n, 3, 0.4, 2)
            cover = tabulate(WelfareOracle(1, n, **payload))
            idx = np.sum(np.where(D == block, 1, 0) * (2 ** np.arange(n)), axis=1)
            values += cover[idx]
    return _perturb(rng, values, 2)


def generate(kind: str, params: dict, seed, retry_budget: int = 1000) -> InstanceFile:
    """Build an instance deterministically from ``(kind, params, seed)``.

    Kinds: ``hardness-f``, ``hardness-g`` (hidden partition drawn uniformly),
    ``random-cutsum``, ``random-welfare``, ``random-verified-ksubmodular``
    (rejection-sampled table passing the k-submodularity checker) and
    ``random-skew-table`` (rejection-sampled table passing the
    alpha-bisubmodularity checker at ``params["alpha"]``).
    """
    rng = np.random.default_rng(seed)
    k = int(params.get("k", 2))
    n = int(params.get("n", 0))
    if kind in ("hardness-f", "hardness-g"):
        eps = Fraction(params["eps"])
        payload = {"eps": [eps.numerator, eps.denominator]}
        if kind == "hardness-g":
            payload["partition"] = list(random_partition(n, k, rng))
        inst = InstanceFile(kind, k, n, payload)
        inst.hardness_params()
        return inst
    if kind == "random-cutsum":
        oracle = _random_cutsum(rng, k, n, float(params.get("edge_prob", 0.5)), int(params.get("max_weight", 1)))
        return InstanceFile("cutsum", k, n, {"edges": [list(e) for e in oracle.edges]})
    if kind == "random-welfare":
        payload = _random_welfare_payload(rng, k, n, int(params.get("universe", 4)),
                                          float(params.get("cover_prob", 0.4)), int(params.get("max_weight", 3)))
        return InstanceFile("welfare", k, n, payload)
    if kind == "random-verified-ksubmodular":
        check_domain(n, k)
        for _ in range(retry_budget):
            values = _ksubmodular_proposal(rng, k, n)
            oracle = TableOracle(k, n, values)
            if check_ksubmodular(oracle).passed:
                return InstanceFile("table", k, n, {"values": [int(v) for v in values]})
        raise GenerationError(f"no k-submodular table found within {retry_budget} proposals")
    if kind == "random-skew-table":
        alpha = Fraction(params["alpha"])
        if not 0 <= alpha <= 1:
            raise InstanceError(f"alpha must lie in [0, 1], got {alpha}")
        check_domain(n, 2)
        for _ in range(retry_budget):
            values = _skew_proposal(rng, n, alpha)
            oracle = TableOracle(2, n, values)
            if check_alpha_bisubmodular(oracle, alpha).passed:
                return InstanceFile("skew-table", 2, n, {"values": [int(v) for v in values],
                                                          "alpha": [alpha.numerator, alpha.denominator]})
        raise GenerationError(f"no {alpha}-bisubmodular table found within {retry_budget} proposals")
    raise InstanceError(f"unknown generator kind {kind!r}")


GENERATOR_KINDS = ("hardness-f", "hardness-g", "random-cutsum", "random-welfare",
                   "random-verified-ksubmodular", "random-skew-table")
