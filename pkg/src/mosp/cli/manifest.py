"""Benchmark manifests (JSON) and the built-in desk-scale suites.

A manifest looks like::

    {
      "name": "example",
      "instances": [
        {"family": "grid", "n": 9, "d": [2, 3, 4], "seeds": 5},
        {"path": "road.mosp", "queries": {"random": 50, "seed": 7}},
        {"path": "other.mosp", "queries": {"file": "other.queries"}}
      ],
      "algorithms": ["LS", "LS-TD", "NS", "NS-TD"],
      "queue_policies": ["fifo", "lexdeque"],
      "repetitions": 1,
      "time_limit": 600,
      "measure_obsolete": false,
      "seed": 0
    }

Generator entries take any :class:`~mosp.generators.GenSpec` field; ``n``,
``d`` and ``seed`` may be lists, and ``"seeds": k`` means seeds ``0..k-1``.
All combinations are expanded.  Without a ``queries`` entry a generated
instance is queried once at its designated source and target.  Relative
paths resolve against the manifest's directory.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..generators import GenSpec
from ..labeling.solvers import VARIANTS

__all__ = [
    "ManifestError", "QuerySource", "InstanceEntry", "Manifest", "load_manifest", "SUITES",
    "suite", "POLICY_NAMES", "policy_internal",
]

# CLI / CSV name -> solver option value
POLICY_NAMES = {"fifo": "fifo", "lexdeque": "lex_front_back"}
DEFAULT_TIME_LIMIT = 600.0


class ManifestError(ValueError):
    pass


def policy_internal(name: str) -> str:
    try:
        return POLICY_NAMES[name]
    except KeyError:
        raise ManifestError(f"unknown queue policy {name!r}; expected fifo or lexdeque") from None


@dataclass(frozen=True)
class QuerySource:
    """``designated`` (the generator's s, t), ``random`` (``count`` seeded pairs) or ``file``."""

    kind: str = "designated"
    count: int = 0
    seed: int | None = None
    path: str | None = None

    @classmethod
    def from_json(cls, data, base: Path) -> QuerySource:
        if data is None or data == "designated":
            return cls()
        if not isinstance(data, dict):
            raise ManifestError(f"bad query source {data!r}")
        if "file" in data:
            return cls(kind="file", path=str(base / data["file"]))
        if "random" in data:
            count = int(data["random"])
            if count < 1:
                raise ManifestError("random query count must be positive")
            seed = data.get("seed")
            return cls(kind="random", count=count, seed=None if seed is None else int(seed))
        raise ManifestError(f"bad query source {data!r}")

    def to_json(self):
        if self.kind == "file":
            return {"file": self.path}
        if self.kind == "random":
            out = {"random": self.count}
            if self.seed is not None:
                out["seed"] = self.seed
            return out
        return "designated"


@dataclass(frozen=True)
class InstanceEntry:
    spec: GenSpec | None = None
    path: str | None = None
    queries: QuerySource = field(default_factory=QuerySource)

    @property
    def name(self) -> str:
        if self.spec is not None:
            return self.spec.name
        return Path(self.path).stem

    def to_json(self) -> dict:
        out = dict(self.spec.to_dict()) if self.spec is not None else {"path": self.path}
        if self.queries.kind != "designated":
            out["queries"] = self.queries.to_json()
        return out


@dataclass
class Manifest:
    instances: list[InstanceEntry]
    algorithms: list[str] = field(default_factory=lambda: list(VARIANTS))
    queue_policies: list[str] = field(default_factory=lambda: ["fifo"])
    repetitions: int = 1
    time_limit: float = DEFAULT_TIME_LIMIT
    measure_obsolete: bool = False
    seed: int = 0
    name: str = "manifest"
    output: str | None = None

    def validate(self) -> Manifest:
        if not self.instances:
            raise ManifestError("manifest has no instances")
        if not self.algorithms:
            raise ManifestError("manifest has no algorithms")
        for a in self.algorithms:
            if a not in VARIANTS:
                raise ManifestError(f"unknown algorithm {a!r}; expected one of {', '.join(VARIANTS)}")
        if not self.queue_policies:
            raise ManifestError("manifest has no queue policies")
        for p in self.queue_policies:
            policy_internal(p)
        if not self.time_limit > 0:
            raise ManifestError("time_limit must be positive")
        if self.repetitions < 1:
            raise ManifestError("repetitions must be at least 1")
        for e in self.instances:
            if e.spec is None and e.queries.kind == "designated":
                raise ManifestError(f"instance file {e.path} needs a 'queries' source")
        return self

    def matrix(self) -> list[tuple[str, str]]:
        """``(algorithm, policy)`` pairs; NS variants ignore the LS queue policy."""
        out = []
        for a in self.algorithms:
            if a.startswith("LS"):
                out.extend((a, p) for p in self.queue_policies)
            else:
                out.append((a, "fifo"))
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "instances": [e.to_json() for e in self.instances],
            "algorithms": list(self.algorithms),
            "queue_policies": list(self.queue_policies),
            "repetitions": self.repetitions,
            "time_limit": self.time_limit,
            "measure_obsolete": self.measure_obsolete,
            "seed": self.seed,
        }

    def dump(self, path: str | os.PathLike) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")


_SPEC_FIELDS = {f.name for f in fields(GenSpec)}


def _as_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def _expand_generator(item: dict, base: Path) -> list[InstanceEntry]:
    item = dict(item)
    queries = QuerySource.from_json(item.pop("queries", None), base)
    if "seeds" in item:
        if "seed" in item:
            raise ManifestError("give either 'seed' or 'seeds', not both")
        seeds = item.pop("seeds")
        item["seed"] = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    unknown = set(item) - _SPEC_FIELDS
    if unknown:
        raise ManifestError(f"unknown instance keys: {', '.join(sorted(unknown))}")
    keys = list(item)
    out = []
    for combo in itertools.product(*(_as_list(item[k]) if k in ("n", "d", "seed") else [item[k]] for k in keys)):
        try:
            spec = GenSpec(**dict(zip(keys, combo)))
        except (TypeError, ValueError) as exc:
            raise ManifestError(f"invalid instance {dict(zip(keys, combo))}: {exc}") from None
        out.append(InstanceEntry(spec=spec, queries=queries))
    return out


def manifest_from_json(data: dict, base: Path = Path(".")) -> Manifest:
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    entries: list[InstanceEntry] = []
    for item in data.get("instances", []):
        if not isinstance(item, dict):
            raise ManifestError(f"bad instance entry {item!r}")
        if "path" in item:
            extra = set(item) - {"path", "queries"}
            if extra:
                raise ManifestError(f"unknown keys for a file instance: {', '.join(sorted(extra))}")
            entries.append(InstanceEntry(
                path=str(base / item["path"]),
                queries=QuerySource.from_json(item.get("queries"), base),
            ))
        else:
            entries.extend(_expand_generator(item, base))
    known = {"name", "instances", "algorithms", "queue_policies", "repetitions", "time_limit",
             "measure_obsolete", "seed", "output", "generated_from"}
    unknown = set(data) - known
    if unknown:
        raise ManifestError(f"unknown manifest keys: {', '.join(sorted(unknown))}")
    m = Manifest(
        instances=entries,
        algorithms=list(data.get("algorithms", VARIANTS)),
        queue_policies=list(data.get("queue_policies", ["fifo"])),
        repetitions=int(data.get("repetitions", 1)),
        time_limit=float(data.get("time_limit", DEFAULT_TIME_LIMIT)),
        measure_obsolete=bool(data.get("measure_obsolete", False)),
        seed=int(data.get("seed", 0)),
        name=str(data.get("name", "manifest")),
        output=data.get("output"),
    )
    return m.validate()


def load_manifest(path: str | os.PathLike) -> Manifest:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{p}: invalid JSON: {exc}") from None
    m = manifest_from_json(data, p.parent)
    if "name" not in data:
        m.name = p.stem
    return m


# -- built-in suites ----------------------------------------------------------
# Desk replicas of the instance table: structural parameters as published,
# fewer instances and a smaller largest n.

def _gen(family, n, d, seeds, **kw) -> list[dict]:
    return [dict(family=family, n=n, d=d, seeds=seeds, **kw)]


_SUITE_DEFS: dict[str, list[dict]] = {
    "CompleteN-medium-desk": _gen("complete", [10, 25, 50, 75, 100], 3, 3),
    "CompleteK-medium-desk": _gen("complete", 50, list(range(2, 11)), 3),
    "GridN-medium-desk": _gen("grid", [21, 25, 29, 35], 3, 3),
    "GridK-medium-desk": _gen("grid", 9, list(range(2, 16)), 1),
    "RandomN-medium-desk": _gen("random", [500, 1000, 2000], 3, 3),
    "RandomK-medium-desk": _gen("random", 1000, list(range(2, 8)), 3),
    "CompleteN-large-desk": _gen("complete", [10, 20, 30, 40], 6, 3),
    "CompleteK-large-desk": _gen("complete", 40, list(range(2, 8)), 3),
    "GridN-large-desk": _gen("grid", [5, 7, 9, 11], 6, 3),
    "GridK-large-desk": _gen("grid", 10, list(range(2, 8)), 3),
    "RandomN-large-desk": _gen("random", [500, 1000], 6, 3),
    "RandomK-large-desk": _gen("random", 1000, list(range(2, 8)), 3),
    "RandomK-desk": _gen("random", 500, list(range(2, 10)), 10),
    "RandomN-desk": _gen("random", 500, 3, 10),
    "corr-desk": [dict(family="correlated_random", n=1000, d=3, density=0.3, rho=0.7, seeds=list(range(1, 31)))],
}

SUITES = tuple(_SUITE_DEFS)


def suite(name: str, **overrides) -> Manifest:
    """Manifest of a built-in suite; keyword arguments replace manifest fields."""
    try:
        items = _SUITE_DEFS[name]
    except KeyError:
        raise ManifestError(f"unknown suite {name!r}; available: {', '.join(SUITES)}") from None
    entries = [e for item in items for e in _expand_generator(item, Path("."))]
    m = Manifest(instances=entries, name=name)
    return replace(m, **overrides).validate()
