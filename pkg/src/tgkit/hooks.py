"""Typed hook pipeline: contracts, recipe validation, keyed execution.

A hook declares the batch attributes it requires and produces. A set of
hooks forms a recipe when the induced dependency relation (producer feeds
requirer) is acyclic and every requirement is satisfiable; execution order
is the topological order with registration order breaking ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from tgkit.exceptions import (
    ContractViolationError,
    CyclicRecipeError,
    DuplicateHookNameError,
    HookExecutionError,
    MissingAttributeError,
    TemporalGraphError,
    ValidationError,
)
from tgkit.loader import BUILTIN_ATTRS
from tgkit.metrics import sample_uniform_negatives
from tgkit.neighbors import (
    RecencyBuffer,
    TemporalAdjacency,
    recency_query,
    recency_update,
    uniform_query,
)

if TYPE_CHECKING:
    from tgkit.loader import MaterializedBatch


@dataclass(frozen=True)
class HookContract:
    """Declared requires/produces attribute sets of one hook.

    The sets must be disjoint so the dependency relation stays a clean
    edge definition with no self-loops.
    """

    name: str
    requires: frozenset[str]
    produces: frozenset[str]
    stateful: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("hook name must be non-empty")
        object.__setattr__(self, "requires", frozenset(self.requires))
        object.__setattr__(self, "produces", frozenset(self.produces))
        overlap = self.requires & self.produces
        if overlap:
            raise ValidationError(
                f"hook '{self.name}': requires and produces overlap on "
                f"{sorted(overlap)}"
            )


class Hook:
    """Base class for batch transformations.

    Subclasses set ``contract`` and implement ``__call__``, which must
    assign every declared produced attribute into ``batch.attrs`` (and
    nothing else). Stateful hooks also implement ``reset``.
    """

    contract: HookContract

    def __call__(self, batch: "MaterializedBatch") -> None:
        raise NotImplementedError

    def reset(self) -> None:
        pass


@dataclass(frozen=True)
class Recipe:
    """A validated execution order over a hook set.

    ``order[i]`` is the registration index of the i-th hook to run;
    ``contracts`` is in execution order.
    """

    order: tuple[int, ...]
    contracts: tuple[HookContract, ...]


def _dependency_edges(
    contracts: Sequence[HookContract],
) -> list[tuple[int, int]]:
    edges = []
    for i, ci in enumerate(contracts):
        for j, cj in enumerate(contracts):
            if i != j and ci.produces & cj.requires:
                edges.append((i, j))
    return edges


def validate_recipe(
    contracts: Sequence[HookContract],
    builtins: frozenset[str] = BUILTIN_ATTRS,
) -> Recipe:
    """Topologically order a hook set by its dependency relation.

    Ties are broken by registration order, so the result is deterministic.

    Raises:
        MissingAttributeError: Some requirement is neither built-in nor
            produced by any hook (names the hook and the attribute).
        CyclicRecipeError: The dependency relation has a cycle (names a
            witness).
        DuplicateHookNameError: Two contracts share a name.
    """
    names = [c.name for c in contracts]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DuplicateHookNameError(f"duplicate hook name '{dup}'")

    produced = set(builtins)
    for c in contracts:
        produced |= c.produces
    for c in contracts:
        missing = c.requires - produced
        if missing:
            raise MissingAttributeError(
                f"hook '{c.name}' requires attribute "
                f"'{sorted(missing)[0]}' which nothing provides"
            )

    n = len(contracts)
    edges = _dependency_edges(contracts)
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for i, j in edges:
        succ[i].append(j)
        indeg[j] += 1

    order: list[int] = []
    ready = [i for i in range(n) if indeg[i] == 0]
    while ready:
        i = min(ready)  # registration-order tie break
        ready.remove(i)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)

    if len(order) != n:
        remaining = set(range(n)) - set(order)
        pred: list[list[int]] = [[] for _ in range(n)]
        for i, j in edges:
            pred[j].append(i)
        witness = _find_cycle(pred, remaining)
        raise CyclicRecipeError(
            "hook dependencies contain a cycle: "
            + " -> ".join(contracts[i].name for i in witness)
        )
    return Recipe(tuple(order), tuple(contracts[i] for i in order))


def _find_cycle(pred: list[list[int]], remaining: set[int]) -> list[int]:
    # Every node left after Kahn's algorithm has a predecessor that is also
    # left, so walking predecessors must revisit a node.
    seen: dict[int, int] = {}
    path: list[int] = []
    node = min(remaining)
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = next(i for i in pred[node] if i in remaining)
    cycle = path[seen[node] :] + [node]
    cycle.reverse()  # present in dependency direction
    return cycle


class HookManager:
    """Registry of hooks keyed by activation key, with cached validation.

    A key's recipe is validated before first execution under that key and
    the cache is invalidated by registration. Execution is single-threaded
    per manager (hooks may mutate shared state).
    """

    def __init__(self, builtins: frozenset[str] = BUILTIN_ATTRS):
        self.builtins = builtins
        self._registry: dict[str, list[Hook]] = {}
        self._validated: dict[str, Recipe] = {}

    def register(self, key: str, hook: Hook) -> None:
        """Append a hook under a key; re-validation happens lazily.

        Raises:
            DuplicateHookNameError: Same hook name already under this key.
        """
        if not key:
            raise ValidationError("activation key must be non-empty")
        hooks = self._registry.setdefault(key, [])
        if any(h.contract.name == hook.contract.name for h in hooks):
            raise DuplicateHookNameError(
                f"hook '{hook.contract.name}' already registered under "
                f"key '{key}'"
            )
        hooks.append(hook)
        self._validated.pop(key, None)

    def hooks(self, key: str) -> list[Hook]:
        return list(self._registry.get(key, []))

    def recipe(self, key: str) -> Recipe:
        if key not in self._validated:
            contracts = [h.contract for h in self._registry.get(key, [])]
            self._validated[key] = validate_recipe(contracts, self.builtins)
        return self._validated[key]

    def execute(self, key: str, batch: "MaterializedBatch") -> "MaterializedBatch":
        """Run the key's hooks in recipe order, checking each contract.

        Raises:
            ContractViolationError: A hook's writes differ from its
                declared produces set.
            HookExecutionError: A hook raised; carries the hook name.
        """
        recipe = self.recipe(key)
        hooks = self._registry.get(key, [])
        for idx in recipe.order:
            hook = hooks[idx]
            batch.attrs.written.clear()
            try:
                hook(batch)
            except TemporalGraphError as exc:
                raise HookExecutionError(hook.contract.name, str(exc)) from exc
            except Exception as exc:
                raise HookExecutionError(hook.contract.name, repr(exc)) from exc
            written = set(batch.attrs.written)
            declared = set(hook.contract.produces)
            if written != declared:
                raise ContractViolationError(
                    f"hook '{hook.contract.name}' declared produces "
                    f"{sorted(declared)} but wrote {sorted(written)}"
                )
        return batch

    def reset(self) -> None:
        """Restore every stateful hook to its post-construction state.

        The registry and validation cache are unchanged.
        """
        seen: set[int] = set()
        for hooks in self._registry.values():
            for hook in hooks:
                if id(hook) in seen or not hook.contract.stateful:
                    continue
                seen.add(id(hook))
                hook.reset()


# -- built-in hooks ---------------------------------------------------------


def _flat_negatives(value) -> np.ndarray:
    if isinstance(value, np.ndarray):
        return value.reshape(-1).astype(np.int64)
    if len(value) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([np.asarray(v, dtype=np.int64).reshape(-1) for v in value])


class UniformNegativesHook(Hook):
    """Produce uniform negative destinations for each positive edge.

    Deterministic per epoch: the per-batch seed derives from the base seed
    and a batch counter that ``reset`` rewinds.
    """

    def __init__(self, universe: np.ndarray, q: int, seed: int):
        self.universe = np.asarray(universe, dtype=np.int64)
        self.q = q
        self.seed = seed
        self._batch_no = 0
        self.contract = HookContract(
            name="uniform-negatives",
            requires=frozenset(),
            produces=frozenset({"negatives"}),
            stateful=True,
        )

    def __call__(self, batch: "MaterializedBatch") -> None:
        src, dst = batch.attrs["src"], batch.attrs["dst"]
        time = batch.attrs["time"]
        batch.attrs["negatives"] = sample_uniform_negatives(
            (self.seed, self._batch_no), (src, dst, time), self.universe, self.q
        )
        self._batch_no += 1

    def reset(self) -> None:
        self._batch_no = 0


class PrecomputedNegativesHook(Hook):
    """Emit negatives loaded ahead of time, aligned to the positive stream.

    Negatives are loaded at construction (registration time), never read
    mid-execution; a cursor tracks how many positives have been consumed.
    """

    def __init__(self, negatives: Sequence[np.ndarray]):
        self.negatives = [np.asarray(n, dtype=np.int64) for n in negatives]
        self._cursor = 0
        self.contract = HookContract(
            name="precomputed-negatives",
            requires=frozenset(),
            produces=frozenset({"negatives"}),
            stateful=True,
        )

    def __call__(self, batch: "MaterializedBatch") -> None:
        b = batch.attrs["src"].shape[0]
        if self._cursor + b > len(self.negatives):
            raise ValidationError(
                f"negatives exhausted: need {self._cursor + b} entries, "
                f"have {len(self.negatives)}"
            )
        batch.attrs["negatives"] = self.negatives[self._cursor : self._cursor + b]
        self._cursor += b

    def reset(self) -> None:
        self._cursor = 0


def _batch_cut_time(batch: "MaterializedBatch") -> int:
    time = batch.attrs["time"]
    if time.shape[0]:
        return int(time[0])
    return int(batch.interval[0])


class RecencyNeighborHook(Hook):
    """Most-recent temporal neighbors for batch endpoints and negatives.

    Queries strictly before the batch's first timestamp, then feeds the
    batch's own edges into the ring buffers (query-then-update, so a
    prediction never sees the edge it predicts).
    """

    def __init__(self, num_nodes: int, capacity: int, want: int | None = None):
        self.buffer = RecencyBuffer(num_nodes, capacity)
        self.want = want if want is not None else capacity
        self.contract = HookContract(
            name="recency-neighbors",
            requires=frozenset({"negatives"}),
            produces=frozenset({"neighbors"}),
            stateful=True,
        )

    def __call__(self, batch: "MaterializedBatch") -> None:
        negs = _flat_negatives(batch.attrs["negatives"])
        seeds = np.concatenate([batch.attrs["src"], batch.attrs["dst"], negs])
        result = recency_query(
            self.buffer, seeds, self.want, cut_time=_batch_cut_time(batch)
        )
        batch.attrs["neighbors"] = {"seeds": seeds, "result": result}
        sl = batch.slice
        recency_update(self.buffer, sl.src, sl.dst, sl.time, sl.edge_rows)

    def reset(self) -> None:
        self.buffer.reset()


class UniformNeighborHook(Hook):
    """Uniform temporal neighbors drawn from a prebuilt adjacency index."""

    def __init__(self, adjacency: TemporalAdjacency, want: int, seed: int):
        self.adjacency = adjacency
        self.want = want
        self.seed = seed
        self.contract = HookContract(
            name="uniform-neighbors",
            requires=frozenset({"negatives"}),
            produces=frozenset({"neighbors"}),
        )

    def __call__(self, batch: "MaterializedBatch") -> None:
        negs = _flat_negatives(batch.attrs["negatives"])
        seeds = np.concatenate([batch.attrs["src"], batch.attrs["dst"], negs])
        result = uniform_query(
            self.adjacency, seeds, _batch_cut_time(batch), self.want, self.seed
        )
        batch.attrs["neighbors"] = {"seeds": seeds, "result": result}
