"""Model objects for sharing indivisible resources along a social network.

Agents and resources are dense 0-based indices. An :class:`Instance` fixes the
utilities, the initial allocation, the sharing graph (who may share with whom)
and the attention graph (who may envy whom). A :class:`Sharing` picks, for some
sharing edges, a resource owned by one endpoint that the other endpoint may
also use. Everything downstream is evaluated with exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "InstanceError",
    "InvalidSharingError",
    "ExtensionParams",
    "Instance",
    "Sharing",
    "SharingAllocation",
    "Violation",
    "ValidationResult",
    "EnvyReport",
    "validate_sharing",
    "derive_bundles",
    "own_utility",
    "perceived_value",
    "envious_agents",
    "welfare",
    "sharing_cost",
    "edge_key",
]


class InstanceError(ValueError):
    """An instance (or its extension parameters) violates a structural invariant."""


class InvalidSharingError(ValueError):
    """A sharing does not satisfy the sharing invariants for its instance."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = tuple(violations)
        super().__init__("; ".join(v.message for v in self.violations) or "invalid sharing")


def edge_key(i: int, j: int) -> tuple[int, int]:
    """Normalize an undirected agent pair to ``(min, max)``."""
    return (i, j) if i < j else (j, i)


def _as_fraction(value, name: str) -> Fraction:
    try:
        if isinstance(value, str):
            frac = Fraction(value.strip())
        else:
            frac = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InstanceError(f"{name} is not a rational number: {value!r}") from exc
    if not 0 <= frac <= 1:
        raise InstanceError(f"{name} out of [0,1]: {frac}")
    return frac


@dataclass(frozen=True)
class ExtensionParams:
    """Loss factors and sharing costs.

    Parameters
    ----------
    alpha : Fraction
        Share of a donated resource's value the donor keeps.
    beta : Fraction
        Share of a received resource's value the recipient gains.
    edge_costs : mapping
        Cost of sharing across an edge ``(i, j)`` with ``i < j``; absent edges cost 0.
    budget : int or None
        Upper bound on the total cost of a sharing; ``None`` means unbounded.
    """

    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(1)
    edge_costs: Mapping[tuple[int, int], int] = field(default_factory=dict)
    budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_fraction(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _as_fraction(self.beta, "beta"))
        costs: dict[tuple[int, int], int] = {}
        for (i, j), c in dict(self.edge_costs).items():
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise InstanceError(f"cost of edge ({i},{j}) must be a non-negative integer")
            key = edge_key(i, j)
            if key in costs:
                raise InstanceError(f"duplicate cost for edge {key}")
            if c:
                costs[key] = c
        object.__setattr__(self, "edge_costs", dict(sorted(costs.items())))
        if self.budget is not None:
            if not isinstance(self.budget, int) or isinstance(self.budget, bool) or self.budget < 0:
                raise InstanceError("budget must be a non-negative integer or unbounded")

    def __hash__(self):
        return hash((self.alpha, self.beta, tuple(self.edge_costs.items()), self.budget))

    @property
    def is_base(self) -> bool:
        """True when the parameters reproduce the model without extensions."""
        return self.alpha == 1 and self.beta == 1 and self.budget is None

    def cost(self, i: int, j: int) -> int:
        return self.edge_costs.get(edge_key(i, j), 0)

    @property
    def scale(self) -> int:
        """Common denominator of alpha and beta; multiplies values into integers."""
        return lcm(self.alpha.denominator, self.beta.denominator)


@dataclass(frozen=True)
class Instance:
    """A sharing-allocation instance.

    ``utilities[i][r]`` is agent ``i``'s value for resource ``r``. ``allocation[i]``
    is the initial bundle of agent ``i``; bundles are disjoint and cover every
    resource. ``sharing_edges`` holds normalized pairs ``(i, j)`` with ``i < j``;
    ``attention_arcs`` holds ordered pairs ``(i, j)`` meaning ``i`` looks at ``j``.
    """

    utilities: tuple[tuple[int, ...], ...]
    allocation: tuple[frozenset[int], ...]
    sharing_edges: frozenset[tuple[int, int]] = frozenset()
    attention_arcs: frozenset[tuple[int, int]] = frozenset()
    extension: ExtensionParams = field(default_factory=ExtensionParams)
    resource_count: int | None = None

    def __post_init__(self):
        utilities = tuple(tuple(row) for row in self.utilities)
        n = len(utilities)
        if n < 1:
            raise InstanceError("an instance needs at least one agent")
        m = self.resource_count if self.resource_count is not None else len(utilities[0])
        for i, row in enumerate(utilities):
            if len(row) != m:
                raise InstanceError(f"utility row {i} has {len(row)} entries, expected {m}")
            for r, u in enumerate(row):
                if not isinstance(u, int) or isinstance(u, bool) or u < 0:
                    raise InstanceError(f"utility of agent {i} for resource {r} must be a non-negative integer")
        if len(self.allocation) != n:
            raise InstanceError(f"allocation lists {len(self.allocation)} bundles for {n} agents")
        allocation = tuple(frozenset(b) for b in self.allocation)
        seen: set[int] = set()
        for i, bundle in enumerate(allocation):
            for r in bundle:
                if not isinstance(r, int) or not 0 <= r < m:
                    raise InstanceError(f"agent {i} holds unknown resource {r!r}")
                if r in seen:
                    raise InstanceError(f"resource {r} allocated twice")
                seen.add(r)
        if len(seen) != m:
            missing = sorted(set(range(m)) - seen)
            raise InstanceError(f"allocation not complete: resources {missing} unallocated")

        edges: set[tuple[int, int]] = set()
        for e in self.sharing_edges:
            i, j = e
            self._check_pair(i, j, n, "sharing edge")
            key = edge_key(i, j)
            if key in edges:
                raise InstanceError(f"sharing edge {key} listed twice")
            edges.add(key)
        arcs: set[tuple[int, int]] = set()
        for a in self.attention_arcs:
            i, j = a
            self._check_pair(i, j, n, "attention arc")
            if (i, j) in arcs:
                raise InstanceError(f"attention arc {(i, j)} listed twice")
            arcs.add((i, j))
        ext = self.extension if self.extension is not None else ExtensionParams()
        for e in ext.edge_costs:
            if e not in edges:
                raise InstanceError(f"cost given for {e}, which is not a sharing edge")

        object.__setattr__(self, "utilities", utilities)
        object.__setattr__(self, "allocation", allocation)
        object.__setattr__(self, "sharing_edges", frozenset(edges))
        object.__setattr__(self, "attention_arcs", frozenset(arcs))
        object.__setattr__(self, "extension", ext)
        object.__setattr__(self, "resource_count", m)

    @staticmethod
    def _check_pair(i, j, n, what):
        for x in (i, j):
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                raise InstanceError(f"{what} ({i},{j}) has an invalid endpoint")
        if i == j:
            raise InstanceError(f"{what} ({i},{j}) is a self-loop")

    @classmethod
    def build(
        cls,
        utilities: Sequence[Sequence[int]],
        allocation: Sequence[Iterable[int]],
        sharing_edges: Iterable[tuple[int, int]] | str = (),
        attention_arcs: Iterable[tuple[int, int]] | str = (),
        alpha=1,
        beta=1,
        edge_costs: Mapping[tuple[int, int], int] | None = None,
        budget: int | None = None,
    ) -> "Instance":
        """Convenience constructor accepting the ``"clique"`` and
        ``"same_as_sharing_bidirected"`` shorthands used in instance files."""
        n = len(utilities)
        if sharing_edges == "clique":
            sharing_edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        elif isinstance(sharing_edges, str):
            raise InstanceError(f"unknown sharing-edge shorthand {sharing_edges!r}")
        sharing_edges = [tuple(e) for e in sharing_edges]
        if attention_arcs == "clique":
            attention_arcs = [(i, j) for i in range(n) for j in range(n) if i != j]
        elif attention_arcs == "same_as_sharing_bidirected":
            attention_arcs = [a for i, j in sharing_edges for a in ((i, j), (j, i))]
        elif isinstance(attention_arcs, str):
            raise InstanceError(f"unknown attention shorthand {attention_arcs!r}")
        ext = ExtensionParams(alpha=alpha, beta=beta, edge_costs=edge_costs or {}, budget=budget)
        m = len(utilities[0]) if n else 0
        return cls(
            utilities=tuple(tuple(row) for row in utilities),
            allocation=tuple(frozenset(b) for b in allocation),
            sharing_edges=frozenset(sharing_edges),
            attention_arcs=frozenset(tuple(a) for a in attention_arcs),
            extension=ext,
            resource_count=m,
        )

    def with_extension(self, **changes) -> "Instance":
        """Copy of this instance with some extension parameters replaced."""
        params = {
            "alpha": self.extension.alpha,
            "beta": self.extension.beta,
            "edge_costs": self.extension.edge_costs,
            "budget": self.extension.budget,
        }
        params.update(changes)
        return Instance(
            utilities=self.utilities,
            allocation=self.allocation,
            sharing_edges=self.sharing_edges,
            attention_arcs=self.attention_arcs,
            extension=ExtensionParams(**params),
            resource_count=self.m,
        )

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def m(self) -> int:
        return self.resource_count  # type: ignore[return-value]

    @cached_property
    def owner(self) -> tuple[int, ...]:
        owner = [0] * self.m
        for i, bundle in enumerate(self.allocation):
            for r in bundle:
                owner[r] = i
        return tuple(owner)

    @cached_property
    def owned(self) -> tuple[tuple[int, ...], ...]:
        """Initial bundles as sorted tuples."""
        return tuple(tuple(sorted(b)) for b in self.allocation)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.sharing_edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.attention_arcs:
            adj[i].append(j)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.attention_arcs:
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.sharing_edges))

    @cached_property
    def bundle_value(self) -> tuple[tuple[int, ...], ...]:
        """``bundle_value[i][j]`` is agent i's value for j's initial bundle."""
        return tuple(
            tuple(sum(row[r] for r in bundle) for bundle in self.allocation) for row in self.utilities
        )

    def initial_utility(self, i: int) -> int:
        return self.bundle_value[i][i]

    @property
    def identical_utilities(self) -> bool:
        return all(row == self.utilities[0] for row in self.utilities)

    @property
    def attention_is_bidirectional_clique(self) -> bool:
        return len(self.attention_arcs) == self.n * (self.n - 1)

    @property
    def attention_matches_sharing(self) -> bool:
        """True when the undirected graph under the attention arcs is the sharing graph."""
        return {edge_key(i, j) for i, j in self.attention_arcs} == set(self.sharing_edges)


@dataclass(frozen=True)
class Sharing:
    """Resources shared across sharing edges.

    ``assignments`` is a sorted tuple of ``((i, j), r)`` with ``i < j``: resource ``r``
    (owned by ``i`` or ``j``) becomes usable by the other endpoint too. An edge may
    carry more than one resource when ``bound`` allows it; a resource may appear at
    most once. ``bound`` caps the number of shared resources each agent takes part in.
    """

    assignments: tuple[tuple[tuple[int, int], int], ...] = ()
    bound: int = 1

    def __post_init__(self):
        norm = tuple(sorted((edge_key(*e), r) for e, r in self.assignments))
        object.__setattr__(self, "assignments", norm)
        if not isinstance(self.bound, int) or self.bound < 1:
            raise ValueError("sharing bound must be a positive integer")

    @classmethod
    def from_transfers(cls, transfers: Iterable[tuple[int, int, int]], bound: int = 1) -> "Sharing":
        """Build from ``(donor, recipient, resource)`` triples."""
        return cls(tuple((edge_key(d, q), r) for d, q, r in transfers), bound)

    def __len__(self) -> int:
        return len(self.assignments)

    def __bool__(self) -> bool:  # an empty sharing is still a sharing
        return True

    @property
    def is_empty(self) -> bool:
        return not self.assignments

    def transfers(self, instance: Instance) -> list[tuple[int, int, int]]:
        """``(donor, recipient, resource)`` triples; donors are the owners."""
        out = []
        for (i, j), r in self.assignments:
            d = instance.owner[r]
            out.append((d, j if d == i else i, r))
        return out


@dataclass(frozen=True)
class SharingAllocation:
    """Per-agent bundles after sharing, split into kept, received and donated resources."""

    kept: tuple[frozenset[int], ...]
    received: tuple[frozenset[int], ...]
    donated: tuple[frozenset[int], ...]

    def bundle(self, i: int) -> frozenset[int]:
        return self.kept[i] | self.received[i] | self.donated[i]


@dataclass(frozen=True)
class Violation:
    kind: str  # ownership | triple-access | per-agent-bound | edge-not-in-graph | index | budget
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


@dataclass(frozen=True)
class EnvyReport:
    envious: frozenset[int]
    witnesses: Mapping[int, tuple[int, int]]

    def __len__(self) -> int:
        return len(self.envious)


def validate_sharing(instance: Instance, sharing: Sharing) -> ValidationResult:
    """Check a sharing against an instance; every violation is reported, none raised."""
    out: list[Violation] = []
    used: dict[int, int] = {}
    involvement = [0] * instance.n
    cost = 0
    for (i, j), r in sharing.assignments:
        if not (0 <= i < instance.n and 0 <= j < instance.n and 0 <= r < instance.m):
            out.append(Violation("index", f"assignment ({i},{j})->{r} uses an unknown index"))
            continue
        if (i, j) not in instance.sharing_edges:
            out.append(Violation("edge-not-in-graph", f"({i},{j}) is not a sharing edge"))
        if instance.owner[r] not in (i, j):
            out.append(
                Violation("ownership", f"resource {r} on edge ({i},{j}) is owned by agent {instance.owner[r]}")
            )
        if r in used:
            out.append(Violation("triple-access", f"resource {r} is shared more than once"))
        used[r] = used.get(r, 0) + 1
        if used[r] == 1:
            involvement[i] += 1
            involvement[j] += 1
        cost += instance.extension.cost(i, j)
    for a, count in enumerate(involvement):
        if count > sharing.bound:
            out.append(Violation("per-agent-bound", f"agent {a} takes part in {count} > {sharing.bound} shares"))
    budget = instance.extension.budget
    if budget is not None and cost > budget:
        out.append(Violation("budget", f"sharing cost {cost} exceeds budget {budget}"))
    return ValidationResult(tuple(out))


def derive_bundles(instance: Instance, sharing: Sharing) -> SharingAllocation:
    """Bundles induced by the initial allocation and ``sharing``."""
    result = validate_sharing(instance, sharing)
    if not result.ok:
        raise InvalidSharingError(result.violations)
    received: list[set[int]] = [set() for _ in range(instance.n)]
    donated: list[set[int]] = [set() for _ in range(instance.n)]
    for d, q, r in sharing.transfers(instance):
        donated[d].add(r)
        received[q].add(r)
    return SharingAllocation(
        kept=tuple(frozenset(instance.allocation[a] - donated[a]) for a in range(instance.n)),
        received=tuple(frozenset(s) for s in received),
        donated=tuple(frozenset(s) for s in donated),
    )


def _weighted(instance: Instance, bundles: SharingAllocation, viewer: int, owner: int) -> Fraction:
    u = instance.utilities[viewer]
    ext = instance.extension
    return (
        Fraction(sum(u[r] for r in bundles.kept[owner]))
        + ext.alpha * sum(u[r] for r in bundles.donated[owner])
        + ext.beta * sum(u[r] for r in bundles.received[owner])
    )


def own_utility(instance: Instance, bundles: SharingAllocation, i: int) -> Fraction:
    """Kept resources count fully, donated ones at alpha, received ones at beta."""
    return _weighted(instance, bundles, i, i)


def perceived_value(instance: Instance, bundles: SharingAllocation, i: int, j: int) -> Fraction:
    """Value of agent j's bundle as seen by agent i, with the same weights as own utility."""
    if i == j:
        raise ValueError("an agent does not compare its bundle with itself")
    return _weighted(instance, bundles, i, j)


def envious_agents(instance: Instance, sharing: Sharing) -> EnvyReport:
    bundles = derive_bundles(instance, sharing)
    own = [own_utility(instance, bundles, i) for i in range(instance.n)]
    witnesses: dict[int, tuple[int, int]] = {}
    for i in range(instance.n):
        for j in instance.out_neighbors[i]:
            if own[i] < perceived_value(instance, bundles, i, j):
                witnesses[i] = (i, j)
                break
    return EnvyReport(frozenset(witnesses), witnesses)


def welfare(instance: Instance, sharing: Sharing) -> tuple[Fraction, Fraction]:
    """Utilitarian (sum) and egalitarian (minimum) welfare of a sharing."""
    bundles = derive_bundles(instance, sharing)
    values = [own_utility(instance, bundles, i) for i in range(instance.n)]
    return sum(values, Fraction(0)), min(values)


def sharing_cost(instance: Instance, sharing: Sharing) -> int:
    return sum(instance.extension.cost(i, j) for (i, j), _ in sharing.assignments)
