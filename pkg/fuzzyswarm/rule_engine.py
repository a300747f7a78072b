"""
Fuzzy set groups (FSGs) and the forecast rules derived from them.

A group is the chronological pattern of set labels F(t-n) ... F(t-1) that
precedes its anchor time t. Groups start pairwise; groups that share a
pattern are extended one step further back until every pattern is unique.
Each group then becomes an if-rule whose conditions list the lags most
recent first.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import AmbiguousMatchError, NoMatchError, TooShortError
from .fuzzifier import FuzzifiedObservation

logger = logging.getLogger(__name__)

MIN_HISTORY = 2


@dataclass(frozen=True)
class FuzzySetGroup:
    label: int
    pattern: Tuple[int, ...]
    anchor_t: int

    @property
    def order(self) -> int:
        return len(self.pattern)

    def __str__(self):
        return "{" + ",".join(f"A{i}" for i in self.pattern) + "}"


@dataclass(frozen=True)
class ForecastRule:
    label: int
    conditions: Tuple[Tuple[int, int], ...]
    anchor_ts: Tuple[int, ...]
    weights: Optional[Tuple[float, ...]] = None
    fitness: Optional[float] = None

    def __post_init__(self):
        if self.weights is not None and len(self.weights) != len(self.conditions):
            raise ValueError(
                f"Rule {self.label}: {len(self.weights)} weights for {len(self.conditions)} conditions"
            )

    @property
    def order(self) -> int:
        return len(self.conditions)

    @property
    def trained(self) -> bool:
        return self.weights is not None

    def matches(self, history: Dict[int, int], t) -> bool:
        return all(history.get(t - lag) == set_index for lag, set_index in self.conditions)

    def matching_part(self) -> str:
        return "if(" + " and ".join(f"F(t-{lag})=A{s}" for lag, s in self.conditions) + ")"

    def __str__(self):
        text = self.matching_part()
        if self.weights is None:
            return text + " then " + ", ".join(f"w{i}=?" for i in range(1, self.order + 1))
        return text + " then " + ", ".join(f"w{i}={w:.4f}" for i, w in enumerate(self.weights, 1))


@dataclass(frozen=True)
class RuleBase:
    rules: Tuple[ForecastRule, ...]
    partitioning_fingerprint: str = ""

    def __post_init__(self):
        seen = {}
        for rule in self.rules:
            if rule.conditions in seen:
                logger.warning(
                    f"Rules {seen[rule.conditions]} and {rule.label} share conditions {rule.matching_part()}"
                )
            seen.setdefault(rule.conditions, rule.label)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def by_label(self, label) -> ForecastRule:
        for rule in self.rules:
            if rule.label == label:
                return rule
        raise KeyError(f"No rule labelled {label}")

    def with_rules(self, rules: Sequence[ForecastRule]) -> "RuleBase":
        return replace(self, rules=tuple(rules))


def primary_history(fuzzified: Sequence[FuzzifiedObservation]) -> Dict[int, int]:
    """t -> set index used for grouping and matching (lower set on a 0.5 tie)."""
    return {f.t: f.primary_set for f in fuzzified}


def establish_groups(fuzzified: Sequence[FuzzifiedObservation]) -> List[FuzzySetGroup]:
    if len(fuzzified) < 3:
        raise TooShortError(f"Need at least 3 fuzzified observations, got {len(fuzzified)}")
    groups = []
    for label, (older, newer) in enumerate(zip(fuzzified, fuzzified[1:]), start=1):
        groups.append(FuzzySetGroup(label, (older.primary_set, newer.primary_set), newer.t + 1))
    logger.info(f"Established {len(groups)} pairwise fuzzy set groups")
    return groups


def _ambiguous_buckets(groups) -> List[List[int]]:
    buckets = defaultdict(list)
    for pos, g in enumerate(groups):
        buckets[g.pattern].append(pos)
    return [members for members in buckets.values() if len(members) > 1]


def disambiguate(
    groups: Sequence[FuzzySetGroup],
    fuzzified: Sequence[FuzzifiedObservation],
) -> List[FuzzySetGroup]:
    """
    Extend colliding groups backwards one step per round until patterns are unique.

    Every member of a colliding bucket that still has history gets the set one
    step earlier prepended. A member whose history already starts at the first
    observation keeps its pattern; a bucket where no member can grow is left
    as is and merged later by to_rules.
    """
    history = primary_history(fuzzified)
    start = min(history) if history else 0
    groups = list(groups)
    frozen = set()

    rounds = 0
    while True:
        buckets = [b for b in _ambiguous_buckets(groups) if not frozen.issuperset(b)]
        if not buckets:
            break
        rounds += 1
        extended = 0
        for members in buckets:
            growable = [pos for pos in members if groups[pos].anchor_t - groups[pos].order - 1 >= start]
            if not growable:
                logger.warning(
                    f"Groups {[groups[p].label for p in members]} still share {groups[members[0]]} "
                    f"at the start of the series; they will be merged"
                )
                frozen.update(members)
                continue
            for pos in growable:
                g = groups[pos]
                earlier = history[g.anchor_t - g.order - 1]
                groups[pos] = replace(g, pattern=(earlier,) + g.pattern)
                extended += 1
        logger.debug(f"Disambiguation round {rounds}: extended {extended} groups")

    if rounds:
        logger.info(f"Disambiguated fuzzy set groups in {rounds} round(s)")
    return groups


def to_rules(groups: Sequence[FuzzySetGroup], partitioning_fingerprint: str = "") -> RuleBase:
    """
    Reverse each pattern into lag conditions. Groups that still share a
    pattern become one rule carrying all their anchors, labelled by the
    earliest of them.
    """
    merged: Dict[Tuple[int, ...], List[FuzzySetGroup]] = {}
    for g in sorted(groups, key=lambda g: g.anchor_t):
        merged.setdefault(g.pattern, []).append(g)

    rules = []
    for pattern, members in merged.items():
        conditions = tuple((lag, set_index) for lag, set_index in enumerate(reversed(pattern), start=1))
        if len(members) > 1:
            logger.info(f"Merging groups {[m.label for m in members]} into one rule")
        rules.append(ForecastRule(
            label=members[0].label,
            conditions=conditions,
            anchor_ts=tuple(m.anchor_t for m in members),
        ))
    rules.sort(key=lambda r: r.anchor_ts[0])
    return RuleBase(tuple(rules), partitioning_fingerprint)


def match_rule(rulebase: RuleBase, fuzzified: Sequence[FuzzifiedObservation], t) -> ForecastRule:
    """Return the longest rule whose conditions all hold at t."""
    history = primary_history(fuzzified)
    if (t - MIN_HISTORY) not in history or (t - 1) not in history:
        raise NoMatchError(f"t={t} has fewer than {MIN_HISTORY} steps of history")

    candidates = [rule for rule in rulebase if rule.matches(history, t)]
    if not candidates:
        raise NoMatchError(f"No rule matches the pattern preceding t={t}")

    longest = max(rule.order for rule in candidates)
    best = [rule for rule in candidates if rule.order == longest]
    if len(best) > 1:
        raise AmbiguousMatchError(
            f"Rules {[r.label for r in best]} all match t={t} with order {longest}"
        )
    return best[0]


def format_groups(groups: Sequence[FuzzySetGroup]) -> str:
    return "\n".join(f"{g.label:>4}  {g}" for g in groups) + "\n"


def format_rules(rulebase: RuleBase) -> str:
    return "\n".join(f"{r.label:>4}  {r}" for r in rulebase) + "\n"
