"""Randomized checks and experiments built on top of the election engine.

Four surfaces:

* closed-list equivalence: on profiles where every ballot approves a single
  party, the variance-criterion election must reproduce Sainte-Laguë seat by
  seat, and the max-load election must reproduce D'Hondt.
* solver agreement: the clamp-and-resolve correction is compared against the
  water-filling and subset-enumeration oracles on randomized elections; a
  divergence is a reportable finding, not a crash, and gets serialized as a
  self-contained reproduction record.
* support monotonicity probe: does adding weight that approves only one
  party ever cost that party seats?
* two-party seat-share sweep: sample the share of seats won by party A as a
  function of the split parameter alpha, for a fixed overlap mass zeta.

Campaigns are deterministic for a given seed; trials are independent, and
result assembly follows input order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .engine import MethodConfig, apportion_sequence, run_election
from .model import (
    Backend,
    CandidateId,
    LoadVector,
    Method,
    Mode,
    Profile,
    Rational,
    StepSolution,
    UnknownCandidateError,
    VoterType,
    parse_profile,
    parse_rational,
    rational_str,
    render_profile,
)
from .step import Subproblem, corrected_solution, subset_oracle, waterfill_solution

PARTY_POOL = tuple("ABCDEF")


# ---------------------------------------------------------------------------
# random instance generation (fixed-seed PRNG; weights are uniform integers)

def random_profile(
    rng: random.Random,
    max_types: int = 8,
    max_candidates: int = 6,
    max_weight: int = 100,
) -> Profile:
    pool = PARTY_POOL[: rng.randint(1, max_candidates)]
    types = []
    for _ in range(rng.randint(1, max_types)):
        approvals = tuple(sorted(rng.sample(pool, rng.randint(1, len(pool)))))
        types.append(VoterType(Fraction(rng.randint(1, max_weight)), approvals))
    return Profile.from_types(types)


def random_closed_list_profile(
    rng: random.Random, max_parties: int = 6, max_weight: int = 1000
) -> Profile:
    parties = PARTY_POOL[: rng.randint(2, max_parties)]
    types = []
    for party in parties:
        types.append(VoterType(Fraction(rng.randint(1, max_weight)), (party,)))
        if rng.random() < 0.3:
            # a second type for the same party: closed lists need not be
            # pre-merged, supporter weights still add up
            types.append(VoterType(Fraction(rng.randint(1, max_weight)), (party,)))
    return Profile.from_types(types)


# ---------------------------------------------------------------------------
# closed-list equivalence

@dataclass(frozen=True)
class EquivalenceReport:
    trials: int
    passes: int
    failures: tuple[dict, ...] = ()

    @property
    def passed(self) -> bool:
        return self.passes == self.trials and not self.failures


def _equivalence_failure(
    profile: Profile,
    seats: int,
    pair: str,
    election_sequence: Sequence[CandidateId],
    apportionment_sequence: Sequence[CandidateId],
) -> dict:
    return {
        "kind": "closed-list-equivalence-failure",
        "profile": render_profile(profile),
        "seats": seats,
        "pair": pair,
        "election_sequence": list(election_sequence),
        "apportionment_sequence": list(apportionment_sequence),
    }


_EQUIVALENCE_PAIRS = (
    (Method.VAR_PHRAGMEN, Method.SAINTE_LAGUE),
    (Method.SEQ_PHRAGMEN, Method.DHONDT),
)


def closed_list_sequences(
    profile: Profile, seats: int
) -> dict[str, tuple[list[CandidateId], list[CandidateId]]]:
    """Winner sequences of both equivalence pairs on a closed-list profile."""
    votes = {name: profile.supporters(name)[1] for name in profile.candidates}
    out = {}
    for election_method, divisor in _EQUIVALENCE_PAIRS:
        result = run_election(
            profile, MethodConfig(election_method, Mode.PARTY, seats)
        )
        out[f"{election_method.value}/{divisor.value}"] = (
            list(result.winners),
            apportion_sequence(votes, seats, divisor),
        )
    return out


def check_closed_list_equivalence(
    seed: int,
    trials: int,
    max_parties: int = 6,
    max_weight: int = 1000,
    max_seats: int = 12,
) -> EquivalenceReport:
    """Compare election runs against highest-averages on random closed lists."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    passes = 0
    failures: list[dict] = []
    for _ in range(trials):
        profile = random_closed_list_profile(rng, max_parties, max_weight)
        seats = rng.randint(1, max_seats)
        trial_failures = []
        for pair, (got, want) in closed_list_sequences(profile, seats).items():
            if got != want:
                trial_failures.append(
                    _equivalence_failure(profile, seats, pair, got, want)
                )
        if trial_failures:
            failures.extend(trial_failures)
        else:
            passes += 1
    return EquivalenceReport(trials=trials, passes=passes, failures=tuple(failures))


# ---------------------------------------------------------------------------
# solver agreement

@dataclass(frozen=True)
class CampaignCaps:
    max_types: int = 8
    max_candidates: int = 6
    max_seats: int = 8

    def validate(self) -> None:
        if not 1 <= self.max_types <= 8:
            raise ValueError(f"max_types must be in 1..8, got {self.max_types}")
        if not 1 <= self.max_candidates <= 6:
            raise ValueError(
                f"max_candidates must be in 1..6, got {self.max_candidates}"
            )
        if not 1 <= self.max_seats <= 8:
            raise ValueError(f"max_seats must be in 1..8, got {self.max_seats}")


@dataclass(frozen=True)
class OracleAgreementReport:
    trials: int
    instances: int
    disagreements: tuple[dict, ...] = ()

    @property
    def agreements(self) -> int:
        return self.instances - len(self.disagreements)

    @property
    def all_agree(self) -> bool:
        return not self.disagreements


def _solution_payload(sol: StepSolution) -> dict:
    return {
        "x": [rational_str(v) for v in sol.x],
        "level": rational_str(sol.level),
        "score": rational_str(sol.score),
        "corrected": sol.corrected,
    }


def solver_instance_record(
    profile: Profile,
    loads: LoadVector,
    candidate: CandidateId,
    *,
    mode: Mode = Mode.CANDIDATE,
    seat: int | None = None,
) -> dict:
    """Serialize one subproblem with all three solver outcomes.

    The record is self-contained: :func:`replay_record` reparses the profile
    and loads from it and recomputes every solver from scratch.
    """
    sub = Subproblem(profile, loads, candidate)
    return {
        "kind": "solver-instance",
        "profile": render_profile(profile),
        "method": Method.VAR_PHRAGMEN.value,
        "mode": mode.value,
        "seat": seat if seat is not None else loads.seats_assigned + 1,
        "candidate": candidate,
        "loads": [rational_str(v) for v in loads.values],
        "seats_assigned": loads.seats_assigned,
        "corrected": _solution_payload(corrected_solution(sub)),
        "waterfill": _solution_payload(waterfill_solution(sub)),
        "subset": _solution_payload(subset_oracle(sub)),
    }


def _solutions_agree(*solutions: StepSolution) -> bool:
    first = solutions[0]
    return all(
        s.x == first.x
        and s.level == first.level
        and s.score == first.score
        and s.corrected == first.corrected
        for s in solutions[1:]
    )


def compare_solvers_over_election(
    profile: Profile, seats: int, mode: Mode = Mode.CANDIDATE
) -> tuple[int, list[dict]]:
    """Run a variance-criterion election, cross-checking the three solvers.

    At every seat and for every then-eligible candidate, the corrected
    solution, the water-filling solution and the subset oracle are compared
    exactly (shares, level, score and the corrected flag).  Returns the
    number of compared instances and the serialized records of any
    disagreements.
    """
    result = run_election(profile, MethodConfig(Method.VAR_PHRAGMEN, mode, seats))
    loads = LoadVector.zero(profile)
    elected: set[CandidateId] = set()
    instances = 0
    disagreements: list[dict] = []
    for rec in result.records:
        for name in profile.candidates:
            if mode is Mode.CANDIDATE and name in elected:
                continue
            sub = Subproblem(profile, loads, name)
            trio = (
                corrected_solution(sub),
                waterfill_solution(sub),
                subset_oracle(sub),
            )
            instances += 1
            if not _solutions_agree(*trio):
                disagreements.append(
                    solver_instance_record(
                        profile, loads, name, mode=mode, seat=rec.seat_index
                    )
                )
        loads = rec.loads_after
        elected.add(rec.solution.candidate)
    return instances, disagreements


def oracle_agreement_campaign(
    seed: int, trials: int, caps: CampaignCaps = CampaignCaps()
) -> OracleAgreementReport:
    """Randomized search for a divergence between correction and oracles.

    A disagreement does not fail the campaign; it is reported and serialized
    verbatim so the instance can be replayed and studied.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    caps.validate()
    rng = random.Random(seed)
    instances = 0
    disagreements: list[dict] = []
    for trial in range(trials):
        profile = random_profile(rng, caps.max_types, caps.max_candidates)
        mode = Mode.PARTY if trial % 2 else Mode.CANDIDATE
        cap = caps.max_seats
        if mode is Mode.CANDIDATE:
            cap = min(cap, len(profile.candidates))
        seats = rng.randint(1, cap)
        count, bad = compare_solvers_over_election(profile, seats, mode)
        instances += count
        disagreements.extend(bad)
    return OracleAgreementReport(
        trials=trials, instances=instances, disagreements=tuple(disagreements)
    )


def replay_record(record: dict) -> dict:
    """Recompute a serialized record from scratch and diff it.

    Returns ``{"matches_recorded": bool, "fresh": {...}}`` where ``fresh``
    holds the recomputed outcome in the same shape as the input record.
    """
    kind = record.get("kind")
    if kind == "solver-instance":
        profile = parse_profile(record["profile"])
        loads = LoadVector(
            values=tuple(parse_rational(v) for v in record["loads"]),
            seats_assigned=record["seats_assigned"],
        )
        fresh = solver_instance_record(
            profile,
            loads,
            record["candidate"],
            mode=Mode(record["mode"]),
            seat=record["seat"],
        )
        keys = ("corrected", "waterfill", "subset")
    elif kind == "closed-list-equivalence-failure":
        profile = parse_profile(record["profile"])
        seats = record["seats"]
        got, want = closed_list_sequences(profile, seats)[record["pair"]]
        fresh = _equivalence_failure(profile, seats, record["pair"], got, want)
        keys = ("election_sequence", "apportionment_sequence")
    else:
        raise ValueError(f"unknown record kind: {kind!r}")
    return {
        "matches_recorded": all(fresh[k] == record[k] for k in keys),
        "fresh": fresh,
    }


# ---------------------------------------------------------------------------
# support monotonicity

@dataclass(frozen=True)
class MonotonicityReport:
    base_profile: Profile
    party: CandidateId
    seats: int
    delta: Fraction
    seats_before: int
    seats_after: int

    @property
    def violated(self) -> bool:
        return self.seats_after < self.seats_before


def monotonicity_probe(
    profile: Profile,
    party: CandidateId,
    seats: int,
    delta: Rational = Fraction(1),
) -> MonotonicityReport:
    """Measure how extra approval-only weight for one party shifts its seats.

    Runs variance-criterion party-mode elections on the base profile and on
    the profile augmented with a new voter type of weight ``delta`` approving
    only ``party``.  ``delta == 0`` is accepted as the degenerate comparison
    of the base profile against itself.
    """
    if party not in profile.candidates:
        raise UnknownCandidateError(f"unknown party: {party!r}")
    delta = Fraction(delta) if not isinstance(delta, Fraction) else delta
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    config = MethodConfig(Method.VAR_PHRAGMEN, Mode.PARTY, seats)
    before = run_election(profile, config).seat_counts.get(party, 0)
    if delta == 0:
        augmented = profile
    else:
        augmented = Profile.from_types(
            (*profile.types, VoterType(delta, (party,)))
        )
    after = run_election(augmented, config).seat_counts.get(party, 0)
    return MonotonicityReport(
        base_profile=profile,
        party=party,
        seats=seats,
        delta=delta,
        seats_before=before,
        seats_after=after,
    )


# ---------------------------------------------------------------------------
# two-party seat-share sweep

@dataclass(frozen=True)
class TwoPartyFamily:
    """Two parties with an overlap bloc approving both.

    Total weight is 1 for every split: ``alpha*(1-zeta)`` approves only A,
    ``(1-alpha)*(1-zeta)`` approves only B, and ``zeta`` approves both.
    Degenerate zero-weight types are dropped.  This parameterization is one
    choice among many; the sweep accepts any callable producing a profile
    from alpha.
    """

    alpha: Fraction
    zeta: Fraction

    def __post_init__(self):
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0 <= self.zeta < 1:
            raise ValueError(f"zeta must lie in [0, 1), got {self.zeta}")

    def profile(self) -> Profile:
        weights = (
            (self.alpha * (1 - self.zeta), ("A",)),
            ((1 - self.alpha) * (1 - self.zeta), ("B",)),
            (self.zeta, ("A", "B")),
        )
        return Profile.from_types(
            VoterType(w, approvals) for w, approvals in weights if w > 0
        )


def two_party_family(zeta: Fraction) -> Callable[[Fraction], Profile]:
    """Profile generator for :func:`sweep_seat_share` at a fixed overlap."""

    def family(alpha: Fraction) -> Profile:
        return TwoPartyFamily(alpha=alpha, zeta=zeta).profile()

    return family


@dataclass(frozen=True)
class SweepResult:
    points: tuple[tuple[Fraction, Fraction], ...]
    n: int
    zeta: Fraction | None = None

    @property
    def shares(self) -> tuple[Fraction, ...]:
        return tuple(share for _, share in self.points)


def sweep_seat_share(
    family: Callable[[Fraction], Profile],
    alphas: Iterable[Fraction],
    seats: int,
    backend: Backend = Backend.EXACT,
    party: CandidateId = "A",
    zeta: Fraction | None = None,
) -> SweepResult:
    """Seat share of ``party`` across a family of profiles indexed by alpha.

    Each sample runs a variance-criterion party-mode election of ``seats``
    seats; the share is the exact fraction of seats won.  A party absent
    from a sampled profile simply scores zero.
    """
    ordered = sorted(alphas)
    for a in ordered:
        if not 0 <= a <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {a}")
    config = MethodConfig(Method.VAR_PHRAGMEN, Mode.PARTY, seats, backend)
    points = []
    for a in ordered:
        result = run_election(family(a), config)
        points.append((a, Fraction(result.seat_counts.get(party, 0), seats)))
    return SweepResult(points=tuple(points), n=seats, zeta=zeta)
