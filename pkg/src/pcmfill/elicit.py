"""Elicitation sessions: walk a decision maker through a filling sequence.

A session owns the prescribed question sequence for its item count, accepts
answers in any order inside the current interchangeable group, keeps the
incomplete comparison matrix, and produces live weight estimates with a
reliability hint from the bundled reference run.  Sessions survive restarts
through an append-only log that is written before any answer is acknowledged.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import SequencingError, SessionStateError
from .graphs import LabeledGraph, canonical_form, connected_components, is_bipartite, is_connected
from .metagraph import FillingSequence
from .pcm import IncompletePcm, llsm_incomplete
from .store import RunArtifact, load_run

SERVICE_MIN_N = 2
SERVICE_MAX_N = 8

Edge = tuple[int, int]


def _star_sequence(n: int) -> FillingSequence:
    return FillingSequence(
        n=n,
        kind="star",
        steps=tuple((0, j) for j in range(1, n)),
        groups=(n - 1,),
        start_level=n - 1,
        realized_levels={n - 1: "optimal"},
    )


def _trivial_main(n: int) -> FillingSequence:
    # n = 2 and 3 have a single class per level, so any order works
    if n == 2:
        return FillingSequence(
            n=2, kind="main", steps=((0, 1),), groups=(1,), start_level=1,
            realized_levels={1: "optimal"},
        )
    return FillingSequence(
        n=3, kind="main", steps=((0, 1), (0, 2), (1, 2)), groups=(2, 1), start_level=2,
        realized_levels={2: "optimal", 3: "optimal"},
    )


def heuristic_sequence(n: int) -> FillingSequence:
    """Greedy extrapolation beyond the simulated sizes.

    Each step adds the comparison that keeps vertex degrees as balanced as
    possible, preferring additions that keep the graph bipartite, with
    lexicographic tie-breaking.  Marked as extrapolated in responses.
    """
    steps: list[Edge] = []
    current: set[Edge] = set()
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    while len(current) < len(all_pairs):
        best = None
        for cand in all_pairs:
            if cand in current:
                continue
            g = LabeledGraph(n, frozenset(current | {cand}))
            deg = g.degrees()
            spread = max(deg) - min(deg)
            key = (spread, 0 if is_bipartite(g) else 1, cand)
            if best is None or key < best[0]:
                best = (key, cand)
        steps.append(best[1])
        current.add(best[1])
    return FillingSequence(
        n=n,
        kind="main",
        steps=tuple(steps),
        groups=(1,) * len(steps),
        start_level=1,
        realized_levels={},
    )


class ReferenceData:
    """Bundled reference runs: sequences to prescribe and score hints to report."""

    def __init__(self, artifacts: dict[int, RunArtifact]):
        self.artifacts = artifacts

    @staticmethod
    def load_default() -> "ReferenceData":
        artifacts = {}
        root = resources.files("pcmfill").joinpath("data")
        for n in range(2, 7):
            ref = root.joinpath(f"reference_n{n}.json")
            if ref.is_file():
                with resources.as_file(ref) as path:
                    artifacts[n] = load_run(path)
        return ReferenceData(artifacts)

    @staticmethod
    def load_dir(directory) -> "ReferenceData":
        artifacts = {}
        for n in range(2, 7):
            path = Path(directory) / f"reference_n{n}.json"
            if path.exists():
                artifacts[n] = load_run(path)
        return ReferenceData(artifacts)

    def sequences_for(self, n: int) -> list[FillingSequence]:
        if n <= 3:
            return [_star_sequence(n), _trivial_main(n)] if n == 3 else [_trivial_main(n)]
        art = self.artifacts.get(n)
        if art is None or not art.sequences:
            return []
        return [FillingSequence.from_dict(d) for d in art.sequences]

    def select_sequence(self, n: int, budget: int | None) -> tuple[FillingSequence, bool]:
        """The prescribed sequence for an item count and optional answer budget.

        Budget n-1 gets the star; a budget of exactly n gets the cycle when the
        main sequence starts above n; everything else follows the main
        sequence.  Sizes beyond the simulated range fall back to the greedy
        heuristic and are flagged as extrapolated.
        """
        if n > 6:
            if budget is not None and budget <= n - 1:
                return _star_sequence(n), True
            return heuristic_sequence(n), True
        if n == 2:
            return _trivial_main(2), False
        seqs = self.sequences_for(n)
        if not seqs:
            raise SessionStateError(f"no reference sequences available for n={n}")
        main = next(s for s in seqs if s.kind == "main")
        if budget is not None and budget <= n - 1:
            star = next((s for s in seqs if s.kind == "star"), None)
            if star is not None:
                return star, False
        if budget is not None and budget == n and main.start_level > n:
            cycle = next((s for s in seqs if s.kind == "cycle"), None)
            if cycle is not None:
                return cycle, False
        return main, False

    def class_hint(self, n: int, g6: str) -> dict | None:
        art = self.artifacts.get(n)
        if art is None:
            return None
        score = art.scores.get(g6)
        if score is None:
            return None
        levels = {name: s.to_dict() for name, s in sorted(score.levels.items())}
        return {
            "class_g6": g6,
            "levels": levels,
            "mean_d_euc_avg": score.avg_mean_d_euc(),
            "mean_tau_avg": score.avg_mean_tau(),
        }


@dataclass
class LiveEstimate:
    connected: bool
    e_answered: int
    weights: list[float] | None
    components: list[list[int]] | None
    reliability_hint: dict | None
    extrapolated: bool

    def to_dict(self) -> dict:
        return {
            "connected": self.connected,
            "e_answered": self.e_answered,
            "weights": self.weights,
            "components": self.components,
            "reliability_hint": self.reliability_hint,
            "extrapolated": self.extrapolated,
        }


@dataclass
class ElicitationSession:
    id: str
    n: int
    item_labels: list[str]
    sequence: FillingSequence
    extrapolated: bool
    budget: int | None
    answers: list[tuple[Edge, float]] = field(default_factory=list)
    state: str = "active"  # active | abandoned | complete

    def answered_pairs(self) -> set[Edge]:
        return {pair for pair, _ in self.answers}

    def allowed_pairs(self) -> list[Edge]:
        """Unanswered pairs of the current interchangeable group."""
        if self.state != "active":
            return []
        k = len(self.answers)
        if k >= len(self.sequence.steps):
            return []
        group = self.sequence.group_of_step(k)
        bounds = self.sequence.group_boundaries()
        lo = bounds[group - 1] if group else 0
        hi = bounds[group]
        answered = self.answered_pairs()
        return sorted(p for p in self.sequence.steps[lo:hi] if p not in answered)

    def next_question(self) -> Edge | None:
        if self.state != "active":
            raise SessionStateError(f"session is {self.state}")
        allowed = self.allowed_pairs()
        return allowed[0] if allowed else None

    def record_answer(self, pair: Edge, value: float) -> None:
        if self.state != "active":
            raise SessionStateError(f"session is {self.state}")
        i, j = pair
        if i == j or not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"pair {pair} is not a valid comparison for n={self.n}")
        pair = (i, j) if i < j else (j, i)
        if not value > 0:
            raise ValueError("comparison value must be positive")
        allowed = self.allowed_pairs()
        if pair not in allowed:
            raise SequencingError(
                f"pair {pair} is not allowed at this point of the sequence",
                allowed_pairs=allowed,
            )
        self.answers.append((pair, float(value)))
        if len(self.answers) == len(self.sequence.steps):
            self.state = "complete"

    def incomplete_pcm(self) -> IncompletePcm:
        a = np.ones((self.n, self.n))
        mask = np.eye(self.n, dtype=bool)
        for (i, j), value in self.answers:
            a[i, j] = value
            a[j, i] = 1.0 / value
            mask[i, j] = mask[j, i] = True
        return IncompletePcm(a, mask)

    def answered_graph(self) -> LabeledGraph:
        return LabeledGraph(self.n, frozenset(self.answered_pairs()))

    def estimate(self, reference: ReferenceData) -> LiveEstimate:
        graph = self.answered_graph()
        connected = is_connected(graph)
        weights = None
        components = None
        hint = None
        if connected:
            weights = llsm_incomplete(self.incomplete_pcm()).w.tolist()
            hint = reference.class_hint(self.n, canonical_form(graph).graph6())
        else:
            components = connected_components(graph)
        return LiveEstimate(
            connected=connected,
            e_answered=len(self.answers),
            weights=weights,
            components=components,
            reliability_hint=hint,
            extrapolated=self.extrapolated,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "n": self.n,
            "item_labels": self.item_labels,
            "sequence": self.sequence.to_dict(),
            "extrapolated": self.extrapolated,
            "budget": self.budget,
            "answers": [[list(pair), value] for pair, value in self.answers],
            "state": self.state,
        }

    @staticmethod
    def from_dict(d: dict) -> "ElicitationSession":
        return ElicitationSession(
            id=d["id"],
            n=d["n"],
            item_labels=list(d["item_labels"]),
            sequence=FillingSequence.from_dict(d["sequence"]),
            extrapolated=d["extrapolated"],
            budget=d.get("budget"),
            answers=[((int(p[0]), int(p[1])), float(v)) for p, v in d["answers"]],
            state=d["state"],
        )


def create_session(n: int, item_labels=None, budget=None,
                   reference: ReferenceData | None = None) -> ElicitationSession:
    if not SERVICE_MIN_N <= n <= SERVICE_MAX_N:
        raise ValueError(f"item count {n} outside {SERVICE_MIN_N}..{SERVICE_MAX_N}")
    if item_labels is None:
        item_labels = [f"item {i + 1}" for i in range(n)]
    if len(item_labels) != n:
        raise ValueError(f"expected {n} item labels, got {len(item_labels)}")
    if budget is not None and not 1 <= budget <= n * (n - 1) // 2:
        raise ValueError("budget must be between 1 and n(n-1)/2")
    reference = reference or ReferenceData.load_default()
    sequence, extrapolated = reference.select_sequence(n, budget)
    return ElicitationSession(
        id=secrets.token_hex(8),
        n=n,
        item_labels=list(item_labels),
        sequence=sequence,
        extrapolated=extrapolated,
        budget=budget,
    )


class SessionStore:
    """Append-only session log with an in-memory index.

    Every accepted mutation is written and flushed before the caller sees a
    response, so a restart replays to exactly the acknowledged state.
    """

    def __init__(self, path):
        self.path = Path(path)
        self.sessions: dict[str, ElicitationSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._global = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if self.path.exists():
            self._replay()
        self._fh = open(self.path, "a")

    def _replay(self):
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                kind = event["type"]
                if kind == "create":
                    session = ElicitationSession.from_dict(event["session"])
                    self.sessions[session.id] = session
                elif kind == "answer":
                    session = self.sessions[event["id"]]
                    pair = (int(event["pair"][0]), int(event["pair"][1]))
                    session.answers.append((pair, float(event["value"])))
                    if len(session.answers) == len(session.sequence.steps):
                        session.state = "complete"
                elif kind == "state":
                    self.sessions[event["id"]].state = event["state"]

    def _append(self, event: dict):
        self._fh.write(json.dumps(event, sort_keys=True) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def lock(self, session_id: str) -> threading.Lock:
        with self._global:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def get(self, session_id: str) -> ElicitationSession | None:
        return self.sessions.get(session_id)

    def add(self, session: ElicitationSession):
        self._append({"type": "create", "session": session.to_dict()})
        self.sessions[session.id] = session

    def record_answer(self, session: ElicitationSession, pair: Edge, value: float):
        session.record_answer(pair, value)
        # the in-memory mutation above validated; persist before acknowledging
        self._append({"type": "answer", "id": session.id, "pair": list(pair), "value": value})
        if session.state == "complete":
            self._append({"type": "state", "id": session.id, "state": "complete"})

    def abandon(self, session: ElicitationSession):
        if session.state != "active":
            raise SessionStateError(f"session is {session.state}")
        session.state = "abandoned"
        self._append({"type": "state", "id": session.id, "state": "abandoned"})

    def close(self):
        self._fh.close()
