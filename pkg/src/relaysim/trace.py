"""Pipeline trace records: one JSON-lines row per relay event."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

PIPELINE_STAGES = (
    "commit_sc",
    "confirm_sc",
    "prove_sc",
    "confirm_rc",
    "prove_rc",
    "verify_dc",
    "confirm_dc",
)


def ctx_key_str(key: Tuple[int, int]) -> str:
    return f"{key[0]}:{key[1]}"


@dataclass(frozen=True)
class TraceEvent:
    key: str
    stage: str
    time: int
    chain: int
    verdict: str = "ok"
    gas: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            "ctx": self.key,
            "stage": self.stage,
            "time": self.time,
            "chain": self.chain,
            "verdict": self.verdict,
            "gas": self.gas,
        }


class TraceLog:
    def __init__(self):
        self.events: List[TraceEvent] = []
        self._seen: set[Tuple[str, str]] = set()

    def record(self, event: TraceEvent) -> None:
        self.events.append(event)

    def record_once(self, event: TraceEvent) -> bool:
        """Record unless an event for this (ctx, stage) already exists."""
        tag = (event.key, event.stage)
        if tag in self._seen:
            return False
        self._seen.add(tag)
        self.events.append(event)
        return True

    def for_key(self, key: str) -> List[TraceEvent]:
        return [e for e in self.events if e.key == key]

    def stages_of(self, key: str) -> Dict[str, TraceEvent]:
        return {e.stage: e for e in self.for_key(key) if e.verdict == "ok"}

    def completed_keys(self) -> List[str]:
        return sorted(
            {e.key for e in self.events if e.stage == "confirm_dc" and e.verdict == "ok"}
        )

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in self.events)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_jsonl())
