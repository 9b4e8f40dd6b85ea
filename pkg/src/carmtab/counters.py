from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class Counters:
    """Work counters accumulated over a tabulation."""

    jobs: int = 0
    lambda_sieves: int = 0
    spc_calls: int = 0
    cd_calls: int = 0
    sieve_survivors: int = 0
    ladders: int = 0
    fermat_rejects: int = 0
    factor_ops: int = 0
    fallbacks: int = 0

    def __iadd__(self, other: Counters) -> Counters:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}
