"""
Transcript of a discrete-variable key distribution run.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple


@dataclass
class QubitProtocolRun:
    """Per-round choices and outcomes of a BB84 or Ekert91 run, plus the derived key."""
    protocol: str
    n_rounds: int
    alice_bases: List[str]
    bob_bases: List[str]
    alice_bits: List[int]
    bob_bits: List[int]
    sifted_positions: List[int]
    alice_key: List[int]
    bob_key: List[int]
    eve_bases: Optional[List[str]] = None
    error_rate: Optional[float] = None
    estimated_error: Optional[float] = None
    disclosed_positions: List[int] = field(default_factory=list)
    s_value: Optional[float] = None
    s_standard_error: Optional[float] = None
    correlations: Dict[Tuple[int, int], Tuple[float, float, int]] = field(default_factory=dict)
    secure: Optional[bool] = None

    @property
    def sifted_fraction(self) -> float:
        return len(self.sifted_positions) / self.n_rounds if self.n_rounds else 0.0

    def summary(self) -> dict:
        """Scalar results, suitable for JSON output."""
        data = {
            "protocol": self.protocol,
            "n_rounds": self.n_rounds,
            "sifted": len(self.sifted_positions),
            "sifted_fraction": self.sifted_fraction,
            "error_rate": self.error_rate,
            "estimated_error": self.estimated_error,
            "secure": self.secure,
        }
        if self.s_value is not None:
            data["S"] = self.s_value
            data["S_standard_error"] = self.s_standard_error
        return data

    def table(self, limit: Optional[int] = None) -> List[List[str]]:
        """Round-by-round rows (1-based round numbers) for aligned printing."""
        rows = []
        sifted = set(self.sifted_positions)
        count = self.n_rounds if limit is None else min(limit, self.n_rounds)
        for i in range(count):
            rows.append(
                [
                    str(i + 1),
                    str(self.alice_bits[i]),
                    self.alice_bases[i],
                    self.bob_bases[i],
                    str(self.bob_bits[i]),
                    "yes" if (i + 1) in sifted else "",
                ]
            )
        return rows
