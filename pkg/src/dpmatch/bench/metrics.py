"""Recovery-rate metrics under the four denominators.

Rates are None (not 0/0) whenever the denominator is empty; the CSV layer
writes those as NA.
"""

from __future__ import annotations

from ..matchers import CandidateMatrix, MatchResult


def recovery_rate(result, truth: dict, mode: str = "all"):
    """Fraction of correct pairs under the chosen denominator.

    mode "all": correct / |truth|. mode "matched": correct / matched
    pairs. mode "converged": correct among flagged / flagged count. mode
    "candidate": fraction of truth pairs contained in the candidate rows
    (result must be a CandidateMatrix). Undefined denominators yield None.
    """
    if not truth:
        raise ValueError("truth map is empty")
    if mode == "candidate":
        if not isinstance(result, CandidateMatrix):
            raise ValueError("candidate mode needs a CandidateMatrix")
        hits = sum(1 for i, j in truth.items() if i < result.n_a and j in result.rows[i])
        return hits / len(truth)
    if not isinstance(result, MatchResult):
        raise ValueError(f"mode {mode!r} needs a MatchResult")
    assignment = result.assignment
    correct = sum(1 for i, j in truth.items() if assignment.get(i) == j)
    if mode == "all":
        return correct / len(truth)
    if mode == "matched":
        if not assignment:
            return None
        return correct / len(assignment)
    if mode == "converged":
        flagged = [i for i, f in result.flags.items() if f]
        if not flagged:
            return None
        good = sum(1 for i in flagged if truth.get(i) == assignment.get(i))
        return good / len(flagged)
    raise ValueError(f"unknown mode {mode!r}")


def is_successful(result: MatchResult, n: int) -> bool:
    """A run succeeds when more than half the vertices converged."""
    return sum(result.flags.values()) > n / 2
