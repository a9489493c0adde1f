"""Local filtering protocols, distillable-entanglement rate bounds, one-way
distillability witnesses, and the full-undistillability classifier for
tripartite pure states.

The central objects:

  * ``local_filter`` implements the probabilistic local measurement
    {Y, sqrt(1 - Y^dagger Y)} with Y = sqrt(lambda_min) * rho_side^{-1/2}.
    Its success branch flattens the chosen marginal to (support projector)/r.
  * ``low_rank_rate_bound`` is the guaranteed two-way rate
    lambda_min * r_side * (log2 r_side - log2 r) available from
    filter-then-hash whenever rank(state) < rank(marginal).
  * ``find_one_way_witness`` looks for a local vector |phi> on A whose
    conditioned marginal on B has full rank min(r, r_B) = r; such a vector
    certifies positive one-way (A -> B) distillable entanglement.
  * ``classify`` decides full undistillability of a tripartite pure state:
    it is fully undistillable (in every classical-communication
    configuration that includes a two-way link) exactly when both the AB and
    AE reductions are PPT, in which case both are separable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2
from typing import Literal

import numpy as np

from .errors import BadParameterError, RankNotLowError
from .kernels import DEFAULT_RANK_TOL, hermitian_eig, numerical_rank
from .states import (
    DEFAULT_PPT_TOL,
    DensityMatrix,
    PptVerdict,
    TripartitePureState,
    coherent_information,
    conditional_marginal,
    is_ppt,
    partial_trace,
    purify,
    von_neumann_entropy,
)

Side = Literal["A", "B"]

DEFAULT_WITNESS_BUDGET = 50

#: A rate above this threshold counts as numerically positive evidence.
POSITIVE_RATE_TOL = 1e-9

CLASS_FULLY_UNDISTILLABLE = "FULLY_UNDISTILLABLE_SEPARABLE"
CLASS_SOME_2WAY = "SOME_REDUCTION_2WAY_DISTILLABLE"

RATE_ZERO = "zero"
RATE_POSITIVE = "positive"
RATE_UNKNOWN = "unknown"

VERDICT_SEPARABLE = "separable"
VERDICT_DISTILLABLE = "entangled, 2-way distillable"
VERDICT_PPT_UNDECIDED = "PPT but separability undecided by this tool"
VERDICT_NPT_UNDECIDED = "entangled (NPT), 2-way distillability undecided"


def _side_index(side: Side) -> int:
    if side not in ("A", "B"):
        raise BadParameterError(f"side must be 'A' or 'B', got {side!r}")
    return 0 if side == "A" else 1


def _require_bipartite(rho: DensityMatrix):
    if len(rho.dims) != 2:
        raise BadParameterError(f"expected a bipartite state, got dims {rho.dims}")


@dataclass(frozen=True, eq=False)
class FilterOutcome:
    """Success branch of the local filtering measurement on one side.

    ``filter_operator`` acts on the filtering subsystem only. ``p_succ``
    equals lambda_min * r_side up to rounding, and the filtered marginal on
    the filtering side is ``support_projector / r_side``.
    """

    side: Side
    filter_operator: np.ndarray
    p_succ: float
    filtered_state: DensityMatrix
    support_projector: np.ndarray
    rank: int
    rank_side: int
    lambda_min: float

    def to_json_dict(self) -> dict:
        return {
            "side": self.side,
            "p_succ": self.p_succ,
            "rank": self.rank,
            "rank_side": self.rank_side,
            "lambda_min": self.lambda_min,
            "filter_operator": _matrix_pairs(self.filter_operator),
            "support_projector": _matrix_pairs(self.support_projector),
            "filtered_state": self.filtered_state.to_json_dict(),
        }


def _matrix_pairs(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def local_filter(
    rho: DensityMatrix, side: Side, rank_tol: float = DEFAULT_RANK_TOL
) -> FilterOutcome:
    """Apply the marginal-flattening filter on one side of a bipartite state.

    Every valid state is filterable; the success probability is positive by
    construction and equals 1 exactly when the chosen marginal is already
    maximally mixed on its support.
    """
    _require_bipartite(rho)
    idx = _side_index(side)
    marginal = partial_trace(rho, (idx,))
    spectrum = hermitian_eig(marginal.matrix)
    r_side = spectrum.retained_count(rank_tol)
    lam_min = spectrum.min_positive(rank_tol)
    y = np.sqrt(lam_min) * spectrum.pinv_sqrt(rank_tol)
    projector = spectrum.support_projector(rank_tol)
    if idx == 0:
        op = np.kron(y, np.eye(rho.dims[1]))
    else:
        op = np.kron(np.eye(rho.dims[0]), y)
    unnormalized = op @ rho.matrix @ op.conj().T
    p_succ = float(unnormalized.trace().real)
    filtered = DensityMatrix(rho.dims, unnormalized / p_succ)
    return FilterOutcome(
        side=side,
        filter_operator=y,
        p_succ=p_succ,
        filtered_state=filtered,
        support_projector=projector,
        rank=numerical_rank(rho.matrix, rank_tol),
        rank_side=r_side,
        lambda_min=lam_min,
    )


def low_rank_rate_bound(
    rho: DensityMatrix, side: Side, rank_tol: float = DEFAULT_RANK_TOL
) -> float:
    """Two-way distillable-entanglement lower bound for a low-rank state.

    Requires rank(state) < rank(chosen marginal) strictly; then the
    filter-then-hash protocol guarantees at least
    lambda_min * r_side * (log2 r_side - log2 r) ebits per copy.
    """
    _require_bipartite(rho)
    idx = _side_index(side)
    r = numerical_rank(rho.matrix, rank_tol)
    spectrum = hermitian_eig(partial_trace(rho, (idx,)).matrix)
    r_side = spectrum.retained_count(rank_tol)
    if r >= r_side:
        raise RankNotLowError(
            f"rank(state) = {r} >= {r_side} = rank(marginal {side}); bound does not apply"
        )
    return spectrum.min_positive(rank_tol) * r_side * (log2(r_side) - log2(r))


def filtered_hashing_rate(
    rho: DensityMatrix, side: Side, rank_tol: float = DEFAULT_RANK_TOL
) -> float:
    """Achievable rate of filter-then-hash: p_succ * [S(filtered marginal) - S(filtered state)].

    The entropy difference is the coherent information of the filtered state
    with the filtering side as the target marginal; since filtering flattens
    that marginal to log2(r_side) bits of entropy, this rate always dominates
    ``low_rank_rate_bound`` on the same side.
    """
    outcome = local_filter(rho, side, rank_tol)
    idx = _side_index(side)
    marginal_entropy = von_neumann_entropy(
        partial_trace(outcome.filtered_state, (idx,)), rank_tol
    )
    return outcome.p_succ * (
        marginal_entropy - von_neumann_entropy(outcome.filtered_state, rank_tol)
    )


@dataclass(frozen=True, eq=False)
class WitnessSearchOutcome:
    """Result of the one-way witness search.

    ``found = False`` means no certificate within the budget; it never proves
    one-way undistillability, although it is the expected outcome for states
    that are one-way undistillable.
    """

    performed: bool
    found: bool
    phi: np.ndarray | None
    trials_used: int
    note: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "performed": self.performed,
            "found": self.found,
            "phi": None
            if self.phi is None
            else [[float(z.real), float(z.imag)] for z in self.phi],
            "trials_used": self.trials_used,
            "note": self.note,
        }


def _haar_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _saturation_search(
    rho: DensityMatrix,
    target_rank: int,
    budget: int,
    rng: np.random.Generator,
    rank_tol: float,
) -> tuple[np.ndarray | None, int]:
    """First |phi> on A with rank(conditioned B-marginal) == target_rank.

    Tries the d_A computational basis vectors first (they catch structured
    states cheaply), then ``budget`` Haar-random vectors. Returns the first
    success, so the outcome is deterministic given (state, budget, seed).
    """
    d_a = rho.dims[0]
    trials = 0
    for k in range(d_a):
        phi = np.zeros(d_a, dtype=np.complex128)
        phi[k] = 1.0
        trials += 1
        if numerical_rank(conditional_marginal(rho, phi), rank_tol) == target_rank:
            return phi, trials
    for _ in range(budget):
        phi = _haar_vector(rng, d_a)
        trials += 1
        if numerical_rank(conditional_marginal(rho, phi), rank_tol) == target_rank:
            return phi, trials
    return None, trials


def find_one_way_witness(
    rho: DensityMatrix,
    budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int | np.random.SeedSequence = 0,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> WitnessSearchOutcome:
    """Search for a vector certifying one-way (A -> B) distillability.

    Preconditions: rank(state) < rank(B marginal) strictly (otherwise
    RankNotLowError). A returned vector phi satisfies
    rank(conditioned marginal) = rank(state), which certifies a positive
    one-way rate. ``found = False`` is inconclusive by itself.
    """
    _require_bipartite(rho)
    if budget < 0:
        raise BadParameterError(f"budget must be >= 0, got {budget}")
    r = numerical_rank(rho.matrix, rank_tol)
    r_b = numerical_rank(partial_trace(rho, (1,)).matrix, rank_tol)
    if r >= r_b:
        raise RankNotLowError(
            f"rank(state) = {r} >= {r_b} = rank(marginal B); witness search does not apply"
        )
    seedseq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(seedseq)
    phi, trials = _saturation_search(rho, r, budget, rng, rank_tol)
    if phi is None:
        return WitnessSearchOutcome(
            True, False, None, trials, note="budget exhausted without certificate"
        )
    return WitnessSearchOutcome(True, True, phi, trials)


@dataclass(frozen=True, eq=False)
class ReductionAnalysis:
    """Distillability data for one reduction (AB or AE) of a tripartite state."""

    label: str
    parties: tuple[str, str]
    dims: tuple[int, int]
    rank: int
    rank_first: int
    rank_second: int
    ppt: PptVerdict
    low_rank_bound_first: float | None
    low_rank_bound_second: float | None
    hashing_rate: float
    witness: WitnessSearchOutcome

    @property
    def two_way_heuristic(self) -> bool:
        """Exhausted witness budget on a low-rank state.

        Every failed trial had a conditioned-marginal rank strictly below
        min(rank, rank of second marginal); if that failure were universal it
        would imply two-way distillability by known results. Heuristic only:
        a finite budget cannot prove the universal statement.
        """
        return self.witness.performed and not self.witness.found

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "parties": list(self.parties),
            "dims": list(self.dims),
            "rank": self.rank,
            "rank_first": self.rank_first,
            "rank_second": self.rank_second,
            "ppt": {
                "is_ppt": self.ppt.is_ppt,
                "witness": self.ppt.witness,
                "marginal": self.ppt.marginal,
            },
            "low_rank_bound_first": self.low_rank_bound_first,
            "low_rank_bound_second": self.low_rank_bound_second,
            "hashing_rate": self.hashing_rate,
            "witness_search": self.witness.to_json_dict(),
            "two_way_heuristic": self.two_way_heuristic,
        }


@dataclass(frozen=True, eq=False)
class DistillabilityReport:
    """Classification of a tripartite pure state plus all supporting numerics.

    ``rates`` carries a three-valued status (zero / positive / unknown) for
    the best achievable rate under each configuration of classical
    communication links: keys name the AB link first and the AE link second.
    """

    dims: tuple[int, int, int]
    reduction_ab: ReductionAnalysis
    reduction_ae: ReductionAnalysis
    classification: str
    npt_reductions: tuple[str, ...]
    rates: dict[str, str]
    params: dict

    def to_json_dict(self) -> dict:
        red_ab, red_ae = self.reduction_ab, self.reduction_ae
        return {
            "schema": "distillability-report/1",
            "params": dict(self.params),
            "dims": list(self.dims),
            "classification": self.classification,
            "npt_reductions": list(self.npt_reductions),
            "rates": dict(self.rates),
            "ranks": {
                "AB": red_ab.rank,
                "A": red_ab.rank_first,
                "B": red_ab.rank_second,
                "E": red_ae.rank_second,
            },
            "low_rank_bound_A": red_ab.low_rank_bound_first,
            "low_rank_bound_B": red_ab.low_rank_bound_second,
            "hashing_rate": red_ab.hashing_rate,
            "witness_phi": None
            if red_ab.witness.phi is None
            else [[float(z.real), float(z.imag)] for z in red_ab.witness.phi],
            "reductions": {
                "AB": red_ab.to_json_dict(),
                "AE": red_ae.to_json_dict(),
            },
        }


def _optional_bound(rho: DensityMatrix, side: Side, rank_tol: float) -> float | None:
    try:
        return low_rank_rate_bound(rho, side, rank_tol)
    except RankNotLowError:
        return None


def _analyze_reduction(
    label: str,
    parties: tuple[str, str],
    rho: DensityMatrix,
    rank_tol: float,
    ppt_tol: float,
    witness_budget: int,
    seedseq: np.random.SeedSequence,
) -> ReductionAnalysis:
    r = numerical_rank(rho.matrix, rank_tol)
    r_first = numerical_rank(partial_trace(rho, (0,)).matrix, rank_tol)
    r_second = numerical_rank(partial_trace(rho, (1,)).matrix, rank_tol)
    if r < r_second:
        witness = find_one_way_witness(rho, witness_budget, seedseq, rank_tol)
    else:
        witness = WitnessSearchOutcome(
            False,
            False,
            None,
            0,
            note=f"rank(state) = {r} >= {r_second} = rank(marginal): search does not apply",
        )
    return ReductionAnalysis(
        label=label,
        parties=parties,
        dims=rho.dims,
        rank=r,
        rank_first=r_first,
        rank_second=r_second,
        ppt=is_ppt(rho, ppt_tol),
        low_rank_bound_first=_optional_bound(rho, "A", rank_tol),
        low_rank_bound_second=_optional_bound(rho, "B", rank_tol),
        hashing_rate=coherent_information(rho, rank_tol),
        witness=witness,
    )


def classify(
    psi: TripartitePureState,
    *,
    rank_tol: float = DEFAULT_RANK_TOL,
    ppt_tol: float = DEFAULT_PPT_TOL,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
) -> DistillabilityReport:
    """Decide full undistillability of a tripartite pure state.

    The state is fully undistillable (best rate zero under every
    communication configuration with at least one two-way link) exactly when
    both reductions are PPT; both are then separable as well. Otherwise every
    configuration with a two-way link achieves a positive rate; the
    both-one-way configuration is reported positive only when a one-way
    certificate (witness vector or positive hashing rate) exists, and unknown
    otherwise.
    """
    full = psi.density_matrix()
    rho_ab = partial_trace(full, (0, 1))
    rho_ae = partial_trace(full, (0, 2))
    red_ab = _analyze_reduction(
        "AB", ("A", "B"), rho_ab, rank_tol, ppt_tol, witness_budget,
        np.random.SeedSequence(entropy=seed, spawn_key=(0,)),
    )
    red_ae = _analyze_reduction(
        "AE", ("A", "E"), rho_ae, rank_tol, ppt_tol, witness_budget,
        np.random.SeedSequence(entropy=seed, spawn_key=(1,)),
    )
    both_ppt = red_ab.ppt.is_ppt and red_ae.ppt.is_ppt
    npt = tuple(red.label for red in (red_ab, red_ae) if not red.ppt.is_ppt)
    if both_ppt:
        rates = {key: RATE_ZERO for key in (
            "both_two_way", "ab_two_way_ae_one_way", "ab_one_way_ae_two_way", "both_one_way",
        )}
        classification = CLASS_FULLY_UNDISTILLABLE
    else:
        one_way_evidence = any(
            red.witness.found or red.hashing_rate > POSITIVE_RATE_TOL
            for red in (red_ab, red_ae)
        )
        rates = {
            "both_two_way": RATE_POSITIVE,
            "ab_two_way_ae_one_way": RATE_POSITIVE,
            "ab_one_way_ae_two_way": RATE_POSITIVE,
            "both_one_way": RATE_POSITIVE if one_way_evidence else RATE_UNKNOWN,
        }
        classification = CLASS_SOME_2WAY
    return DistillabilityReport(
        dims=psi.dims,
        reduction_ab=red_ab,
        reduction_ae=red_ae,
        classification=classification,
        npt_reductions=npt,
        rates=rates,
        params={
            "rank_tol": rank_tol,
            "ppt_tol": ppt_tol,
            "witness_budget": witness_budget,
            "seed": seed,
        },
    )


@dataclass(frozen=True, eq=False)
class SeparabilityRecord:
    """Rank-regime analysis of a bipartite state.

    When rank(state) <= max(rank A, rank B), PPT is equivalent to
    separability (and to two-way undistillability), so the PPT verdict
    upgrades to a separability verdict. Outside that regime the tool reports
    the PPT witness but leaves separability undecided.
    """

    dims: tuple[int, int]
    rank: int
    rank_a: int
    rank_b: int
    rank_ae: int
    rank_e: int
    rank_pattern_holds: bool
    regime_applies: bool
    ppt: PptVerdict
    verdict: str
    low_rank_bound_a: float | None
    low_rank_bound_b: float | None

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "ranks": {
                "AB": self.rank,
                "A": self.rank_a,
                "B": self.rank_b,
                "AE": self.rank_ae,
                "E": self.rank_e,
            },
            "rank_pattern_holds": self.rank_pattern_holds,
            "regime_applies": self.regime_applies,
            "ppt": {
                "is_ppt": self.ppt.is_ppt,
                "witness": self.ppt.witness,
                "marginal": self.ppt.marginal,
            },
            "verdict": self.verdict,
            "low_rank_bound_A": self.low_rank_bound_a,
            "low_rank_bound_B": self.low_rank_bound_b,
        }


def separability_verdict(
    rho: DensityMatrix,
    rank_tol: float = DEFAULT_RANK_TOL,
    ppt_tol: float = DEFAULT_PPT_TOL,
) -> SeparabilityRecord:
    """Classify a bipartite state through its rank regime and PPT verdict.

    Also reports whether the complement rank pattern
    rank(AB) = rank(E) <= rank(AE) = rank(B) holds for the canonical
    purification.
    """
    _require_bipartite(rho)
    r = numerical_rank(rho.matrix, rank_tol)
    r_a = numerical_rank(partial_trace(rho, (0,)).matrix, rank_tol)
    r_b = numerical_rank(partial_trace(rho, (1,)).matrix, rank_tol)
    full = purify(rho, rank_tol).density_matrix()
    r_ae = numerical_rank(partial_trace(full, (0, 2)).matrix, rank_tol)
    r_e = numerical_rank(partial_trace(full, (2,)).matrix, rank_tol)
    pattern = (r == r_e) and (r <= r_ae) and (r_ae == r_b)
    regime = r <= max(r_a, r_b)
    verdict_ppt = is_ppt(rho, ppt_tol)
    if regime:
        verdict = VERDICT_SEPARABLE if verdict_ppt.is_ppt else VERDICT_DISTILLABLE
    else:
        verdict = VERDICT_PPT_UNDECIDED if verdict_ppt.is_ppt else VERDICT_NPT_UNDECIDED
    return SeparabilityRecord(
        dims=rho.dims,
        rank=r,
        rank_a=r_a,
        rank_b=r_b,
        rank_ae=r_ae,
        rank_e=r_e,
        rank_pattern_holds=pattern,
        regime_applies=regime,
        ppt=verdict_ppt,
        verdict=verdict,
        low_rank_bound_a=_optional_bound(rho, "A", rank_tol),
        low_rank_bound_b=_optional_bound(rho, "B", rank_tol),
    )
