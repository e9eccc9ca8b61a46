"""Integer-eigenvalue censuses over exponent boxes, and counterexample search.

A census enumerates the (k, M) word box, applies the exact eigenvalue test
to every word (optionally skipping words the exponent-threshold prefilter
certifies), and reports exact counts, the exact density, and the complete
member list.  Membership is decided by the exact test only; the prefilter
may skip words it certifies, never admit any, so results are identical with
it on or off.

Work splits into (beta_1, alpha_1) prefix blocks.  Blocks are independent,
dispatched to a process pool, and merged in prefix order, so the worker
count never changes output bytes.  Checkpoints record the completed block
cursor plus partial state; resuming reproduces the uninterrupted result
bit for bit.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .core import EigenPair, Mat2, integer_eigenvalues
from .errors import BudgetExceededError, CorruptCheckpointError
from .spectral import NkCertificate, compute_nk, prefilter_excludes
from .words import (
    DEFAULT_GENERATORS,
    GeneratorPair,
    Word,
    enumerate_lambda,
    enumerate_lambda_block,
    lambda_count,
    lambda_prefixes,
    word_eval,
    word_eval_general,
)

DEFAULT_CENSUS_BUDGET = 10**8
DEFAULT_SEARCH_BUDGET = 10**6

MODE_EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class OmegaMember:
    """A word whose matrix has integer eigenvalues, with its witnesses."""

    word: Word
    matrix: Mat2
    eigen: EigenPair


@dataclass(frozen=True)
class DensityRow:
    k: int
    M: int
    lambda_count: int
    omega_count: int
    density: Fraction
    omega_members: tuple[OmegaMember, ...]
    mode: str  # "exhaustive" or "sampled(size=N;seed=S)"
    sample_size: int | None = None
    seed: int | None = None
    density_bound: Fraction | None = None  # 1 - (M-n)^2k / ((M+1)^2 M^(2k-2))


def _sampled_mode(sample_size: int, seed: int) -> str:
    return f"sampled(size={sample_size};seed={seed})"


def _test_word(
    w: Word, cert: NkCertificate | None, members: list[OmegaMember]
) -> None:
    if cert is not None and prefilter_excludes(w, cert):
        return
    m = word_eval(w)
    eig = integer_eigenvalues(m)
    if eig is not None:
        members.append(OmegaMember(w, m, eig))


def _census_block(task: tuple[int, int, int, int, NkCertificate | None]):
    k, M, beta1, alpha1, cert = task
    tested = 0
    members: list[OmegaMember] = []
    for w in enumerate_lambda_block(k, M, beta1, alpha1):
        tested += 1
        _test_word(w, cert, members)
    return tested, members


def _chunks(seq: list, size: int) -> Iterable[list]:
    for i in range(0, len(seq), size):
        yield seq[i : i + size]


ProgressFn = Callable[[int, int, list[OmegaMember]], None]


def census(
    k: int,
    M: int,
    use_prefilter: bool = True,
    *,
    workers: int = 1,
    budget: int = DEFAULT_CENSUS_BUDGET,
    start_block: int = 0,
    initial_tested: int = 0,
    initial_members: Iterable[OmegaMember] = (),
    progress: ProgressFn | None = None,
) -> DensityRow:
    """Exhaustive census of the (k, M) box.

    ``start_block``/``initial_*`` resume from a checkpoint cursor; ``progress``
    is called after every merged block with (blocks_done, tested, members) so
    the caller can persist state.
    """
    total = lambda_count(k, M)
    if total > budget:
        raise BudgetExceededError(f"|box(k={k}, M={M})| = {total} exceeds budget {budget}")
    cert = compute_nk(k) if use_prefilter else None
    blocks = lambda_prefixes(k, M)
    tested = initial_tested
    members = list(initial_members)
    done = start_block

    def advance(block_results) -> None:
        nonlocal tested, done
        for block_tested, block_members in block_results:
            tested += block_tested
            members.extend(block_members)
            done += 1
            if progress is not None:
                progress(done, tested, members)

    todo = blocks[start_block:]
    if workers <= 1:
        for b1, a1 in todo:
            advance([_census_block((k, M, b1, a1, cert))])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in _chunks(todo, max(workers * 4, 1)):
                tasks = [(k, M, b1, a1, cert) for b1, a1 in chunk]
                advance(list(pool.map(_census_block, tasks)))

    if tested != total:
        raise AssertionError(f"enumerated {tested} words, closed form says {total}")
    return DensityRow(
        k=k,
        M=M,
        lambda_count=total,
        omega_count=len(members),
        density=Fraction(len(members), total),
        omega_members=tuple(members),
        mode=MODE_EXHAUSTIVE,
    )


def census_sampled(
    k: int,
    M: int,
    sample_size: int,
    seed: int,
    use_prefilter: bool = True,
) -> DensityRow:
    """Seeded uniform draw over the exponent box, for sizes beyond budget.

    Sampled rows are labeled as such and must never be mixed with exhaustive
    rows in one file; ``omega_count`` counts hits among the samples.
    """
    if sample_size < 1:
        raise ValueError("sample_size must be >= 1")
    cert = compute_nk(k) if use_prefilter else None
    rng = random.Random(seed)
    members: list[OmegaMember] = []
    for _ in range(sample_size):
        betas = []
        alphas = []
        for i in range(k):
            betas.append(rng.randint(0, M) if i == 0 else rng.randint(1, M))
            alphas.append(rng.randint(1, M) if i < k - 1 else rng.randint(0, M))
        _test_word(Word(tuple(betas), tuple(alphas)), cert, members)
    return DensityRow(
        k=k,
        M=M,
        lambda_count=lambda_count(k, M),
        omega_count=len(members),
        density=Fraction(len(members), sample_size),
        omega_members=tuple(members),
        mode=_sampled_mode(sample_size, seed),
        sample_size=sample_size,
        seed=seed,
    )


def theorem_density_bound(k: int, M: int, n: int) -> Fraction | None:
    """Upper bound 1 - (M-n)^(2k) / ((M+1)^2 M^(2k-2)) on the density, for M > n."""
    if M <= n:
        return None
    return 1 - Fraction((M - n) ** (2 * k), lambda_count(k, M))


def density_sweep(
    k: int,
    m_range: tuple[int, int],
    use_prefilter: bool = True,
    *,
    workers: int = 1,
    budget: int = DEFAULT_CENSUS_BUDGET,
    checkpoint_path: str | None = None,
    resume: bool = False,
    on_row: Callable[[DensityRow], None] | None = None,
) -> list[DensityRow]:
    """One census per M in ascending order, with the proof's bound attached.

    With ``checkpoint_path`` the sweep persists progress after every block
    and after every finished row; ``resume`` continues from such a file and
    produces bit-identical rows to an uninterrupted run.
    """
    m_lo, m_hi = m_range
    if m_lo < 1 or m_hi < m_lo:
        raise ValueError(f"bad M range {m_range}")
    cert = compute_nk(k)
    params = {"k": k, "m_lo": m_lo, "m_hi": m_hi, "prefilter": use_prefilter}

    rows: list[DensityRow] = []
    resume_m: int | None = None
    resume_cursor = 0
    resume_tested = 0
    resume_members: list[OmegaMember] = []
    if resume:
        if not checkpoint_path:
            raise CorruptCheckpointError("resume requested without a checkpoint file")
        state = load_checkpoint(checkpoint_path)
        if state["params"] != params:
            raise CorruptCheckpointError(
                f"checkpoint parameters {state['params']} do not match {params}"
            )
        rows = [_row_from_json(r) for r in state["rows"]]
        resume_m = state["active_m"]
        resume_cursor = state["cursor"]
        resume_tested = state["tested"]
        resume_members = [_member_from_json(m) for m in state["members"]]

    done_ms = {row.M for row in rows}
    for row in rows:
        if on_row is not None:
            on_row(row)

    for M in range(m_lo, m_hi + 1):
        if M in done_ms:
            continue
        start_block, tested0, members0 = 0, 0, []
        if resume_m == M:
            start_block, tested0, members0 = resume_cursor, resume_tested, resume_members

        progress: ProgressFn | None = None
        if checkpoint_path:

            def progress(blocks_done: int, tested: int, members: list[OmegaMember], _m=M) -> None:
                save_checkpoint(
                    checkpoint_path,
                    params=params,
                    rows=rows,
                    active_m=_m,
                    cursor=blocks_done,
                    tested=tested,
                    members=members,
                )

        row = census(
            k,
            M,
            use_prefilter,
            workers=workers,
            budget=budget,
            start_block=start_block,
            initial_tested=tested0,
            initial_members=members0,
            progress=progress,
        )
        row = dataclasses.replace(row, density_bound=theorem_density_bound(k, M, cert.n))
        rows.append(row)
        if checkpoint_path:
            save_checkpoint(
                checkpoint_path,
                params=params,
                rows=rows,
                active_m=None,
                cursor=0,
                tested=0,
                members=[],
            )
        if on_row is not None:
            on_row(row)
    return rows


# ---------------------------------------------------------------------------
# Counterexample search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    members: tuple[OmegaMember, ...]
    words_tested: int
    complete: bool
    generators: GeneratorPair


def _is_pure_power(w: Word) -> bool:
    """Pure generator powers (and the identity): at most one nonzero block kind."""
    return w.sum_betas() == 0 or w.sum_alphas() == 0


def search_counterexamples(
    k: int,
    exp_max: int,
    generators: GeneratorPair = DEFAULT_GENERATORS,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> SearchResult:
    """Exact eigenvalue test over all canonical words with block count <= k.

    Words follow the generalized convention B^b1 A^a1 ... B^bk A^ak (for the
    default pair B = S and A = R).  Pure powers are excluded; for the default
    generators any member refutes the only-pure-powers conjecture.  Budget
    exhaustion returns partial results with complete=False.
    """
    members: list[OmegaMember] = []
    tested = 0
    complete = True
    for j in range(1, k + 1):
        for w in enumerate_lambda(j, exp_max):
            if _is_pure_power(w):
                continue
            if tested >= budget:
                complete = False
                break
            tested += 1
            m = word_eval_general(w, generators)
            eig = integer_eigenvalues(m)
            if eig is not None:
                members.append(OmegaMember(w, m, eig))
        if not complete:
            break
    return SearchResult(tuple(members), tested, complete, generators)


# ---------------------------------------------------------------------------
# Checkpoint files
# ---------------------------------------------------------------------------

CHECKPOINT_VERSION = 1


def _member_to_json(m: OmegaMember) -> dict:
    return {
        "k": m.word.k,
        "betas": list(m.word.betas),
        "alphas": list(m.word.alphas),
        "matrix": list(m.matrix.entries()),
        "lambda": m.eigen.lam,
        "mu": m.eigen.mu,
    }


def _member_from_json(d: dict) -> OmegaMember:
    return OmegaMember(
        Word(tuple(d["betas"]), tuple(d["alphas"])),
        Mat2(*d["matrix"]),
        EigenPair(d["lambda"], d["mu"]),
    )


def _row_to_json(row: DensityRow) -> dict:
    return {
        "k": row.k,
        "M": row.M,
        "lambda_count": row.lambda_count,
        "omega_count": row.omega_count,
        "density_num": row.density.numerator,
        "density_den": row.density.denominator,
        "members": [_member_to_json(m) for m in row.omega_members],
        "mode": row.mode,
        "sample_size": row.sample_size,
        "seed": row.seed,
        "bound_num": None if row.density_bound is None else row.density_bound.numerator,
        "bound_den": None if row.density_bound is None else row.density_bound.denominator,
    }


def _row_from_json(d: dict) -> DensityRow:
    bound = None
    if d["bound_num"] is not None:
        bound = Fraction(d["bound_num"], d["bound_den"])
    return DensityRow(
        k=d["k"],
        M=d["M"],
        lambda_count=d["lambda_count"],
        omega_count=d["omega_count"],
        density=Fraction(d["density_num"], d["density_den"]),
        omega_members=tuple(_member_from_json(m) for m in d["members"]),
        mode=d["mode"],
        sample_size=d["sample_size"],
        seed=d["seed"],
        density_bound=bound,
    )


def _payload_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def save_checkpoint(
    path: str,
    *,
    params: dict,
    rows: list[DensityRow],
    active_m: int | None,
    cursor: int,
    tested: int,
    members: list[OmegaMember],
) -> None:
    payload = {
        "version": CHECKPOINT_VERSION,
        "params": params,
        "rows": [_row_to_json(r) for r in rows],
        "active_m": active_m,
        "cursor": cursor,
        "tested": tested,
        "members": [_member_to_json(m) for m in members],
    }
    payload["sha256"] = _payload_hash(payload)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_checkpoint(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptCheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("version") != CHECKPOINT_VERSION:
        raise CorruptCheckpointError(f"unsupported checkpoint version in {path}")
    recorded = payload.pop("sha256", None)
    if recorded != _payload_hash(payload):
        raise CorruptCheckpointError(f"checkpoint {path} failed its content hash")
    return payload
