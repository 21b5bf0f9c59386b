"""Exact zero-sum solving: payoff matrices, reduction, LP, conditioning.

Every value-path computation is exact: payoff matrices are integer
numerators over one common denominator, the LP runs a rational simplex with
Bland's rule, and reductions only merge duplicates or drop dominated
strategies (which preserves the game value).  Matrices too large for a
direct tableau are solved by column generation (a double-oracle loop whose
restricted problems use the same rational simplex and whose best-response
pricing is exact integer arithmetic), which computes the same LP optimum.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GameError, ZeroProbabilityEventError
from .formula import Formula, has_chance
from .game import (
    DEFAULT_NODE_CAP,
    EXIST,
    NATURE,
    UNIV,
    ExtensiveGame,
    build_semantic_game,
)
from .structure import Structure
from .strategy import (
    DEFAULT_STRATEGY_BUDGET,
    BehavioralStrategy,
    MixedStrategy,
    ReducedStrategy,
    StrategyList,
    enumerate_reduced,
    outcome_distribution,
    own_constraints_for,
    uniform_nature,
)

DEFAULT_DOMINANCE_CAP = 300_000  # matrix cells
DEFAULT_SIMPLEX_CAP = 4_000  # matrix cells
_DOMINANCE_OPS_GUARD = 2_000_000_000


# ------------------------------------------------------------------ events

class _EventMiss(Exception):
    """A referenced binding does not exist in this history."""


class EventPredicate:
    """Quantifier-free condition over a terminal history.

    Terms refer to the terminal assignment; history-indexed terms ``y#k``
    and ``y#last`` refer to the k-th and final value a variable received
    along the play (useful when a variable is requantified).  A history in
    which a referenced binding is missing fails the event.
    """

    def __init__(self, expr, text: str, structure: Structure | None):
        self.expr = expr
        self.text = text
        self.structure = structure

    def holds(self, game: ExtensiveGame, node: int) -> bool:
        try:
            return self._eval(self.expr, game, node)
        except _EventMiss:
            return False

    def _term(self, term, game, node) -> str:
        if term[0] == "const":
            return term[1]
        _, name, idx = term
        values = game.assignment[node].values_of(name)
        if not values:
            raise _EventMiss(name)
        if idx is None or idx == "last":
            return values[-1]
        if idx > len(values):
            raise _EventMiss(name)
        return values[idx - 1]

    def _eval(self, expr, game, node) -> bool:
        kind = expr[0]
        if kind == "and":
            return self._eval(expr[1], game, node) and self._eval(expr[2], game, node)
        if kind == "or":
            return self._eval(expr[1], game, node) or self._eval(expr[2], game, node)
        if kind == "not":
            return not self._eval(expr[1], game, node)
        if kind == "rel":
            _, name, args = expr
            assert self.structure is not None
            values = tuple(self._term(a, game, node) for a in args)
            return values in self.structure.relations[name][1]
        _, terms, rels = expr
        values = [self._term(t, game, node) for t in terms]
        for i, rel in enumerate(rels):
            ok = (values[i] == values[i + 1]) if rel == "=" else (values[i] != values[i + 1])
            if not ok:
                return False
        return True

    def __repr__(self):
        return f"EventPredicate({self.text!r})"


# ----------------------------------------------------------- payoff matrix

class PayoffMatrix:
    """Expected payoffs for the maximizer over reduced strategies.

    Cells are exact: ``num[i, j] / den``.  ``row_origin``/``col_origin``
    track each current row and column back to its index in the original
    enumeration, through duplicate merging and dominance elimination.
    """

    def __init__(self, rows: StrategyList, cols: StrategyList,
                 num: np.ndarray, den: int,
                 row_origin: np.ndarray | None = None,
                 col_origin: np.ndarray | None = None,
                 log: list[str] | None = None):
        self.rows = rows
        self.cols = cols
        self.num = num
        self.den = den
        self.row_origin = (np.arange(num.shape[0], dtype=np.int64)
                           if row_origin is None else row_origin)
        self.col_origin = (np.arange(num.shape[1], dtype=np.int64)
                           if col_origin is None else col_origin)
        self.log = log if log is not None else []

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    def value(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def fractions(self) -> list[list[Fraction]]:
        r, c = self.shape
        return [[self.value(i, j) for j in range(c)] for i in range(r)]

    def row_strategy(self, i: int) -> ReducedStrategy:
        return self.rows[int(self.row_origin[i])]

    def col_strategy(self, j: int) -> ReducedStrategy:
        return self.cols[int(self.col_origin[j])]


def _chance_mass(g: ExtensiveGame, lam: BehavioralStrategy, node: int) -> Fraction:
    mass = Fraction(1)
    path = g.ancestors(node) + [node]
    for at, nxt in zip(path, path[1:]):
        if g.owner[at] == NATURE:
            mass *= lam.distribution(at)[g.children[at].index(nxt)]
    return mass


def _follow_matrix(strats: StrategyList, nodes: list[int]) -> np.ndarray:
    """Boolean (strategies x terminals): does the strategy follow the history."""
    g, player = strats.game, strats.player
    table = strats.table
    out = np.ones((len(table), len(nodes)), dtype=bool)
    for j, node in enumerate(nodes):
        for ci, ai in own_constraints_for(g, player, node):
            out[:, j] &= table[:, ci] == ai
    return out


def _smallest_int_dtype(max_value: int):
    for dtype in (np.int8, np.int16, np.int32, np.int64):
        if max_value <= np.iinfo(dtype).max:
            return dtype
    raise GameError("payoff denominators exceed 64-bit integers")


def expected_payoff(g: ExtensiveGame, lam: BehavioralStrategy,
                    sigma: ReducedStrategy, tau: ReducedStrategy) -> Fraction:
    """The maximizer's expected utility under the profile (λ, σ, τ)."""
    dist = outcome_distribution(g, lam, sigma, tau)
    return sum(
        (mass for node, mass in dist.items() if g.winner_of[node] == EXIST),
        Fraction(0),
    )


def build_matrix(g: ExtensiveGame, lam: BehavioralStrategy,
                 budget: int = DEFAULT_STRATEGY_BUDGET) -> PayoffMatrix:
    """Complete payoff matrix over both players' reduced strategies.

    Assembled by integer matrix products over win-terminal follow tables,
    which keeps the cost tractable for strategy counts in the hundreds of
    thousands.
    """
    rows = enumerate_reduced(g, EXIST, budget)
    cols = enumerate_reduced(g, UNIV, budget)
    win_nodes = [t for t in g.terminals() if g.winner_of[t] == EXIST]
    masses = [_chance_mass(g, lam, t) for t in win_nodes]
    den = 1
    for mass in masses:
        den = den * mass.denominator // math.gcd(den, mass.denominator)
    nums = np.array([int(m * den) for m in masses], dtype=np.int64)
    shape = (len(rows), len(cols))
    dtype = _smallest_int_dtype(den)
    if not win_nodes:
        return PayoffMatrix(rows, cols, np.zeros(shape, dtype=dtype), den)
    f_row = _follow_matrix(rows, win_nodes)
    f_col = _follow_matrix(cols, win_nodes)
    right = (f_col.astype(np.int64) * nums).T  # (terminals, cols)
    out = np.empty(shape, dtype=dtype)
    chunk = max(1, 4_000_000 // max(1, shape[1]))
    for start in range(0, shape[0], chunk):
        block = f_row[start:start + chunk].astype(np.int64) @ right
        out[start:start + chunk] = block.astype(dtype)
    return PayoffMatrix(rows, cols, out, den)


# ---------------------------------------------------------------- reduction

def _first_occurrence_groups(arr: np.ndarray) -> tuple[list[int], list[list[int]]]:
    seen: dict[bytes, int] = {}
    keep: list[int] = []
    groups: list[list[int]] = []
    data = np.ascontiguousarray(arr)
    for i in range(len(data)):
        key = data[i].tobytes()
        hit = seen.get(key)
        if hit is None:
            seen[key] = len(keep)
            keep.append(i)
            groups.append([i])
        else:
            groups[hit].append(i)
    return keep, groups


def _dominated_mask(num: np.ndarray, weak: bool) -> np.ndarray:
    """Rows dominated by some other row (matrix must hold no duplicate rows)."""
    n = len(num)
    out = np.zeros(n, dtype=bool)
    for i in range(n):
        ge = (num >= num[i]).all(axis=1)
        if weak:
            ge &= (num != num[i]).any(axis=1)
        else:
            ge &= (num > num[i]).any(axis=1)
        out[i] = bool(ge.any())
    return out


def reduce_matrix(m: PayoffMatrix, use_weak_dominance: bool = True,
                  dominance_cap: int = DEFAULT_DOMINANCE_CAP) -> PayoffMatrix:
    """Merge duplicate rows/columns, then iterate dominance elimination.

    Strict dominance always runs (weak too, when the flag is set) until a
    fixpoint, provided the deduplicated matrix is within ``dominance_cap``
    cells; above the cap only duplicate merging happens, which still
    preserves the game value.  Provenance maps to the original enumeration.
    """
    num = m.num
    row_origin = m.row_origin
    col_origin = m.col_origin
    log = list(m.log)

    keep, groups = _first_occurrence_groups(num)
    if len(keep) != num.shape[0]:
        log.append(f"rows: merged {num.shape[0] - len(keep)} duplicates "
                   f"({num.shape[0]} -> {len(keep)})")
        num = num[keep]
        row_origin = row_origin[keep]
    keep, groups = _first_occurrence_groups(num.T)
    if len(keep) != num.shape[1]:
        log.append(f"cols: merged {num.shape[1] - len(keep)} duplicates "
                   f"({num.shape[1]} -> {len(keep)})")
        num = num[:, keep]
        col_origin = col_origin[keep]

    def ops_guard() -> bool:
        r, c = num.shape
        return r * c <= dominance_cap and r * r * c + c * c * r <= _DOMINANCE_OPS_GUARD

    if not ops_guard():
        log.append(f"dominance elimination skipped: {num.shape[0]}x{num.shape[1]} "
                   f"exceeds the cap")
    else:
        passes = [("strict", False)]
        if use_weak_dominance:
            passes.append(("weak", True))
        changed = True
        while changed:
            changed = False
            for name, weak in passes:
                if num.shape[0] > 1:
                    mask = _dominated_mask(num, weak)
                    if mask.any():
                        log.append(f"rows: removed {int(mask.sum())} by "
                                   f"{name} dominance")
                        num = num[~mask]
                        row_origin = row_origin[~mask]
                        changed = True
                if num.shape[1] > 1:
                    # the column player minimizes, so dominance is reversed
                    mask = _dominated_mask(-num.T, weak)
                    if mask.any():
                        log.append(f"cols: removed {int(mask.sum())} by "
                                   f"{name} dominance")
                        num = num[:, ~mask]
                        col_origin = col_origin[~mask]
                        changed = True
    return PayoffMatrix(m.rows, m.cols, np.ascontiguousarray(num), m.den,
                        row_origin, col_origin, log)


# ------------------------------------------------------------------ the LP

@dataclass
class Equilibrium:
    """Exact value plus one optimal mixed strategy per side.

    Mixes are supports over the matrix's current rows/columns; helpers lift
    them to reduced strategies through the matrix provenance.
    """

    value: Fraction
    row_mix: tuple[tuple[int, Fraction], ...]
    col_mix: tuple[tuple[int, Fraction], ...]
    matrix: PayoffMatrix = field(repr=False)

    def row_strategies(self) -> MixedStrategy:
        return MixedStrategy(EXIST, [(self.matrix.row_strategy(i), w)
                                     for i, w in self.row_mix])

    def col_strategies(self) -> MixedStrategy:
        return MixedStrategy(UNIV, [(self.matrix.col_strategy(j), w)
                                    for j, w in self.col_mix])


def _simplex_max(a: list[list[Fraction]]):
    """max 1'y  s.t.  a y <= 1, y >= 0  (all entries of ``a`` positive).

    Rational tableau simplex, Bland's rule on entering and leaving choices.
    Returns (value, y, duals).
    """
    n_rows = len(a)
    n_cols = len(a[0])
    width = n_cols + n_rows + 1
    one = Fraction(1)
    zero = Fraction(0)
    tableau = []
    for i in range(n_rows):
        row = list(a[i]) + [zero] * n_rows + [one]
        row[n_cols + i] = one
        tableau.append(row)
    obj = [-one] * n_cols + [zero] * (n_rows + 1)
    basis = list(range(n_cols, n_cols + n_rows))
    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best_ratio = None
        for i in range(n_rows):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise GameError("unbounded game LP; matrix entries out of range")
        pivot_row = tableau[leave]
        coef = pivot_row[enter]
        if coef != 1:
            tableau[leave] = pivot_row = [x / coef for x in pivot_row]
        for i in range(n_rows):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                row = tableau[i]
                tableau[i] = [row[k] - f * pivot_row[k] for k in range(width)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [obj[k] - f * pivot_row[k] for k in range(width)]
        basis[leave] = enter
    y = [zero] * n_cols
    for i, b in enumerate(basis):
        if b < n_cols:
            y[b] = tableau[i][-1]
    duals = [obj[n_cols + i] for i in range(n_rows)]
    return obj[-1], y, duals


def _solve_fraction_matrix(cells: list[list[Fraction]]):
    """Exact value and mixes of a zero-sum matrix (rows maximize)."""
    shifted = [[c + 1 for c in row] for row in cells]
    total, y, duals = _simplex_max(shifted)
    assert total > 0
    value = 1 / total - 1
    col_mix = [(j, w / total) for j, w in enumerate(y) if w != 0]
    dual_total = sum(duals, Fraction(0))
    assert dual_total == total, "strong duality must hold exactly"
    row_mix = [(i, w / total) for i, w in enumerate(duals) if w != 0]
    return value, tuple(row_mix), tuple(col_mix)


def _exact_mix_scores(num: np.ndarray, den: int, mix, axis: int):
    """Exact expected payoffs of a mixed strategy against every opponent
    pure strategy; returns (integer vector, scale) with score = vec/scale."""
    q = 1
    for _, w in mix:
        q = q * w.denominator // math.gcd(q, w.denominator)
    weights = [(idx, int(w * q)) for idx, w in mix]
    n_out = num.shape[1 - axis]
    max_cell = int(den)
    if max_cell * q <= 2**62:
        acc = np.zeros(n_out, dtype=np.int64)
        for idx, w_int in weights:
            line = num[idx] if axis == 0 else num[:, idx]
            acc += line.astype(np.int64) * w_int
        return acc, den * q
    acc_obj = np.zeros(n_out, dtype=object)
    for idx, w_int in weights:
        line = num[idx] if axis == 0 else num[:, idx]
        acc_obj += line.astype(object) * w_int
    return acc_obj, den * q


def _solve_double_oracle(m: PayoffMatrix) -> Equilibrium:
    num = m.num
    n_rows, n_cols = num.shape
    rset: list[int] = [0]
    cset: list[int] = [0]
    while True:
        sub = [[m.value(i, j) for j in cset] for i in rset]
        value, row_local, col_local = _solve_fraction_matrix(sub)
        row_mix = tuple((rset[i], w) for i, w in row_local)
        col_mix = tuple((cset[j], w) for j, w in col_local)
        improved = False
        # best column response (minimizer) against the current row mix
        scores, scale = _exact_mix_scores(num, m.den, row_mix, axis=0)
        j_best = int(np.argmin(scores))
        if Fraction(int(scores[j_best]), scale) < value:
            assert j_best not in cset, "column generation repeated an index"
            cset.append(j_best)
            improved = True
        # best row response (maximizer) against the current column mix
        scores, scale = _exact_mix_scores(num, m.den, col_mix, axis=1)
        i_best = int(np.argmax(scores))
        if Fraction(int(scores[i_best]), scale) > value:
            assert i_best not in rset, "column generation repeated an index"
            rset.append(i_best)
            improved = True
        if not improved:
            return Equilibrium(value, row_mix, col_mix, m)


def solve_zero_sum(m: PayoffMatrix,
                   simplex_cap: int = DEFAULT_SIMPLEX_CAP) -> Equilibrium:
    """Exact equilibrium of the matrix game (rows maximize).

    Small matrices go straight to the rational tableau; large ones run the
    column-generation loop, whose restricted solves use the same tableau.
    The result always passes :func:`verify_equilibrium`.
    """
    n_rows, n_cols = m.shape
    if n_rows == 0 or n_cols == 0:
        raise GameError("empty payoff matrix")
    if n_rows * n_cols <= simplex_cap:
        value, row_mix, col_mix = _solve_fraction_matrix(m.fractions())
        eq = Equilibrium(value, row_mix, col_mix, m)
    else:
        eq = _solve_double_oracle(m)
    assert verify_equilibrium(m, eq), "solver produced a non-equilibrium"
    return eq


def verify_equilibrium(m: PayoffMatrix, eq: Equilibrium) -> bool:
    """Exact maximin check: the row mix guarantees at least the value against
    every column and the column mix at most the value against every row."""
    if not eq.row_mix or not eq.col_mix:
        return False
    if any(w < 0 for _, w in eq.row_mix) or any(w < 0 for _, w in eq.col_mix):
        return False
    if (sum(w for _, w in eq.row_mix) != 1
            or sum(w for _, w in eq.col_mix) != 1):
        return False
    scores, scale = _exact_mix_scores(m.num, m.den, eq.row_mix, axis=0)
    low = min(Fraction(int(s), scale) for s in scores.tolist())
    if low != eq.value:
        return False
    scores, scale = _exact_mix_scores(m.num, m.den, eq.col_mix, axis=1)
    high = max(Fraction(int(s), scale) for s in scores.tolist())
    return high == eq.value


# ----------------------------------------------------------- truth values

def truth_value(m: Structure, phi: Formula, lam: BehavioralStrategy | None = None,
                *, node_cap: int = DEFAULT_NODE_CAP,
                budget: int = DEFAULT_STRATEGY_BUDGET,
                use_weak_dominance: bool = True,
                dominance_cap: int = DEFAULT_DOMINANCE_CAP,
                simplex_cap: int = DEFAULT_SIMPLEX_CAP) -> Equilibrium:
    """Equilibrium value of the semantic game (the sentence's truth value).

    Pipeline: build the game, build the payoff matrix, reduce it, solve.
    The witness mixes refer to the reduced matrix and lift to reduced
    strategies through its provenance.
    """
    game = build_semantic_game(m, phi, node_cap)
    if lam is None:
        lam = uniform_nature(game)
    matrix = build_matrix(game, lam, budget)
    reduced = reduce_matrix(matrix, use_weak_dominance, dominance_cap)
    return solve_zero_sum(reduced, simplex_cap)


@dataclass(frozen=True)
class ClassicalStatus:
    kind: str  # "true" | "false" | "indeterminate"
    value: Fraction


def classical_status(m: Structure, phi: Formula, **options) -> ClassicalStatus:
    """Game-theoretic truth/falsity of a chance-free sentence.

    Finite win-lose games make value 1 equivalent to a winning strategy for
    the verifier and value 0 to one for the falsifier; anything in between
    is indeterminate.
    """
    if has_chance(phi):
        raise GameError("classical status is defined for chance-free sentences")
    eq = truth_value(m, phi, None, **options)
    if eq.value == 1:
        return ClassicalStatus("true", eq.value)
    if eq.value == 0:
        return ClassicalStatus("false", eq.value)
    return ClassicalStatus("indeterminate", eq.value)


# ----------------------------------------------------------- conditioning

@dataclass(frozen=True)
class ConditionalValue:
    p_event: Fraction
    p_win_and_event: Fraction
    value: Fraction


def profile_outcomes(g: ExtensiveGame, lam: BehavioralStrategy,
                     row_mix: MixedStrategy, col_mix: MixedStrategy):
    """Terminal distribution of a mixed profile: (node, probability) pairs."""
    out: dict[int, Fraction] = {}
    for sigma, w_sigma in row_mix:
        for tau, w_tau in col_mix:
            weight = w_sigma * w_tau
            for node, mass in outcome_distribution(g, lam, sigma, tau).items():
                out[node] = out.get(node, Fraction(0)) + weight * mass
    return out


def mixed_expected_payoff(g: ExtensiveGame, lam: BehavioralStrategy,
                          row_mix: MixedStrategy, col_mix: MixedStrategy) -> Fraction:
    return sum(
        (p for node, p in profile_outcomes(g, lam, row_mix, col_mix).items()
         if g.winner_of[node] == EXIST),
        Fraction(0),
    )


def conditional_value(g: ExtensiveGame, lam: BehavioralStrategy,
                      row_mix: MixedStrategy, col_mix: MixedStrategy,
                      event: EventPredicate | None) -> ConditionalValue:
    """P(maximizer wins | event) under a fixed profile, exactly.

    ``event=None`` conditions on the whole space, giving the unconditional
    expected payoff.  A zero-probability event is an error.
    """
    p_event = Fraction(0)
    p_win = Fraction(0)
    for node, p in profile_outcomes(g, lam, row_mix, col_mix).items():
        if event is not None and not event.holds(g, node):
            continue
        p_event += p
        if g.winner_of[node] == EXIST:
            p_win += p
    if p_event == 0:
        raise ZeroProbabilityEventError(
            f"event {event.text if event else 'true'} has probability zero "
            f"under this profile"
        )
    return ConditionalValue(p_event, p_win, p_win / p_event)


# ------------------------------------------------------------- simulation

@dataclass
class SimulationReport:
    plays: int
    seed: int
    wins: int
    win_frequency: Fraction
    event_counts: dict[str, tuple[int, int]]  # name -> (hits, wins among hits)


class _ExactSampler:
    """Inversion sampling driven by 64-bit draws; exact rational thresholds."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def pick(self, masses: tuple[Fraction, ...]) -> int:
        den = 1
        for m in masses:
            den = den * m.denominator // math.gcd(den, m.denominator)
        draw = self.rng.getrandbits(64) * den
        cum = 0
        for k, m in enumerate(masses):
            cum += int(m * den)
            if draw < cum << 64:
                return k
        return len(masses) - 1


def simulate(g: ExtensiveGame, lam: BehavioralStrategy,
             row_mix: MixedStrategy, col_mix: MixedStrategy,
             plays: int, seed: int,
             events: dict[str, EventPredicate] | None = None) -> SimulationReport:
    """Monte Carlo cross-check of a profile's win probability.

    One sequential stream from a Mersenne-Twister generator seeded with
    ``seed``; per play the draws are: row strategy, column strategy, then
    every chance move in tree order.  Bit-for-bit reproducible for a fixed
    (game, profile, plays, seed).
    """
    if plays < 1:
        raise GameError("plays must be at least 1")
    sampler = _ExactSampler(random.Random(seed))
    row_masses = tuple(w for _, w in row_mix.support)
    col_masses = tuple(w for _, w in col_mix.support)
    events = events or {}
    wins = 0
    tallies = {name: [0, 0] for name in events}
    for _ in range(plays):
        sigma = row_mix.support[sampler.pick(row_masses)][0]
        tau = col_mix.support[sampler.pick(col_masses)][0]
        node = g.root
        while not g.is_terminal(node):
            owner = g.owner[node]
            if owner == NATURE:
                node = g.children[node][sampler.pick(lam.distribution(node))]
            else:
                strat = sigma if owner == EXIST else tau
                act = strat.action_at(g.infoset_of(node).index)
                if act is None:
                    raise GameError("profile strategy undefined on a reached set")
                node = g.children[node][act]
        won = g.winner_of[node] == EXIST
        wins += won
        for name, event in events.items():
            if event.holds(g, node):
                tallies[name][0] += 1
                tallies[name][1] += won
    return SimulationReport(
        plays, seed, wins, Fraction(wins, plays),
        {name: (hits, hit_wins) for name, (hits, hit_wins) in tallies.items()},
    )
