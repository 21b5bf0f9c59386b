"""Concrete syntax: formulas, structures, chance strategies, games, profiles.

Formula grammar (ASCII, ``#`` comments):

    forall x BODY          exists y/{x,t} BODY      chance x BODY
    A \\/ B    A \\/{x} B    A /\\ B    A /\\{x} B    A >< B    A -> B
    ~A         R(t1,...,tk)    x = y    x != y    x = y = z    z = x != y

``->`` desugars to ``~A \\/ B`` and ``~`` is pushed to literals immediately,
so parsed formulas are always in negation normal form.  Quantifier scope is
greedy (extends as far right as possible); a parenthesized quantifier like
``(exists y/{x})`` acts as a prefix to the formula after it.  Equality
chains of up to three terms are single literals.  Numerals always denote
universe elements; an alphabetic name is a variable when it is quantified
or slashed somewhere in the sentence, and a constant symbol otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EventError,
    GameError,
    NatureStrategyError,
    ParseError,
    ProfileError,
    StructureError,
)
from .formula import (
    And,
    App,
    ChainAtom,
    ChanceOr,
    ChanceQ,
    Const,
    Exists,
    Forall,
    Formula,
    Literal,
    Or,
    RelAtom,
    Term,
    Var,
    implies,
    negate,
    occurrence_label,
)
from .game import EXIST, NATURE, UNIV, ExtensiveGame, SemanticGame
from .structure import Assignment, Structure

_QUANT_KEYWORDS = ("forall", "exists", "chance")


# ----------------------------------------------------------------- tokens

@dataclass(frozen=True)
class _Token:
    kind: str  # op | name | num | eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<op>\\/|/\\|->|><|!=|[()\{\},/=~\#\[\]@]|\|)
      | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<num>[0-9]+)
    """,
    re.VERBOSE,
)


def _tokenize(text: str, hash_is_op: bool = False) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "comment" and hash_is_op:
            # in event syntax '#' is the binding-index marker, not a comment
            kind, chunk = "op", "#"
            m_end = pos + 1
        else:
            m_end = m.end()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = text.count("\n", pos, m_end)
        if newlines:
            line += newlines
            col = m_end - text.rfind("\n", pos, m_end)
        else:
            col += m_end - pos
        pos = m_end
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "eof":
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.next()

    def error(self, msg: str):
        tok = self.peek()
        raise ParseError(msg, tok.line, tok.col)


# --------------------------------------------------------- formula parsing

def parse_formula(src: str) -> Formula:
    """Parse one sentence; implications desugared, negation pushed inward."""
    ts = _TokenStream(_tokenize(src))
    phi = _implication(ts)
    if ts.peek().kind != "eof":
        ts.error(f"trailing input starting at {ts.peek().text!r}")
    return _resolve_names(phi)


def _implication(ts: _TokenStream) -> Formula:
    left = _disjunction(ts)
    if ts.accept("->"):
        right = _implication(ts)
        return implies(left, right)
    return left


def _disjunction(ts: _TokenStream) -> Formula:
    left = _conjunction(ts)
    while True:
        if ts.peek().text == "\\/":
            ts.next()
            slash = _slash_set(ts, after_connective=True)
            right = _conjunction(ts)
            left = Or(left, right, slash)
        elif ts.peek().text == "><":
            ts.next()
            right = _conjunction(ts)
            left = ChanceOr(left, right)
        else:
            return left


def _conjunction(ts: _TokenStream) -> Formula:
    left = _prefix(ts)
    while ts.peek().text == "/\\":
        ts.next()
        slash = _slash_set(ts, after_connective=True)
        right = _prefix(ts)
        left = And(left, right, slash)
    return left


def _slash_set(ts: _TokenStream, after_connective: bool = False) -> frozenset[str]:
    if after_connective:
        if ts.peek().text != "{":
            return frozenset()
    else:
        if not ts.accept("/"):
            return frozenset()
    ts.expect("{")
    names: set[str] = set()
    if ts.peek().text != "}":
        while True:
            tok = ts.next()
            if tok.kind != "name":
                raise ParseError("slash sets hold variable names", tok.line, tok.col)
            names.add(tok.text)
            if not ts.accept(","):
                break
    ts.expect("}")
    return frozenset(names)


def _quantifier_head(ts: _TokenStream) -> tuple[str, str, frozenset[str]]:
    kw = ts.next().text
    var_tok = ts.next()
    if var_tok.kind != "name":
        raise ParseError("quantifier needs a variable name", var_tok.line, var_tok.col)
    if kw == "chance":
        if ts.peek().text == "/":
            ts.error("chance quantifiers take no slash set")
        return kw, var_tok.text, frozenset()
    return kw, var_tok.text, _slash_set(ts)


def _make_quantifier(kw: str, var: str, slash: frozenset[str], body: Formula) -> Formula:
    if kw == "forall":
        return Forall(var, slash, body)
    if kw == "exists":
        return Exists(var, slash, body)
    return ChanceQ(var, body)


def _prefix(ts: _TokenStream) -> Formula:
    tok = ts.peek()
    if tok.text == "~":
        ts.next()
        return negate(_prefix(ts))
    if tok.kind == "name" and tok.text in _QUANT_KEYWORDS:
        kw, var, slash = _quantifier_head(ts)
        return _make_quantifier(kw, var, slash, _implication(ts))
    if tok.text == "(":
        if ts.peek(1).kind == "name" and ts.peek(1).text in _QUANT_KEYWORDS:
            ts.next()
            kw, var, slash = _quantifier_head(ts)
            if ts.accept(")"):
                # prefix form: (exists y/{x}) BODY
                return _make_quantifier(kw, var, slash, _implication(ts))
            body = _implication(ts)
            ts.expect(")")
            return _make_quantifier(kw, var, slash, body)
        ts.next()
        inner = _implication(ts)
        ts.expect(")")
        return inner
    return _atom(ts)


def _term(ts: _TokenStream) -> Term:
    tok = ts.next()
    if tok.kind == "num":
        return Const(tok.text)
    if tok.kind != "name":
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}",
                         tok.line, tok.col)
    if ts.peek().text == "(":
        ts.next()
        args: list[Term] = [_term(ts)]
        while ts.accept(","):
            args.append(_term(ts))
        ts.expect(")")
        return App(tok.text, tuple(args))
    return Var(tok.text)


def _atom(ts: _TokenStream) -> Formula:
    tok = ts.peek()
    terms: list[Term] = []
    if tok.kind == "name" and ts.peek(1).text == "(" and tok.text not in _QUANT_KEYWORDS:
        name = ts.next().text
        ts.next()
        args: list[Term] = [_term(ts)]
        while ts.accept(","):
            args.append(_term(ts))
        ts.expect(")")
        if ts.peek().text not in ("=", "!="):
            return Literal(RelAtom(name, tuple(args)))
        # it was a function application opening an equality chain
        terms = [App(name, tuple(args))]
    elif tok.kind not in ("name", "num"):
        ts.error(f"expected a formula, found {tok.text or 'end of input'!r}")
    if not terms:
        terms = [_term(ts)]
    rels: list[str] = []
    while ts.peek().text in ("=", "!="):
        if len(terms) == 3:
            ts.error("chain literals hold at most three terms")
        rels.append(ts.next().text)
        terms.append(_term(ts))
    if not rels:
        ts.error("a bare term is not a formula")
    return Literal(ChainAtom(tuple(terms), tuple(rels)))


def _bound_names(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Literal):
        return frozenset()
    if isinstance(phi, (Or, And)):
        return _bound_names(phi.left) | _bound_names(phi.right) | phi.slash
    if isinstance(phi, ChanceOr):
        return _bound_names(phi.left) | _bound_names(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return _bound_names(phi.body) | {phi.var} | phi.slash
    return _bound_names(phi.body) | {phi.var}


def _resolve_term(term: Term, variables: frozenset[str]) -> Term:
    if isinstance(term, Var) and term.name not in variables:
        return Const(term.name)
    if isinstance(term, App):
        return App(term.func, tuple(_resolve_term(a, variables) for a in term.args))
    return term


def _resolve_names(phi: Formula, variables: frozenset[str] | None = None) -> Formula:
    if variables is None:
        variables = _bound_names(phi)
    if isinstance(phi, Literal):
        atom = phi.atom
        if isinstance(atom, RelAtom):
            atom = RelAtom(atom.name, tuple(_resolve_term(a, variables) for a in atom.args))
        else:
            atom = ChainAtom(tuple(_resolve_term(t, variables) for t in atom.terms), atom.rels)
        return Literal(atom, phi.positive)
    if isinstance(phi, (Or, And)):
        return type(phi)(_resolve_names(phi.left, variables),
                         _resolve_names(phi.right, variables), phi.slash)
    if isinstance(phi, ChanceOr):
        return ChanceOr(_resolve_names(phi.left, variables),
                        _resolve_names(phi.right, variables))
    return type(phi)(*(
        (phi.var, phi.slash, _resolve_names(phi.body, variables))
        if isinstance(phi, (Exists, Forall))
        else (phi.var, _resolve_names(phi.body, variables))
    ))


# ------------------------------------------------------- formula formatting

def _format_term(term: Term) -> str:
    if isinstance(term, (Var, Const)):
        return term.name
    return f"{term.func}({','.join(_format_term(a) for a in term.args)})"


def _format_atom(lit: Literal) -> str:
    atom = lit.atom
    if isinstance(atom, RelAtom):
        body = f"{atom.name}({','.join(_format_term(a) for a in atom.args)})"
        return body if lit.positive else f"~{body}"
    parts = [_format_term(atom.terms[0])]
    for rel, term in zip(atom.rels, atom.terms[1:]):
        parts.append(rel)
        parts.append(_format_term(term))
    body = " ".join(parts)
    return body if lit.positive else f"~({body})"


def _slash_text(slash: frozenset[str]) -> str:
    if not slash:
        return ""
    return "/{" + ",".join(sorted(slash)) + "}"


def format_formula(phi: Formula) -> str:
    """Canonical text; ``parse_formula(format_formula(phi))`` equals ``phi``."""
    return _fmt(phi, "top")


def _fmt(phi: Formula, ctx: str) -> str:
    if isinstance(phi, Literal):
        body = _format_atom(phi)
        return body if ctx == "top" else f"({body})"
    if isinstance(phi, (Exists, Forall, ChanceQ)):
        if isinstance(phi, ChanceQ):
            head = f"chance {phi.var}"
        else:
            kw = "exists" if isinstance(phi, Exists) else "forall"
            head = f"{kw} {phi.var}{_slash_text(phi.slash)}"
            if phi.slash:
                head = f"({head})"
        text = f"{head} {_fmt(phi.body, 'qbody')}"
        return f"({text})" if ctx == "left" else text
    if isinstance(phi, ChanceOr):
        return f"({_fmt(phi.left, 'left')} >< {_fmt(phi.right, 'right')})"
    op = "\\/" if isinstance(phi, Or) else "/\\"
    slash = "" if not phi.slash else "{" + ",".join(sorted(phi.slash)) + "}"
    return f"({_fmt(phi.left, 'left')} {op}{slash} {_fmt(phi.right, 'right')})"


# --------------------------------------------------------------- structures

def _data_lines(src: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(src.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def _parse_tuples(body: str, lineno: int) -> list[tuple[str, ...]]:
    tuples = []
    rest = body.strip()
    while rest:
        m = re.match(r"\(([^)]*)\)\s*", rest)
        if not m:
            raise ParseError(f"expected a tuple, found {rest!r}", lineno, 1)
        items = tuple(x.strip() for x in m.group(1).split(",")) if m.group(1).strip() else ()
        tuples.append(items)
        rest = rest[m.end():]
    return tuples


def parse_structure(src: str) -> Structure:
    """Read a ``.struct`` file: universe, relations, constants, functions."""
    universe: tuple[str, ...] | None = None
    relations: dict[str, tuple[int, frozenset[tuple[str, ...]]]] = {}
    constants: dict[str, str] = {}
    functions: dict[str, tuple[int, dict[tuple[str, ...], str]]] = {}
    for lineno, line in _data_lines(src):
        head, _, rest = line.partition(" ")
        if head == "universe":
            if universe is not None:
                raise ParseError("universe declared twice", lineno, 1)
            universe = tuple(rest.split())
            if len(set(universe)) != len(universe):
                raise ParseError("duplicate universe element", lineno, 1)
        elif head == "rel":
            m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)/([0-9]+)\s*:\s*(.*)$", rest)
            if not m:
                raise ParseError("malformed rel line (want rel Name/k: (a,b) ...)",
                                 lineno, 1)
            name, arity = m.group(1), int(m.group(2))
            if name in relations:
                raise ParseError(f"relation {name} declared twice", lineno, 1)
            tuples = _parse_tuples(m.group(3), lineno)
            for tup in tuples:
                if len(tup) != arity:
                    raise ParseError(
                        f"relation {name}/{arity} given a {len(tup)}-tuple", lineno, 1)
            relations[name] = (arity, frozenset(tuples))
        elif head == "const":
            m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)$", rest)
            if not m:
                raise ParseError("malformed const line (want const name = element)",
                                 lineno, 1)
            constants[m.group(1)] = m.group(2)
        elif head == "func":
            m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)/([0-9]+)\s*:\s*(.*)$", rest)
            if not m:
                raise ParseError("malformed func line", lineno, 1)
            name, arity = m.group(1), int(m.group(2))
            table: dict[tuple[str, ...], str] = {}
            for entry in m.group(3).split(";"):
                entry = entry.strip()
                if not entry:
                    continue
                em = re.match(r"\(([^)]*)\)\s*->\s*(\S+)$", entry)
                if not em:
                    raise ParseError("malformed func entry (want (a,b) -> c)", lineno, 1)
                key = tuple(x.strip() for x in em.group(1).split(","))
                table[key] = em.group(2)
            functions[name] = (arity, table)
        else:
            raise ParseError(f"unknown declaration {head!r}", lineno, 1)
    if universe is None:
        raise ParseError("structure has no universe line", 1, 1)
    try:
        return Structure(universe, relations, constants, functions)
    except StructureError as exc:
        raise ParseError(str(exc)) from exc


# ------------------------------------------------------- chance strategies

def _parse_fraction(text: str, lineno: int) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad probability {text!r}", lineno, 1) from exc
    if value < 0:
        raise ParseError(f"negative probability {text}", lineno, 1)
    return value


@dataclass
class _NatureRule:
    key: str  # variable name or occurrence label for chance-or points
    guard: dict[str, str]
    masses: dict[str, Fraction]
    lineno: int


def _parse_nature_rules(src: str) -> list[_NatureRule]:
    rules = []
    for lineno, line in _data_lines(src):
        for part in line.split(";"):
            part = part.strip()
            if not part:
                continue
            head, sep, body = part.partition(":")
            if not sep:
                raise ParseError("malformed rule (want var [| guard] : v -> p, ...)",
                                 lineno, 1)
            key, _, guard_text = head.partition("|")
            key = key.strip()
            guard: dict[str, str] = {}
            if guard_text.strip():
                for conj in re.split(r"[,&]", guard_text):
                    gm = re.match(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*=\s*(\S+)\s*$", conj)
                    if not gm:
                        raise ParseError(f"malformed guard {conj.strip()!r}", lineno, 1)
                    guard[gm.group(1)] = gm.group(2)
            masses: dict[str, Fraction] = {}
            for item in body.split(","):
                im = re.match(r"\s*(\S+)\s*->\s*(\S+)\s*$", item)
                if not im:
                    raise ParseError(f"malformed mass entry {item.strip()!r}", lineno, 1)
                if im.group(1) in masses:
                    raise ParseError(f"value {im.group(1)} listed twice", lineno, 1)
                masses[im.group(1)] = _parse_fraction(im.group(2), lineno)
            rules.append(_NatureRule(key, guard, masses, lineno))
    return rules


def parse_nature_strategy(src: str, game: ExtensiveGame):
    """Read a ``.nat`` file against a built game.

    Each rule fixes the distribution of one chance variable (or, keyed by
    ``@occurrence``, one chance-or point), optionally guarded by values of
    variables assigned earlier in the history.  Decision points no rule
    covers default to the uniform distribution.
    """
    from .strategy import BehavioralStrategy

    rules = _parse_nature_rules(src)
    dists: dict[int, tuple[Fraction, ...]] = {}
    for node in game.chance_nodes():
        actions = game.actions(node)
        sub = game.subformula_at(node) if isinstance(game, SemanticGame) else None
        if isinstance(sub, ChanceQ):
            key = sub.var
        elif game.occ[node] is not None:
            key = "@" + occurrence_label(game.occ[node])
        else:
            key = game.info_label[node] or ""
        assignment = game.assignment[node].as_dict()
        chosen: _NatureRule | None = None
        for rule in rules:
            if rule.key != key:
                continue
            for var in rule.guard:
                if var not in assignment:
                    raise NatureStrategyError(
                        f"rule at line {rule.lineno} tests {var}, which is not yet "
                        f"assigned at that decision point"
                    )
            if all(assignment[v] == val for v, val in rule.guard.items()):
                chosen = rule
                break
        if chosen is None:
            n = len(actions)
            dists[node] = tuple(Fraction(1, n) for _ in range(n))
            continue
        for value in chosen.masses:
            if value not in actions:
                raise NatureStrategyError(
                    f"rule at line {chosen.lineno} mentions {value!r}, not an "
                    f"available action at that decision point"
                )
        probs = tuple(chosen.masses.get(a, Fraction(0)) for a in actions)
        if sum(probs, Fraction(0)) != 1:
            raise NatureStrategyError(
                f"rule at line {chosen.lineno}: probabilities do not sum to 1"
            )
        dists[node] = probs
    return BehavioralStrategy(game, dists)


# ------------------------------------------------------------- game files

def parse_extensive_game(src: str, name: str = "game") -> ExtensiveGame:
    """Read a ``.game`` file: one node per line, two-space indentation.

    Internal nodes carry ``player=`` and ``info=``; non-root nodes carry the
    ``action=`` that leads to them; terminals carry ``win=``; children of
    chance nodes carry ``p=``.
    """
    game = ExtensiveGame(name)
    player_codes = {"I": EXIST, "II": UNIV, "chance": NATURE}
    # stack of (depth, node id); node ids per depth
    stack: list[tuple[int, int]] = []
    chance_probs: dict[int, list[Fraction]] = {}
    for lineno, raw in enumerate(src.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        indent = len(stripped) - len(stripped.lstrip(" "))
        if indent % 2:
            raise ParseError("indentation must be a multiple of two spaces", lineno, 1)
        depth = indent // 2
        fields = {}
        for item in stripped.split():
            key, sep, value = item.partition("=")
            if not sep:
                raise ParseError(f"malformed field {item!r}", lineno, indent + 1)
            if key in fields:
                raise ParseError(f"field {key} repeated", lineno, indent + 1)
            fields[key] = value
        while stack and stack[-1][0] >= depth:
            stack.pop()
        if depth == 0:
            if len(game) > 0:
                raise ParseError("multiple root nodes", lineno, 1)
            parent = -1
            if "action" in fields:
                raise ParseError("root cannot carry an action", lineno, 1)
        else:
            if not stack or stack[-1][0] != depth - 1:
                raise ParseError("node has no parent at the previous depth", lineno, 1)
            parent = stack[-1][1]
            if game.is_terminal(parent):
                raise ParseError("unreachable node declared under a terminal",
                                 lineno, 1)
            if "action" not in fields:
                raise ParseError("non-root node needs action=", lineno, 1)
        move = fields.pop("action", "")
        if "win" in fields:
            win = fields.pop("win")
            if win not in ("I", "II"):
                raise ParseError("win must be I or II", lineno, 1)
            if "player" in fields or "info" in fields:
                raise ParseError("terminal lines carry only action/win/p", lineno, 1)
            node = game.add_node(parent, move, -1, Assignment.empty(),
                                 winner=player_codes[win])
        else:
            if "player" not in fields:
                raise ParseError("internal node needs player=", lineno, 1)
            player = fields.pop("player")
            if player not in player_codes:
                raise ParseError("player must be I, II or chance", lineno, 1)
            info = fields.pop("info", None)
            if info is None:
                raise ParseError("internal node needs info=", lineno, 1)
            node = game.add_node(parent, move, player_codes[player],
                                 Assignment.empty(), info_label=info)
        if parent >= 0 and game.owner[parent] == NATURE:
            if "p" not in fields:
                raise ParseError("children of chance nodes need p=", lineno, 1)
            chance_probs.setdefault(parent, []).append(
                _parse_fraction(fields.pop("p"), lineno))
        if fields:
            raise ParseError(f"unknown fields {sorted(fields)}", lineno, 1)
        stack.append((depth, node))
    if len(game) == 0:
        raise ParseError("empty game file", 1, 1)
    for parent, probs in chance_probs.items():
        game.embedded_chance[parent] = tuple(probs)
    try:
        game.validate()
    except GameError as exc:
        raise ParseError(str(exc)) from exc
    return game


# ---------------------------------------------------------------- profiles

def parse_profile(src: str, game: ExtensiveGame):
    """Read a profile file into a (row, column) pair of mixed strategies.

    Blocks look like ``row 1/3 { <infoset label> -> <action> ... }``; the
    labels are exactly the strategy pretty-printer's canonical lines.  A
    side with no blocks defaults to its single empty strategy, which exists
    only when that player has no decision points.
    """
    from .strategy import MixedStrategy, ReducedStrategy, player_plan, _reachable_rows
    import numpy as np

    text = "\n".join(line for _, line in _data_lines(src))
    pattern = re.compile(r"(row|col)\s+(\S+)\s*\{([^}]*)\}", re.S)
    pos = 0
    blocks: list[tuple[str, Fraction, str]] = []
    for m in pattern.finditer(text):
        if text[pos:m.start()].strip():
            raise ProfileError(f"unexpected text {text[pos:m.start()].strip()!r}")
        blocks.append((m.group(1), Fraction(m.group(2)), m.group(3)))
        pos = m.end()
    if text[pos:].strip():
        raise ProfileError(f"unexpected text {text[pos:].strip()!r}")

    def build_side(player: int, side: str) -> MixedStrategy:
        plan = player_plan(game, player)
        label_to_infoset = {info.label: info for info in plan.infosets}
        support = []
        for kind, mass, body in blocks:
            if kind != side:
                continue
            chosen: dict[int, int] = {}
            for line in body.splitlines():
                line = line.strip()
                if not line:
                    continue
                head, sep, action = line.partition("->")
                if not sep:
                    raise ProfileError(f"malformed strategy line {line!r}")
                label, action = head.strip(), action.strip()
                info = label_to_infoset.get(label)
                if info is None:
                    raise ProfileError(f"unknown information set {label!r}")
                if action not in info.actions:
                    raise ProfileError(f"unknown action {action!r} at {label}")
                if info.index in chosen:
                    raise ProfileError(f"information set {label} listed twice")
                chosen[info.index] = info.actions.index(action)
            # validate the domain is exactly the own-reachable closure
            vec = np.full((1, len(plan.infosets)), -1, dtype=np.int64)
            used: set[int] = set()
            for k, info in enumerate(plan.infosets):
                if not _reachable_rows(plan, k, vec)[0]:
                    continue
                if k not in chosen:
                    raise ProfileError(
                        f"strategy line missing for reachable set {info.label}")
                vec[0, k] = chosen[k]
                used.add(k)
            extra = set(chosen) - used
            if extra:
                labels = [plan.infosets[k].label for k in sorted(extra)]
                raise ProfileError(f"lines for unreachable information sets {labels}")
            support.append((ReducedStrategy(game, player, chosen), mass))
        if not support:
            if plan.infosets:
                raise ProfileError(
                    f"profile gives no {side} strategies but that player has "
                    f"decision points")
            return MixedStrategy(player, [(ReducedStrategy(game, player, {}),
                                           Fraction(1))])
        total = sum(w for _, w in support)
        if total != 1:
            raise ProfileError(f"{side} masses sum to {total}, not 1")
        return MixedStrategy(player, support)

    return build_side(EXIST, "row"), build_side(UNIV, "col")


# ------------------------------------------------------------------ events

def parse_event(src: str, game: ExtensiveGame, structure: Structure | None = None):
    """Parse a conditioning event over terminal histories.

    Atoms are relation applications and equality/inequality chains; terms
    may be plain variables (their final value), history-indexed variables
    ``y#1`` / ``y#last`` (the k-th or last value assigned along the play),
    elements, or constants.  Boolean structure via ``and``/``or``/``not``.
    """
    from .solver import EventPredicate

    if structure is None and isinstance(game, SemanticGame):
        structure = game.structure
    variables = set(game.variables())
    ts = _TokenStream(_tokenize(src, hash_is_op=True))

    def parse_or():
        node = parse_and()
        while ts.peek().text == "or":
            ts.next()
            node = ("or", node, parse_and())
        return node

    def parse_and():
        node = parse_not()
        while ts.peek().text == "and":
            ts.next()
            node = ("and", node, parse_not())
        return node

    def parse_not():
        if ts.peek().text == "not":
            ts.next()
            return ("not", parse_not())
        if ts.peek().text == "(":
            ts.next()
            node = parse_or()
            ts.expect(")")
            return node
        return parse_atom()

    def parse_eterm():
        tok = ts.next()
        if tok.kind == "num":
            name = tok.text
            if ts.peek().text == "#":
                raise ParseError("only variables take #indices", tok.line, tok.col)
            if name in variables:
                return ("var", name, None)
            _check_element(name, tok)
            return ("const", _resolve_element(name))
        if tok.kind != "name":
            raise ParseError(f"expected a term, found {tok.text!r}", tok.line, tok.col)
        name = tok.text
        if ts.peek().text == "#":
            ts.next()
            idx_tok = ts.next()
            if name not in variables:
                raise EventError(f"{name} is not a game variable")
            if idx_tok.text == "last":
                return ("var", name, "last")
            if idx_tok.kind == "num" and int(idx_tok.text) >= 1:
                return ("var", name, int(idx_tok.text))
            raise ParseError("variable index must be a positive number or 'last'",
                             idx_tok.line, idx_tok.col)
        if name in variables:
            return ("var", name, None)
        _check_element(name, tok)
        return ("const", _resolve_element(name))

    def _resolve_element(name: str) -> str:
        if structure is not None and name in structure.constants:
            return structure.constants[name]
        return name

    def _check_element(name: str, tok: _Token):
        if structure is None:
            return
        if name in structure.constants or structure.has_element(name):
            return
        raise EventError(f"{name!r} is neither a game variable, a constant, "
                         f"nor a universe element")

    def parse_atom():
        tok = ts.peek()
        if tok.kind == "name" and ts.peek(1).text == "(" and tok.text not in variables:
            name = ts.next().text
            if structure is None or name not in structure.relations:
                raise EventError(f"unknown relation {name} in event")
            ts.next()
            args = [parse_eterm()]
            while ts.accept(","):
                args.append(parse_eterm())
            ts.expect(")")
            arity, _ = structure.relations[name]
            if len(args) != arity:
                raise EventError(f"relation {name} expects {arity} arguments")
            return ("rel", name, tuple(args))
        terms = [parse_eterm()]
        rels = []
        while ts.peek().text in ("=", "!="):
            rels.append(ts.next().text)
            terms.append(parse_eterm())
        if not rels:
            ts.error("expected a comparison or relation atom")
        return ("chain", tuple(terms), tuple(rels))

    expr = parse_or()
    if ts.peek().kind != "eof":
        ts.error(f"trailing input starting at {ts.peek().text!r}")
    return EventPredicate(expr, src.strip(), structure)
