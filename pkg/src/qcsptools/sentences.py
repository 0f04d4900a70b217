"""Prenex positive Horn sentences: AST, parser, printer and normalizers.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    sentence := block+ ":" matrix
    block    := ("forall" | "exists") ident+
    matrix   := "true" | atom ("&" atom)*
    atom     := ident "(" ident ("," ident)* ")" | ident "=" ident

Dummy variables introduced by strict-alternation normalization use the
reserved prefix ``_d``, which the surface grammar cannot produce.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SentenceError
from .structures import Signature, Structure

FORALL = "forall"
EXISTS = "exists"
DUMMY_PREFIX = "_d"


@dataclass(frozen=True)
class RelAtom:
    name: str
    args: tuple[str, ...]

    def variables(self):
        return self.args

    def rename(self, sub):
        return RelAtom(self.name, tuple(sub.get(v, v) for v in self.args))

    def __str__(self):
        return f"{self.name}({','.join(self.args)})"


@dataclass(frozen=True)
class EqAtom:
    left: str
    right: str

    def variables(self):
        return (self.left, self.right)

    def rename(self, sub):
        return EqAtom(sub.get(self.left, self.left), sub.get(self.right, self.right))

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class PhSentence:
    """Quantifier prefix (blocks of variables) plus a conjunction of atoms."""

    prefix: tuple[tuple[str, tuple[str, ...]], ...]
    matrix: tuple

    def __post_init__(self):
        seen = set()
        for q, block in self.prefix:
            if q not in (FORALL, EXISTS):
                raise SentenceError(f"bad quantifier {q!r}")
            for v in block:
                if v in seen:
                    raise SentenceError(f"variable {v!r} bound twice")
                seen.add(v)
        for atom in self.matrix:
            for v in atom.variables():
                if v not in seen:
                    raise SentenceError(f"unbound variable {v!r}")

    def flat_prefix(self) -> list[tuple[str, str]]:
        return [(q, v) for q, block in self.prefix for v in block]

    def variables(self) -> list[str]:
        return [v for _, v in self.flat_prefix()]

    def universal_variables(self) -> list[str]:
        return [v for q, v in self.flat_prefix() if q == FORALL]

    def existential_variables(self) -> list[str]:
        return [v for q, v in self.flat_prefix() if q == EXISTS]

    def has_equality(self) -> bool:
        return any(isinstance(a, EqAtom) for a in self.matrix)

    def relation_arities(self) -> dict[str, int]:
        out = {}
        for a in self.matrix:
            if isinstance(a, RelAtom):
                prev = out.setdefault(a.name, len(a.args))
                if prev != len(a.args):
                    raise SentenceError(
                        f"relation {a.name!r} used with arities {prev} and {len(a.args)}"
                    )
        return out

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class SentenceShape:
    universal_count: int
    existential_count: int
    depth: int
    is_pi2: bool
    is_sigma1: bool
    is_degenerate: bool
    has_equality: bool


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*|[():,=&]|#[^\n]*|\s+|.")


def _tokenize(text):
    tokens, pos = [], 0
    for m in _TOKEN_RE.finditer(text):
        tok = m.group(0)
        if tok.isspace() or tok.startswith("#"):
            continue
        if not (tok[0].isalpha() or tok in "():,=&"):
            raise ParseError(f"unexpected character {tok!r}", m.start())
        tokens.append((tok, m.start()))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.end

    def take(self, expected=None):
        if self.i >= len(self.tokens):
            raise ParseError(
                f"unexpected end of input (expected {expected or 'more input'})",
                self.end,
            )
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok, pos

    def ident(self, what="identifier"):
        tok, pos = self.take()
        if not tok[0].isalpha():
            raise ParseError(f"expected {what}, found {tok!r}", pos)
        if tok.startswith(DUMMY_PREFIX):
            raise ParseError(f"the prefix {DUMMY_PREFIX!r} is reserved", pos)
        return tok, pos

    def sentence(self):
        prefix, bound = [], set()
        while self.peek() in (FORALL, EXISTS):
            q, _ = self.take()
            block = []
            while self.peek() is not None and self.peek() not in (FORALL, EXISTS, ":"):
                v, pos = self.ident("variable")
                if v in bound:
                    raise ParseError(f"duplicate variable {v!r}", pos)
                bound.add(v)
                block.append(v)
            if not block:
                raise ParseError(f"empty {q} block", self.pos())
            prefix.append((q, tuple(block)))
        if not prefix:
            raise ParseError("sentence must start with a quantifier block", self.pos())
        self.take(":")
        matrix = self.matrix(bound)
        if self.i < len(self.tokens):
            raise ParseError(f"trailing input {self.peek()!r}", self.pos())
        return PhSentence(tuple(prefix), tuple(matrix))

    def matrix(self, bound):
        if self.peek() == "true":
            self.take()
            return []
        atoms = [self.atom(bound)]
        while self.peek() == "&":
            self.take()
            atoms.append(self.atom(bound))
        return atoms

    def atom(self, bound):
        name, pos = self.ident("atom")
        if self.peek() == "=":
            self.take()
            other, opos = self.ident("variable")
            for v, p in ((name, pos), (other, opos)):
                if v not in bound:
                    raise ParseError(f"unbound variable {v!r}", p)
            return EqAtom(name, other)
        self.take("(")
        args = [self.ident("variable")]
        while self.peek() == ",":
            self.take()
            args.append(self.ident("variable"))
        self.take(")")
        for v, p in args:
            if v not in bound:
                raise ParseError(f"unbound variable {v!r}", p)
        return RelAtom(name, tuple(v for v, _ in args))


def parse_sentence(text: str) -> PhSentence:
    if not text.strip() or all(
        line.strip().startswith("#") or not line.strip() for line in text.splitlines()
    ):
        raise ParseError("empty sentence", 0)
    return _Parser(text).sentence()


def pretty(s: PhSentence) -> str:
    head = " ".join(f"{q} {' '.join(block)}" for q, block in s.prefix)
    body = " & ".join(str(a) for a in s.matrix) if s.matrix else "true"
    return f"{head} : {body}"


# ---------------------------------------------------------------------------
# Normalizers and classification


def _fresh_dummies():
    i = 0
    while True:
        i += 1
        yield f"{DUMMY_PREFIX}{i}"


def normalize_strict_alternation(s: PhSentence) -> PhSentence:
    """Rewrite the prefix as forall x1 exists y1 ... with singleton blocks,
    inserting unused dummy variables where a quantifier is missing."""
    dummies = _fresh_dummies()
    prefix = []
    expect = FORALL
    for q, v in s.flat_prefix():
        while q != expect:
            prefix.append((expect, (next(dummies),)))
            expect = EXISTS if expect == FORALL else FORALL
        prefix.append((q, (v,)))
        expect = EXISTS if q == FORALL else FORALL
    if expect == EXISTS:
        prefix.append((EXISTS, (next(dummies),)))
    return PhSentence(tuple(prefix), s.matrix)


def strip_dummies(s: PhSentence) -> PhSentence:
    """Drop dummy variables and merge adjacent same-quantifier blocks."""
    prefix = []
    for q, v in s.flat_prefix():
        if v.startswith(DUMMY_PREFIX):
            continue
        if prefix and prefix[-1][0] == q:
            prefix[-1] = (q, prefix[-1][1] + (v,))
        else:
            prefix.append((q, (v,)))
    return PhSentence(tuple(prefix), s.matrix)


def is_dummy(v: str) -> bool:
    return v.startswith(DUMMY_PREFIX)


def classify(s: PhSentence) -> SentenceShape:
    """Shape flags; degeneracy is judged on the strict-alternation form."""
    flat = s.flat_prefix()
    u = sum(1 for q, _ in flat if q == FORALL)
    e = len(flat) - u
    strict = normalize_strict_alternation(s)
    depth = sum(1 for q, _ in strict.flat_prefix() if q == FORALL)
    # Position of each variable in the strict form: (round, quantifier).
    role = {}
    for i, (q, v) in enumerate(strict.flat_prefix()):
        role[v] = (i // 2 + 1, q)
    degenerate = False
    for a in s.matrix:
        if not isinstance(a, EqAtom) or a.left == a.right:
            continue
        (ri, qi), (rj, qj) = role[a.left], role[a.right]
        if qi == FORALL and qj == FORALL:
            degenerate = True
        elif qi == EXISTS and qj == FORALL and ri < rj:
            degenerate = True
        elif qj == EXISTS and qi == FORALL and rj < ri:
            degenerate = True
    qs = [q for q, _ in flat]
    is_pi2 = all(q == EXISTS for q in qs[qs.index(EXISTS):]) if EXISTS in qs else True
    is_sigma1 = FORALL not in qs
    return SentenceShape(u, e, depth, is_pi2, is_sigma1, degenerate, s.has_equality())


def propagate_equalities(s: PhSentence) -> PhSentence:
    """Eliminate equality atoms from a non-degenerate sentence by
    substituting the later-bound variable with the earlier-bound one."""
    if classify(s).is_degenerate:
        raise SentenceError("cannot propagate equalities out of a degenerate sentence")
    order = {v: i for i, (_, v) in enumerate(s.flat_prefix())}
    prefix = list(s.flat_prefix())
    matrix = list(s.matrix)
    while True:
        eq = next(
            (a for a in matrix if isinstance(a, EqAtom)), None
        )
        if eq is None:
            break
        if eq.left == eq.right:
            matrix.remove(eq)
            continue
        keep, drop = sorted((eq.left, eq.right), key=lambda v: order[v])
        # In a non-degenerate sentence the later-bound side is existential.
        sub = {drop: keep}
        prefix = [(q, v) for q, v in prefix if v != drop]
        matrix = [a.rename(sub) for a in matrix if a is not eq]
    blocks = []
    for q, v in prefix:
        if blocks and blocks[-1][0] == q:
            blocks[-1] = (q, blocks[-1][1] + (v,))
        else:
            blocks.append((q, (v,)))
    return PhSentence(tuple(blocks), tuple(matrix))


# ---------------------------------------------------------------------------
# Sentence <-> structure correspondence (Pi_2 fragment)


def sentence_to_structure(s: PhSentence, signature: Signature | None = None) -> Structure:
    """Encode a Pi_2 equality-free sentence as a structure with constants:
    elements are the variables, tuples the atoms, constants the universals."""
    shape = classify(s)
    if not shape.is_pi2:
        raise SentenceError("sentence_to_structure requires a Pi_2 sentence")
    if s.has_equality():
        raise SentenceError("sentence_to_structure requires an equality-free sentence")
    variables = s.variables()
    index = {v: i for i, v in enumerate(variables)}
    arities = s.relation_arities()
    if signature is None:
        signature = Signature(tuple(sorted(arities.items())))
    else:
        for name, k in arities.items():
            if name not in signature.relation_names or signature.arity(name) != k:
                raise SentenceError(f"relation {name}/{k} not in the given signature")
        signature = signature.reduct()
    tuples = {}
    for a in s.matrix:
        tuples.setdefault(a.name, []).append(tuple(index[v] for v in a.args))
    constants = [index[v] for v in s.universal_variables()]
    return Structure.build(
        signature.with_constants(len(constants)),
        len(variables), tuples, constants, variables,
    )


def structure_to_sentence(d: Structure) -> PhSentence:
    """Decode a structure with constants into a Pi_2 sentence: universal
    variables for the constant-bearing elements, existential for the rest."""
    if d.signature.constant_count < 1:
        raise SentenceError("structure_to_sentence needs at least one constant")
    if len(set(d.constants)) != len(d.constants):
        raise SentenceError(
            "constants collide on a shared element; no equality-free sentence exists"
        )
    var = {}
    for i, c in enumerate(d.constants):
        var[c] = f"x{i + 1}"
    j = 0
    for e in range(d.size):
        if e not in var:
            j += 1
            var[e] = f"y{j}"
    universals = tuple(var[c] for c in d.constants)
    existentials = tuple(var[e] for e in range(d.size) if e not in set(d.constants))
    prefix = [(FORALL, universals)]
    if existentials:
        prefix.append((EXISTS, existentials))
    matrix = []
    for (name, _), tset in zip(d.signature.relations, d.tuples):
        for t in sorted(tset):
            matrix.append(RelAtom(name, tuple(var[x] for x in t)))
    return PhSentence(tuple(prefix), tuple(matrix))


def canonical_query(a: Structure) -> PhSentence:
    """The purely existential sentence listing all facts of ``a``."""
    if a.signature.constant_count != 0:
        raise SentenceError("canonical_query requires a constant-free structure")
    var = {e: f"v{e}" for e in range(a.size)}
    matrix = []
    for (name, _), tset in zip(a.signature.relations, a.tuples):
        for t in sorted(tset):
            matrix.append(RelAtom(name, tuple(var[x] for x in t)))
    prefix = ((EXISTS, tuple(var[e] for e in range(a.size))),)
    return PhSentence(prefix, tuple(matrix))
