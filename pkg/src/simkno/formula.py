"""Formulas of epistemic logic with group-knowledge modalities.

The language is built from propositional variables with negation and
implication as the only primitive connectives, plus five modalities:

    K{a} phi      agent a knows phi
    E{G} phi      everybody in group G knows phi
    C{G} phi      phi is common knowledge in G
    D{G} phi      phi is distributed knowledge in G  (members pool abilities)
    M{G} phi      phi is mutual knowledge in G       (shared abilities only)

Conjunction, disjunction, bi-implication and the constants true/false
are parser sugar, expanded into the primitives at construction time
(``p & q`` becomes ``~(p -> ~q)`` and so on; ``true`` is the reserved
tautology ``_p0 -> _p0``).  ``E{G}`` is kept as a first-class node
rather than expanded: rewriting it into a conjunction of K's multiplies
formula size by |G| at every nesting level, so expansion is explicit
(:func:`expand_everyone`) and the evaluator handles E directly.

Concrete syntax, loosest to tightest binding::

    phi <-> psi        (left associative)
    phi -> psi         (right associative)
    phi | psi          (left associative)
    phi & psi          (left associative)
    ~phi, K{a} phi, C{G} phi, D{G} phi, M{G} phi, E{G} phi

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*``.  A modality is an
operator letter immediately followed by ``{``; the bare letters remain
usable as propositional variables.  Groups are written ``{a,b,c}`` and
are kept in a canonical shortlex order, so ``D{b,a}`` and ``D{a,b}``
denote the same formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "RESERVED_PROP", "TRUE", "FALSE",
    "Formula", "Prop", "Not", "Implies", "K", "E", "C", "D", "M",
    "Group", "LanguageTag", "ParseError",
    "parse", "to_text", "And", "Or", "Iff", "big_and", "big_or",
    "length", "subformulas", "children", "modal_depth",
    "props_in", "agents_in", "groups_in",
    "classify", "closure", "neg_dual", "simplify_singletons",
    "expand_everyone", "random_formula",
]

#: Reserved propositional variable used to encode the constants.
#: ``true`` is ``_p0 -> _p0`` and ``false`` is its negation; the printer
#: renders exactly these shapes back as ``true``/``false``.
RESERVED_PROP = "_p0"


def _shortlex(name: str) -> tuple[int, str]:
    return (len(name), name)


@dataclass(frozen=True)
class Group:
    """A nonempty set of agents in canonical (shortlex) member order."""

    members: tuple[str, ...]

    def __init__(self, members: Iterable[str]):
        canon = tuple(sorted(set(members), key=_shortlex))
        if not canon:
            raise ValueError("a group must contain at least one agent")
        object.__setattr__(self, "members", canon)

    def __iter__(self) -> Iterator[str]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, agent: str) -> bool:
        return agent in self.members

    def issubset(self, other: "Group") -> bool:
        return set(self.members) <= set(other.members)

    def __str__(self) -> str:
        return "{" + ",".join(self.members) + "}"


class Formula:
    """Base class for formula nodes.

    Nodes are immutable and compared structurally.  Each node caches its
    structural hash at construction time (children are already built, so
    this is O(1) per node), which keeps dictionary lookups on large
    shared subterms cheap.
    """

    __slots__ = ("_hash",)

    def _key(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Formula", ...]:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if self.__class__ is not other.__class__:
            return NotImplemented if not isinstance(other, Formula) else False
        if self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other: object) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}<{to_text(self)}>"


class Prop(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("prop", name))

    def _key(self):
        return (self.name,)

    def children(self):
        return ()


class Not(Formula):
    __slots__ = ("body",)

    def __init__(self, body: Formula):
        self.body = body
        self._hash = hash(("not", body._hash))

    def _key(self):
        return (self.body,)

    def children(self):
        return (self.body,)


class Implies(Formula):
    __slots__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._hash = hash(("impl", left._hash, right._hash))

    def _key(self):
        return (self.left, self.right)

    def children(self):
        return (self.left, self.right)


class K(Formula):
    __slots__ = ("agent", "body")

    def __init__(self, agent: str, body: Formula):
        self.agent = agent
        self.body = body
        self._hash = hash(("K", agent, body._hash))

    def _key(self):
        return (self.agent, self.body)

    def children(self):
        return (self.body,)


class _GroupModal(Formula):
    __slots__ = ("group", "body")

    _tag = "?"

    def __init__(self, group: Group | Iterable[str], body: Formula):
        if not isinstance(group, Group):
            group = Group(group)
        self.group = group
        self.body = body
        self._hash = hash((self._tag, group.members, body._hash))

    def _key(self):
        return (self.group, self.body)

    def children(self):
        return (self.body,)


class E(_GroupModal):
    _tag = "E"
    __slots__ = ()


class C(_GroupModal):
    _tag = "C"
    __slots__ = ()


class D(_GroupModal):
    _tag = "D"
    __slots__ = ()


class M(_GroupModal):
    _tag = "M"
    __slots__ = ()


TRUE = Implies(Prop(RESERVED_PROP), Prop(RESERVED_PROP))
FALSE = Not(TRUE)


# ---------------------------------------------------------------------------
# sugar constructors

def And(left: Formula, right: Formula) -> Formula:
    return Not(Implies(left, Not(right)))


def Or(left: Formula, right: Formula) -> Formula:
    return Implies(Not(left), right)


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def big_and(parts: Iterable[Formula]) -> Formula:
    """Conjoin ``parts`` as a balanced tree (empty conjunction is true).

    Balancing keeps the tree depth logarithmic in the number of
    conjuncts, which matters for the rewritings that conjoin thousands
    of guard formulas.  Order of the conjuncts is preserved.
    """
    items = list(parts)
    if not items:
        return TRUE
    while len(items) > 1:
        paired = [And(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def big_or(parts: Iterable[Formula]) -> Formula:
    items = list(parts)
    if not items:
        return FALSE
    while len(items) > 1:
        paired = [Or(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    """Syntax or scoping error, with the offending position when known."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|<->|->|[~&|(){},]")
_MODALITIES = {"K", "E", "C", "D", "M"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        tok = m.group()
        kind = "ident" if tok[0].isalpha() or tok[0] == "_" else tok
        tokens.append((kind, tok, i))
        i = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: Iterable[str] | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.universe = None if universe is None else set(universe)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def formula(self) -> Formula:
        left = self.implication()
        while self.peek()[0] == "<->":
            self.pos += 1
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunct()
        if self.peek()[0] == "->":
            self.pos += 1
            return Implies(left, self.implication())
        return left

    def disjunct(self) -> Formula:
        left = self.conjunct()
        while self.peek()[0] == "|":
            self.pos += 1
            left = Or(left, self.conjunct())
        return left

    def conjunct(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.pos += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, at = self.peek()
        if kind == "~":
            self.pos += 1
            return Not(self.unary())
        if kind == "(":
            self.pos += 1
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "ident":
            self.pos += 1
            if value in _MODALITIES and self.peek()[0] == "{":
                return self.modality(value, at)
            if value == "true":
                return TRUE
            if value == "false":
                return FALSE
            return Prop(value)
        raise ParseError(f"expected a formula, found {value!r}", at)

    def modality(self, op: str, at: int) -> Formula:
        self.take("{")
        members = [self.agent()]
        while self.peek()[0] == ",":
            self.pos += 1
            members.append(self.agent())
        self.take("}")
        body = self.unary()
        if op == "K":
            if len(members) != 1:
                raise ParseError("K takes exactly one agent", at)
            return K(members[0], body)
        return {"E": E, "C": C, "D": D, "M": M}[op](Group(members), body)

    def agent(self) -> str:
        kind, value, at = self.peek()
        if kind == "}":
            raise ParseError("a group must contain at least one agent", at)
        _, value, at = self.take("ident")
        if self.universe is not None and value not in self.universe:
            raise ParseError(f"unknown agent {value!r}", at)
        return value


def parse(text: str, universe: Iterable[str] | None = None) -> Formula:
    """Parse the concrete syntax into a formula.

    When ``universe`` is given, every agent mentioned inside a modality
    must belong to it; otherwise agent names are taken at face value.
    """
    parser = _Parser(text, universe)
    result = parser.formula()
    kind, value, at = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input starting with {value!r}", at)
    return result


# ---------------------------------------------------------------------------
# printing

def _is_true(phi: Formula) -> bool:
    return phi is TRUE or phi == TRUE


def _is_false(phi: Formula) -> bool:
    return phi is FALSE or phi == FALSE


def to_text(phi: Formula) -> str:
    """Render ``phi`` so that ``parse(to_text(phi)) == phi``.

    Only the primitive connectives are emitted (sugar was expanded at
    construction), plus ``true``/``false`` for the reserved encodings.
    """
    if _is_true(phi):
        return "true"
    if _is_false(phi):
        return "false"
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Not):
        return "~" + _tight(phi.body)
    if isinstance(phi, Implies):
        return f"{_tight(phi.left)} -> {to_text(phi.right)}"
    if isinstance(phi, K):
        return f"K{{{phi.agent}}} {_tight(phi.body)}"
    if isinstance(phi, _GroupModal):
        return f"{phi._tag}{phi.group} {_tight(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


def _tight(phi: Formula) -> str:
    # operand of a prefix operator, or left operand of the
    # right-associative arrow: implications need parentheses
    if isinstance(phi, Implies) and not _is_true(phi):
        return f"({to_text(phi)})"
    return to_text(phi)


# ---------------------------------------------------------------------------
# structural measures and walks

def _postorder(phi: Formula) -> list[Formula]:
    """Distinct nodes, children before parents."""
    order: list[Formula] = []
    seen: dict[Formula, bool] = {}
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if node in seen:
            continue
        seen[node] = True
        stack.append((node, True))
        for child in node.children():
            if child not in seen:
                stack.append((child, False))
    return order


def children(phi: Formula) -> tuple[Formula, ...]:
    return phi.children()


def subformulas(phi: Formula) -> tuple[Formula, ...]:
    """All distinct subformulas of ``phi`` (including ``phi`` itself),
    in first-visit preorder."""
    out: dict[Formula, None] = {}
    stack = [phi]
    while stack:
        node = stack.pop()
        if node in out:
            continue
        out[node] = None
        stack.extend(reversed(node.children()))
    return tuple(out)


def length(phi: Formula) -> int:
    """Symbol count of ``phi``.

    Propositional variables count 1; negation adds 1; an implication
    adds 3 (arrow and parentheses); ``K{a}`` adds 2; each group modality
    adds 2|G|+2 (operator, braces, members, separators).  Shared
    subterms are counted once per occurrence, as in the written formula.
    """
    memo: dict[Formula, int] = {}
    for node in _postorder(phi):
        if isinstance(node, Prop):
            memo[node] = 1
        elif isinstance(node, Not):
            memo[node] = memo[node.body] + 1
        elif isinstance(node, Implies):
            memo[node] = memo[node.left] + memo[node.right] + 3
        elif isinstance(node, K):
            memo[node] = memo[node.body] + 2
        else:
            memo[node] = memo[node.body] + 2 * len(node.group) + 2
    return memo[phi]


def modal_depth(phi: Formula) -> int:
    memo: dict[Formula, int] = {}
    for node in _postorder(phi):
        if isinstance(node, Prop):
            memo[node] = 0
        elif isinstance(node, (Not, Implies)):
            memo[node] = max(memo[c] for c in node.children())
        else:
            memo[node] = memo[node.body] + 1
    return memo[phi]


def props_in(phi: Formula) -> frozenset[str]:
    return frozenset(f.name for f in subformulas(phi) if isinstance(f, Prop))


def agents_in(phi: Formula) -> frozenset[str]:
    """Every agent occurring in ``phi``, whether as a K-subscript or a
    group member."""
    out: set[str] = set()
    for f in subformulas(phi):
        if isinstance(f, K):
            out.add(f.agent)
        elif isinstance(f, _GroupModal):
            out.update(f.group)
    return frozenset(out)


def groups_in(phi: Formula) -> frozenset[Group]:
    return frozenset(f.group for f in subformulas(phi) if isinstance(f, _GroupModal))


@dataclass(frozen=True)
class LanguageTag:
    """Which optional modalities occur in a formula (E is definable from
    K, so it never affects the tag)."""

    has_c: bool
    has_d: bool
    has_m: bool

    @property
    def name(self) -> str:
        return "EL" + ("C" if self.has_c else "") + ("D" if self.has_d else "") \
            + ("M" if self.has_m else "")


def classify(phi: Formula) -> LanguageTag:
    has_c = has_d = has_m = False
    for f in subformulas(phi):
        if isinstance(f, C):
            has_c = True
        elif isinstance(f, D):
            has_d = True
        elif isinstance(f, M):
            has_m = True
    return LanguageTag(has_c, has_d, has_m)


# ---------------------------------------------------------------------------
# closure, duals, normal forms

def neg_dual(phi: Formula) -> Formula:
    """``~phi``, except that an outer negation is stripped instead of
    doubled (the matching-negation map used by the closure set)."""
    if isinstance(phi, Not):
        return phi.body
    return Not(phi)


def closure(phi: Formula) -> frozenset[Formula]:
    """The axiomatic closure set of an E-free formula.

    The closure contains all subformulas and is further closed under:
    matching negations; ``K{a} psi  =>  D{a} psi, M{a} psi``;
    ``D{a} psi  =>  K{a} psi``; ``D{G} psi  =>  D{H} psi`` for every
    group ``H`` occurring in ``phi`` with ``G ⊆ H``; ``C{G} psi  =>
    K{a} psi, K{a} C{G} psi`` for ``a`` in ``G``; ``M{G} psi  =>
    K{a} psi`` for ``a`` in ``G``; and ``M{G} psi  =>  M{H} psi`` for
    occurring ``H ⊆ G``.  The result is finite: every element is built
    from a subformula body, an operator over agents of ``phi``, and at
    most one negation.
    """
    if any(isinstance(f, E) for f in subformulas(phi)):
        raise ValueError("closure is defined for E-free formulas; "
                         "apply expand_everyone first")
    occurring = sorted(groups_in(phi), key=lambda g: g.members)
    out: dict[Formula, None] = {}
    todo = [phi]
    while todo:
        f = todo.pop()
        if f in out:
            continue
        out[f] = None
        todo.extend(f.children())
        if isinstance(f, K):
            solo = Group((f.agent,))
            todo.append(D(solo, f.body))
            todo.append(M(solo, f.body))
        elif isinstance(f, D):
            if len(f.group) == 1:
                todo.append(K(f.group.members[0], f.body))
            for h in occurring:
                if f.group.issubset(h) and h != f.group:
                    todo.append(D(h, f.body))
        elif isinstance(f, M):
            for a in f.group:
                todo.append(K(a, f.body))
            for h in occurring:
                if h.issubset(f.group) and h != f.group:
                    todo.append(M(h, f.body))
        elif isinstance(f, C):
            for a in f.group:
                todo.append(K(a, f.body))
                todo.append(K(a, f))
    return frozenset(out) | frozenset(neg_dual(f) for f in out)


def simplify_singletons(phi: Formula) -> Formula:
    """Rewrite ``D{a}``/``M{a}`` over singleton groups to ``K{a}``,
    recursively (the three operators coincide for one agent)."""
    memo: dict[Formula, Formula] = {}
    for node in _postorder(phi):
        if isinstance(node, Prop):
            memo[node] = node
        elif isinstance(node, Not):
            memo[node] = Not(memo[node.body])
        elif isinstance(node, Implies):
            memo[node] = Implies(memo[node.left], memo[node.right])
        elif isinstance(node, K):
            memo[node] = K(node.agent, memo[node.body])
        elif isinstance(node, (D, M)) and len(node.group) == 1:
            memo[node] = K(node.group.members[0], memo[node.body])
        else:
            memo[node] = type(node)(node.group, memo[node.body])
    return memo[phi]


def expand_everyone(phi: Formula) -> Formula:
    """Replace every ``E{G} psi`` by the conjunction of ``K{a} psi``
    over the members of ``G`` (balanced), bottom-up."""
    memo: dict[Formula, Formula] = {}
    for node in _postorder(phi):
        if isinstance(node, Prop):
            memo[node] = node
        elif isinstance(node, Not):
            memo[node] = Not(memo[node.body])
        elif isinstance(node, Implies):
            memo[node] = Implies(memo[node.left], memo[node.right])
        elif isinstance(node, K):
            memo[node] = K(node.agent, memo[node.body])
        elif isinstance(node, E):
            body = memo[node.body]
            memo[node] = big_and([K(a, body) for a in node.group])
        else:
            memo[node] = type(node)(node.group, memo[node.body])
    return memo[phi]


# ---------------------------------------------------------------------------
# random generation (for test corpora and metamorphic sweeps)

def random_formula(rng, *, agents: Iterable[str], props: Iterable[str],
                   language: str = "ELCDM", max_length: int = 12,
                   allow_constants: bool = False) -> Formula:
    """Draw a random formula of at most ``max_length`` symbols.

    ``language`` is one of EL, ELC, ELD, ELM, ELCD, ELCM, ELDM, ELCDM
    and bounds which modalities may appear.  ``rng`` is a
    ``random.Random``; the draw is deterministic for a fixed seed.
    """
    agents = sorted(agents)
    props = sorted(props)
    if not props:
        raise ValueError("need at least one proposition")
    suffix = language[2:] if language.startswith("EL") else ""
    if not language.startswith("EL") or set(suffix) - set("CDM") or \
            list(suffix) != sorted(suffix):
        raise ValueError(f"unknown language {language!r}")
    modal_ops: list[type] = [E] if agents else []
    if "C" in suffix:
        modal_ops.append(C)
    if "D" in suffix:
        modal_ops.append(D)
    if "M" in suffix:
        modal_ops.append(M)

    def atom() -> Formula:
        if allow_constants and rng.random() < 0.1:
            return rng.choice((TRUE, FALSE))
        return Prop(rng.choice(props))

    def gen(budget: int) -> Formula:
        choices = ["prop"]
        if budget >= 2:
            choices += ["not", "not"]
        if budget >= 5:
            choices += ["implies", "implies"]
        if agents and budget >= 3:
            choices += ["K", "K", "K"]
        if modal_ops and budget >= 5:  # smallest group modality: 2*1+2+1
            choices += ["group", "group", "group"]
        pick = rng.choice(choices)
        if pick == "prop":
            return atom()
        if pick == "not":
            return Not(gen(budget - 1))
        if pick == "implies":
            left_budget = rng.randint(1, budget - 4)
            left = gen(left_budget)
            return Implies(left, gen(budget - 3 - length(left)))
        if pick == "K":
            return K(rng.choice(agents), gen(budget - 2))
        op = rng.choice(modal_ops)
        max_size = min(len(agents), (budget - 3) // 2)
        size = rng.randint(1, max_size)
        group = Group(rng.sample(agents, size))
        return op(group, gen(budget - 2 * len(group) - 2))

    return gen(max(1, max_length))
