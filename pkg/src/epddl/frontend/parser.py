"""Recursive-descent parser for problems, domains and action type libraries.

The parser stops at the first syntax error. Requirement licensing and
every other semantic check happen later in the type checker.
"""

from __future__ import annotations

from typing import Callable

from .ast import (
    ActionDecl, ActionEvent, ActionTypeDecl, CondEffect, Domain, EventDecl, ExplicitInit, FAnd,
    FEq, FFalse, FImply, FinitaryInit, FModal, FNot, FOr, FormalParams, Formula, FPred, FQuant,
    FTrue, GroupDecl, LAnd, LForall, LItem, Library, ListExpr, Literal, ObsDefault, ObsIte,
    ObsStatic, PredicateDecl, Problem, Requirements, Term, TermTuple, TypedItem, TypeExpr,
    list_items,
)
from .errors import ParseError, Pos, fail
from .lexer import Kind, Token, lex

PRIMITIVE_TYPES = ("entity", "object", "agent", "agent-group", "world", "event", "obs-type")

EVENT_CONDITIONS = (
    ":propositional-precondition", ":propositional-postconditions", ":propositional-event",
    ":trivial-precondition", ":trivial-postconditions", ":trivial-event",
    ":non-trivial-precondition", ":non-trivial-postconditions", ":non-trivial-event",
)

RESERVED = frozenset({
    "define", "problem", "domain", "action-type-library", "not", "and", "or", "imply", "forall",
    "exists", "when", "iff", "if", "else-if", "else", "either", "default", "true", "false", "All",
    "basic", *PRIMITIVE_TYPES,
})


class Parser:
    def __init__(self, tokens: list[Token], file: str = "<input>"):
        self.toks = tokens
        self.i = 0
        self.file = file

    # cursor helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def error(self, expected, tok: Token | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind is Kind.EOF else f"{tok.kind.value} '{tok.text}'"
        exp = expected if isinstance(expected, str) else " or ".join(sorted(expected))
        fail(ParseError, tok.pos, "syntax", f"expected {exp}, found {found}", self.file)

    def expect(self, kind: Kind, text: str | None = None, what: str | None = None) -> Token:
        t = self.peek()
        if not t.is_(kind, text):
            self.error(what or (f"'{text}'" if text else kind.value))
        return self.next()

    def at_open(self, kind: Kind, text: str | None = None) -> bool:
        return self.peek().is_(Kind.LPAREN) and self.peek(1).is_(kind, text)

    def name(self, what: str = "name", declare: bool = False) -> str:
        t = self.expect(Kind.NAME, what=what)
        if declare and t.text in RESERVED:
            self.error(f"{what} (reserved word '{t.text}' cannot be declared)", t)
        return t.text

    def term(self) -> Term:
        t = self.peek()
        if t.kind not in (Kind.NAME, Kind.VARIABLE):
            self.error("term")
        self.next()
        return Term(t.text, t.pos)

    def close(self) -> None:
        self.expect(Kind.RPAREN, what="')'")

    # files

    def parse(self, kind: str):
        self.expect(Kind.LPAREN)
        self.expect(Kind.NAME, "define")
        self.expect(Kind.LPAREN)
        head = self.expect(Kind.NAME, what=f"'{kind}'")
        if head.text != kind:
            self.error(f"'{kind}'", head)
        pos = head.pos
        name = self.name(f"{kind} name")
        self.close()
        node = {"problem": self.problem_body, "domain": self.domain_body,
                "action-type-library": self.library_body}[kind](name, pos)
        self.close()
        self.expect(Kind.EOF, what="end of input")
        return node

    def requirements(self) -> Requirements:
        pos = self.peek().pos
        keys = []
        while self.peek().is_(Kind.KEYWORD):
            keys.append(self.next().text)
        if not keys:
            self.error("requirement key")
        self.close()
        return Requirements(tuple(keys), pos)

    def typed_list(self, item_kind: Kind, non_empty: bool = False) -> tuple[TypedItem, ...]:
        items: list[TypedItem] = []
        pending: list[Term] = []
        while True:
            t = self.peek()
            if t.is_(item_kind):
                if item_kind is Kind.NAME and t.text in RESERVED:
                    self.error("declared name (reserved words are not allowed)")
                pending.append(Term(self.next().text, t.pos))
            elif t.is_(Kind.DASH):
                if not pending:
                    self.error(item_kind.value)
                self.next()
                ty = self.type_expr()
                items.extend(TypedItem(p, ty) for p in pending)
                pending = []
            else:
                break
        items.extend(TypedItem(p, None) for p in pending)
        if non_empty and not items:
            self.error(item_kind.value)
        return tuple(items)

    def type_expr(self) -> TypeExpr:
        t = self.peek()
        if t.is_(Kind.LPAREN):
            self.next()
            self.expect(Kind.NAME, "either")
            names = []
            while self.peek().is_(Kind.NAME):
                names.append(self.next().text)
            if not names:
                self.error("primitive type")
            self.close()
            return TypeExpr(tuple(names), True, t.pos)
        return TypeExpr((self.name("type"),), False, t.pos)

    # problems

    def problem_body(self, name: str, pos: Pos) -> Problem:
        f = dict(domain=None, requirements=[], objects=[], agents=[], groups=[], init=None,
                 facts_init=None, goals=[])
        while self.peek().is_(Kind.LPAREN):
            self.next()
            kw = self.expect(Kind.KEYWORD, what="problem item keyword")
            k = kw.text
            if k == ":domain":
                if f["domain"] is not None:
                    self.error("a single :domain reference", kw)
                f["domain"] = self.name("domain name")
                self.close()
            elif k == ":requirements":
                f["requirements"].append(self.requirements())
            elif k == ":objects":
                f["objects"].append(self.typed_list(Kind.NAME))
                self.close()
            elif k == ":agents":
                f["agents"].append(self.typed_list(Kind.NAME, non_empty=True))
                self.close()
            elif k == ":agent-groups":
                f["groups"].append(self.group_decls())
            elif k == ":init":
                if f["init"] is not None:
                    fail(ParseError, kw.pos, "duplicate-init",
                         "duplicate :init declaration (exactly one is allowed)", self.file)
                f["init"] = self.init(kw.pos)
            elif k == ":facts-init":
                if f["facts_init"] is not None:
                    fail(ParseError, kw.pos, "duplicate-facts-init",
                         "at most one :facts-init declaration is allowed", self.file)
                preds = []
                while self.peek().is_(Kind.LPAREN):
                    preds.append(self.predicate(ground=True))
                f["facts_init"] = tuple(preds)
                self.close()
            elif k == ":goal":
                f["goals"].append(self.formula())
                self.close()
            else:
                self.error({":domain", ":requirements", ":objects", ":agents", ":agent-groups",
                            ":init", ":facts-init", ":goal"}, kw)
        if f["domain"] is None:
            self.error("(:domain name)")
        return Problem(
            name, f["domain"], tuple(f["requirements"]), tuple(f["objects"]), tuple(f["agents"]),
            tuple(f["groups"]), f["init"], f["facts_init"], tuple(f["goals"]), pos, self.file,
        )

    def group_decls(self) -> tuple[GroupDecl, ...]:
        out = []
        while self.peek().is_(Kind.LPAREN):
            p = self.next().pos
            gname = self.name("agent group name", declare=True)
            ty = None
            if self.peek().is_(Kind.DASH):
                self.next()
                ty = self.type_expr()
            members = self.list_of(self.term_tuple)
            self.close()
            out.append(GroupDecl(gname, ty, members, p))
        self.close()
        return tuple(out)

    def init(self, pos: Pos):
        if self.peek().is_(Kind.KEYWORD, ":worlds"):
            return self.explicit_init(pos)
        formulas = self.list_of(self.formula)
        self.close()
        for f in list_items(formulas):
            check_finitary_shape(f, self.file)
        return FinitaryInit(formulas, pos)

    def explicit_init(self, pos: Pos) -> ExplicitInit:
        self.expect(Kind.KEYWORD, ":worlds")
        self.expect(Kind.LPAREN)
        worlds = []
        while self.peek().is_(Kind.NAME):
            t = self.next()
            if t.text in RESERVED:
                self.error("world name", t)
            worlds.append(Term(t.text, t.pos))
        if not worlds:
            self.error("world name")
        self.close()
        self.expect(Kind.KEYWORD, ":relations")
        relations = self.relations()
        self.expect(Kind.KEYWORD, ":labels")
        self.expect(Kind.LPAREN)
        labels = []
        while self.peek().is_(Kind.NAME):
            w = self.term()
            labels.append((w, self.list_of(lambda: self.predicate(ground=True))))
        self.close()
        designated = self.designated()
        self.close()
        return ExplicitInit(tuple(worlds), tuple(relations), tuple(labels), designated, pos)

    def relations(self) -> tuple:
        self.expect(Kind.LPAREN)
        out = []
        while self.peek().kind in (Kind.NAME, Kind.VARIABLE):
            owner = self.term()
            out.append((owner, self.list_of(lambda: self.term_tuple(size=2))))
        self.close()
        return tuple(out)

    def designated(self) -> tuple[Term, ...]:
        self.expect(Kind.KEYWORD, ":designated")
        self.expect(Kind.LPAREN)
        out = []
        while self.peek().kind in (Kind.NAME, Kind.VARIABLE):
            out.append(self.term())
        if not out:
            self.error("designated name")
        self.close()
        return tuple(out)

    # lists

    def list_of(self, item: Callable[[], object]) -> ListExpr:
        t = self.peek()
        if self.at_open(Kind.KEYWORD, ":and"):
            self.next()
            self.next()
            parts = [self.list_of(item)]
            while not self.peek().is_(Kind.RPAREN):
                parts.append(self.list_of(item))
            self.close()
            return LAnd(tuple(parts), t.pos)
        if self.at_open(Kind.KEYWORD, ":forall"):
            self.next()
            self.next()
            params = self.formal_params()
            body = self.list_of(item)
            self.close()
            return LForall(params, body, t.pos)
        return LItem(item(), t.pos)

    def term_tuple(self, size: int | None = None) -> TermTuple:
        p = self.expect(Kind.LPAREN).pos
        terms = []
        while self.peek().kind in (Kind.NAME, Kind.VARIABLE):
            terms.append(self.term())
        if not terms or (size is not None and len(terms) != size):
            self.error(f"{size} terms" if size else "non-empty term list")
        self.close()
        return TermTuple(tuple(terms), p)

    def formal_params(self) -> FormalParams:
        p = self.expect(Kind.LPAREN).pos
        items = self.typed_list(Kind.VARIABLE)
        cond = None
        if self.peek().is_(Kind.PIPE):
            self.next()
            cond = self.formula()
        self.close()
        return FormalParams(items, cond, p)

    # formulas

    def predicate(self, ground: bool = False) -> FPred:
        p = self.expect(Kind.LPAREN).pos
        pname = self.name("predicate name")
        args = []
        while self.peek().kind in (Kind.NAME, Kind.VARIABLE):
            t = self.peek()
            if ground and t.kind is Kind.VARIABLE:
                self.error("name (variables are not allowed here)")
            args.append(self.term())
        self.close()
        return FPred(pname, tuple(args), p)

    def formula(self) -> Formula:
        start = self.expect(Kind.LPAREN, what="'(' starting a formula")
        pos = start.pos
        t = self.peek()
        if t.is_(Kind.EQ):
            self.next()
            a, b = self.term(), self.term()
            self.close()
            return FEq(t.text, a, b, pos)
        if t.is_(Kind.BRACKET, "[") or t.is_(Kind.BRACKET, "<"):
            return self.modal(pos)
        if not t.is_(Kind.NAME):
            self.error("formula")
        word = t.text
        if word in ("true", "false"):
            self.next()
            self.close()
            return FTrue(pos) if word == "true" else FFalse(pos)
        if word == "not":
            self.next()
            arg = self.formula()
            self.close()
            return FNot(arg, pos)
        if word in ("and", "or"):
            self.next()
            args = [self.formula()]
            while self.peek().is_(Kind.LPAREN):
                args.append(self.formula())
            self.close()
            return (FAnd if word == "and" else FOr)(tuple(args), pos)
        if word == "imply":
            self.next()
            a = self.formula()
            b = self.formula()
            self.close()
            return FImply(a, b, pos)
        if word in ("forall", "exists"):
            self.next()
            params = self.formal_params()
            body = self.formula()
            self.close()
            return FQuant(word, params, body, pos)
        self.i -= 1
        return self.predicate()

    def modal(self, pos: Pos) -> FModal:
        open_ = self.next()
        closing = "]" if open_.text == "[" else ">"
        mname = None
        if self.peek().is_(Kind.MODALITY_NAME):
            mname = self.next().text
        if self.peek().is_(Kind.LPAREN):
            index = self.list_of(self.term_tuple)
        else:
            index = self.term()
        self.expect(Kind.BRACKET, closing, what=f"'{closing}'")
        body = self.formula()
        self.close()
        return FModal(open_.text, mname, index, body, pos)

    # domains

    def domain_body(self, name: str, pos: Pos) -> Domain:
        f = dict(libraries=[], requirements=[], types=[], predicates=[], constants=[], events=[], actions=[])
        while self.peek().is_(Kind.LPAREN):
            self.next()
            kw = self.expect(Kind.KEYWORD, what="domain item keyword")
            k = kw.text
            if k == ":action-type-libraries":
                libs = []
                while self.peek().is_(Kind.NAME):
                    libs.append(self.next().text)
                if not libs:
                    self.error("library name")
                f["libraries"].append(tuple(libs))
                self.close()
            elif k == ":requirements":
                f["requirements"].append(self.requirements())
            elif k == ":types":
                f["types"].append(self.typed_list(Kind.NAME))
                self.close()
            elif k == ":predicates":
                f["predicates"].append(self.predicate_decls())
            elif k == ":constants":
                f["constants"].append(self.typed_list(Kind.NAME))
                self.close()
            elif k == ":event":
                f["events"].append(self.event_decl(kw.pos))
            elif k == ":action":
                f["actions"].append(self.action_decl(kw.pos))
            else:
                self.error({":action-type-libraries", ":requirements", ":types", ":predicates",
                            ":constants", ":event", ":action"}, kw)
        return Domain(name, *(tuple(f[k]) for k in
                              ("libraries", "requirements", "types", "predicates", "constants", "events", "actions")),
                      pos, self.file)

    def predicate_decls(self) -> tuple[PredicateDecl, ...]:
        out = []
        while self.peek().is_(Kind.LPAREN):
            p = self.next().pos
            fact = False
            if self.peek().is_(Kind.KEYWORD, ":fact"):
                self.next()
                fact = True
            pname = self.name("predicate name", declare=True)
            params = self.typed_list(Kind.VARIABLE)
            self.close()
            out.append(PredicateDecl(pname, params, fact, p))
        if not out:
            self.error("predicate declaration")
        self.close()
        return tuple(out)

    def event_decl(self, pos: Pos) -> EventDecl:
        ename = self.name("event name", declare=True)
        params = pre = effects = None
        empty = False
        seen = set()
        while self.peek().is_(Kind.KEYWORD):
            kw = self.next()
            if kw.text in seen:
                self.error(f"a single {kw.text} entry", kw)
            seen.add(kw.text)
            if kw.text == ":parameters":
                self.expect(Kind.LPAREN)
                params = self.typed_list(Kind.VARIABLE)
                self.close()
            elif kw.text == ":precondition":
                pre = self.formula()
            elif kw.text == ":effects":
                if self.peek().is_(Kind.LPAREN) and self.peek(1).is_(Kind.RPAREN):
                    self.next()
                    self.next()
                    empty = True
                else:
                    effects = self.list_of(self.cond_effect)
            else:
                self.error({":parameters", ":precondition", ":effects"}, kw)
        self.close()
        return EventDecl(ename, params, pre, effects, empty, pos)

    def cond_effect(self):
        p = self.peek().pos
        if self.at_open(Kind.NAME, "not"):
            self.next()
            self.next()
            pred = self.predicate()
            self.close()
            return Literal(pred, False, p)
        if self.at_open(Kind.NAME, "when") or self.at_open(Kind.NAME, "iff"):
            self.next()
            kind = self.next().text
            cond = self.formula()
            lits = self.list_of(self.literal)
            self.close()
            return CondEffect(kind, cond, lits, p)
        return Literal(self.predicate(), True, p)

    def literal(self) -> Literal:
        p = self.peek().pos
        if self.at_open(Kind.NAME, "not"):
            self.next()
            self.next()
            pred = self.predicate()
            self.close()
            return Literal(pred, False, p)
        return Literal(self.predicate(), True, p)

    def action_decl(self, pos: Pos) -> ActionDecl:
        aname = self.name("action name", declare=True)
        params = FormalParams((), None, pos)
        type_name = None
        events: tuple = ()
        obs = None
        seen = set()
        while self.peek().is_(Kind.KEYWORD):
            kw = self.next()
            if kw.text in seen:
                self.error(f"a single {kw.text} entry", kw)
            seen.add(kw.text)
            if kw.text == ":parameters":
                params = self.formal_params()
            elif kw.text == ":action-type":
                self.expect(Kind.LPAREN)
                type_name = self.expect(Kind.NAME, what="action type name").text
                evs = []
                while self.peek().is_(Kind.LPAREN):
                    ep = self.next().pos
                    en = self.name("event name")
                    args = []
                    while self.peek().kind in (Kind.NAME, Kind.VARIABLE):
                        args.append(self.term())
                    self.close()
                    evs.append(ActionEvent(en, tuple(args), ep))
                if not evs:
                    self.error("(event-name terms...)")
                self.close()
                events = tuple(evs)
            elif kw.text == ":observability-conditions":
                obs = self.list_of(self.obs_cond)
            else:
                self.error({":parameters", ":action-type", ":observability-conditions"}, kw)
        if type_name is None:
            self.error(":action-type")
        self.close()
        return ActionDecl(aname, params, type_name, events, obs, pos)

    def obs_cond(self):
        p = self.expect(Kind.LPAREN).pos
        if self.peek().is_(Kind.NAME, "default"):
            self.next()
            t = self.name("observability type")
            self.close()
            return ObsDefault(t, p)
        agent = self.term()
        if self.peek().is_(Kind.NAME, "if"):
            node = self.ite(agent, p)
        elif self.at_open(Kind.NAME, "if"):
            self.next()
            node = self.ite(agent, p)
            self.close()
        else:
            node = ObsStatic(agent, self.name("observability type"), p)
        self.close()
        return node

    def ite(self, agent: Term, pos: Pos) -> ObsIte:
        self.expect(Kind.NAME, "if")
        branches = [(self.formula(), self.name("observability type"))]
        while self.peek().is_(Kind.NAME, "else-if"):
            self.next()
            branches.append((self.formula(), self.name("observability type")))
        else_type = None
        if self.peek().is_(Kind.NAME, "else"):
            self.next()
            else_type = self.name("observability type")
        return ObsIte(agent, tuple(branches), else_type, pos)

    # libraries

    def library_body(self, name: str, pos: Pos) -> Library:
        reqs, types = [], []
        while self.peek().is_(Kind.LPAREN):
            self.next()
            kw = self.expect(Kind.KEYWORD, what="library item keyword")
            if kw.text == ":requirements":
                reqs.append(self.requirements())
            elif kw.text == ":action-type":
                types.append(self.action_type_body(kw.pos))
            else:
                self.error({":requirements", ":action-type"}, kw)
        return Library(name, tuple(reqs), tuple(types), pos, self.file)

    def action_type_body(self, pos: Pos) -> ActionTypeDecl:
        tname = self.expect(Kind.NAME, what="action type name")
        if tname.text in RESERVED and tname.text != "basic":
            self.error("action type name", tname)
        self.expect(Kind.KEYWORD, ":events")
        self.expect(Kind.LPAREN)
        events = []
        while self.peek().is_(Kind.VARIABLE):
            events.append(self.term())
        if not events:
            self.error("event variable")
        self.close()
        self.expect(Kind.KEYWORD, ":observability-types")
        obs_types = []
        paren = self.peek().is_(Kind.LPAREN)
        if paren:
            self.next()
        while self.peek().is_(Kind.NAME):
            obs_types.append(self.name("observability type", declare=True))
        if not obs_types:
            self.error("observability type name")
        if paren:
            self.close()
        self.expect(Kind.KEYWORD, ":relations")
        relations = self.relations()
        designated = self.designated()
        conditions = None
        if self.peek().is_(Kind.KEYWORD, ":conditions"):
            self.next()
            self.expect(Kind.LPAREN)
            conds = []
            while self.peek().is_(Kind.VARIABLE):
                v = self.term()
                keys = []
                while self.peek().is_(Kind.KEYWORD):
                    k = self.next()
                    if k.text not in EVENT_CONDITIONS:
                        self.error(set(EVENT_CONDITIONS), k)
                    keys.append(k.text)
                if not keys:
                    self.error("event condition")
                conds.append((v, tuple(keys)))
            self.close()
            conditions = tuple(conds)
        self.close()
        return ActionTypeDecl(tname.text, tuple(events), tuple(obs_types), relations, designated, conditions, pos)


def _is_predicate_formula(f: Formula) -> bool:
    if isinstance(f, FPred):
        return True
    if isinstance(f, FNot):
        return _is_predicate_formula(f.arg)
    if isinstance(f, (FAnd, FOr)):
        return all(_is_predicate_formula(a) for a in f.args)
    if isinstance(f, FImply):
        return _is_predicate_formula(f.left) and _is_predicate_formula(f.right)
    if isinstance(f, FQuant):
        return _is_predicate_formula(f.body)
    return False


def finitary_shape(f: Formula) -> int | None:
    """Which of the finitary S5-theory shapes ``f`` has, or None.

    1: propositional, 2: C(B_i phi) or C phi, 3: C(Kw_i phi), 4: C(<Kw_i> phi).
    """
    if _is_predicate_formula(f):
        return 1
    if not (isinstance(f, FModal) and f.bracket == "[" and f.name == "C."
            and isinstance(f.index, Term) and f.index.text == "All"):
        return None
    g = f.body
    if _is_predicate_formula(g):
        return 2
    if isinstance(g, FModal) and isinstance(g.index, Term) and g.index.text != "All" \
            and _is_predicate_formula(g.body):
        if g.bracket == "[" and g.name is None:
            return 2
        if g.bracket == "[" and g.name == "Kw.":
            return 3
        if g.bracket == "<" and g.name == "Kw.":
            return 4
    return None


def check_finitary_shape(f: Formula, file: str = "<input>") -> int:
    shape = finitary_shape(f)
    if shape is None:
        fail(
            ParseError, f.pos, "finitary-shape",
            "formula is not one of the finitary S5-theory shapes: phi, ([C. All] phi), "
            "([C. All] ([i] phi)), ([C. All] ([Kw. i] phi)), ([C. All] (<Kw. i> phi))", file,
        )
    return shape


def parse(text: str, kind: str, file: str = "<input>"):
    """Parse a whole ``problem``, ``domain`` or ``action-type-library`` source."""
    return Parser(lex(text, file), file).parse(kind)


def detect_kind(text: str, file: str = "<input>") -> str:
    toks = lex(text, file)
    if len(toks) > 3 and toks[3].kind is Kind.NAME:
        return toks[3].text
    fail(ParseError, toks[0].pos, "syntax", "expected (define (problem|domain|action-type-library ...", file)


def parse_any(text: str, file: str = "<input>"):
    return parse(text, detect_kind(text, file), file)


def parse_formula(text: str) -> Formula:
    p = Parser(lex(text))
    f = p.formula()
    p.expect(Kind.EOF, what="end of input")
    return f


def parse_action_type(text: str) -> ActionTypeDecl:
    p = Parser(lex(text))
    p.expect(Kind.LPAREN)
    kw = p.expect(Kind.KEYWORD, ":action-type")
    node = p.action_type_body(kw.pos)
    p.expect(Kind.EOF, what="end of input")
    return node
