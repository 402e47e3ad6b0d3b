"""Structural parser for Java compilation units.

Built for the change distiller: it recovers the declaration structure
(types, fields, methods, modifiers, javadoc, comments) and statement
trees of method bodies, with statement text normalized to single-space
token joins so formatting never shows up as a change.  It is not a full
Java grammar; anonymous class bodies and lambdas are folded into the
text of their enclosing statement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple


class JavaParseError(Exception):
    """The source could not be parsed into a compilation unit."""


@dataclass(frozen=True)
class Token:
    kind: str  # ident | num | str | char | punct
    text: str
    line: int


@dataclass(frozen=True)
class Comment:
    kind: str  # line | block | doc
    text: str
    line: int
    next_idx: int  # index of the token that follows this comment

    def normalized(self) -> str:
        body = self.text
        if body.startswith("/**"):
            body = body[3:]
        elif body.startswith("/*"):
            body = body[2:]
        elif body.startswith("//"):
            body = body[2:]
        if body.endswith("*/"):
            body = body[:-2]
        lines = [re.sub(r"^\s*\*", "", ln) for ln in body.splitlines()]
        return " ".join(" ".join(lines).split())


_PUNCT_CHARS = set("{}()[];,.<>=+-*/%!&|^~?:@")

MODIFIER_WORDS = {
    "public", "protected", "private", "static", "final", "abstract",
    "synchronized", "native", "strictfp", "transient", "volatile", "default",
}

_TYPE_KEYWORDS = {"class", "interface", "enum", "record"}


def tokenize(source: str) -> Tuple[List[Token], List[Comment]]:
    tokens: List[Token] = []
    comments: List[Comment] = []
    i, n, line = 0, len(source), 1
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            i += 1
        elif c in " \t\r\f":
            i += 1
        elif source.startswith("//", i):
            j = source.find("\n", i)
            j = n if j < 0 else j
            comments.append(Comment("line", source[i:j], line, len(tokens)))
            i = j
        elif source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise JavaParseError(f"unterminated block comment at line {line}")
            text = source[i : j + 2]
            kind = "doc" if text.startswith("/**") and text != "/**/" else "block"
            comments.append(Comment(kind, text, line, len(tokens)))
            line += text.count("\n")
            i = j + 2
        elif source.startswith('"""', i):
            j = source.find('"""', i + 3)
            if j < 0:
                raise JavaParseError(f"unterminated text block at line {line}")
            text = source[i : j + 3]
            tokens.append(Token("str", text, line))
            line += text.count("\n")
            i = j + 3
        elif c == '"' or c == "'":
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == c:
                    break
                if source[j] == "\n":
                    raise JavaParseError(f"unterminated literal at line {line}")
                j += 1
            if j >= n:
                raise JavaParseError(f"unterminated literal at line {line}")
            tokens.append(Token("str" if c == '"' else "char", source[i : j + 1], line))
            i = j + 1
        elif c.isalpha() or c == "_" or c == "$":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            tokens.append(Token("ident", source[i:j], line))
            i = j
        elif c.isdigit():
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._xXbBlLfFdDeE+-"):
                # numeric literals may embed signs only right after an exponent
                if source[j] in "+-" and source[j - 1] not in "eE":
                    break
                j += 1
            tokens.append(Token("num", source[i:j], line))
            i = j
        elif c in _PUNCT_CHARS:
            tokens.append(Token("punct", c, line))
            i += 1
        else:
            raise JavaParseError(f"unexpected character {c!r} at line {line}")
    return tokens, comments


@dataclass
class Stmt:
    """One statement node; composites carry children."""

    kind: str  # expr | return | throw | break | continue | assert | vardecl |
    #            if | else | while | do | for | switch | try | catch |
    #            finally | block | sync | case | labeled
    text: str  # normalized source text (leaf) or header (composite)
    condition: Optional[str] = None
    children: List["Stmt"] = field(default_factory=list)
    line: int = 0

    @property
    def is_composite(self) -> bool:
        return self.kind in {
            "if", "else", "while", "do", "for", "switch", "try", "catch",
            "finally", "block", "sync",
        }


@dataclass
class MethodDecl:
    name: str
    params: List[Tuple[str, str]]  # (type, name)
    return_type: Optional[str]  # None for constructors/initializers
    modifiers: frozenset
    javadoc: Optional[str]
    body: Optional[List[Stmt]]
    comments: List[str] = field(default_factory=list)
    annotations: List[str] = field(default_factory=list)

    @property
    def signature(self) -> Tuple[str, Tuple[str, ...]]:
        return (self.name, tuple(t for t, _ in self.params))


@dataclass
class FieldDecl:
    name: str
    type: str
    modifiers: frozenset
    javadoc: Optional[str]
    initializer: Optional[str]
    annotations: List[str] = field(default_factory=list)


@dataclass
class TypeDecl:
    kind: str  # class | interface | enum | record
    name: str
    modifiers: frozenset
    javadoc: Optional[str]
    extends: List[str]
    implements: List[str]
    fields: List[FieldDecl] = field(default_factory=list)
    methods: List[MethodDecl] = field(default_factory=list)
    inner_types: List["TypeDecl"] = field(default_factory=list)

    @property
    def superclass(self) -> Optional[str]:
        if self.kind == "class" and self.extends:
            return self.extends[0]
        return None

    @property
    def parent_interfaces(self) -> Tuple[str, ...]:
        if self.kind == "interface":
            return tuple(self.extends)
        return tuple(self.implements)


@dataclass
class CompilationUnit:
    package: Optional[str]
    types: List[TypeDecl]

    def type_map(self, prefix: str = "") -> dict:
        """Mapping of dotted nesting path -> TypeDecl."""
        out = {}

        def walk(t: TypeDecl, path: str):
            out[path] = t
            for inner in t.inner_types:
                walk(inner, f"{path}.{inner.name}")

        for t in self.types:
            walk(t, t.name)
        return out


EMPTY_UNIT = CompilationUnit(package=None, types=[])


def _join(tokens: List[Token]) -> str:
    return " ".join(t.text for t in tokens)


class _Parser:
    def __init__(self, tokens: List[Token], comments: List[Comment]):
        self.toks = tokens
        self.comments = comments
        self.pos = 0
        self._doc_by_next = {}
        for c in comments:
            if c.kind == "doc":
                self._doc_by_next[c.next_idx] = c

    # -- token helpers -------------------------------------------------
    def peek(self, offset: int = 0) -> Optional[Token]:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def next(self) -> Token:
        if self.pos >= len(self.toks):
            raise JavaParseError("unexpected end of input")
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise JavaParseError(f"expected {text!r} but found {t.text!r} at line {t.line}")
        return t

    def skip_balanced(self, open_ch: str, close_ch: str) -> List[Token]:
        """Consume from the opening delimiter through its match, inclusive."""
        start = self.pos
        self.expect(open_ch)
        depth = 1
        while depth:
            t = self.next()
            if t.text == open_ch:
                depth += 1
            elif t.text == close_ch:
                depth -= 1
        return self.toks[start : self.pos]

    def try_generic_end(self, i: int) -> Optional[int]:
        """If tokens[i] == '<' opens a type-argument list, index past '>'."""
        depth = 0
        j = i
        allowed = {",", ".", "?", "[", "]", "extends", "super", "&"}
        while j < len(self.toks):
            t = self.toks[j]
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
                if depth == 0:
                    return j + 1
            elif t.kind == "ident" or t.text in allowed:
                pass
            else:
                return None
            j += 1
        return None

    # -- declarations --------------------------------------------------
    def parse_unit(self) -> CompilationUnit:
        package = None
        types: List[TypeDecl] = []
        while self.peek() is not None:
            t = self.peek()
            if t.text == "package":
                self.next()
                parts = []
                while not self.at(";"):
                    parts.append(self.next().text)
                self.expect(";")
                package = "".join(parts)
            elif t.text == "import":
                while not self.at(";"):
                    self.next()
                self.expect(";")
            elif t.text == ";":
                self.next()
            else:
                types.append(self.parse_type_decl())
        return CompilationUnit(package=package, types=types)

    def _collect_prelude(self) -> Tuple[frozenset, List[str], Optional[str]]:
        """Modifiers, annotations, and javadoc preceding a declaration."""
        start = self.pos
        modifiers = set()
        annotations = []
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text == "@":
                line_tokens = [self.next()]  # '@'
                line_tokens.append(self.next())  # name
                if self.at("("):
                    line_tokens.extend(self.skip_balanced("(", ")"))
                annotations.append(_join(line_tokens))
            elif t.text in MODIFIER_WORDS and not (
                t.text == "default" and self._looks_like_switch_default()
            ):
                modifiers.add(self.next().text)
            else:
                break
        doc = None
        for idx in range(start, self.pos + 1):
            if idx in self._doc_by_next:
                doc = self._doc_by_next[idx].normalized()
        return frozenset(modifiers), annotations, doc

    def _looks_like_switch_default(self) -> bool:
        nxt = self.peek(1)
        return nxt is not None and nxt.text == ":"

    def parse_type_decl(self) -> TypeDecl:
        modifiers, annotations, doc = self._collect_prelude()
        kw = self.next()
        if kw.text not in _TYPE_KEYWORDS:
            raise JavaParseError(f"expected a type declaration at line {kw.line}, found {kw.text!r}")
        name = self.next().text
        if self.at("<"):
            end = self.try_generic_end(self.pos)
            if end is None:
                raise JavaParseError(f"bad type parameters at line {kw.line}")
            self.pos = end
        if kw.text == "record" and self.at("("):
            self.skip_balanced("(", ")")
        extends: List[str] = []
        implements: List[str] = []
        while not self.at("{"):
            t = self.next()
            if t.text == "extends":
                extends = self._parse_type_list(stop={"implements", "{", "permits"})
            elif t.text == "implements":
                implements = self._parse_type_list(stop={"extends", "{", "permits"})
            elif t.text == "permits":
                self._parse_type_list(stop={"{"})
            else:
                raise JavaParseError(f"unexpected {t.text!r} in type header at line {t.line}")
        decl = TypeDecl(
            kind=kw.text, name=name, modifiers=modifiers, javadoc=doc,
            extends=extends, implements=implements,
        )
        self._parse_type_body(decl)
        return decl

    def _parse_type_list(self, stop: set) -> List[str]:
        names: List[str] = []
        current: List[str] = []
        while True:
            t = self.peek()
            if t is None or (t.text in stop and not current) or (t.text in stop):
                break
            t = self.next()
            if t.text == ",":
                names.append("".join(current))
                current = []
            elif t.text == "<":
                depth = 1
                current.append("<")
                while depth:
                    u = self.next()
                    current.append(u.text)
                    if u.text == "<":
                        depth += 1
                    elif u.text == ">":
                        depth -= 1
            else:
                current.append(t.text)
        if current:
            names.append("".join(current))
        return names

    def _parse_type_body(self, decl: TypeDecl) -> None:
        self.expect("{")
        if decl.kind == "enum":
            self._skip_enum_constants()
        while not self.at("}"):
            if self.peek() is None:
                raise JavaParseError("unterminated type body")
            if self.at(";"):
                self.next()
                continue
            self._parse_member(decl)
        self.expect("}")

    def _skip_enum_constants(self) -> None:
        # constants run to the first ';' at depth 0 (or the closing brace)
        depth = 0
        while True:
            t = self.peek()
            if t is None:
                return
            if depth == 0 and t.text in {";", "}"}:
                if t.text == ";":
                    self.next()
                return
            t = self.next()
            if t.text in "({[":
                depth += 1
            elif t.text in ")}]":
                depth -= 1

    def _parse_member(self, decl: TypeDecl) -> None:
        member_start = self.pos
        modifiers, annotations, doc = self._collect_prelude()
        t = self.peek()
        if t is None:
            raise JavaParseError("unexpected end of member list")
        if t.text in _TYPE_KEYWORDS:
            self.pos = member_start
            decl.inner_types.append(self.parse_type_decl())
            return
        if t.text == "{":  # instance/static initializer block
            body_tokens_start = self.pos
            body = self._parse_block()
            decl.methods.append(
                MethodDecl(
                    name="<initializer>", params=[], return_type=None,
                    modifiers=modifiers, javadoc=doc, body=body,
                    comments=self._comments_in(body_tokens_start, self.pos),
                    annotations=annotations,
                )
            )
            return

        # collect header tokens until '(' (method) or '=' / ';' / ',' (field)
        header: List[Token] = []
        while True:
            t = self.peek()
            if t is None:
                raise JavaParseError("unterminated member declaration")
            if t.text == "(":
                self._finish_method(decl, header, modifiers, doc, annotations)
                return
            if t.text in {"=", ";", ","}:
                self._finish_fields(decl, header, modifiers, doc, annotations)
                return
            if t.text == "<":
                end = self.try_generic_end(self.pos)
                if end is not None:
                    header.extend(self.toks[self.pos : end])
                    self.pos = end
                    continue
            header.append(self.next())

    def _finish_method(self, decl, header, modifiers, doc, annotations) -> None:
        if not header:
            raise JavaParseError("method declaration without a name")
        name = header[-1].text
        ret_tokens = header[:-1]
        return_type = _join(ret_tokens) if ret_tokens else None
        params = self._parse_params()
        while not (self.at("{") or self.at(";")):
            self.next()  # throws clause / default value of annotation members
        if self.at(";"):
            self.next()
            body = None
            comments: List[str] = []
        else:
            body_start = self.pos
            body = self._parse_block()
            comments = self._comments_in(body_start, self.pos)
        decl.methods.append(
            MethodDecl(
                name=name, params=params, return_type=return_type,
                modifiers=modifiers, javadoc=doc, body=body,
                comments=comments, annotations=annotations,
            )
        )

    def _parse_params(self) -> List[Tuple[str, str]]:
        tokens = self.skip_balanced("(", ")")[1:-1]
        if not tokens:
            return []
        groups: List[List[Token]] = [[]]
        depth = 0
        i = 0
        while i < len(tokens):
            t = tokens[i]
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                depth -= 1
            elif t.text == "<" and depth == 0:
                # type arguments: consume through the matching '>'
                d = 0
                j = i
                while j < len(tokens):
                    if tokens[j].text == "<":
                        d += 1
                    elif tokens[j].text == ">":
                        d -= 1
                        if d == 0:
                            break
                    j += 1
                groups[-1].extend(tokens[i : j + 1])
                i = j + 1
                continue
            if t.text == "," and depth == 0:
                groups.append([])
            else:
                groups[-1].append(t)
            i += 1
        params = []
        for g in groups:
            g = [t for t in g if t.text not in MODIFIER_WORDS and t.text != "@"]
            if not g:
                continue
            name = g[-1].text
            type_text = "".join(t.text for t in g[:-1])
            params.append((type_text, name))
        return params

    def _finish_fields(self, decl, header, modifiers, doc, annotations) -> None:
        if len(header) < 2:
            raise JavaParseError("field declaration without a type")
        first_name = header[-1].text
        type_text = "".join(t.text for t in header[:-1])
        names = [first_name]
        inits: List[Optional[str]] = []
        while True:
            t = self.next()
            if t.text == "=":
                init_tokens = self._consume_initializer()
                inits.append(_join(init_tokens))
                t = self.next()
            else:
                inits.append(None)
            if t.text == ";":
                break
            if t.text == ",":
                names.append(self.next().text)
            else:
                raise JavaParseError(f"unexpected {t.text!r} in field declaration at line {t.line}")
        for name, init in zip(names, inits):
            decl.fields.append(
                FieldDecl(
                    name=name, type=type_text, modifiers=modifiers,
                    javadoc=doc if name == names[0] else None,
                    initializer=init, annotations=annotations,
                )
            )

    def _consume_initializer(self) -> List[Token]:
        out: List[Token] = []
        depth = 0
        while True:
            t = self.peek()
            if t is None:
                raise JavaParseError("unterminated field initializer")
            if depth == 0 and t.text in {";", ","}:
                return out
            if depth == 0 and t.text == "<":
                end = self.try_generic_end(self.pos)
                if end is not None:
                    out.extend(self.toks[self.pos : end])
                    self.pos = end
                    continue
            t = self.next()
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                depth -= 1
            out.append(t)

    def _comments_in(self, start_idx: int, end_idx: int) -> List[str]:
        return [
            c.normalized()
            for c in self.comments
            if c.kind != "doc" and start_idx < c.next_idx <= end_idx
        ]

    # -- statements ----------------------------------------------------
    def _parse_block(self) -> List[Stmt]:
        self.expect("{")
        stmts: List[Stmt] = []
        while not self.at("}"):
            if self.peek() is None:
                raise JavaParseError("unterminated block")
            stmts.append(self._parse_statement())
        self.expect("}")
        return stmts

    def _parse_statement(self) -> Stmt:
        t = self.peek()
        line = t.line
        if t.text == "{":
            return Stmt("block", "{", children=self._parse_block(), line=line)
        if t.text == "if":
            return self._parse_if()
        if t.text in {"while", "switch"}:
            kw = self.next().text
            cond = _join(self.skip_balanced("(", ")")[1:-1])
            body = self._parse_body_or_statement()
            return Stmt(kw, kw, condition=cond, children=body, line=line)
        if t.text == "for":
            self.next()
            cond = _join(self.skip_balanced("(", ")")[1:-1])
            body = self._parse_body_or_statement()
            return Stmt("for", "for", condition=cond, children=body, line=line)
        if t.text == "do":
            self.next()
            body = self._parse_body_or_statement()
            self.expect("while")
            cond = _join(self.skip_balanced("(", ")")[1:-1])
            self.expect(";")
            return Stmt("do", "do", condition=cond, children=body, line=line)
        if t.text == "try":
            return self._parse_try()
        if t.text == "synchronized":
            self.next()
            cond = _join(self.skip_balanced("(", ")")[1:-1])
            body = self._parse_body_or_statement()
            return Stmt("sync", "synchronized", condition=cond, children=body, line=line)
        if t.text in {"case", "default"} :
            tokens = [self.next()]
            while not self.at(":"):
                tokens.append(self.next())
            self.expect(":")
            return Stmt("case", _join(tokens), line=line)
        # labeled statement: IDENT ':' STATEMENT
        nxt = self.peek(1)
        if t.kind == "ident" and nxt is not None and nxt.text == ":" and t.text not in {"default", "case"}:
            label = self.next().text
            self.expect(":")
            inner = self._parse_statement()
            inner.text = f"{label} : {inner.text}"
            return inner
        # simple statement up to ';' at depth 0
        kind = "expr"
        if t.text in {"return", "throw", "break", "continue", "assert", "yield"}:
            kind = t.text
        tokens: List[Token] = []
        depth = 0
        while True:
            u = self.peek()
            if u is None:
                raise JavaParseError(f"unterminated statement at line {line}")
            if depth == 0 and u.text == ";":
                self.next()
                break
            u = self.next()
            if u.text in "([{":
                depth += 1
            elif u.text in ")]}":
                depth -= 1
            tokens.append(u)
        return Stmt(kind, _join(tokens), line=line)

    def _parse_body_or_statement(self) -> List[Stmt]:
        if self.at("{"):
            return self._parse_block()
        return [self._parse_statement()]

    def _parse_try(self) -> Stmt:
        line = self.peek().line
        self.expect("try")
        resources = None
        if self.at("("):
            resources = _join(self.skip_balanced("(", ")")[1:-1])
        node = Stmt("try", "try", condition=resources, children=self._parse_block(), line=line)
        while self.at("catch"):
            catch_line = self.peek().line
            self.next()
            decl = _join(self.skip_balanced("(", ")")[1:-1])
            node.children.append(
                Stmt("catch", "catch", condition=decl, children=self._parse_block(), line=catch_line)
            )
        if self.at("finally"):
            fin_line = self.peek().line
            self.next()
            node.children.append(Stmt("finally", "finally", children=self._parse_block(), line=fin_line))
        return node

    def _parse_if(self) -> Stmt:
        line = self.peek().line
        self.expect("if")
        cond = _join(self.skip_balanced("(", ")")[1:-1])
        then = self._parse_body_or_statement()
        node = Stmt("if", "if", condition=cond, children=then, line=line)
        if self.at("else"):
            self.next()
            else_line = self.peek().line
            if self.at("if"):
                alt = [self._parse_if()]
            else:
                alt = self._parse_body_or_statement()
            node.children.append(Stmt("else", "else", children=alt, line=else_line))
        return node


def parse_java(source: Optional[str]) -> CompilationUnit:
    """Parse Java source text; None or blank input is an empty unit."""
    if source is None or not source.strip():
        return EMPTY_UNIT
    try:
        tokens, comments = tokenize(source)
        return _Parser(tokens, comments).parse_unit()
    except JavaParseError:
        raise
    except (IndexError, RecursionError) as exc:  # defensive: malformed nesting
        raise JavaParseError(str(exc)) from exc
