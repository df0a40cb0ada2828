"""Bracketed constituency trees and definition word-pair extraction.

A definition like "a feeling of dreary or pessimistic sadness" arrives as a
Penn-Treebank-style bracketed parse.  This module reads such trees, finds
semantic heads by head-percolation rules, and extracts the two words that
characterize the definition: the super-type (head of the main constituent)
and the modifier specializing it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormatError

# Penn token escapes: leaf text only; labels keep the escaped form.
_TOKEN_ESCAPES = {
    "-LRB-": "(",
    "-RRB-": ")",
    "-LSB-": "[",
    "-RSB-": "]",
    "-LCB-": "{",
    "-RCB-": "}",
}
_TOKEN_UNESCAPES = {v: k for k, v in _TOKEN_ESCAPES.items()}

# Tags invisible to head search and constituent selection.
PUNCT_TAGS = {
    ".", ",", ":", ";", "``", "''", "'", "`", "-LRB-", "-RRB-",
    "-NONE-", "HYPH", "NFP", "SYM", "#",
}

# POS classes acceptable as the modifier word of a definition.
CONTENT_TAG_PREFIXES = ("NN", "VB", "JJ", "RB")
CONTENT_TAGS = {"CD", "FW"}

_WRAPPER_LABELS = {"ROOT", "TOP", ""}


def is_content_tag(tag: str) -> bool:
    return tag.startswith(CONTENT_TAG_PREFIXES) or tag in CONTENT_TAGS


@dataclass
class ParseTree:
    """Constituency tree node: a leaf carries a token, an inner node children."""

    label: str
    children: list["ParseTree"] = field(default_factory=list)
    token: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list["ParseTree"]:
        if self.is_leaf:
            return [self]
        out: list[ParseTree] = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def serialize(self) -> str:
        if self.is_leaf:
            return f"({self.label} {_TOKEN_UNESCAPES.get(self.token, self.token)})"
        inner = " ".join(c.serialize() for c in self.children)
        return f"({self.label} {inner})"

    def __str__(self) -> str:
        return self.serialize()


def _tokenize(text: str):
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            yield ch, i
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield text[i:j], i
            i = j


def parse_ptb(text: str) -> ParseTree:
    """Parse one bracketed tree; reports the position of any bracket fault.

    Leaf tokens are unescaped (-LRB- and friends become literal brackets);
    an empty label directly after '(' is kept as the empty string, so classic
    "( (S ...))" wrappers load unchanged.
    """
    tokens = list(_tokenize(text))
    if not tokens:
        raise FormatError("empty parse input")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, len(text))

    def parse_node() -> ParseTree:
        nonlocal pos
        tok, at = peek()
        if tok != "(":
            raise FormatError(f"expected '(' at position {at}")
        pos += 1
        tok, at = peek()
        if tok is None:
            raise FormatError(f"unbalanced brackets: unexpected end of input at position {at}")
        if tok == ")":
            raise FormatError(f"empty constituent at position {at}")
        if tok == "(":
            label = ""
        else:
            label = tok
            pos += 1
        children: list[ParseTree] = []
        leaf_token: str | None = None
        while True:
            tok, at = peek()
            if tok is None:
                raise FormatError(f"unbalanced brackets: unexpected end of input at position {at}")
            if tok == ")":
                pos += 1
                break
            if tok == "(":
                if leaf_token is not None:
                    raise FormatError(f"mixed token and subtree under {label!r} at position {at}")
                children.append(parse_node())
            else:
                if children:
                    raise FormatError(f"mixed token and subtree under {label!r} at position {at}")
                if leaf_token is not None:
                    raise FormatError(f"multiple tokens under {label!r} at position {at}")
                leaf_token = _TOKEN_ESCAPES.get(tok, tok)
                pos += 1
        if leaf_token is None and not children:
            raise FormatError(f"empty constituent {label!r} ending at position {at}")
        return ParseTree(label, children, leaf_token)

    root = parse_node()
    if pos != len(tokens):
        tok, at = tokens[pos]
        raise FormatError(f"stray input after root tree at position {at}: {tok!r}")
    return root


# ---------------------------------------------------------------------------
# Head rules
# ---------------------------------------------------------------------------

LEFT = "left-to-right"
RIGHT = "right-to-left"


@dataclass(frozen=True)
class HeadPass:
    """One scan over a node's children.

    by="label": try each label in priority order, scanning in `direction`.
    by="position": scan children in `direction`, first whose label is listed.
    An empty label tuple matches any child.
    """

    direction: str
    labels: tuple[str, ...]
    by: str = "label"

    def __post_init__(self):
        if self.direction not in (LEFT, RIGHT):
            raise ValueError(f"bad head-rule direction {self.direction!r}")
        if self.by not in ("label", "position"):
            raise ValueError(f"bad head-rule mode {self.by!r}")

    def find(self, children: list[ParseTree]) -> ParseTree | None:
        ordered = children if self.direction == LEFT else list(reversed(children))
        if not self.labels:
            return ordered[0] if ordered else None
        if self.by == "position":
            for c in ordered:
                if normalize_label(c.label) in self.labels:
                    return c
            return None
        for lab in self.labels:
            for c in ordered:
                if normalize_label(c.label) == lab:
                    return c
        return None


@dataclass
class HeadRuleTable:
    rules: dict[str, list[HeadPass]]
    default: HeadPass

    @classmethod
    def semantic(cls) -> "HeadRuleTable":
        """Head-percolation table tuned for definition analysis.

        Starts from the classic percolation priorities, with two deviations
        aimed at semantic rather than syntactic heads: a PP resolves through
        its nominal/clausal complement instead of the preposition, and an
        SBAR resolves through its clause (so a relative clause heads to its
        verb, not the WH word).
        """
        L, R = LEFT, RIGHT

        def lab(direction, *labels):
            return HeadPass(direction, tuple(labels), by="label")

        def pos(direction, *labels):
            return HeadPass(direction, tuple(labels), by="position")

        rules = {
            "ADJP": [lab(L, "NNS", "QP", "NN", "$", "ADVP", "JJ", "VBN", "VBG", "ADJP",
                         "JJR", "NP", "JJS", "DT", "FW", "RBR", "RBS", "SBAR", "RB")],
            "ADVP": [lab(R, "RB", "RBR", "RBS", "FW", "ADVP", "TO", "CD", "JJR", "JJ",
                         "IN", "NP", "JJS", "NN")],
            "CONJP": [lab(R, "CC", "RB", "IN")],
            "FRAG": [HeadPass(R, ())],
            "INTJ": [HeadPass(L, ())],
            "LST": [lab(R, "LS", ":")],
            "NAC": [lab(L, "NN", "NNS", "NNP", "NNPS", "NP", "NAC", "EX", "$", "CD",
                        "QP", "PRP", "VBG", "JJ", "JJS", "JJR", "ADJP", "FW")],
            "PP": [pos(R, "NP", "NX", "WHNP", "S", "SBAR", "VP", "ADJP", "ADVP"),
                   lab(R, "IN", "TO", "VBG", "VBN", "RP", "FW")],
            "PRN": [HeadPass(L, ())],
            "PRT": [lab(R, "RP")],
            "QP": [lab(L, "$", "IN", "NNS", "NN", "JJ", "RB", "DT", "CD", "NCD", "QP",
                       "JJR", "JJS")],
            "RRC": [lab(R, "VP", "NP", "ADVP", "ADJP", "PP")],
            "S": [lab(L, "TO", "IN", "VP", "S", "SBAR", "ADJP", "UCP", "NP")],
            "SBAR": [lab(L, "S", "SQ", "SINV", "SBARQ", "FRAG", "VP", "WHNP", "WHPP",
                         "WHADVP", "WHADJP", "IN", "DT")],
            "SBARQ": [lab(L, "SQ", "S", "SINV", "SBARQ", "FRAG")],
            "SINV": [lab(L, "VBZ", "VBD", "VBP", "VB", "MD", "VP", "S", "SINV",
                         "ADJP", "NP")],
            "SQ": [lab(L, "VBZ", "VBD", "VBP", "VB", "MD", "VP", "SQ")],
            "UCP": [HeadPass(R, ())],
            # content verbs outrank TO/MD so "to develop" and "can develop"
            # head to the main verb, not the function word
            "VP": [lab(L, "VBD", "VBN", "VBZ", "VB", "VBG", "VBP", "VP",
                       "ADJP", "NN", "NNS", "NP", "TO", "MD")],
            "WHADJP": [lab(L, "CC", "WRB", "JJ", "ADJP")],
            "WHADVP": [lab(R, "CC", "WRB")],
            "WHNP": [lab(L, "WDT", "WP", "WP$", "WHADJP", "WHPP", "WHNP")],
            "WHPP": [lab(R, "IN", "TO", "FW")],
            "X": [HeadPass(R, ())],
        }
        rules["NP"] = [
            pos(R, "NN", "NNP", "NNPS", "NNS", "NX", "POS", "JJR"),
            pos(L, "NP"),
            pos(R, "$", "ADJP", "PRN"),
            pos(R, "CD"),
            pos(R, "JJ", "JJS", "RB", "QP"),
            HeadPass(R, ()),
        ]
        rules["NX"] = rules["NP"]
        return cls(rules=rules, default=HeadPass(LEFT, ()))


def normalize_label(label: str) -> str:
    """Strip PTB function tags and indices (NP-SBJ-1 -> NP); escapes survive."""
    if label in PUNCT_TAGS or label.startswith("-"):
        return label
    for sep in ("-", "="):
        if sep in label:
            label = label.split(sep, 1)[0]
    return label


def _visible_children(t: ParseTree) -> list[ParseTree]:
    vis = [c for c in t.children if not _is_punct_subtree(c)]
    return vis if vis else list(t.children)


def _is_punct_subtree(t: ParseTree) -> bool:
    if t.is_leaf:
        return t.label in PUNCT_TAGS
    return all(_is_punct_subtree(c) for c in t.children)


def head_child(t: ParseTree, rules: HeadRuleTable) -> ParseTree:
    """The child of `t` selected by the head rules (t must not be a leaf)."""
    children = _visible_children(t)
    if len(children) == 1:
        return children[0]
    for head_pass in rules.rules.get(normalize_label(t.label), []):
        found = head_pass.find(children)
        if found is not None:
            return found
    return rules.default.find(children)


def semantic_head(t: ParseTree, rules: HeadRuleTable) -> tuple[str, str]:
    """Descend the head children of `t` until a leaf; return (token, POS)."""
    node = t
    while not node.is_leaf:
        node = head_child(node, rules)
    return node.token, node.label


def unwrap_root(t: ParseTree) -> ParseTree:
    while not t.is_leaf and t.label in _WRAPPER_LABELS and len(t.children) == 1:
        t = t.children[0]
    return t


@dataclass(frozen=True)
class DefPair:
    """Super-type and modifier words of a definition, with their POS tags."""

    w_h: str
    pos_h: str
    w_m: str | None = None
    pos_m: str | None = None

    @property
    def has_modifier(self) -> bool:
        return self.w_m is not None


# Preference order for the modifier-bearing sibling of the head child.
_MODIFIER_PRIORITY = {"PP": 0, "SBAR": 1, "NP": 2, "ADJP": 3, "VP": 4}
_MODIFIER_FALLBACK_RANK = len(_MODIFIER_PRIORITY)


def _main_constituent(t: ParseTree) -> ParseTree | None:
    """First constituent in pre-order with two or more visible children."""
    if t.is_leaf:
        return None
    vis = [c for c in t.children if not _is_punct_subtree(c)]
    if len(vis) >= 2:
        return t
    for c in t.children:
        found = _main_constituent(c)
        if found is not None:
            return found
    return None


def extract_pair(t: ParseTree, rules: HeadRuleTable | None = None) -> DefPair:
    """Extract the (super-type, modifier) word pair from a definition parse.

    The super-type is the semantic head of the main constituent's head child;
    the modifier is the semantic head of the best non-head sibling, preferring
    PP, SBAR, NP, ADJP then VP siblings (nearest first within a label) and
    skipping siblings whose head is not a content word.  Trees with no
    multi-child constituent yield a pair with no modifier.
    """
    rules = rules if rules is not None else DEFAULT_HEAD_RULES
    t = unwrap_root(t)
    if t.is_leaf:
        return DefPair(t.token, t.label)
    main = _main_constituent(t)
    if main is None:
        w, p = semantic_head(t, rules)
        return DefPair(w, p)
    children = [c for c in main.children if not _is_punct_subtree(c)]
    head = head_child(main, rules)
    w_h, pos_h = semantic_head(head, rules)
    head_idx = next(i for i, c in enumerate(children) if c is head)

    def rank(item):
        i, c = item
        return (
            _MODIFIER_PRIORITY.get(normalize_label(c.label), _MODIFIER_FALLBACK_RANK),
            abs(i - head_idx),
            i,
        )

    siblings = sorted(
        ((i, c) for i, c in enumerate(children) if c is not head), key=rank
    )
    for _, sib in siblings:
        w_m, pos_m = semantic_head(sib, rules)
        if is_content_tag(pos_m):
            return DefPair(w_h, pos_h, w_m, pos_m)
    return DefPair(w_h, pos_h)


DEFAULT_HEAD_RULES = HeadRuleTable.semantic()
