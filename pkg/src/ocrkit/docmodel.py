"""Block-structured document model for mixed Markdown / HTML OCR output.

A raw model output (or ground-truth file) is parsed into an ordered list of
blocks: paragraphs, ATX/Setext headers, horizontal rules, HTML tables and
special single-purpose tags such as ``<page_number>`` or ``<watermark>``.
Tables are held as labeled ordered trees so they can be compared structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import IllegalNesting, UnbalancedHtml

TEXT = "#text"

# Tags that never take a closing counterpart.
VOID_TAGS = {"br", "img", "hr", "input", "meta", "col", "wbr"}

DEFAULT_SPECIAL_TAGS = frozenset({"page_number", "watermark", "img"})


@dataclass(frozen=True)
class HtmlTree:
    """Ordered labeled tree node; ``label == TEXT`` marks a text leaf."""

    label: str
    text: str = ""
    children: tuple["HtmlTree", ...] = ()
    rowspan: int | None = None
    colspan: int | None = None

    @property
    def is_text(self) -> bool:
        return self.label == TEXT

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def iter_nodes(self):
        yield self
        for c in self.children:
            yield from c.iter_nodes()

    def text_content(self) -> str:
        """Concatenated text of all descendant text nodes."""
        if self.is_text:
            return self.text
        return "".join(c.text_content() for c in self.children)


def text_node(text: str) -> HtmlTree:
    return HtmlTree(TEXT, text=text)


def element(label: str, *children: HtmlTree, rowspan: int | None = None,
            colspan: int | None = None) -> HtmlTree:
    return HtmlTree(label, children=tuple(children), rowspan=rowspan, colspan=colspan)


# ---------------------------------------------------------------------------
# Blocks


@dataclass(frozen=True)
class EmphasisSpan:
    start: int
    end: int
    kind: str  # "bold" or "italic"


@dataclass(frozen=True)
class Paragraph:
    text: str
    spans: tuple[EmphasisSpan, ...] = ()


@dataclass(frozen=True)
class Header:
    level: int
    text: str

    def __post_init__(self):
        if not 1 <= self.level <= 6:
            raise ValueError(f"header level {self.level} outside [1,6]")


@dataclass(frozen=True)
class HorizontalRule:
    pass


@dataclass(frozen=True)
class Table:
    tree: HtmlTree
    # Original Markdown form, kept so serialization round-trips; not part of
    # block equality (the tree is the comparable content).
    markdown_source: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SpecialTag:
    name: str
    content: str


Block = Paragraph | Header | HorizontalRule | Table | SpecialTag


@dataclass(frozen=True)
class Document:
    blocks: tuple[Block, ...]
    source_kind: str = field(default="reference", compare=False)
    warnings: tuple[str, ...] = field(default=(), compare=False)


# ---------------------------------------------------------------------------
# HTML table parsing

_TAG_RE = re.compile(r"<(/?)([a-zA-Z][a-zA-Z0-9_:-]*)((?:\"[^\"]*\"|'[^']*'|[^<>])*?)(/?)>")
_ATTR_RE = re.compile(r"([a-zA-Z_:][a-zA-Z0-9_:.-]*)\s*=\s*(\"[^\"]*\"|'[^']*'|[^\s\"'>]+)")


def _parse_span_attrs(attr_text: str) -> tuple[int | None, int | None]:
    rowspan = colspan = None
    for name, value in _ATTR_RE.findall(attr_text):
        value = value.strip("\"'")
        if name.lower() in ("rowspan", "colspan"):
            try:
                n = max(1, int(value))
            except ValueError:
                continue
            if name.lower() == "rowspan":
                rowspan = n
            else:
                colspan = n
    return rowspan, colspan


class _OpenNode:
    __slots__ = ("label", "rowspan", "colspan", "children")

    def __init__(self, label, rowspan=None, colspan=None):
        self.label = label
        self.rowspan = rowspan
        self.colspan = colspan
        self.children: list[HtmlTree] = []

    def freeze(self) -> HtmlTree:
        return HtmlTree(self.label, children=tuple(self.children),
                        rowspan=self.rowspan, colspan=self.colspan)


def parse_html_table(html: str) -> HtmlTree:
    """Parse an HTML ``<table>`` fragment into an :class:`HtmlTree`.

    Only ``rowspan``/``colspan`` attributes survive; whitespace-only text
    nodes are dropped.  Raises :class:`UnbalancedHtml` on mismatched tags and
    :class:`IllegalNesting` when row/cell elements appear outside their legal
    parents.
    """
    stripped = html.strip()
    if not stripped.lower().startswith("<table"):
        raise IllegalNesting("fragment does not start with <table>")

    stack: list[_OpenNode] = []
    root: HtmlTree | None = None
    pos = 0

    def add_text(raw: str):
        if not raw.strip():
            return
        if not stack:
            raise UnbalancedHtml("text outside the table root")
        stack[-1].children.append(text_node(raw.strip()))

    for m in _TAG_RE.finditer(stripped):
        add_text(stripped[pos:m.start()])
        pos = m.end()
        closing, name, attr_text, self_close = m.groups()
        name = name.lower()
        if closing:
            if not stack:
                raise UnbalancedHtml(f"unexpected closing tag </{name}>")
            if stack[-1].label != name:
                # Tolerate an unclosed cell/row being closed by its parent.
                raise UnbalancedHtml(
                    f"closing </{name}> does not match open <{stack[-1].label}>")
            node = stack.pop().freeze()
            if stack:
                stack[-1].children.append(node)
            elif root is None:
                root = node
                if pos < len(stripped) and stripped[pos:].strip():
                    raise UnbalancedHtml("content after closing </table>")
            else:
                raise UnbalancedHtml("multiple root elements")
        else:
            open_labels = [n.label for n in stack]
            if name == "tr" and "table" not in open_labels:
                raise IllegalNesting("<tr> outside <table>")
            if name in ("td", "th") and "tr" not in open_labels:
                raise IllegalNesting(f"<{name}> outside <tr>")
            if not stack and name != "table":
                raise IllegalNesting(f"root element <{name}> is not <table>")
            rowspan = colspan = None
            if name in ("td", "th"):
                rowspan, colspan = _parse_span_attrs(attr_text)
            if self_close or name in VOID_TAGS:
                node = HtmlTree(name, rowspan=rowspan, colspan=colspan)
                if not stack:
                    raise UnbalancedHtml("void element cannot be the table root")
                stack[-1].children.append(node)
            else:
                stack.append(_OpenNode(name, rowspan, colspan))

    add_text(stripped[pos:])
    if stack:
        raise UnbalancedHtml(f"unclosed <{stack[-1].label}>")
    if root is None:
        raise UnbalancedHtml("no complete <table> element found")
    return root


def tree_to_html(tree: HtmlTree) -> str:
    if tree.is_text:
        return tree.text
    attrs = ""
    if tree.rowspan is not None:
        attrs += f' rowspan="{tree.rowspan}"'
    if tree.colspan is not None:
        attrs += f' colspan="{tree.colspan}"'
    if not tree.children and tree.label in VOID_TAGS:
        return f"<{tree.label}{attrs}>"
    inner = "".join(tree_to_html(c) for c in tree.children)
    return f"<{tree.label}{attrs}>{inner}</{tree.label}>"


# ---------------------------------------------------------------------------
# Markdown tables

_MD_DELIM_RE = re.compile(r"^\s*\|?\s*:?-{2,}:?\s*(\|\s*:?-+:?\s*)*\|?\s*$")


def _split_md_row(line: str) -> list[str]:
    line = line.strip()
    if line.startswith("|"):
        line = line[1:]
    if line.endswith("|"):
        line = line[:-1]
    return [c.strip() for c in line.split("|")]


def looks_like_md_table(lines: list[str], i: int) -> bool:
    return (
        i + 1 < len(lines)
        and "|" in lines[i]
        and lines[i].strip() != ""
        and _MD_DELIM_RE.match(lines[i + 1]) is not None
        and "-" in lines[i + 1]
    )


def md_table_to_tree(md_lines: list[str]) -> tuple[HtmlTree, list[str]]:
    """Convert Markdown table lines to a ``table`` tree.

    The header row becomes a plain ``td`` row (models disagree on th/td, so
    both sides are leveled).  Short rows are padded with empty cells and
    flagged; the delimiter row defines the expected column count.
    """
    warnings: list[str] = []
    header = _split_md_row(md_lines[0])
    ncols = len(_split_md_row(md_lines[1]))
    body = [_split_md_row(ln) for ln in md_lines[2:]]
    all_rows = [header] + body
    width = max([ncols] + [len(r) for r in all_rows])
    rows = []
    for r in all_rows:
        if len(r) != ncols:
            warnings.append(
                f"markdown table row has {len(r)} cells, expected {ncols}; padded")
        rows.append(r + [""] * (width - len(r)))
    tr_nodes = []
    for r in rows:
        cells = [element("td", *( [text_node(c)] if c else [] )) for c in r]
        tr_nodes.append(element("tr", *cells))
    return element("table", *tr_nodes), warnings


# ---------------------------------------------------------------------------
# Inline emphasis

_BOLD_RE = re.compile(r"\*\*(.+?)\*\*", re.S)
_ITALIC_RE = re.compile(r"(?<!\*)\*([^*\n]+)\*(?!\*)")


def parse_emphasis(raw: str) -> tuple[str, tuple[EmphasisSpan, ...]]:
    """Strip ``**bold**`` / ``*italic*`` markers, returning clean text + spans."""
    spans: list[EmphasisSpan] = []
    out: list[str] = []
    pos = 0
    events = []
    for m in _BOLD_RE.finditer(raw):
        events.append((m.start(), m.end(), m.group(1), "bold"))
    masked = _BOLD_RE.sub(lambda m: "\0" * len(m.group(0)), raw)
    for m in _ITALIC_RE.finditer(masked):
        events.append((m.start(), m.end(), raw[m.start() + 1:m.end() - 1], "italic"))
    events.sort()
    for start, end, inner, kind in events:
        if start < pos:
            continue
        out.append(raw[pos:start])
        clean_start = sum(len(s) for s in out)
        out.append(inner)
        spans.append(EmphasisSpan(clean_start, clean_start + len(inner), kind))
        pos = end
    out.append(raw[pos:])
    return "".join(out), tuple(spans)


def render_emphasis(text: str, spans: tuple[EmphasisSpan, ...]) -> str:
    marker = {"bold": "**", "italic": "*"}
    pieces = []
    pos = 0
    for span in sorted(spans, key=lambda s: s.start):
        if span.start < pos:
            continue
        pieces.append(text[pos:span.start])
        pieces.append(marker[span.kind] + text[span.start:span.end] + marker[span.kind])
        pos = span.end
    pieces.append(text[pos:])
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Top-level Markdown parsing

_ATX_RE = re.compile(r"^(#{1,6})\s+(.*?)\s*(?:#+\s*)?$")
_HR_RE = re.compile(r"^\s*((-\s*){3,}|(\*\s*){3,}|(_\s*){3,})$")
_SETEXT_H1_RE = re.compile(r"^\s*=+\s*$")
_SETEXT_H2_RE = re.compile(r"^\s*-+\s*$")


def _special_tag_regex(tags: frozenset[str]) -> re.Pattern:
    names = "|".join(re.escape(t) for t in sorted(tags))
    return re.compile(
        rf"<(?P<name>{names})\s*/?>(?:(?P<content>.*?)</(?P=name)>)?", re.S)


def _find_table_regions(text: str) -> list[tuple[int, int]]:
    """Spans of balanced top-level <table>…</table> regions (case-insensitive).

    Raises UnbalancedHtml when a <table> never closes.
    """
    regions = []
    open_re = re.compile(r"<table\b", re.I)
    token_re = re.compile(r"<(/?)table\b[^>]*>", re.I)
    pos = 0
    while True:
        m = open_re.search(text, pos)
        if m is None:
            break
        depth = 0
        end = None
        for t in token_re.finditer(text, m.start()):
            if t.group(1):
                depth -= 1
                if depth == 0:
                    end = t.end()
                    break
            else:
                depth += 1
        if end is None:
            raise UnbalancedHtml("unclosed <table>")
        regions.append((m.start(), end))
        pos = end
    return regions


def _parse_markdown_segment(segment: str, blocks: list[Block],
                            warnings: list[str]) -> None:
    lines = segment.split("\n")
    i = 0
    para_lines: list[str] = []

    def flush_paragraph():
        if para_lines:
            raw = "\n".join(para_lines)
            text, spans = parse_emphasis(raw)
            blocks.append(Paragraph(text, spans))
            para_lines.clear()

    while i < len(lines):
        line = lines[i]
        if not line.strip():
            flush_paragraph()
            i += 1
            continue
        m = _ATX_RE.match(line)
        if m:
            flush_paragraph()
            blocks.append(Header(len(m.group(1)), m.group(2).strip()))
            i += 1
            continue
        # Setext headers: an underline directly below one line of text.
        if para_lines and len(para_lines) == 1 and _SETEXT_H1_RE.match(line):
            blocks.append(Header(1, para_lines[0].strip()))
            para_lines.clear()
            i += 1
            continue
        if para_lines and len(para_lines) == 1 and _SETEXT_H2_RE.match(line) \
                and len(line.strip()) >= 2:
            blocks.append(Header(2, para_lines[0].strip()))
            para_lines.clear()
            i += 1
            continue
        if _HR_RE.match(line) and not para_lines:
            blocks.append(HorizontalRule())
            i += 1
            continue
        if looks_like_md_table(lines, i) and not para_lines:
            j = i
            while j < len(lines) and "|" in lines[j] and lines[j].strip():
                j += 1
            md_lines = lines[i:j]
            tree, tbl_warnings = md_table_to_tree(md_lines)
            warnings.extend(tbl_warnings)
            blocks.append(Table(tree, markdown_source="\n".join(
                ln.strip() for ln in md_lines)))
            i = j
            continue
        para_lines.append(line)
        i += 1
    flush_paragraph()


def parse_markdown(text: str, special_tags: frozenset[str] = DEFAULT_SPECIAL_TAGS,
                   source_kind: str = "reference",
                   on_error: str = "raise") -> Document:
    """Parse mixed Markdown / HTML text into a :class:`Document`.

    ``on_error`` is either ``"raise"`` (propagate :class:`UnbalancedHtml`) or
    ``"fallback"`` (treat the offending region as plain paragraph text and add
    a warning; parsing then never fails on valid UTF-8).
    """
    warnings: list[str] = []
    blocks: list[Block] = []

    try:
        table_regions = _find_table_regions(text)
    except UnbalancedHtml:
        if on_error == "raise":
            raise
        warnings.append("unbalanced <table>; region kept as plain text")
        table_regions = []

    tag_re = _special_tag_regex(special_tags)

    # Cut the text into (kind, payload) segments so every character lands in
    # exactly one block or in inter-block whitespace.
    segments: list[tuple[str, str]] = []
    cursor = 0

    def emit_plain(upto: int):
        nonlocal cursor
        if upto > cursor:
            segments.append(("md", text[cursor:upto]))
        cursor = upto

    boundaries = [(s, e, "table") for s, e in table_regions]
    for m in tag_re.finditer(text):
        inside = any(s <= m.start() < e for s, e, _ in boundaries)
        if not inside:
            boundaries.append((m.start(), m.end(), "special"))
    boundaries.sort()
    for s, e, kind in boundaries:
        if s < cursor:
            continue
        emit_plain(s)
        segments.append((kind, text[s:e]))
        cursor = e
    emit_plain(len(text))

    for kind, payload in segments:
        if kind == "md":
            _parse_markdown_segment(payload, blocks, warnings)
        elif kind == "table":
            try:
                blocks.append(Table(parse_html_table(payload)))
            except (UnbalancedHtml, IllegalNesting) as exc:
                if on_error == "raise":
                    raise
                warnings.append(f"malformed table kept as text: {exc}")
                _parse_markdown_segment(payload, blocks, warnings)
        else:
            m = tag_re.match(payload)
            name = m.group("name")
            content = m.group("content") or ""
            blocks.append(SpecialTag(name, content.strip()))

    return Document(tuple(blocks), source_kind=source_kind, warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Serialization and tree building


def serialize_block(block: Block) -> str:
    if isinstance(block, Header):
        return "#" * block.level + " " + block.text
    if isinstance(block, HorizontalRule):
        return "---"
    if isinstance(block, Paragraph):
        return render_emphasis(block.text, block.spans)
    if isinstance(block, Table):
        if block.markdown_source is not None:
            return block.markdown_source
        return tree_to_html(block.tree)
    if isinstance(block, SpecialTag):
        if not block.content and block.name == "img":
            return "<img>"
        return f"<{block.name}>{block.content}</{block.name}>"
    raise TypeError(f"unknown block {block!r}")


def serialize(doc: Document) -> str:
    """Canonical text form; ``parse_markdown(serialize(d))`` is block-equal to d."""
    return "\n\n".join(serialize_block(b) for b in doc.blocks)


def document_to_tree(doc: Document) -> HtmlTree:
    """Whole-document tree under a synthetic ``doc`` root, for TEDS."""
    children = []
    for block in doc.blocks:
        if isinstance(block, Header):
            children.append(element(f"h{block.level}", text_node(block.text)))
        elif isinstance(block, Paragraph):
            children.append(element("p", text_node(block.text)))
        elif isinstance(block, HorizontalRule):
            children.append(element("hr"))
        elif isinstance(block, Table):
            children.append(block.tree)
        elif isinstance(block, SpecialTag):
            kids = [text_node(block.content)] if block.content else []
            children.append(element(block.name, *kids))
    return element("doc", *children)
