#!/usr/bin/env python3
"""Regenerates the frozen boilerplate-classifier oracle corpus.

Writes tests/data/boilerplate_oracle/{pages/*.html, stopwords.txt, verdicts.json}.
The verdicts come from an independent reference implementation of the jusText
block classification (context-free cascade plus context-sensitive revision)
built on html.parser, sharing no code with the C++ scanner. Pages are written
in a restricted HTML dialect so that an event parser and a DOM parser see the
same block structure: every non-void tag is explicitly closed and properly
nested, entities always carry semicolons and come from a fixed whitelist, no
bare "<" appears in text, and rawtext elements close with an exact lowercase
end tag. Within that dialect the published algorithm is deterministic, so the
frozen verdicts are an oracle for any faithful implementation.

Deterministic: a fixed RNG seed reproduces the committed files byte for byte.
"""

import json
import random
import re
from html.parser import HTMLParser
from pathlib import Path

RNG_SEED = 20200505
RANDOM_PAGES = 42  # pages 8..49; 0..7 are handcrafted

PARAMS = {
    "max_link_density": 0.2,
    "length_low": 70,
    "length_high": 200,
    "stopwords_low": 0.30,
    "stopwords_high": 0.32,
    "max_heading_distance": 200,
}

STOPWORDS = [
    "og", "að", "í", "á", "er", "það", "sem", "við", "ekki", "um",
    "en", "til", "hann", "hún", "þetta", "með", "fyrir", "eða", "svo", "af",
    "úr", "var", "eru", "ég", "þú", "því", "þar", "nú", "frá", "upp",
    "út", "yfir", "undir", "eftir", "mjög", "hér", "þegar", "alltaf", "hafa", "verið",
    "vera", "líka", "bara", "allt", "okkur", "sinn", "hans", "hennar",
]

CONTENT_WORDS = [
    "fjallið", "báturinn", "veðrið", "morguninn", "kvöldið", "hafið", "landið",
    "borgin", "vegurinn", "sagan", "bókin", "skipið", "fiskurinn", "hesturinn",
    "norðurljósin", "veturinn", "sumarið", "snjórinn", "rigningin", "sólskinið",
    "myrkrið", "ljósið", "steinninn", "grasið", "fuglinn", "himinninn",
    "jörðin", "eldurinn", "vatnið", "dalurinn", "ströndin", "þorpið",
    "kirkjan", "safnið", "höfnin", "flugvöllurinn", "markaðurinn", "skólinn",
    "bryggjan", "vitinn", "jökullinn", "hverinn", "fossinn", "heiðin",
]

NAV_ITEMS = [
    ("forsida", "Forsíða"), ("frettir", "Fréttir"), ("um-okkur", "Um okkur"),
    ("samband", "Hafa samband"), ("leit", "Leit"), ("innskraning", "Innskráning"),
    ("vefkort", "Vefkort"), ("english", "English"), ("myndir", "Myndir"),
    ("greinar", "Greinar"), ("thjonusta", "Þjónusta"), ("verslun", "Verslun"),
]

# Entity-encoded spellings that decode to ordinary dialect text. Names must be
# understood identically by html.unescape and the C++ decoder.
ENTITY_WORDS = [
    ("sj&oacute;rinn", "sjórinn"), ("ve&eth;ri&eth;", "veðrið"),
    ("b&aacute;turinn", "báturinn"), ("&THORN;etta", "Þetta"),
    ("a&eth;", "að"), ("n&uacute;", "nú"), ("&eacute;g", "ég"),
    ("fjalli&#240;", "fjallið"), ("sk&#xFD;in", "skýin"), ("&#233;g", "ég"),
]

ALLOWED_ENTITIES = {
    "amp", "lt", "gt", "quot", "nbsp", "shy", "copy", "deg", "middot",
    "laquo", "raquo", "ldquo", "rdquo", "ndash", "mdash", "hellip", "times",
    "aacute", "eacute", "iacute", "oacute", "uacute", "yacute", "eth", "thorn",
    "aelig", "ouml", "ETH", "THORN", "AElig",
}

# ---------------------------------------------------------------------------
# Reference implementation (jusText semantics on an html.parser event stream).

PARAGRAPH_TAGS = {
    "body", "blockquote", "caption", "center", "col", "colgroup", "dd",
    "div", "dl", "dt", "fieldset", "form", "legend", "optgroup",
    "option", "p", "pre", "table", "td", "textarea", "tfoot",
    "th", "thead", "tr", "ul", "li", "h1", "h2",
    "h3", "h4", "h5", "h6",
}

VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img",
    "input", "link", "meta", "param", "source", "track", "wbr",
}

WHITESPACE_RE = re.compile(r"\s+", re.UNICODE)
HEADING_RE = re.compile(r"\bh\d\b")
SELECT_RE = re.compile(r"(^|\.)select")


def _replace_whitespace(match):
    return "\n" if ("\n" in match.group() or "\r" in match.group()) else " "


class Paragraph:
    def __init__(self, dom_path):
        self.dom_path = dom_path
        self.text_nodes = []
        self.chars_in_links = 0
        self.cf = None
        self.final = None

    @property
    def text(self):
        joined = "".join(self.text_nodes)
        return WHITESPACE_RE.sub(_replace_whitespace, joined).strip()

    @property
    def is_heading(self):
        return bool(HEADING_RE.search(self.dom_path))


class ParagraphMaker(HTMLParser):
    """Block segmentation: boundaries at paragraph-level tags and <br><br>."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.path = []
        self.paragraphs = []
        self.current = None
        self.link = False
        self.br = False
        self.head_depth = 0
        self.rawtext = None
        self._start_new()

    def _start_new(self):
        if self.current is not None and self.current.text_nodes:
            self.paragraphs.append(self.current)
        self.current = Paragraph(".".join(self.path))

    def handle_starttag(self, tag, attrs):
        if tag == "head":
            self.head_depth += 1
            return
        if self.head_depth:
            return
        if tag in ("script", "style"):
            self.rawtext = tag
            return
        self.path.append(tag)
        if tag in PARAGRAPH_TAGS or (tag == "br" and self.br):
            self._start_new()
        else:
            self.br = tag == "br"
            if self.br:
                self.current.text_nodes.append(" ")
            elif tag == "a":
                self.link = True
        if tag in VOID_TAGS:
            self._end(tag)  # html.parser emits no end event for void tags

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag not in VOID_TAGS and tag not in ("script", "style", "head"):
            self._end(tag)

    def handle_endtag(self, tag):
        if self.rawtext:
            if tag == self.rawtext:
                self.rawtext = None
            return
        if tag == "head":
            if self.head_depth:
                self.head_depth -= 1
            return
        if self.head_depth or tag in VOID_TAGS:
            return
        self._end(tag)

    def _end(self, tag):
        if self.path:
            self.path.pop()
        if tag in PARAGRAPH_TAGS:
            self._start_new()
        if tag == "a":
            self.link = False

    def handle_data(self, data):
        if self.rawtext or self.head_depth:
            return
        if data.strip() == "":
            return
        text = WHITESPACE_RE.sub(_replace_whitespace, data)
        self.current.text_nodes.append(text)
        if self.link:
            self.current.chars_in_links += len(text)
        self.br = False

    def finish(self):
        self.close()
        self._start_new()
        return self.paragraphs


def classify_context_free(p, stopwords):
    text = p.text
    length = len(text)
    words = text.split()
    stop = sum(1 for w in words if w.lower() in stopwords)
    density = stop / len(words) if words else 0.0
    link_density = p.chars_in_links / length if length else 0.0

    if link_density > PARAMS["max_link_density"]:
        p.cf = "bad"
    elif "\xa9" in text or "&copy" in text:
        p.cf = "bad"
    elif SELECT_RE.search(p.dom_path):
        p.cf = "bad"
    elif length < PARAMS["length_low"]:
        p.cf = "bad" if p.chars_in_links > 0 else "short"
    elif density >= PARAMS["stopwords_high"]:
        p.cf = "good" if length > PARAMS["length_high"] else "neargood"
    elif density >= PARAMS["stopwords_low"]:
        p.cf = "neargood"
    else:
        p.cf = "bad"
    return p.cf


def _neighbour(paragraphs, i, step, ignore_neargood):
    j = i + step
    while 0 <= j < len(paragraphs):
        c = paragraphs[j].final
        if c in ("good", "bad"):
            return c
        if c == "neargood" and not ignore_neargood:
            return c
        j += step
    return "bad"


def revise(paragraphs):
    max_distance = PARAMS["max_heading_distance"]
    for p in paragraphs:
        p.final = p.cf

    # Short headings attach to upcoming good content.
    for i, p in enumerate(paragraphs):
        if not (p.is_heading and p.final == "short"):
            continue
        j, distance = i + 1, 0
        while j < len(paragraphs) and distance <= max_distance:
            if paragraphs[j].final == "good":
                p.final = "neargood"
                break
            distance += len(paragraphs[j].text)
            j += 1

    # Short blocks adopt their surroundings; batch-applied.
    updates = {}
    for i, p in enumerate(paragraphs):
        if p.final != "short":
            continue
        prev = _neighbour(paragraphs, i, -1, True)
        nxt = _neighbour(paragraphs, i, +1, True)
        if prev == "good" and nxt == "good":
            updates[i] = "good"
        elif prev == "bad" and nxt == "bad":
            updates[i] = "bad"
        elif (prev == "bad" and _neighbour(paragraphs, i, -1, False) == "neargood") or (
            nxt == "bad" and _neighbour(paragraphs, i, +1, False) == "neargood"
        ):
            updates[i] = "good"
        else:
            updates[i] = "bad"
    for i, c in updates.items():
        paragraphs[i].final = c

    # Near-good blocks resolve sequentially.
    for i, p in enumerate(paragraphs):
        if p.final != "neargood":
            continue
        prev = _neighbour(paragraphs, i, -1, True)
        nxt = _neighbour(paragraphs, i, +1, True)
        p.final = "bad" if (prev, nxt) == ("bad", "bad") else "good"

    # Headings demoted by context recover when good content is within reach.
    for i, p in enumerate(paragraphs):
        if not (p.is_heading and p.final == "bad" and p.cf != "bad"):
            continue
        j, distance = i + 1, 0
        while j < len(paragraphs) and distance <= max_distance:
            if paragraphs[j].final == "good":
                p.final = "good"
                break
            distance += len(paragraphs[j].text)
            j += 1


def analyze(html, stopwords):
    maker = ParagraphMaker()
    maker.feed(html)
    paragraphs = maker.finish()
    for p in paragraphs:
        classify_context_free(p, stopwords)
    revise(paragraphs)
    return paragraphs


# ---------------------------------------------------------------------------
# Page generation.

ENTITY_RE = re.compile(r"&(#[0-9]+|#[xX][0-9a-fA-F]+|[A-Za-z][A-Za-z0-9]*);")


def check_dialect(html):
    """Every '&' is a whitelisted semicolon-terminated entity or '& '."""
    i = 0
    while True:
        i = html.find("&", i)
        if i < 0:
            return
        m = ENTITY_RE.match(html, i)
        if m:
            name = m.group(1)
            assert name.startswith("#") or name in ALLOWED_ENTITIES, name
            i = m.end()
            continue
        assert html[i : i + 2] == "& ", html[i : i + 20]
        i += 2


def sentence(rng, n_words, stop_fraction, capitalize=True):
    words = []
    for _ in range(n_words):
        pool = STOPWORDS if rng.random() < stop_fraction else CONTENT_WORDS
        words.append(rng.choice(pool))
    if capitalize:
        words[0] = words[0].capitalize()
    return " ".join(words) + rng.choice([".", ".", ".", "!", "?"])


def prose(rng, min_chars, stop_fraction):
    parts = []
    while sum(len(p) for p in parts) + len(parts) < min_chars:
        parts.append(sentence(rng, rng.randint(6, 14), stop_fraction))
    return " ".join(parts)


def exact_text(chars, n_words, n_stop):
    """n_words words, exactly n_stop of them stopwords, exactly chars chars."""
    words = [STOPWORDS[k % len(STOPWORDS)] for k in range(n_stop)]
    fillers = ["stein", "gras", "skip", "vatn", "fjall", "segl", "torf", "malt"]
    words += [fillers[k % len(fillers)] for k in range(n_words - n_stop)]
    deficit = chars - (sum(len(w) for w in words) + len(words) - 1)
    assert deficit >= 0, (chars, deficit)
    words[-1] += "x" * deficit
    text = " ".join(words)
    assert len(text) == chars
    return text


def tagged(rng, tag, inner, attrs=""):
    """Occasionally uppercases the tag; both parsers lowercase names."""
    t = tag.upper() if rng.random() < 0.12 else tag
    return f"<{t}{attrs}>{inner}</{t}>"


def w_nav(rng):
    items = rng.sample(NAV_ITEMS, k=rng.randint(3, 6))
    links = " | ".join(f'<a href="/{slug}">{label}</a>' for slug, label in items)
    return f'<div class="nav">{links}</div>'


def w_content(rng):
    return tagged(rng, "p", prose(rng, rng.randint(210, 600), 0.5))


def w_medium(rng):
    return tagged(rng, "p", prose(rng, rng.randint(80, 170), 0.5))


def w_junk(rng):
    return tagged(rng, "div", prose(rng, rng.randint(90, 320), 0.08))


def w_short(rng):
    return tagged(rng, "p", sentence(rng, rng.randint(2, 5), 0.4))


def w_short_link(rng):
    slug, label = rng.choice(NAV_ITEMS)
    return f'<p>Sjá <a href="/{slug}">{label.lower()}</a> {rng.choice(CONTENT_WORDS)}.</p>'


def w_copyright(rng):
    year = rng.randint(1998, 2020)
    owner = rng.choice(["Vefurinn ehf", "Útgáfan hf", "Fréttastofan", "Safnvefurinn"])
    mark = rng.choice(["©", "&copy;", "&#169;"])
    return f"<div>{mark} {year} {owner}. Öll réttindi áskilin.</div>"


def w_select(rng):
    options = "".join(
        f"<option>{rng.choice(CONTENT_WORDS).capitalize()} {rng.choice(['eitt', 'tvö', 'þrjú'])}</option>"
        for _ in range(rng.randint(2, 4))
    )
    return f'<select name="val">{options}</select>'


def w_table(rng):
    rows = []
    for _ in range(rng.randint(2, 3)):
        cells = "".join(
            f"<td>{sentence(rng, rng.randint(2, 6), 0.3)}</td>" for _ in range(2)
        )
        rows.append(f"<tr>{cells}</tr>")
    return "<table>{}</table>".format("".join(rows))


def w_list(rng):
    if rng.random() < 0.5:
        items = "".join(
            f'<li><a href="/{slug}">{label}</a></li>'
            for slug, label in rng.sample(NAV_ITEMS, k=rng.randint(3, 5))
        )
    else:
        items = "".join(
            f"<li>{sentence(rng, rng.randint(4, 9), 0.45)}</li>" for _ in range(rng.randint(2, 4))
        )
    return f"<ul>{items}</ul>"


def w_pre(rng):
    lines = [sentence(rng, rng.randint(3, 6), 0.5, capitalize=False) for _ in range(3)]
    return "<pre>{}</pre>".format("\n".join(lines))


def w_brsplit(rng):
    first = prose(rng, rng.randint(75, 140), 0.5)
    second = prose(rng, rng.randint(75, 140), 0.5)
    sep = rng.choice(["<br><br>", "<br/><br/>", "<br> <br>"])
    return f"<div>{first}{sep}{second}</div>"


def w_ghost(rng):
    return "<div>{}</div>\n<br/>\n<div>{}</div>".format(
        prose(rng, rng.randint(80, 200), 0.5), prose(rng, rng.randint(80, 200), 0.5)
    )


def w_entities(rng):
    encoded, plain = zip(*rng.sample(ENTITY_WORDS, k=4))
    filler = prose(rng, 160, 0.5)
    return "<p>{} {} {} {} {} &laquo;{}&raquo;</p>".format(
        encoded[0], encoded[1], filler, encoded[2], encoded[3], rng.choice(CONTENT_WORDS)
    )


def w_script(rng):
    body = 'var n = %d; if (n < 4) { document.title = "x"; }' % rng.randint(1, 99)
    return f'<script type="text/javascript">{body}</script>'


def w_style(rng):
    return "<style>p { margin: %dpx; } .nav a { color: #345; }</style>" % rng.randint(2, 9)


def w_comment(rng):
    return "<!-- {} <p>aldrei birt</p> -->".format(rng.choice(CONTENT_WORDS))


def w_heading(rng):
    level = rng.randint(1, 4)
    if rng.random() < 0.7:
        inner = sentence(rng, rng.randint(2, 5), 0.3)[:-1]
    else:
        inner = prose(rng, 210, 0.5)
    return tagged(rng, f"h{level}", inner)


def w_form(rng):
    return (
        '<form action="/leit" method="get"><fieldset><legend>Leit</legend>'
        '<input type="text" name="q"/>'
        f"<textarea rows=\"2\">{sentence(rng, rng.randint(3, 8), 0.4)}</textarea>"
        "</fieldset></form>"
    )


def w_linkheavy(rng):
    chunks = []
    for _ in range(rng.randint(4, 7)):
        slug, label = rng.choice(NAV_ITEMS)
        chunks.append(f'<a href="/{slug}/{rng.randint(1, 40)}">{label}</a>')
        chunks.append(sentence(rng, 2, 0.3, capitalize=False))
    return "<div>{}</div>".format(" ".join(chunks))


def w_inline(rng):
    a = prose(rng, 90, 0.5)
    b = sentence(rng, 6, 0.5)
    c = prose(rng, 90, 0.5)
    wrap = rng.choice(["b", "em", "strong", "span", "i"])
    return f"<p>{a} <{wrap}>{b}</{wrap}> {c}</p>"


def w_img(rng):
    return '<div><img src="/m/{}.jpg" alt="mynd"/> <span>Mynd: {}</span></div>'.format(
        rng.randint(1, 900), rng.choice(CONTENT_WORDS)
    )


def w_hr(rng):
    return rng.choice(["<hr/>", "<hr>"])


WIDGETS = [
    (w_nav, 3), (w_content, 10), (w_medium, 4), (w_junk, 4), (w_short, 3),
    (w_short_link, 2), (w_copyright, 2), (w_select, 1), (w_table, 2),
    (w_list, 2), (w_pre, 1), (w_brsplit, 2), (w_ghost, 1), (w_entities, 2),
    (w_script, 1), (w_style, 1), (w_comment, 1), (w_heading, 4), (w_form, 1),
    (w_linkheavy, 2), (w_inline, 2), (w_img, 1), (w_hr, 1),
]


def page_shell(title, body_parts, head_extra=""):
    body = "\n".join(body_parts)
    return (
        "<!DOCTYPE html>\n<html>\n<head>\n"
        f"<title>{title}</title>\n"
        '<meta charset="utf-8"/>\n'
        f"{head_extra}"
        "</head>\n<body>\n"
        f"{body}\n"
        "</body>\n</html>\n"
    )


def random_page(rng, index):
    n = rng.randint(6, 13)
    pool = [w for w, weight in WIDGETS for _ in range(weight)]
    parts = [pool[rng.randrange(len(pool))](rng) for _ in range(n)]
    if rng.random() < 0.4:
        parts.insert(0, w_nav(rng))
    if rng.random() < 0.5:
        parts.append(w_copyright(rng))
    if rng.random() < 0.3:
        parts = ["<section>"] + parts + ["</section>"]
    head_extra = ""
    if rng.random() < 0.4:
        head_extra = '<style>body { font: 14px serif; }</style>\n<script>var boot = 1;</script>\n'
    return page_shell(f"Síða {index}", parts, head_extra)


def handcrafted_pages(rng):
    """Fixed structures exercising each cascade branch and revision pass."""
    pages = {}

    # 0: typical article.
    pages[0] = page_shell("Grein dagsins", [
        w_nav(rng),
        "<h1>{}</h1>".format(sentence(rng, 4, 0.3)[:-1]),
        tagged(rng, "p", prose(rng, 320, 0.52)),
        tagged(rng, "p", prose(rng, 260, 0.5)),
        "<p>{}</p>".format(sentence(rng, 3, 0.4)),
        tagged(rng, "p", prose(rng, 240, 0.5)),
        w_copyright(rng),
    ])

    # 1: short heading attaches through a bad block within reach (revision
    # passes 1 and 4), plus a heading directly before good content.
    pages[1] = page_shell("Fyrirsagnir", [
        "<h2>Fréttir dagsins</h2>",
        "<div>{}</div>".format(exact_text(150, 20, 1)),
        "<p>{}</p>".format(prose(rng, 300, 0.5)),
        "<h3>Meira efni</h3>",
        "<p>{}</p>".format(prose(rng, 280, 0.5)),
        "<h2>{}</h2>".format(prose(rng, 230, 0.5)),
    ])

    # 2: the same shape but the junk block exceeds max_heading_distance.
    pages[2] = page_shell("Fjarlæg fyrirsögn", [
        "<h2>Gamlar fréttir</h2>",
        "<div>{}</div>".format(exact_text(250, 32, 2)),
        "<p>{}</p>".format(prose(rng, 300, 0.5)),
    ])

    # 3: short-block context grid: good/short/good, bad/short/bad,
    # neargood/short/good.
    pages[3] = page_shell("Stuttir kaflar", [
        "<p>{}</p>".format(prose(rng, 280, 0.5)),
        "<p>Stutt athugasemd eitt.</p>",
        "<p>{}</p>".format(prose(rng, 280, 0.5)),
        "<div>{}</div>".format(prose(rng, 200, 0.05)),
        "<p>Stutt athugasemd tvö.</p>",
        "<div>{}</div>".format(prose(rng, 200, 0.05)),
        "<p>{}</p>".format(prose(rng, 120, 0.55)),
        "<p>Stutt athugasemd þrjú.</p>",
        "<p>{}</p>".format(prose(rng, 280, 0.5)),
    ])

    # 4: near-good chains resolve sequentially toward earlier decisions.
    pages[4] = page_shell("Millikaflar", [
        "<div>{}</div>".format(prose(rng, 220, 0.05)),
        "<p>{}</p>".format(prose(rng, 120, 0.5)),
        "<div>{}</div>".format(prose(rng, 220, 0.05)),
        "<p>{}</p>".format(prose(rng, 300, 0.5)),
        "<p>{}</p>".format(prose(rng, 120, 0.5)),
        "<p>{}</p>".format(prose(rng, 110, 0.5)),
        "<p>{}</p>".format(prose(rng, 300, 0.5)),
    ])

    # 5: entity zoo, pre, br-br splits, a ghost block from a lone br, literal
    # "& " and ">" in text, quoted ">" in an attribute, numeric references.
    pages[5] = page_shell("Táknasafn", [
        "<p>{} {} og {} &ndash; {}&hellip; 5 > 3 & {} &#147;tilvitnun&#148; "
        "&#X1F680; {}</p>".format(
            ENTITY_WORDS[0][0], ENTITY_WORDS[1][0], ENTITY_WORDS[3][0],
            prose(rng, 150, 0.5), rng.choice(CONTENT_WORDS), ENTITY_WORDS[7][0]),
        w_pre(rng),
        w_brsplit(rng),
        "<div>{}</div>".format(prose(rng, 140, 0.5)),
        "<br/>",
        "<div>{}</div>".format(prose(rng, 140, 0.5)),
        '<p>Leitarsíðan er <a href="/leit?q=a>b" title="leit">hér</a> núna.</p>',
        "<p>{} &nbsp; {} &shy;lengra {}</p>".format(
            prose(rng, 90, 0.5), sentence(rng, 4, 0.5), sentence(rng, 5, 0.5)),
    ], head_extra="<style>h1 { color: red; }</style>\n<script>var hidden = 2;</script>\n")

    # 6: select/option menus, a form with fieldset/legend/textarea, tables.
    pages[6] = page_shell("Eyðublöð", [
        w_select(rng),
        w_form(rng),
        w_table(rng),
        "<p>{}</p>".format(prose(rng, 260, 0.5)),
        w_select(rng),
    ])

    # 7: threshold boundaries, exact by construction.
    link20 = "fjallavegurinnxabcde"  # 20 chars
    rest79 = exact_text(79, 15, 6)
    link21 = "fjallavegurinnxabcdef"  # 21 chars
    rest78 = exact_text(78, 15, 6)
    pages[7] = page_shell("Mörkin", [
        "<p>{}</p>".format(exact_text(69, 10, 4)),            # short: 69 < length_low
        "<p>{}</p>".format(exact_text(70, 10, 3)),            # density 0.30 == stopwords_low
        "<p>{}</p>".format(exact_text(70, 10, 2)),            # density 0.20 < stopwords_low
        "<p>{}</p>".format(exact_text(200, 25, 8)),           # 0.32 at length_high: neargood
        "<p>{}</p>".format(exact_text(201, 25, 8)),           # 0.32 past length_high: good
        "<p>{}</p>".format(exact_text(201, 25, 7)),           # 0.28 < stopwords_low: bad
        '<p><a href="/vegur">{}</a> {}</p>'.format(link20, rest79),   # 20/100 == max_link_density
        '<p><a href="/vegur">{}</a> {}</p>'.format(link21, rest78),   # 21/100 > max_link_density
    ])

    return [pages[i] for i in range(8)]


def sanity_check_handcrafted(pages, stopwords):
    """Asserts the handcrafted pages exercise the branches they claim to."""
    def classes(i, which="final"):
        return [getattr(p, which) for p in analyze(pages[i], stopwords)]

    cf1 = classes(1, "cf")
    fin1 = classes(1)
    assert cf1[0] == "short" and fin1[0] == "good", (cf1, fin1)   # heading recovered
    cf2 = classes(2, "cf")
    fin2 = classes(2)
    assert cf2[0] == "short" and fin2[0] == "bad", (cf2, fin2)    # heading out of reach
    fin3 = classes(3)
    assert fin3[1] == "good" and fin3[4] == "bad" and fin3[7] == "good", fin3
    fin4 = classes(4)
    assert fin4[1] == "bad" and fin4[4] == "good" and fin4[5] == "good", fin4
    cf7 = classes(7, "cf")
    assert cf7 == ["short", "neargood", "bad", "neargood", "good", "bad",
                   "neargood", "bad"], cf7


def main():
    out_root = Path(__file__).resolve().parent.parent / "tests" / "data" / "boilerplate_oracle"
    pages_dir = out_root / "pages"
    pages_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(RNG_SEED)
    stopwords = {w.lower() for w in STOPWORDS}

    pages = handcrafted_pages(rng)
    for i in range(RANDOM_PAGES):
        pages.append(random_page(rng, len(pages)))
    sanity_check_handcrafted(pages, stopwords)

    (out_root / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")

    verdict_pages = []
    histogram = {"good": 0, "bad": 0, "short": 0, "neargood": 0}
    finals = {"good": 0, "bad": 0}
    for i, html in enumerate(pages):
        check_dialect(html)
        name = f"pages/page_{i:02d}.html"
        (out_root / name).write_text(html, encoding="utf-8")
        blocks = []
        for p in analyze(html, stopwords):
            histogram[p.cf] += 1
            finals[p.final] += 1
            blocks.append({
                "text": p.text,
                "cf": p.cf,
                "final": p.final,
                "chars": len(p.text),
                "words": len(p.text.split()),
                "link_chars": p.chars_in_links,
            })
        verdict_pages.append({"file": name, "blocks": blocks})

    verdicts = {
        "params": PARAMS,
        "stopwords": "stopwords.txt",
        "pages": verdict_pages,
    }
    with open(out_root / "verdicts.json", "w", encoding="utf-8") as f:
        json.dump(verdicts, f, ensure_ascii=True, indent=1)
        f.write("\n")

    total = sum(histogram.values())
    print(f"{len(pages)} pages, {total} blocks")
    print("context-free:", histogram)
    print("final:", finals)


if __name__ == "__main__":
    main()
